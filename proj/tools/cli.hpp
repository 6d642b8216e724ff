#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace holo::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kValidation = 2, kIo = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Runs one command line (without the program name). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "3.74um", "0.5 m", "532nm", "20.48mm", "1e-6": value in meters.
double parse_quantity(std::string_view text);

/// Comma-separated values and inclusive start:stop:step ranges, e.g. "2:5:0.25" or "2,3,4,5".
std::vector<double> parse_ratios(std::string_view text);

/// Plain `key = value` lines; '#' starts a comment. Keys use the long flag
/// names ("holo-pitch"); underscores are accepted in place of dashes.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

}  // namespace holo::cli
