#pragma once

// Golden vectors: CFLD input/expected pairs plus a line-oriented manifest that
// another implementation can replay. Grammar is in docs/golden-manifest.md.

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace holo::goldens {

inline constexpr const char* kManifestName = "manifest.txt";

struct GoldenCase {
  std::string id;
  std::string op;  ///< propagate | propagate_inverse | convergent_phase | encode_phase_only | encode_bleached | gs
  std::filesystem::path input;     ///< relative to the manifest directory
  std::filesystem::path expected;  ///< relative to the manifest directory
  std::string metric;              ///< rel_l2 | phase_rms
  double tolerance = 0.0;
  std::vector<std::pair<std::string, std::string>> params;

  /// Throws InvalidArgument when the key is absent or not numeric.
  double number(const std::string& key) const;
  const std::string& text(const std::string& key) const;
};

struct GoldenManifest {
  int version = 1;
  std::uint64_t seed = 0;
  std::filesystem::path directory;
  std::vector<GoldenCase> cases;
};

/// Writes the fixed, seeded case suite and its manifest into `directory`.
GoldenManifest emit_goldens(const std::filesystem::path& directory, std::uint64_t seed);

/// Parses `<directory>/manifest.txt` (or a manifest file path) and checks that
/// every referenced file exists; throws IoFailure if one is missing.
GoldenManifest load_manifest(const std::filesystem::path& path);

struct ReplayResult {
  std::string id;
  double error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Recomputes every case with this engine and compares against the expected files.
std::vector<ReplayResult> replay(const GoldenManifest& manifest);

}  // namespace holo::goldens
