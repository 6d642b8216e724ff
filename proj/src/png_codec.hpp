#pragma once

// Minimal libpng wrapper: decode any PNG to 8/16-bit samples, encode grayscale.

#include <cstdint>
#include <filesystem>
#include <vector>

namespace holo::detail {

struct RawPng {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  int channels = 0;   ///< 1 gray, 2 gray+alpha, 3 rgb, 4 rgba
  int bit_depth = 0;  ///< 8 or 16
  std::vector<std::uint16_t> samples;  ///< interleaved, row-major
};

/// Throws IoFailure if the file cannot be opened, UnsupportedFormat if it is
/// not a PNG or cannot be decoded.
RawPng read_png(const std::filesystem::path& path);

/// Grayscale, bit_depth 8 or 16; samples are row-major.
void write_gray_png(const std::filesystem::path& path, std::uint32_t width, std::uint32_t height, int bit_depth,
                    const std::vector<std::uint16_t>& samples);

}  // namespace holo::detail
