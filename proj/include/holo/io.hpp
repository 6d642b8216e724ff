#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>

#include "holo/encoding.hpp"
#include "holo/field.hpp"

namespace holo::io {

/// CFLD layout (all little-endian):
///   "CFLD" | u32 version = 1 | u32 rows | u32 cols | f64 pitch_y | f64 pitch_x |
///   f64 wavelength | rows*cols * (f64 re, f64 im), row-major
inline constexpr std::size_t kFieldHeaderBytes = 40;
inline constexpr std::uint32_t kFieldVersion = 1;

void write_field(const std::filesystem::path& path, const ComplexField& field);
ComplexField read_field(const std::filesystem::path& path);

/// Sidecar next to a hologram PNG: "<png path>.meta".
std::filesystem::path sidecar_path(const std::filesystem::path& png);

/// 16-bit grayscale PNG, pixel = round(wrap(phi) / 2 pi * 65535) with
/// wrap to [0, 2 pi), plus a key = value sidecar holding pitch, wavelength,
/// encoding and bleach scale.
void write_hologram_png(const std::filesystem::path& path, const PhaseHologram& holo);
/// Phases come back in (-pi, pi].
PhaseHologram read_hologram_png(const std::filesystem::path& path);

std::uint16_t phase_to_u16(double phase);
double u16_to_phase(std::uint16_t pixel);

/// 8-bit grayscale PNG.
void write_gray_png(const std::filesystem::path& path, const GrayImage& image);
GrayImage read_gray_png(const std::filesystem::path& path);

/// Grayscale or RGB(A) PNG, 8 or 16 bit. RGB is converted with luma weights
/// (0.299, 0.587, 0.114). With `square_size`, the image is resampled
/// bilinearly to square_size x square_size.
RealImage load_image(const std::filesystem::path& path, std::optional<std::size_t> square_size = std::nullopt);

/// Bilinear resampling with pixel-center alignment and edge clamping.
RealImage resize_bilinear(const RealImage& image, std::size_t rows, std::size_t cols);

/// Writes `image` as an 8-bit PNG (round-half-up quantization).
void save_image(const std::filesystem::path& path, const RealImage& image);

}  // namespace holo::io
