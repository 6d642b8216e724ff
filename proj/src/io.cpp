#include "holo/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include "holo/error.hpp"
#include "png_codec.hpp"

namespace holo::io {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const std::string& in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return v;
}

double get_f64(const std::string& in, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return std::bit_cast<double>(v);
}

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_all(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot create " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

double parse_double(const std::string& text, const std::string& key) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::UnsupportedFormat, "sidecar value for '" + key + "' is not a number");
  }
  return v;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::map<std::string, std::string> read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::UnsupportedFormat, "malformed sidecar line: " + line);
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

const std::string& require_key(const std::map<std::string, std::string>& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw Error(ErrorCode::UnsupportedFormat, "sidecar is missing '" + key + "'");
  return it->second;
}

}  // namespace

void write_field(const std::filesystem::path& path, const ComplexField& field) {
  std::string bytes;
  bytes.reserve(kFieldHeaderBytes + 16 * field.samples().size());
  bytes.append("CFLD");
  put_u32(bytes, kFieldVersion);
  put_u32(bytes, static_cast<std::uint32_t>(field.rows()));
  put_u32(bytes, static_cast<std::uint32_t>(field.cols()));
  put_f64(bytes, field.pitch().y);
  put_f64(bytes, field.pitch().x);
  put_f64(bytes, field.wavelength());
  for (const Complex& z : field.samples()) {
    put_f64(bytes, z.real());
    put_f64(bytes, z.imag());
  }
  write_all(path, bytes);
}

ComplexField read_field(const std::filesystem::path& path) {
  const std::string bytes = read_all(path);
  if (bytes.size() < 4 || bytes.compare(0, 4, "CFLD") != 0) throw Error(ErrorCode::BadMagic, path.string());
  if (bytes.size() < kFieldHeaderBytes) throw Error(ErrorCode::TruncatedPayload, "header cut short in " + path.string());
  const std::uint32_t version = get_u32(bytes, 4);
  if (version != kFieldVersion) {
    throw Error(ErrorCode::UnsupportedVersion, "CFLD version " + std::to_string(version));
  }
  const std::size_t rows = get_u32(bytes, 8);
  const std::size_t cols = get_u32(bytes, 12);
  const Pitch pitch{get_f64(bytes, 24), get_f64(bytes, 16)};
  const double wavelength = get_f64(bytes, 32);
  const std::size_t expected = kFieldHeaderBytes + 16 * rows * cols;
  if (bytes.size() != expected) {
    throw Error(ErrorCode::TruncatedPayload, path.string() + " holds " + std::to_string(bytes.size()) +
                                                 " bytes, header implies " + std::to_string(expected));
  }
  std::vector<Complex> samples(rows * cols);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const std::size_t at = kFieldHeaderBytes + 16 * k;
    samples[k] = {get_f64(bytes, at), get_f64(bytes, at + 8)};
  }
  return ComplexField(rows, cols, pitch, wavelength, std::move(samples));
}

std::filesystem::path sidecar_path(const std::filesystem::path& png) {
  std::filesystem::path p = png;
  p += ".meta";
  return p;
}

std::uint16_t phase_to_u16(double phase) {
  double wrapped = std::fmod(phase, kTwoPi);
  if (wrapped < 0.0) wrapped += kTwoPi;
  const double v = std::floor(wrapped / kTwoPi * 65535.0 + 0.5);
  return static_cast<std::uint16_t>(std::clamp(v, 0.0, 65535.0));
}

double u16_to_phase(std::uint16_t pixel) {
  const double phase = static_cast<double>(pixel) / 65535.0 * kTwoPi;
  return phase > std::numbers::pi ? phase - kTwoPi : phase;
}

void write_hologram_png(const std::filesystem::path& path, const PhaseHologram& holo) {
  std::vector<std::uint16_t> px(holo.phase.size());
  std::ranges::transform(holo.phase, px.begin(), phase_to_u16);
  detail::write_gray_png(path, static_cast<std::uint32_t>(holo.cols), static_cast<std::uint32_t>(holo.rows), 16, px);

  std::ostringstream meta;
  meta << "# phase hologram metadata\n"
       << "format = holo-phase-png\n"
       << "version = 1\n"
       << "rows = " << holo.rows << '\n'
       << "cols = " << holo.cols << '\n'
       << "pitch_x = " << format_double(holo.pitch.x) << '\n'
       << "pitch_y = " << format_double(holo.pitch.y) << '\n'
       << "wavelength = " << format_double(holo.wavelength) << '\n'
       << "encoding = " << to_string(holo.encoding) << '\n'
       << "scale = " << format_double(holo.scale) << '\n';
  write_all(sidecar_path(path), meta.str());
}

PhaseHologram read_hologram_png(const std::filesystem::path& path) {
  const auto meta_path = sidecar_path(path);
  if (!std::filesystem::exists(meta_path)) throw Error(ErrorCode::MissingSidecar, meta_path.string());
  const auto kv = read_key_values(meta_path);
  if (require_key(kv, "format") != "holo-phase-png") throw Error(ErrorCode::UnsupportedFormat, "unknown sidecar format");

  const detail::RawPng raw = detail::read_png(path);
  if (raw.channels != 1 || raw.bit_depth != 16) {
    throw Error(ErrorCode::UnsupportedFormat, "hologram PNG must be 16-bit grayscale");
  }
  PhaseHologram h;
  h.rows = raw.height;
  h.cols = raw.width;
  if (std::to_string(h.rows) != require_key(kv, "rows") || std::to_string(h.cols) != require_key(kv, "cols")) {
    throw Error(ErrorCode::ShapeMismatch, "sidecar dimensions disagree with " + path.string());
  }
  h.pitch = {parse_double(require_key(kv, "pitch_x"), "pitch_x"), parse_double(require_key(kv, "pitch_y"), "pitch_y")};
  h.wavelength = parse_double(require_key(kv, "wavelength"), "wavelength");
  h.encoding = parse_encoding(require_key(kv, "encoding"));
  h.scale = kv.contains("scale") ? parse_double(kv.at("scale"), "scale") : 1.0;
  h.phase.resize(raw.samples.size());
  std::ranges::transform(raw.samples, h.phase.begin(), u16_to_phase);
  return h;
}

void write_gray_png(const std::filesystem::path& path, const GrayImage& image) {
  std::vector<std::uint16_t> px(image.data.begin(), image.data.end());
  detail::write_gray_png(path, static_cast<std::uint32_t>(image.cols), static_cast<std::uint32_t>(image.rows), 8, px);
}

GrayImage read_gray_png(const std::filesystem::path& path) {
  const detail::RawPng raw = detail::read_png(path);
  if (raw.channels != 1 || raw.bit_depth != 8) throw Error(ErrorCode::UnsupportedFormat, "expected 8-bit grayscale PNG");
  GrayImage img(raw.height, raw.width);
  std::ranges::transform(raw.samples, img.data.begin(), [](std::uint16_t v) { return static_cast<std::uint8_t>(v); });
  return img;
}

RealImage load_image(const std::filesystem::path& path, std::optional<std::size_t> square_size) {
  const detail::RawPng raw = detail::read_png(path);
  const double full = raw.bit_depth == 16 ? 65535.0 : 255.0;
  const std::size_t n = static_cast<std::size_t>(raw.width) * raw.height;
  const auto ch = static_cast<std::size_t>(raw.channels);
  std::vector<double> px(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint16_t* s = raw.samples.data() + i * ch;
    double v = 0.0;
    if (ch <= 2) {
      v = s[0] / full;
    } else {
      v = (0.299 * s[0] + 0.587 * s[1] + 0.114 * s[2]) / full;
    }
    px[i] = std::clamp(v, 0.0, 1.0);
  }
  RealImage img(raw.height, raw.width, std::move(px));
  if (square_size) return resize_bilinear(img, *square_size, *square_size);
  return img;
}

RealImage resize_bilinear(const RealImage& image, std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw Error(ErrorCode::InvalidArgument, "resize target must be non-empty");
  if (rows == image.rows() && cols == image.cols()) return image;
  auto sample_coord = [](std::size_t dst, std::size_t dst_n, std::size_t src_n) {
    const double scale = static_cast<double>(src_n) / static_cast<double>(dst_n);
    const double x = (static_cast<double>(dst) + 0.5) * scale - 0.5;
    return std::clamp(x, 0.0, static_cast<double>(src_n - 1));
  };
  std::vector<double> out(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const double y = sample_coord(r, rows, image.rows());
    const auto y0 = static_cast<std::size_t>(y);
    const std::size_t y1 = std::min(y0 + 1, image.rows() - 1);
    const double fy = y - static_cast<double>(y0);
    for (std::size_t c = 0; c < cols; ++c) {
      const double x = sample_coord(c, cols, image.cols());
      const auto x0 = static_cast<std::size_t>(x);
      const std::size_t x1 = std::min(x0 + 1, image.cols() - 1);
      const double fx = x - static_cast<double>(x0);
      const double top = (1.0 - fx) * image(y0, x0) + fx * image(y0, x1);
      const double bottom = (1.0 - fx) * image(y1, x0) + fx * image(y1, x1);
      out[r * cols + c] = std::clamp((1.0 - fy) * top + fy * bottom, 0.0, 1.0);
    }
  }
  return RealImage(rows, cols, std::move(out));
}

void save_image(const std::filesystem::path& path, const RealImage& image) { write_gray_png(path, to_u8(image)); }

}  // namespace holo::io
