#include "png_codec.hpp"

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>

#include "holo/error.hpp"

namespace holo::detail {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct ReadState {
  std::FILE* fp = nullptr;
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::vector<png_byte> pixels;
  std::vector<png_bytep> row_ptrs;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int channels = 0;
  int bit_depth = 0;
};

// Only touches `s`; no automatic objects with destructors live across setjmp.
bool decode(ReadState& s) {
  if (setjmp(png_jmpbuf(s.png))) return false;
  png_init_io(s.png, s.fp);
  png_set_sig_bytes(s.png, 8);
  png_read_info(s.png, s.info);
  png_set_expand(s.png);
  png_set_interlace_handling(s.png);
  png_read_update_info(s.png, s.info);
  s.width = png_get_image_width(s.png, s.info);
  s.height = png_get_image_height(s.png, s.info);
  s.channels = png_get_channels(s.png, s.info);
  s.bit_depth = png_get_bit_depth(s.png, s.info);
  const png_size_t stride = png_get_rowbytes(s.png, s.info);
  s.pixels.resize(stride * s.height);
  s.row_ptrs.resize(s.height);
  for (png_uint_32 r = 0; r < s.height; ++r) s.row_ptrs[r] = s.pixels.data() + r * stride;
  png_read_image(s.png, s.row_ptrs.data());
  png_read_end(s.png, nullptr);
  return true;
}

struct WriteState {
  std::FILE* fp = nullptr;
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::vector<png_bytep> row_ptrs;
};

bool encode(WriteState& s, png_uint_32 width, png_uint_32 height, int bit_depth) {
  if (setjmp(png_jmpbuf(s.png))) return false;
  png_init_io(s.png, s.fp);
  png_set_IHDR(s.png, s.info, width, height, bit_depth, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(s.png, s.info);
  png_write_image(s.png, s.row_ptrs.data());
  png_write_end(s.png, nullptr);
  return true;
}

}  // namespace

RawPng read_png(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  png_byte sig[8] = {};
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw Error(ErrorCode::UnsupportedFormat, path.string() + " is not a PNG file");
  }
  ReadState s;
  s.fp = file.get();
  s.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (s.png == nullptr) throw Error(ErrorCode::IoFailure, "png_create_read_struct failed");
  s.info = png_create_info_struct(s.png);
  const bool ok = s.info != nullptr && decode(s);
  png_destroy_read_struct(&s.png, s.info ? &s.info : nullptr, nullptr);
  if (!ok) throw Error(ErrorCode::UnsupportedFormat, "cannot decode " + path.string());

  RawPng out;
  out.width = s.width;
  out.height = s.height;
  out.channels = s.channels;
  out.bit_depth = s.bit_depth;
  const std::size_t count = static_cast<std::size_t>(s.width) * s.height * static_cast<std::size_t>(s.channels);
  out.samples.resize(count);
  if (s.bit_depth == 16) {
    for (std::size_t i = 0; i < count; ++i) {
      out.samples[i] = static_cast<std::uint16_t>((s.pixels[2 * i] << 8) | s.pixels[2 * i + 1]);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) out.samples[i] = s.pixels[i];
  }
  return out;
}

void write_gray_png(const std::filesystem::path& path, std::uint32_t width, std::uint32_t height, int bit_depth,
                    const std::vector<std::uint16_t>& samples) {
  const std::size_t bytes_per_sample = bit_depth == 16 ? 2 : 1;
  std::vector<png_byte> pixels(samples.size() * bytes_per_sample);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (bit_depth == 16) {
      pixels[2 * i] = static_cast<png_byte>(samples[i] >> 8);
      pixels[2 * i + 1] = static_cast<png_byte>(samples[i] & 0xff);
    } else {
      pixels[i] = static_cast<png_byte>(samples[i]);
    }
  }
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw Error(ErrorCode::IoFailure, "cannot create " + path.string());
  WriteState s;
  s.fp = file.get();
  s.row_ptrs.resize(height);
  const std::size_t stride = width * bytes_per_sample;
  for (std::uint32_t r = 0; r < height; ++r) s.row_ptrs[r] = pixels.data() + r * stride;
  s.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (s.png == nullptr) throw Error(ErrorCode::IoFailure, "png_create_write_struct failed");
  s.info = png_create_info_struct(s.png);
  const bool ok = s.info != nullptr && encode(s, width, height, bit_depth);
  png_destroy_write_struct(&s.png, s.info ? &s.info : nullptr);
  if (!ok || std::fflush(file.get()) != 0) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
}

}  // namespace holo::detail
