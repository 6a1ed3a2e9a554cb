#pragma once

// Strict PNG image and mask I/O. Images must be 8-bit RGB, masks 8-bit
// grayscale; anything else is rejected rather than silently converted, so
// a job's inputs are bit-exact by construction.

#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <png.h>

#include "inpaint/core.hpp"

namespace inpaint {

class PngError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FileHandle = std::unique_ptr<std::FILE, FileCloser>;

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;

  PngReader() {
    png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png) info = png_create_info_struct(png);
    if (!png || !info) {
      png_destroy_read_struct(&png, &info, nullptr);
      throw PngError("png: failed to allocate read structs");
    }
  }
  PngReader(const PngReader&) = delete;
  PngReader& operator=(const PngReader&) = delete;
  ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;

  PngWriter() {
    png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png) info = png_create_info_struct(png);
    if (!png || !info) {
      png_destroy_write_struct(&png, &info);
      throw PngError("png: failed to allocate write structs");
    }
  }
  PngWriter(const PngWriter&) = delete;
  PngWriter& operator=(const PngWriter&) = delete;
  ~PngWriter() { png_destroy_write_struct(&png, &info); }
};

struct DecodedPng {
  int width = 0;
  int height = 0;
  int color_type = 0;
  int bit_depth = 0;
  std::vector<std::uint8_t> bytes;  // rows concatenated, no padding
};

inline DecodedPng decode_png(const std::string& path, int expected_channels) {
  FileHandle file(std::fopen(path.c_str(), "rb"));
  if (!file) throw PngError("png: cannot open '" + path + "' for reading");

  PngReader r;
  if (setjmp(png_jmpbuf(r.png))) throw PngError("png: failed to decode '" + path + "'");
  png_init_io(r.png, file.get());
  png_read_png(r.png, r.info, PNG_TRANSFORM_IDENTITY, nullptr);

  DecodedPng out;
  out.width = static_cast<int>(png_get_image_width(r.png, r.info));
  out.height = static_cast<int>(png_get_image_height(r.png, r.info));
  out.color_type = png_get_color_type(r.png, r.info);
  out.bit_depth = png_get_bit_depth(r.png, r.info);
  if (out.bit_depth != 8) return out;  // caller rejects on metadata

  const std::size_t stride = static_cast<std::size_t>(out.width) * expected_channels;
  if (png_get_rowbytes(r.png, r.info) != stride) return out;

  png_bytepp rows = png_get_rows(r.png, r.info);
  out.bytes.resize(stride * out.height);
  for (int row = 0; row < out.height; ++row)
    std::copy(rows[row], rows[row] + stride, out.bytes.begin() + row * stride);
  return out;
}

}  // namespace detail

/// Reads an 8-bit RGB PNG. Any other bit depth or color type is an error.
inline Image read_image_png(const std::string& path) {
  detail::DecodedPng png = detail::decode_png(path, 3);
  if (png.bit_depth != 8 || png.color_type != PNG_COLOR_TYPE_RGB || png.bytes.empty())
    throw PngError("png: '" + path + "' is not an 8-bit RGB PNG");
  Image img(png.width, png.height);
  for (int row = 0; row < png.height; ++row) {
    for (int col = 0; col < png.width; ++col) {
      const std::size_t i = (static_cast<std::size_t>(row) * png.width + col) * 3;
      img.at({col, row}) = {png.bytes[i], png.bytes[i + 1], png.bytes[i + 2]};
    }
  }
  return img;
}

/// Reads an 8-bit grayscale PNG as a mask: value >= 128 means Missing,
/// anything below means Known.
inline Mask read_mask_png(const std::string& path) {
  detail::DecodedPng png = detail::decode_png(path, 1);
  if (png.bit_depth != 8 || png.color_type != PNG_COLOR_TYPE_GRAY || png.bytes.empty())
    throw PngError("png: '" + path + "' is not an 8-bit grayscale PNG");
  Mask mask(png.width, png.height);
  for (int row = 0; row < png.height; ++row)
    for (int col = 0; col < png.width; ++col)
      mask.set({col, row}, png.bytes[static_cast<std::size_t>(row) * png.width + col] >= 128
                               ? PixelState::Missing
                               : PixelState::Known);
  return mask;
}

inline void write_image_png(const std::string& path, const Image& img) {
  detail::FileHandle file(std::fopen(path.c_str(), "wb"));
  if (!file) throw PngError("png: cannot open '" + path + "' for writing");

  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(img.width()) * img.height() * 3);
  std::vector<png_bytep> rows(img.height());
  for (int row = 0; row < img.height(); ++row) {
    rows[row] = bytes.data() + static_cast<std::size_t>(row) * img.width() * 3;
    for (int col = 0; col < img.width(); ++col) {
      const Rgb px = img.at({col, row});
      rows[row][col * 3 + 0] = px.r;
      rows[row][col * 3 + 1] = px.g;
      rows[row][col * 3 + 2] = px.b;
    }
  }

  detail::PngWriter w;
  if (setjmp(png_jmpbuf(w.png))) throw PngError("png: failed to encode '" + path + "'");
  png_init_io(w.png, file.get());
  png_set_IHDR(w.png, w.info, img.width(), img.height(), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_rows(w.png, w.info, rows.data());
  png_write_png(w.png, w.info, PNG_TRANSFORM_IDENTITY, nullptr);
}

}  // namespace inpaint
