#pragma once

#include <png.h>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "rdsbench/error.hpp"
#include "rdsbench/mask.hpp"

namespace rdsbench {

namespace detail {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

inline FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.string().c_str(), mode));
  if (!f) throw IoError("cannot open " + path.string());
  return f;
}

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;

  PngReader() {
    png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png) info = png_create_info_struct(png);
    if (!png || !info) {
      png_destroy_read_struct(&png, &info, nullptr);
      throw IoError("failed to initialize PNG reader");
    }
  }
  ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
  PngReader(const PngReader&) = delete;
  PngReader& operator=(const PngReader&) = delete;
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;

  PngWriter() {
    png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png) info = png_create_info_struct(png);
    if (!png || !info) {
      png_destroy_write_struct(&png, &info);
      throw IoError("failed to initialize PNG writer");
    }
  }
  ~PngWriter() { png_destroy_write_struct(&png, &info); }
  PngWriter(const PngWriter&) = delete;
  PngWriter& operator=(const PngWriter&) = delete;
};

// Decodes to 8-bit with alpha stripped; out has width*height*channels bytes,
// channels is 1 (gray) or 3 (rgb).
inline void read_png_pixels(const std::filesystem::path& path, int& width, int& height,
                            int& channels, std::vector<std::uint8_t>& out) {
  FilePtr fp = open_file(path, "rb");
  PngReader r;
  std::vector<png_bytep> rows;

  if (setjmp(png_jmpbuf(r.png))) throw IoError("failed to decode PNG: " + path.string());

  png_init_io(r.png, fp.get());
  png_read_info(r.png, r.info);

  png_uint_32 w = 0, h = 0;
  int bit_depth = 0, color_type = 0;
  png_get_IHDR(r.png, r.info, &w, &h, &bit_depth, &color_type, nullptr, nullptr, nullptr);

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(r.png);
  if (png_get_valid(r.png, r.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(r.png);
  if (bit_depth == 16) png_set_strip_16(r.png);
  png_set_strip_alpha(r.png);
  png_read_update_info(r.png, r.info);

  channels = png_get_channels(r.png, r.info);
  width = static_cast<int>(w);
  height = static_cast<int>(h);
  if (channels != 1 && channels != 3 && channels != 4)
    throw IoError("unsupported PNG channel count in " + path.string());

  const std::size_t stride = png_get_rowbytes(r.png, r.info);
  out.assign(stride * h, 0);
  rows.resize(h);
  for (png_uint_32 y = 0; y < h; ++y) rows[y] = out.data() + y * stride;
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);

  if (channels == 4) {
    // tRNS expansion can still leave an alpha plane; drop it.
    std::vector<std::uint8_t> rgb(static_cast<std::size_t>(width) * height * 3);
    for (std::size_t p = 0; p < static_cast<std::size_t>(width) * height; ++p)
      for (int c = 0; c < 3; ++c) rgb[p * 3 + c] = out[p * 4 + static_cast<std::size_t>(c)];
    out = std::move(rgb);
    channels = 3;
  }
}

} // namespace detail

struct ImageDims {
  int width = 0;
  int height = 0;
};

// Header-only probe; does not decode pixel data.
inline ImageDims read_png_dims(const std::filesystem::path& path) {
  detail::FilePtr fp = detail::open_file(path, "rb");
  detail::PngReader r;
  if (setjmp(png_jmpbuf(r.png))) throw IoError("not a readable PNG: " + path.string());
  png_init_io(r.png, fp.get());
  png_read_info(r.png, r.info);
  png_uint_32 w = 0, h = 0;
  int bit_depth = 0, color_type = 0;
  png_get_IHDR(r.png, r.info, &w, &h, &bit_depth, &color_type, nullptr, nullptr, nullptr);
  return {static_cast<int>(w), static_cast<int>(h)};
}

// Loads a PNG as a binary mask: pixel >= threshold is foreground. Gray images
// are read directly; color images must have unanimous channels per pixel.
inline BinaryMask load_mask(const std::filesystem::path& path, int threshold = 128) {
  if (threshold < 0 || threshold > 255) throw Error("threshold must be in [0,255]");
  int width = 0, height = 0, channels = 0;
  std::vector<std::uint8_t> pixels;
  detail::read_png_pixels(path, width, height, channels, pixels);

  BinaryMask mask(width, height);
  const std::size_t n = mask.size();
  if (channels == 1) {
    for (std::size_t i = 0; i < n; ++i) mask.bits[i] = pixels[i] >= threshold ? 1 : 0;
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint8_t red = pixels[i * 3];
      if (pixels[i * 3 + 1] != red || pixels[i * 3 + 2] != red)
        throw FormatError("multi-channel mask without unanimous channels: " + path.string());
      mask.bits[i] = red >= threshold ? 1 : 0;
    }
  }
  return mask;
}

// Writes an 8-bit grayscale PNG, foreground 255 / background 0.
inline void save_mask(const BinaryMask& mask, const std::filesystem::path& path) {
  std::vector<std::uint8_t> gray(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) gray[i] = mask.bits[i] ? 255 : 0;

  detail::FilePtr fp = detail::open_file(path, "wb");
  detail::PngWriter w;
  std::vector<png_bytep> rows(static_cast<std::size_t>(mask.height));
  if (setjmp(png_jmpbuf(w.png))) throw IoError("failed to write PNG: " + path.string());
  png_init_io(w.png, fp.get());
  png_set_IHDR(w.png, w.info, static_cast<png_uint_32>(mask.width),
               static_cast<png_uint_32>(mask.height), 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  for (int y = 0; y < mask.height; ++y)
    rows[static_cast<std::size_t>(y)] = gray.data() + static_cast<std::size_t>(y) * mask.width;
  png_write_info(w.png, w.info);
  png_write_image(w.png, rows.data());
  png_write_end(w.png, nullptr);
}

// Writes an 8-bit grayscale image from raw bytes (used by the synthetic
// dataset generator for sample images).
inline void save_gray_png(const std::vector<std::uint8_t>& gray, int width, int height,
                          const std::filesystem::path& path) {
  if (gray.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw Error("pixel buffer does not match dimensions");
  detail::FilePtr fp = detail::open_file(path, "wb");
  detail::PngWriter w;
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  if (setjmp(png_jmpbuf(w.png))) throw IoError("failed to write PNG: " + path.string());
  png_init_io(w.png, fp.get());
  png_set_IHDR(w.png, w.info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
               8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  for (int y = 0; y < height; ++y)
    rows[static_cast<std::size_t>(y)] =
        const_cast<png_bytep>(gray.data() + static_cast<std::size_t>(y) * width);
  png_write_info(w.png, w.info);
  png_write_image(w.png, rows.data());
  png_write_end(w.png, nullptr);
}

} // namespace rdsbench
