/* Copyright 2026 The Augmentor Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "augmentor/error.hpp"
#include "augmentor/image.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

namespace augmentor {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return f;
}

bool has_png_signature(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  unsigned char sig[8] = {};
  in.read(reinterpret_cast<char*>(sig), 8);
  return in.gcount() == 8 && png_sig_cmp(sig, 0, 8) == 0;
}

[[noreturn]] void png_fail(png_structp png, png_const_charp msg) {
  auto* what = static_cast<std::string*>(png_get_error_ptr(png));
  if (what) *what = msg;
  png_longjmp(png, 1);
}

void png_warn(png_structp, png_const_charp) {}

// Decoded 8-bit channels, 1 (gray) or 3 (RGB); alpha is dropped.
struct PngPixels {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> bytes;
};

PngPixels decode_png(const std::filesystem::path& path, bool want_gray) {
  FilePtr file = open_file(path, "rb");
  std::string message;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, png_fail, png_warn);
  if (!png) throw Error(ErrorCode::Io, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  PngPixels out;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::Io, "bad PNG " + path.string() + ": " + message);
  }
  png_init_io(png, file.get());
  png_read_info(png, info);

  const png_byte color_type = png_get_color_type(png, info);
  if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if ((color_type & PNG_COLOR_MASK_COLOR) == 0 && png_get_bit_depth(png, info) < 8)
    png_set_expand_gray_1_2_4_to_8(png);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_strip_alpha(png);
  const bool is_color = (color_type & PNG_COLOR_MASK_COLOR) != 0 || color_type == PNG_COLOR_TYPE_PALETTE;
  if (want_gray && is_color) png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  if (!want_gray && !is_color) png_set_gray_to_rgb(png);
  png_read_update_info(png, info);

  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.channels = png_get_channels(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  out.bytes.resize(stride * static_cast<std::size_t>(out.height));
  rows.resize(static_cast<std::size_t>(out.height));
  for (int y = 0; y < out.height; ++y) rows[static_cast<std::size_t>(y)] = out.bytes.data() + stride * static_cast<std::size_t>(y);
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

void encode_png(const std::filesystem::path& path, int width, int height, int color_type,
                int bit_depth, const std::vector<std::uint8_t>& bytes, std::size_t stride) {
  FilePtr file = open_file(path, "wb");
  std::string message;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message, png_fail, png_warn);
  if (!png) throw Error(ErrorCode::Io, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::Io, "cannot write PNG " + path.string() + ": " + message);
  }
  png_init_io(png, file.get());
  png_set_compression_level(png, 6);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
               bit_depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < height; ++y)
    rows[static_cast<std::size_t>(y)] =
        const_cast<png_bytep>(bytes.data() + stride * static_cast<std::size_t>(y));
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

// PFM: "PF" (RGB) or "Pf" (gray), then width height, then scale (negative
// = little endian), then bottom-to-top rows of 32-bit floats.
struct PfmData {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<float> values;  // top-to-bottom
};

PfmData decode_pfm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::string magic;
  PfmData pfm;
  double scale = 0.0;
  in >> magic >> pfm.width >> pfm.height >> scale;
  in.get();
  if (!in || (magic != "PF" && magic != "Pf") || pfm.width <= 0 || pfm.height <= 0)
    throw Error(ErrorCode::Io, "bad PFM header in " + path.string());
  if (scale > 0) throw Error(ErrorCode::Io, "big-endian PFM not supported: " + path.string());
  pfm.channels = magic == "PF" ? 3 : 1;
  const std::size_t row_len = static_cast<std::size_t>(pfm.width) * pfm.channels;
  pfm.values.resize(row_len * static_cast<std::size_t>(pfm.height));
  for (int y = pfm.height - 1; y >= 0; --y) {
    in.read(reinterpret_cast<char*>(pfm.values.data() + row_len * static_cast<std::size_t>(y)),
            static_cast<std::streamsize>(row_len * sizeof(float)));
  }
  if (!in) throw Error(ErrorCode::Io, "truncated PFM " + path.string());
  return pfm;
}

void encode_pfm(const std::filesystem::path& path, int width, int height, int channels,
                const std::vector<float>& values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << (channels == 3 ? "PF" : "Pf") << "\n" << width << " " << height << "\n-1.0\n";
  const std::size_t row_len = static_cast<std::size_t>(width) * channels;
  for (int y = height - 1; y >= 0; --y)
    out.write(reinterpret_cast<const char*>(values.data() + row_len * static_cast<std::size_t>(y)),
              static_cast<std::streamsize>(row_len * sizeof(float)));
}

bool has_pfm_signature(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  char sig[2] = {};
  in.read(sig, 2);
  return in.gcount() == 2 && sig[0] == 'P' && (sig[1] == 'F' || sig[1] == 'f');
}

}  // namespace

LoadedImage read_image(const std::filesystem::path& path) {
  LoadedImage out;
  if (has_pfm_signature(path)) {
    const PfmData pfm = decode_pfm(path);
    out.hdr = ImageRgbF(pfm.width, pfm.height);
    for (std::size_t i = 0; i < out.hdr.size(); ++i) {
      for (int c = 0; c < 3; ++c) {
        const float v = pfm.values[i * pfm.channels + (pfm.channels == 3 ? c : 0)];
        out.hdr[i][c] = std::isfinite(v) ? static_cast<double>(v) : 0.0;
      }
    }
    return out;
  }
  out.ldr = read_rgb8(path);
  return out;
}

ImageRgb8 read_rgb8(const std::filesystem::path& path) {
  if (!has_png_signature(path)) throw Error(ErrorCode::Io, "not a PNG file: " + path.string());
  const PngPixels px = decode_png(path, false);
  ImageRgb8 img(px.width, px.height);
  std::memcpy(img.pixels().data(), px.bytes.data(), img.size() * 3);
  return img;
}

ImageGray8 read_gray8(const std::filesystem::path& path) {
  if (!has_png_signature(path)) throw Error(ErrorCode::Io, "not a PNG file: " + path.string());
  const PngPixels px = decode_png(path, true);
  ImageGray8 img(px.width, px.height);
  std::memcpy(img.pixels().data(), px.bytes.data(), img.size());
  return img;
}

void write_png(const std::filesystem::path& path, const ImageRgb8& image) {
  std::vector<std::uint8_t> bytes(image.size() * 3);
  std::memcpy(bytes.data(), image.pixels().data(), bytes.size());
  encode_png(path, image.width(), image.height(), PNG_COLOR_TYPE_RGB, 8, bytes,
             static_cast<std::size_t>(image.width()) * 3);
}

void write_png(const std::filesystem::path& path, const ImageGray8& image) {
  std::vector<std::uint8_t> bytes(image.pixels().begin(), image.pixels().end());
  encode_png(path, image.width(), image.height(), PNG_COLOR_TYPE_GRAY, 8, bytes,
             static_cast<std::size_t>(image.width()));
}

void write_png16(const std::filesystem::path& path, const Raster<std::uint16_t>& image) {
  std::vector<std::uint8_t> bytes(image.size() * 2);
  for (std::size_t i = 0; i < image.size(); ++i) {
    bytes[2 * i] = static_cast<std::uint8_t>(image[i] >> 8);
    bytes[2 * i + 1] = static_cast<std::uint8_t>(image[i] & 0xff);
  }
  encode_png(path, image.width(), image.height(), PNG_COLOR_TYPE_GRAY, 16, bytes,
             static_cast<std::size_t>(image.width()) * 2);
}

void write_png_rgba16(const std::filesystem::path& path,
                      const Raster<std::array<std::uint16_t, 4>>& image) {
  std::vector<std::uint8_t> bytes(image.size() * 8);
  for (std::size_t i = 0; i < image.size(); ++i) {
    for (int c = 0; c < 4; ++c) {
      bytes[8 * i + 2 * c] = static_cast<std::uint8_t>(image[i][c] >> 8);
      bytes[8 * i + 2 * c + 1] = static_cast<std::uint8_t>(image[i][c] & 0xff);
    }
  }
  encode_png(path, image.width(), image.height(), PNG_COLOR_TYPE_RGBA, 16, bytes,
             static_cast<std::size_t>(image.width()) * 8);
}

void write_pfm(const std::filesystem::path& path, const ImageRgbF& image) {
  std::vector<float> values(image.size() * 3);
  for (std::size_t i = 0; i < image.size(); ++i)
    for (int c = 0; c < 3; ++c) values[3 * i + c] = static_cast<float>(image[i][c]);
  encode_pfm(path, image.width(), image.height(), 3, values);
}

void write_pfm(const std::filesystem::path& path, const Raster<double>& image) {
  std::vector<float> values(image.size());
  for (std::size_t i = 0; i < image.size(); ++i) values[i] = static_cast<float>(image[i]);
  encode_pfm(path, image.width(), image.height(), 1, values);
}

ImageRgbF to_unit_float(const ImageRgb8& image) {
  ImageRgbF out(image.width(), image.height());
  for (std::size_t i = 0; i < image.size(); ++i)
    for (int c = 0; c < 3; ++c) out[i][c] = image[i][c] / 255.0;
  return out;
}

}  // namespace augmentor
