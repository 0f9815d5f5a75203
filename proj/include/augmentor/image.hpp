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

#pragma once

#include <array>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace augmentor {

/// Row-major 2D raster with value semantics.
template <typename T>
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, const T& fill = T{})
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {
    assert(width >= 0 && height >= 0);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }
  bool same_shape(int w, int h) const noexcept { return w == width_ && h == height_; }
  template <typename U>
  bool same_shape(const Raster<U>& other) const noexcept {
    return same_shape(other.width(), other.height());
  }

  T& operator()(int x, int y) noexcept {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  const T& operator()(int x, int y) const noexcept {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  T& operator[](std::size_t i) noexcept { return data_[i]; }
  const T& operator[](std::size_t i) const noexcept { return data_[i]; }

  std::span<T> row(int y) noexcept {
    return {data_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
  }
  std::span<const T> row(int y) const noexcept {
    return {data_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
  }
  std::span<T> pixels() noexcept { return data_; }
  std::span<const T> pixels() const noexcept { return data_; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using Rgb8 = std::array<std::uint8_t, 3>;
using RgbF = std::array<double, 3>;
using RgbaF = std::array<double, 4>;

using ImageRgb8 = Raster<Rgb8>;
using ImageRgbF = Raster<RgbF>;
using ImageGray8 = Raster<std::uint8_t>;

/// Decoded image file. 8-bit files keep their bytes; float (PFM) files
/// carry linear values in `hdr` and leave `ldr` empty.
struct LoadedImage {
  ImageRgb8 ldr;
  ImageRgbF hdr;
  bool is_hdr() const noexcept { return !hdr.empty(); }
};

// PNG (8-bit gray/RGB/RGBA; 16-bit is reduced to 8) and PFM are recognized
// by content, not extension.
LoadedImage read_image(const std::filesystem::path& path);
ImageRgb8 read_rgb8(const std::filesystem::path& path);
ImageGray8 read_gray8(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const ImageRgb8& image);
void write_png(const std::filesystem::path& path, const ImageGray8& image);
void write_png16(const std::filesystem::path& path, const Raster<std::uint16_t>& image);
void write_png_rgba16(const std::filesystem::path& path,
                      const Raster<std::array<std::uint16_t, 4>>& image);
void write_pfm(const std::filesystem::path& path, const ImageRgbF& image);
void write_pfm(const std::filesystem::path& path, const Raster<double>& image);

/// Converts 8-bit RGB to [0,1] floats without any transfer function.
ImageRgbF to_unit_float(const ImageRgb8& image);

}  // namespace augmentor
