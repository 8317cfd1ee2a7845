#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "iris/error.hpp"

namespace iris {

/// Pixel coordinate, column then row.
struct Pixel {
  int x = 0;
  int y = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// Row-major raster with checked dimensions. `T` is uint8_t for gray images
/// and bool-like uint8_t (0/1) for binary images.
template <typename T, typename Tag>
class Raster {
 public:
  using value_type = T;

  Raster() = default;
  Raster(int width, int height, T fill = T{}) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
      throw Error(ErrorCode::Shape, "raster dimensions must be positive");
    }
    data_.assign(static_cast<std::size_t>(width) * height, fill);
  }
  Raster(int width, int height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (width < 1 || height < 1) {
      throw Error(ErrorCode::Shape, "raster dimensions must be positive");
    }
    if (data_.size() != static_cast<std::size_t>(width) * height) {
      throw Error(ErrorCode::Shape, "pixel count does not match width x height");
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(int x, int y) { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const { return data_[index(x, y)]; }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  std::span<T> pixels() noexcept { return data_; }
  std::span<const T> pixels() const noexcept { return data_; }

  std::span<T> row(int y) {
    return std::span<T>(data_).subspan(static_cast<std::size_t>(y) * width_, width_);
  }
  std::span<const T> row(int y) const {
    return std::span<const T>(data_).subspan(static_cast<std::size_t>(y) * width_, width_);
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

struct GrayTag {};
struct BinaryTag {};
struct RealTag {};

/// 8-bit single-channel intensities.
using GrayImage = Raster<std::uint8_t, GrayTag>;
/// Binary mask; every pixel is 0 or 1.
using BinaryImage = Raster<std::uint8_t, BinaryTag>;
/// Real-valued raster for resampled bands.
using RealImage = Raster<double, RealTag>;

std::size_t count_set(const BinaryImage& img);

BinaryImage logical_and(const BinaryImage& a, const BinaryImage& b);

/// {0,1} -> {0,255} for display and PGM export.
GrayImage to_gray(const BinaryImage& img);

}  // namespace iris
