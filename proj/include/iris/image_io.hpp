#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "iris/image.hpp"

namespace iris {

/// Interleaved 8-bit RGB raster, used only for diagnostic overlays.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // 3 bytes per pixel

  RgbImage() = default;
  explicit RgbImage(const GrayImage& gray);
  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);
};

GrayImage load_pgm(const std::filesystem::path& path);
void save_pgm(const GrayImage& img, const std::filesystem::path& path);
void save_pgm(const BinaryImage& img, const std::filesystem::path& path);

GrayImage load_png(const std::filesystem::path& path);
void save_png(const GrayImage& img, const std::filesystem::path& path);
void save_png(const RgbImage& img, const std::filesystem::path& path);

/// Dispatches on extension (.pgm or .png).
GrayImage load_image(const std::filesystem::path& path);
void save_image(const GrayImage& img, const std::filesystem::path& path);

}  // namespace iris
