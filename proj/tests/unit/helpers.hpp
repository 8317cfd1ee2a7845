#pragma once

#include <doctest.h>

#include <filesystem>
#include <random>
#include <string>

#include "iris/error.hpp"
#include "iris/image.hpp"

// Fails unless `fn` throws iris::Error carrying `code`.
template <typename Fn>
void check_error(Fn&& fn, iris::ErrorCode code) {
  try {
    fn();
    FAIL("expected iris::Error " << iris::to_string(code));
  } catch (const iris::Error& e) {
    CHECK_MESSAGE(e.code() == code, e.what());
  }
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("irisbench_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Solid disk of ones.
inline iris::BinaryImage disk_mask(int w, int h, double cx, double cy, double r) {
  iris::BinaryImage img(w, h, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) img(x, y) = 1;
  return img;
}
