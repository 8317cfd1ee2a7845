#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "iris/error.hpp"
#include "iris/image.hpp"

namespace iris {

template <typename T>
struct RleRun {
  T value{};
  std::size_t length = 0;
  friend bool operator==(const RleRun&, const RleRun&) = default;
};

/// Collapses `v` into maximal runs of equal values.
template <typename T>
std::vector<RleRun<T>> rle_encode(std::span<const T> v) {
  if (v.empty()) throw Error(ErrorCode::EmptyInput, "rle_encode: empty input");
  std::vector<RleRun<T>> runs;
  runs.push_back({v[0], 1});
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] == runs.back().value) {
      ++runs.back().length;
    } else {
      runs.push_back({v[i], 1});
    }
  }
  return runs;
}

template <typename T>
std::vector<RleRun<T>> rle_encode(const std::vector<T>& v) {
  return rle_encode(std::span<const T>(v));
}

template <typename T>
std::vector<T> rle_decode(std::span<const RleRun<T>> runs) {
  if (runs.empty()) throw Error(ErrorCode::EmptyInput, "rle_decode: no runs");
  std::vector<T> out;
  for (const auto& run : runs) {
    if (run.length == 0) throw Error(ErrorCode::InvalidRun, "rle_decode: zero-length run");
    out.insert(out.end(), run.length, run.value);
  }
  return out;
}

template <typename T>
std::vector<T> rle_decode(const std::vector<RleRun<T>>& runs) {
  return rle_decode(std::span<const RleRun<T>>(runs));
}

/// Merges adjacent runs that carry the same value.
template <typename T>
std::vector<RleRun<T>> rle_normalize(std::span<const RleRun<T>> runs) {
  std::vector<RleRun<T>> out;
  for (const auto& run : runs) {
    if (!out.empty() && out.back().value == run.value) {
      out.back().length += run.length;
    } else {
      out.push_back(run);
    }
  }
  return out;
}

/// Re-quantization into uint8: min(255, max(1, round(255 * v / max(v)))).
std::vector<std::uint8_t> rqf(std::span<const double> v);

enum class Axis { Horizontal, Vertical };

/// Run-length quantization of a binary image: every 1-pixel takes the
/// re-quantized length of the maximal 1-run through it along `axis`,
/// normalized by the longest 1-run anywhere in the image.
GrayImage rlq_directional(const BinaryImage& img, Axis axis);

/// Raw run lengths behind rlq_directional (0 for background pixels).
std::vector<std::size_t> run_lengths(const BinaryImage& img, Axis axis);

}  // namespace iris
