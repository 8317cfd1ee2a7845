#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "iris/image.hpp"

namespace iris {

enum class KmeansInit {
  /// k evenly spaced mass quantiles of the histogram.
  Quantile,
  /// k evenly spaced points between the lowest and highest occupied bin.
  EvenRange,
};

struct KmqOptions {
  int k = 16;
  int max_iter = 10;
  bool reset_first_to_min = false;
  KmeansInit init = KmeansInit::Quantile;
};

inline constexpr int kHistogramBins = 256;
using Histogram = std::array<double, kHistogramBins>;

/// Lloyd iteration over a weighted 256-bin histogram.
struct HistogramClusters {
  std::vector<double> centroids;           // strictly ascending
  std::array<int, kHistogramBins> label{};  // per bin; -1 where the bin is empty
  int iterations = 0;
  std::vector<double> objective;  // within-cluster squared deviation after each update
};

HistogramClusters kmeans_histogram(const Histogram& hist, const KmqOptions& opts);

struct KmqResult {
  std::vector<std::uint8_t> labels;  // per pixel, row-major
  std::vector<double> centroids;     // strictly ascending
  int iterations = 0;
  std::vector<double> objective;
};

/// Fast k-means chromatic quantization. k is clamped to the number of distinct
/// intensities; k < 2 on input is a parameter error.
KmqResult fkmq(const GrayImage& img, const KmqOptions& opts);
KmqResult fkmq(const GrayImage& img, int k, int max_iter = 10, bool reset_first_to_min = false);

/// Histogram of the pixels where `support` is set (all pixels when empty).
Histogram histogram(const GrayImage& img, const BinaryImage* support = nullptr);

}  // namespace iris
