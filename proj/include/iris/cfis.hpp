#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "iris/image.hpp"
#include "iris/kmeans.hpp"
#include "iris/pupil.hpp"

namespace iris {

/// Polar unwrapping around the pupil. Row r samples the circle of radius
/// inner_radius + r * radial_step; `ui` keeps the raw variable-length rows and
/// `rui` the same rows stretched to a common width.
struct UnwrappedIris {
  std::vector<std::vector<std::uint8_t>> ui;
  std::vector<std::vector<double>> rui;
  double inner_radius = 0.0;
  double radial_step = 1.0;
  double angular_origin = 0.0;  // radians, counterclockwise from +x

  std::size_t rows() const noexcept { return rui.size(); }
  int width() const noexcept { return rui.empty() ? 0 : static_cast<int>(rui.front().size()); }
  double radius_of(std::size_t row) const noexcept { return inner_radius + row * radial_step; }

  /// Rows [first, last] as a new unwrapping.
  UnwrappedIris slice(std::size_t first, std::size_t last) const;
};

struct LineMeans {
  std::vector<double> a;  // UI row means
  std::vector<double> b;  // RUI row means
  std::vector<double> c;  // (a + b) / 2
};

/// Partition of a discrete signal's domain, one symbol per element. Symbols
/// run 1..symbols, with 1 the lowest centroid. Only the induced partition is
/// meaningful.
struct CombinedCrispIndicator {
  std::vector<int> labels;
  int symbols = 0;
  bool degenerate = false;  // input was constant

  /// Partition equality, blind to how the symbols are named.
  bool same_partition(const CombinedCrispIndicator& other) const;
};

struct BandVote {
  std::vector<int> votes;  // 0..3 per line
  std::size_t first = 0;   // innermost line of the band
  std::size_t last = 0;    // limbic boundary line
  int iris_symbol[3] = {0, 0, 0};
};

struct IrisRing {
  PupilFit pupil;
  double limbic_radius = 0.0;
  UnwrappedIris unwrapped;  // iris band only
  std::vector<int> vote_trace;
};

struct CfisOptions {
  PupilFinderOptions pupil;
  int width = 512;
  double max_radius_factor = 3.0;
  /// Line vectors start at this fraction of the pupil radius so the pupil
  /// forms its own cluster; the ring itself never extends inside the pupil.
  double inner_radius_factor = 0.5;
  double radial_step = 1.0;
  int pupil_margin = 2;  // lines past the pupil boundary that anchor the iris cluster
  KmqOptions line_kmeans{3, 100, false, KmeansInit::EvenRange};
};

struct CfisStages {
  PupilStages pupil;
  UnwrappedIris unwrapped;
  LineMeans means;
  CombinedCrispIndicator p, q, r;
  BandVote vote;
};

/// Rows start at `min_radius` (the pupil radius when negative) and step
/// outward up to `max_radius`, clamped to the nearest image border.
UnwrappedIris unwrap(const GrayImage& img, const PupilFit& fit, double max_radius, int width = 512,
                     double radial_step = 1.0, double min_radius = -1.0);

LineMeans line_mean_vectors(const UnwrappedIris& u);

CombinedCrispIndicator three_means_indicator(std::span<const double> v,
                                             const KmqOptions& opts = CfisOptions{}.line_kmeans);

/// Lines voted into the iris cluster by at least two of three indicators. The
/// iris cluster of each indicator is the one holding line `pupil_margin`.
BandVote vote_iris_band(const CombinedCrispIndicator& p, const CombinedCrispIndicator& q,
                        const CombinedCrispIndicator& r, int pupil_margin = 2);

/// Iris cluster anchored at an explicit line; the band is the run of lines
/// with two or more votes that contains the anchor.
BandVote vote_iris_band_at(const CombinedCrispIndicator& p, const CombinedCrispIndicator& q,
                           const CombinedCrispIndicator& r, std::size_t anchor);

IrisRing segment(const GrayImage& img, const CfisOptions& opts = {}, CfisStages* stages = nullptr);

}  // namespace iris
