#include "iris/pupil.hpp"

#include <algorithm>
#include <climits>
#include <vector>

#include "iris/rle.hpp"

namespace iris {
namespace {

// Lowest RLQ value that lands in the top cluster of a k-means over the
// support (background zeros are not run-length coefficients).
int top_cluster_threshold(const GrayImage& rlq, const BinaryImage& support, int k) {
  const auto clusters = kmeans_histogram(histogram(rlq, &support), KmqOptions{k, 10, false});
  const int top = static_cast<int>(clusters.centroids.size()) - 1;
  for (int v = 1; v < kHistogramBins; ++v) {
    if (clusters.label[v] == top) return v;
  }
  return kHistogramBins;  // unreachable for a non-empty support
}

// Fills enclosed 0-runs along every line of one axis. Returns true on change.
bool fill_enclosed_runs(BinaryImage& p, Axis axis) {
  const bool horizontal = axis == Axis::Horizontal;
  const int lines = horizontal ? p.height() : p.width();
  const int span = horizontal ? p.width() : p.height();
  auto px = [&](int line, int pos) -> std::uint8_t& {
    return horizontal ? p(pos, line) : p(line, pos);
  };
  bool changed = false;
  for (int line = 0; line < lines; ++line) {
    int last_set = -1;
    for (int pos = 0; pos < span; ++pos) {
      if (!px(line, pos)) continue;
      if (last_set >= 0 && pos - last_set > 1) {
        for (int i = last_set + 1; i < pos; ++i) px(line, i) = 1;
        changed = true;
      }
      last_set = pos;
    }
  }
  return changed;
}

}  // namespace

BinaryImage extract_pupil_cluster(const GrayImage& img, int k, int max_iter, bool reset_first_to_min) {
  const auto q = fkmq(img, k, max_iter, reset_first_to_min);
  if (q.centroids.size() < 2) {
    throw Error(ErrorCode::DegenerateInput, "pupil cluster: image has a single intensity");
  }
  BinaryImage pc(img.width(), img.height());
  auto dst = pc.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = q.labels[i] == 0 ? 1 : 0;
  return pc;
}

PupilIndicator compute_pupil_indicator(const BinaryImage& pc, int k) {
  if (count_set(pc) == 0) throw Error(ErrorCode::DegenerateInput, "pupil indicator: empty pupil cluster");
  const GrayImage rlv = rlq_directional(pc, Axis::Vertical);
  const GrayImage rlh = rlq_directional(pc, Axis::Horizontal);
  const auto runs_v = run_lengths(pc, Axis::Vertical);
  const auto runs_h = run_lengths(pc, Axis::Horizontal);

  PupilIndicator out;
  out.threshold_vertical = top_cluster_threshold(rlv, pc, k);
  out.threshold_horizontal = top_cluster_threshold(rlh, pc, k);
  out.mask = BinaryImage(pc.width(), pc.height());

  const auto v = rlv.pixels();
  const auto h = rlh.pixels();
  auto dst = out.mask.pixels();
  std::size_t kept = 0;
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const bool thick = runs_v[i] >= 2 && runs_h[i] >= 2;
    if (thick && v[i] >= out.threshold_vertical && h[i] >= out.threshold_horizontal) {
      dst[i] = 1;
      ++kept;
    }
  }
  if (kept > 0) return out;

  // The two top clusters do not intersect: keep the preimage of the maximum
  // joint membership min(RLV, RLH) among pixels thick in both directions.
  int best = 0;
  for (std::size_t i = 0; i < dst.size(); ++i) {
    if (runs_v[i] >= 2 && runs_h[i] >= 2) best = std::max(best, static_cast<int>(std::min(v[i], h[i])));
  }
  if (best == 0) {
    throw Error(ErrorCode::NoPupilIndicator,
                "pupil indicator: no pixel lies on runs of length >= 2 in both directions");
  }
  for (std::size_t i = 0; i < dst.size(); ++i) {
    if (runs_v[i] >= 2 && runs_h[i] >= 2 && std::min(v[i], h[i]) == best) dst[i] = 1;
  }
  out.threshold_vertical = out.threshold_horizontal = best;
  out.used_fallback = true;
  return out;
}

BinaryImage pupil_indicator(const BinaryImage& pc, int k) {
  return compute_pupil_indicator(pc, k).mask;
}

BinaryImage flood_fill_pupil(const BinaryImage& pc, Pixel seed) {
  if (!pc.contains(seed.x, seed.y) || !pc(seed.x, seed.y)) {
    throw Error(ErrorCode::InvalidSeed, "flood fill: seed is not a set pixel");
  }
  BinaryImage out(pc.width(), pc.height());
  std::vector<Pixel> stack{seed};
  out(seed.x, seed.y) = 1;
  while (!stack.empty()) {
    const Pixel p = stack.back();
    stack.pop_back();
    const Pixel next[4] = {{p.x + 1, p.y}, {p.x - 1, p.y}, {p.x, p.y + 1}, {p.x, p.y - 1}};
    for (const auto& n : next) {
      if (pc.contains(n.x, n.y) && pc(n.x, n.y) && !out(n.x, n.y)) {
        out(n.x, n.y) = 1;
        stack.push_back(n);
      }
    }
  }
  return out;
}

BinaryImage fill_specular_lights(const BinaryImage& p) {
  BinaryImage out = p;
  while (true) {
    const bool rows = fill_enclosed_runs(out, Axis::Horizontal);
    const bool cols = fill_enclosed_runs(out, Axis::Vertical);
    if (!rows && !cols) break;
  }
  return out;
}

PupilFit fit_pupil(const BinaryImage& p) {
  int min_x = INT_MAX, min_y = INT_MAX, max_x = -1, max_y = -1;
  for (int y = 0; y < p.height(); ++y) {
    for (int x = 0; x < p.width(); ++x) {
      if (!p(x, y)) continue;
      min_x = std::min(min_x, x);
      max_x = std::max(max_x, x);
      min_y = std::min(min_y, y);
      max_y = std::max(max_y, y);
    }
  }
  if (max_x < 0) throw Error(ErrorCode::EmptyMask, "fit_pupil: empty pupil mask");
  PupilFit fit;
  fit.center_x = (min_x + max_x) / 2.0;
  fit.center_y = (min_y + max_y) / 2.0;
  fit.semi_axis_h = (max_x - min_x + 1) / 2.0;
  fit.semi_axis_v = (max_y - min_y + 1) / 2.0;
  fit.radius = (fit.semi_axis_h + fit.semi_axis_v) / 2.0;
  fit.pupil_mask = p;
  return fit;
}

PupilFit find_pupil(const GrayImage& img, const PupilFinderOptions& opts, PupilStages* stages) {
  BinaryImage pc;
  try {
    pc = extract_pupil_cluster(img, opts.cluster_k, opts.cluster_max_iter, opts.reset_first_to_min);
  } catch (const Error& e) {
    // A single-intensity image has no dark cluster to search.
    if (e.code() == ErrorCode::DegenerateInput) {
      throw Error(ErrorCode::NoPupilIndicator, e.what()).annotated("pupil/cluster");
    }
    throw e.annotated("pupil/cluster");
  }

  PupilIndicator pi;
  try {
    pi = compute_pupil_indicator(pc, opts.indicator_k);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DegenerateInput) {
      throw Error(ErrorCode::NoPupilIndicator, e.what()).annotated("pupil/indicator");
    }
    throw e.annotated("pupil/indicator");
  }

  // First indicator pixel in row-major order seeds the flood fill.
  Pixel seed{-1, -1};
  const auto ind = pi.mask.pixels();
  const auto it = std::find(ind.begin(), ind.end(), 1);
  const auto offset = static_cast<int>(it - ind.begin());
  seed = {offset % pi.mask.width(), offset / pi.mask.width()};

  BinaryImage flooded, filled;
  PupilFit fit;
  try {
    flooded = flood_fill_pupil(pc, seed);
    filled = fill_specular_lights(flooded);
    fit = fit_pupil(filled);
  } catch (const Error& e) {
    throw e.annotated("pupil/fit");
  }

  if (stages) {
    stages->cluster = pc;
    stages->rlv = rlq_directional(pc, Axis::Vertical);
    stages->rlh = rlq_directional(pc, Axis::Horizontal);
    stages->indicator = pi.mask;
    stages->seed = seed;
    stages->flooded = std::move(flooded);
    stages->filled = filled;
    stages->threshold_vertical = pi.threshold_vertical;
    stages->threshold_horizontal = pi.threshold_horizontal;
  }
  return fit;
}

}  // namespace iris
