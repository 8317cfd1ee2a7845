#include "iris/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "iris/error.hpp"

namespace iris {
namespace {

using Labels = std::array<int, kHistogramBins>;

Labels assign(const Histogram& hist, const std::vector<double>& centroids) {
  Labels labels;
  labels.fill(-1);
  for (int v = 0; v < kHistogramBins; ++v) {
    if (hist[v] <= 0.0) continue;
    int best = 0;
    double best_d = std::abs(v - centroids[0]);
    for (int j = 1; j < static_cast<int>(centroids.size()); ++j) {
      const double d = std::abs(v - centroids[j]);
      if (d < best_d) {
        best = j;
        best_d = d;
      }
    }
    labels[v] = best;
  }
  return labels;
}

double nearest_distance(int v, const std::vector<double>& centroids) {
  double best = std::numeric_limits<double>::infinity();
  for (double c : centroids) best = std::min(best, std::abs(v - c));
  return best;
}

double objective(const Histogram& hist, const std::vector<double>& centroids) {
  double sum = 0.0;
  for (int v = 0; v < kHistogramBins; ++v) {
    if (hist[v] <= 0.0) continue;
    const double d = nearest_distance(v, centroids);
    sum += hist[v] * d * d;
  }
  return sum;
}

// Adds a centroid at the occupied intensity farthest from every existing one.
void reseed_farthest(const Histogram& hist, std::vector<double>& centroids) {
  int pick = -1;
  double pick_d = -1.0;
  for (int v = 0; v < kHistogramBins; ++v) {
    if (hist[v] <= 0.0) continue;
    const double d = centroids.empty() ? 0.0 : nearest_distance(v, centroids);
    if (d > pick_d) {
      pick = v;
      pick_d = d;
    }
  }
  centroids.push_back(pick);
}

std::vector<double> initial_centroids(const Histogram& hist, int k, KmeansInit init, int lo, int hi) {
  std::vector<double> centroids;
  if (init == KmeansInit::EvenRange) {
    for (int i = 0; i < k; ++i) centroids.push_back(lo + (hi - lo) * static_cast<double>(i) / (k - 1));
    return centroids;
  }
  double total = 0.0;
  for (double h : hist) total += h;
  std::vector<int> picks;
  double cum = 0.0;
  int v = 0;
  for (int i = 0; i < k; ++i) {
    const double target = (i + 0.5) / k * total;
    while (v < kHistogramBins && cum + hist[v] < target) cum += hist[v++];
    picks.push_back(std::min(v, hi));
  }
  picks.erase(std::unique(picks.begin(), picks.end()), picks.end());
  centroids.assign(picks.begin(), picks.end());
  while (static_cast<int>(centroids.size()) < k) reseed_farthest(hist, centroids);
  std::sort(centroids.begin(), centroids.end());
  return centroids;
}

}  // namespace

HistogramClusters kmeans_histogram(const Histogram& hist, const KmqOptions& opts) {
  if (opts.k < 2) throw Error(ErrorCode::Parameter, "fkmq: k must be at least 2");
  if (opts.max_iter < 0) throw Error(ErrorCode::Parameter, "fkmq: negative iteration cap");
  int distinct = 0;
  int lo = -1, hi = -1;
  for (int v = 0; v < kHistogramBins; ++v) {
    if (hist[v] < 0.0) throw Error(ErrorCode::Parameter, "fkmq: negative histogram weight");
    if (hist[v] > 0.0) {
      ++distinct;
      if (lo < 0) lo = v;
      hi = v;
    }
  }
  if (distinct == 0) throw Error(ErrorCode::EmptyInput, "fkmq: empty histogram");

  HistogramClusters out;
  const int k = std::min(opts.k, distinct);
  if (k == 1) {
    out.centroids = {static_cast<double>(lo)};
    out.label = assign(hist, out.centroids);
    out.objective = {0.0};
    return out;
  }

  std::vector<double> centroids = initial_centroids(hist, k, opts.init, lo, hi);
  Labels labels = assign(hist, centroids);
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    std::vector<double> sum(k, 0.0), weight(k, 0.0);
    for (int v = 0; v < kHistogramBins; ++v) {
      if (labels[v] < 0) continue;
      sum[labels[v]] += hist[v] * v;
      weight[labels[v]] += hist[v];
    }
    std::vector<double> next;
    for (int j = 0; j < k; ++j) {
      if (weight[j] > 0.0) next.push_back(sum[j] / weight[j]);
    }
    while (static_cast<int>(next.size()) < k) reseed_farthest(hist, next);
    std::sort(next.begin(), next.end());
    if (opts.reset_first_to_min) next[0] = lo;
    centroids = std::move(next);
    out.iterations = iter;
    out.objective.push_back(objective(hist, centroids));

    Labels relabeled = assign(hist, centroids);
    if (relabeled == labels) break;
    labels = relabeled;
  }
  out.centroids = std::move(centroids);
  out.label = assign(hist, out.centroids);
  return out;
}

Histogram histogram(const GrayImage& img, const BinaryImage* support) {
  if (support && (support->width() != img.width() || support->height() != img.height())) {
    throw Error(ErrorCode::Shape, "histogram: support mask dimension mismatch");
  }
  Histogram hist{};
  const auto px = img.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (support && !support->pixels()[i]) continue;
    hist[px[i]] += 1.0;
  }
  return hist;
}

KmqResult fkmq(const GrayImage& img, const KmqOptions& opts) {
  auto clusters = kmeans_histogram(histogram(img), opts);
  KmqResult out;
  out.labels.resize(img.size());
  const auto px = img.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    out.labels[i] = static_cast<std::uint8_t>(clusters.label[px[i]]);
  }
  out.centroids = std::move(clusters.centroids);
  out.iterations = clusters.iterations;
  out.objective = std::move(clusters.objective);
  return out;
}

KmqResult fkmq(const GrayImage& img, int k, int max_iter, bool reset_first_to_min) {
  return fkmq(img, KmqOptions{k, max_iter, reset_first_to_min, KmeansInit::Quantile});
}

}  // namespace iris
