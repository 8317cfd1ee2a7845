#include "iris/cfis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

namespace iris {

UnwrappedIris UnwrappedIris::slice(std::size_t first, std::size_t last) const {
  UnwrappedIris out;
  out.ui.assign(ui.begin() + first, ui.begin() + last + 1);
  out.rui.assign(rui.begin() + first, rui.begin() + last + 1);
  out.inner_radius = radius_of(first);
  out.radial_step = radial_step;
  out.angular_origin = angular_origin;
  return out;
}

bool CombinedCrispIndicator::same_partition(const CombinedCrispIndicator& other) const {
  if (labels.size() != other.labels.size()) return false;
  std::map<int, int> forward, backward;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto [f, f_new] = forward.emplace(labels[i], other.labels[i]);
    const auto [b, b_new] = backward.emplace(other.labels[i], labels[i]);
    if (f->second != other.labels[i] || b->second != labels[i]) return false;
  }
  return true;
}

UnwrappedIris unwrap(const GrayImage& img, const PupilFit& fit, double max_radius, int width,
                     double radial_step, double min_radius) {
  if (width < 1 || !(radial_step > 0.0)) throw Error(ErrorCode::Parameter, "unwrap: bad width or step");
  const double border = std::min({fit.center_x, fit.center_y, img.width() - 1 - fit.center_x,
                                  img.height() - 1 - fit.center_y});
  max_radius = std::min(max_radius, border);
  if (max_radius - fit.radius < radial_step) {
    throw Error(ErrorCode::NoIrisAnnulus, "unwrap: no room for an iris annulus around the pupil");
  }
  const double start = min_radius < 0.0 ? fit.radius : min_radius;
  const auto rows = static_cast<std::size_t>(std::floor((max_radius - start) / radial_step)) + 1;

  UnwrappedIris u;
  u.inner_radius = start;
  u.radial_step = radial_step;
  u.ui.resize(rows);
  u.rui.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const double radius = u.radius_of(r);
    const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(2.0 * std::numbers::pi * radius)));
    auto& line = u.ui[r];
    line.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
      const int x = std::clamp(static_cast<int>(std::lround(fit.center_x + radius * std::cos(theta))), 0,
                               img.width() - 1);
      const int y = std::clamp(static_cast<int>(std::lround(fit.center_y - radius * std::sin(theta))), 0,
                               img.height() - 1);
      line[i] = img(x, y);
    }
    auto& stretched = u.rui[r];
    stretched.resize(width);
    for (int j = 0; j < width; ++j) {
      const double pos = static_cast<double>(j) * n / width;
      const auto i0 = static_cast<std::size_t>(pos);
      const double frac = pos - static_cast<double>(i0);
      const std::size_t i1 = (i0 + 1) % n;
      stretched[j] = (1.0 - frac) * line[i0 % n] + frac * line[i1];
    }
  }
  return u;
}

LineMeans line_mean_vectors(const UnwrappedIris& u) {
  LineMeans m;
  for (std::size_t r = 0; r < u.rows(); ++r) {
    const auto& ui = u.ui[r];
    const auto& rui = u.rui[r];
    const double a = std::accumulate(ui.begin(), ui.end(), 0.0) / static_cast<double>(ui.size());
    const double b = std::accumulate(rui.begin(), rui.end(), 0.0) / static_cast<double>(rui.size());
    m.a.push_back(a);
    m.b.push_back(b);
    m.c.push_back((a + b) / 2.0);
  }
  return m;
}

CombinedCrispIndicator three_means_indicator(std::span<const double> v, const KmqOptions& opts) {
  if (v.size() < 3) throw Error(ErrorCode::Shape, "three_means_indicator: need at least 3 lines");
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  const double lo = *lo_it, hi = *hi_it;
  CombinedCrispIndicator out;
  if (!(hi > lo)) {
    out.labels.assign(v.size(), 1);
    out.symbols = 1;
    out.degenerate = true;
    return out;
  }
  std::vector<int> bins(v.size());
  Histogram hist{};
  for (std::size_t i = 0; i < v.size(); ++i) {
    bins[i] = static_cast<int>(std::lround(255.0 * (v[i] - lo) / (hi - lo)));
    hist[bins[i]] += 1.0;
  }
  const auto clusters = kmeans_histogram(hist, opts);
  out.symbols = static_cast<int>(clusters.centroids.size());
  out.labels.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.labels[i] = clusters.label[bins[i]] + 1;
  return out;
}

namespace {

BandVote count_votes(const CombinedCrispIndicator& p, const CombinedCrispIndicator& q,
                     const CombinedCrispIndicator& r, std::size_t& anchor) {
  const std::size_t n = p.labels.size();
  if (n == 0 || q.labels.size() != n || r.labels.size() != n) {
    throw Error(ErrorCode::Shape, "vote: indicators must cover the same non-empty line domain");
  }
  anchor = std::min(anchor, n - 1);
  BandVote out;
  out.votes.assign(n, 0);
  const CombinedCrispIndicator* voters[3] = {&p, &q, &r};
  for (int k = 0; k < 3; ++k) {
    out.iris_symbol[k] = voters[k]->labels[anchor];
    for (std::size_t i = 0; i < n; ++i) {
      if (voters[k]->labels[i] == out.iris_symbol[k]) ++out.votes[i];
    }
  }
  return out;
}

}  // namespace

BandVote vote_iris_band(const CombinedCrispIndicator& p, const CombinedCrispIndicator& q,
                        const CombinedCrispIndicator& r, int pupil_margin) {
  auto anchor = static_cast<std::size_t>(std::max(pupil_margin, 0));
  BandVote out = count_votes(p, q, r, anchor);
  const auto first = std::find_if(out.votes.begin(), out.votes.end(), [](int v) { return v >= 2; });
  if (first == out.votes.end()) {
    throw Error(ErrorCode::SegmentationFailure, "vote: no line received two votes");
  }
  out.first = static_cast<std::size_t>(first - out.votes.begin());
  out.last = out.first;
  while (out.last + 1 < out.votes.size() && out.votes[out.last + 1] >= 2) ++out.last;
  return out;
}

BandVote vote_iris_band_at(const CombinedCrispIndicator& p, const CombinedCrispIndicator& q,
                           const CombinedCrispIndicator& r, std::size_t anchor) {
  BandVote out = count_votes(p, q, r, anchor);
  // The anchor line always carries three votes.
  out.first = out.last = anchor;
  while (out.first > 0 && out.votes[out.first - 1] >= 2) --out.first;
  while (out.last + 1 < out.votes.size() && out.votes[out.last + 1] >= 2) ++out.last;
  return out;
}

IrisRing segment(const GrayImage& img, const CfisOptions& opts, CfisStages* stages) {
  IrisRing ring;
  try {
    ring.pupil = find_pupil(img, opts.pupil, stages ? &stages->pupil : nullptr);
  } catch (const Error& e) {
    throw e.annotated("cfis");
  }

  const double rp = ring.pupil.radius;
  const double step = opts.radial_step;
  // Whole number of steps inside the pupil so one line falls on its boundary.
  const double inside = std::floor(std::clamp(opts.inner_radius_factor, 0.0, 1.0) * rp / step) * step;
  const auto boundary_line = static_cast<std::size_t>(std::lround(inside / step));
  UnwrappedIris full;
  try {
    full = unwrap(img, ring.pupil, opts.max_radius_factor * rp, opts.width, step, rp - inside);
  } catch (const Error& e) {
    throw e.annotated("cfis/unwrap");
  }
  if (full.rows() < boundary_line + 3) {
    throw Error(ErrorCode::NoIrisAnnulus, "cfis/unwrap: fewer than 3 lines around the pupil");
  }

  const LineMeans means = line_mean_vectors(full);
  const auto p = three_means_indicator(means.a, opts.line_kmeans);
  const auto q = three_means_indicator(means.b, opts.line_kmeans);
  const auto r = three_means_indicator(means.c, opts.line_kmeans);

  BandVote vote;
  try {
    vote = vote_iris_band_at(p, q, r, boundary_line + static_cast<std::size_t>(std::max(opts.pupil_margin, 0)));
  } catch (const Error& e) {
    throw e.annotated("cfis/vote");
  }

  if (vote.last < boundary_line + 1) {
    throw Error(ErrorCode::SegmentationFailure, "cfis/vote: iris band does not leave the pupil");
  }
  ring.limbic_radius = full.radius_of(vote.last) + 0.5 * step;
  ring.unwrapped = full.slice(std::max(vote.first, boundary_line), vote.last);
  ring.vote_trace = vote.votes;

  if (stages) {
    stages->unwrapped = std::move(full);
    stages->means = means;
    stages->p = p;
    stages->q = q;
    stages->r = r;
    stages->vote = vote;
  }
  return ring;
}

}  // namespace iris
