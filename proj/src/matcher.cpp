#include "iris/matcher.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace iris {
namespace {

MatchScore compare_aligned(const BitMatrix& bits_a, const BitMatrix& mask_a, const BitMatrix& bits_b,
                           const BitMatrix& mask_b) {
  const auto ba = bits_a.words();
  const auto ma = mask_a.words();
  const auto bb = bits_b.words();
  const auto mb = mask_b.words();
  std::size_t compared = 0;
  std::size_t agree = 0;
  for (std::size_t i = 0; i < ba.size(); ++i) {
    const std::uint64_t joint = ma[i] & mb[i];
    compared += static_cast<std::size_t>(std::popcount(joint));
    agree += static_cast<std::size_t>(std::popcount(~(ba[i] ^ bb[i]) & joint));
  }
  MatchScore s;
  s.compared_bits = compared;
  s.similarity = compared == 0 ? 0.0 : static_cast<double>(agree) / static_cast<double>(compared);
  return s;
}

}  // namespace

MatchScore hamming_similarity(const IrisCode& a, const IrisCode& b, const MatchOptions& opts) {
  if (!a.config.comparable(b.config) || a.bits.rows() != b.bits.rows() || a.bits.cols() != b.bits.cols() ||
      a.mask.rows() != a.bits.rows() || b.mask.cols() != b.bits.cols()) {
    throw Error(ErrorCode::Shape, "hamming: codes have different layouts");
  }
  MatchScore best;
  bool found = false;
  for (int shift = -opts.max_shift; shift <= opts.max_shift; ++shift) {
    MatchScore s = shift == 0 ? compare_aligned(a.bits, a.mask, b.bits, b.mask)
                              : compare_aligned(a.bits, a.mask, b.bits.shifted_columns(shift),
                                                b.mask.shifted_columns(shift));
    if (s.compared_bits == 0) continue;
    // Ties keep the smallest |shift|, preferring the unshifted comparison.
    const bool better = !found || s.similarity > best.similarity ||
                        (s.similarity == best.similarity && std::abs(shift) < std::abs(best.shift));
    if (better) {
      best = s;
      best.shift = shift;
      found = true;
    }
  }
  if (!found) throw Error(ErrorCode::IncomparableCodes, "hamming: joint mask is empty");
  best.probe_id = a.id;
  best.gallery_id = b.id;
  return best;
}

double mean_deviation_score(const std::vector<double>& s, double imposter_sigma, DeviationKind deviation) {
  if (s.empty()) throw Error(ErrorCode::InsufficientData, "mds: no similarities");
  if (imposter_sigma < 0.0) throw Error(ErrorCode::Parameter, "mds: imposter sigma must be non-negative");
  const double n = static_cast<double>(s.size());
  const double mean = std::accumulate(s.begin(), s.end(), 0.0) / n;
  double sd = 0.0;
  if (s.size() > 1) {
    double ss = 0.0;
    for (double v : s) ss += (v - mean) * (v - mean);
    sd = std::sqrt(ss / (deviation == DeviationKind::Sample ? n - 1.0 : n));
  }
  return mean + sd - imposter_sigma / 2.0;
}

double mds_score(const IrisCode& probe, const Identity& identity, double imposter_sigma, const MdsOptions& opts) {
  if (identity.templates.empty()) {
    throw Error(ErrorCode::InsufficientData, "mds: identity " + identity.id + " has no templates");
  }
  std::vector<double> s;
  s.reserve(identity.templates.size());
  for (const auto& t : identity.templates) s.push_back(hamming_similarity(probe, t, opts.match).similarity);
  return mean_deviation_score(s, imposter_sigma, opts.deviation);
}

IdentifyResult identify(const IrisCode& probe, const std::vector<Identity>& gallery, double imposter_sigma,
                        const MdsOptions& opts) {
  if (gallery.empty()) throw Error(ErrorCode::InsufficientData, "identify: empty gallery");
  IdentifyResult out;
  for (const auto& identity : gallery) {
    try {
      out.ranking.push_back({identity.id, mds_score(probe, identity, imposter_sigma, opts)});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::IncomparableCodes) throw;
      out.warnings.push_back("skipped identity " + identity.id + ": " + e.what());
    }
  }
  std::sort(out.ranking.begin(), out.ranking.end(), [](const RankedIdentity& x, const RankedIdentity& y) {
    if (x.score != y.score) return x.score > y.score;
    return x.id < y.id;
  });
  return out;
}

}  // namespace iris
