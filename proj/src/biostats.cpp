#include "iris/biostats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>

#include "iris/error.hpp"

namespace iris {

void ScoreSet::validate() const {
  if (genuine.empty() || imposter.empty()) {
    throw Error(ErrorCode::InsufficientData, "score set needs both genuine and imposter scores");
  }
  auto in_unit = [](double s) { return s >= 0.0 && s <= 1.0; };
  if (!std::all_of(genuine.begin(), genuine.end(), in_unit) ||
      !std::all_of(imposter.begin(), imposter.end(), in_unit)) {
    throw Error(ErrorCode::Parameter, "score set: scores must lie in [0, 1]");
  }
}

DistributionSummary summarize(std::span<const double> scores) {
  if (scores.size() < 2) throw Error(ErrorCode::InsufficientData, "summarize: need at least 2 scores");
  DistributionSummary s;
  s.count = scores.size();
  const double n = static_cast<double>(scores.size());
  s.mean = std::accumulate(scores.begin(), scores.end(), 0.0) / n;

  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  s.median = sorted.size() % 2 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2.0;

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : scores) {
    const double d = x - s.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  s.std = std::sqrt(m2 / (n - 1.0));
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (m2 > 0.0) {
    s.skewness = m3 / std::pow(m2, 1.5);
    s.kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return s;
}

double degrees_of_freedom(double p, double sigma) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::Parameter, "degrees_of_freedom: p must lie in (0, 1)");
  if (!(sigma > 0.0)) throw Error(ErrorCode::Parameter, "degrees_of_freedom: sigma must be positive");
  return p * (1.0 - p) / (sigma * sigma);
}

Rates empirical_rates(const ScoreSet& scores, double threshold) {
  scores.validate();
  const auto above = std::count_if(scores.imposter.begin(), scores.imposter.end(),
                                   [threshold](double s) { return s > threshold; });
  const auto below = std::count_if(scores.genuine.begin(), scores.genuine.end(),
                                   [threshold](double s) { return s <= threshold; });
  return {static_cast<double>(above) / static_cast<double>(scores.imposter.size()),
          static_cast<double>(below) / static_cast<double>(scores.genuine.size())};
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

Odds theoretical_odds(const NormalFit& imposter, const NormalFit& genuine, double threshold) {
  if (!(imposter.sigma > 0.0) || !(genuine.sigma > 0.0)) {
    throw Error(ErrorCode::Parameter, "theoretical_odds: standard deviations must be positive");
  }
  // Upper tail written as the mirrored lower tail keeps full relative precision.
  return {normal_cdf(-(threshold - imposter.mean) / imposter.sigma),
          normal_cdf((threshold - genuine.mean) / genuine.sigma)};
}

namespace {

double binomial_log_pmf(int n, int k, double p) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * std::log(p) +
         (n - k) * std::log1p(-p);
}

int binomial_trials(double p, double dof) {
  if (!(p > 0.0 && p < 1.0) || !(dof >= 1.0)) throw Error(ErrorCode::Parameter, "binomial tail: bad parameters");
  return static_cast<int>(std::lround(dof));
}

}  // namespace

double binomial_upper_tail(double p, double dof, double threshold) {
  const int n = binomial_trials(p, dof);
  double sum = 0.0;
  for (int k = n; k >= 0 && static_cast<double>(k) / n > threshold; --k) sum += std::exp(binomial_log_pmf(n, k, p));
  return std::min(sum, 1.0);
}

double binomial_lower_tail(double p, double dof, double threshold) {
  const int n = binomial_trials(p, dof);
  double sum = 0.0;
  for (int k = 0; k <= n && static_cast<double>(k) / n <= threshold; ++k) sum += std::exp(binomial_log_pmf(n, k, p));
  return std::min(sum, 1.0);
}

namespace {

// Distinct scores of both classes bracketed by 0 and 1, ascending.
std::vector<double> sweep_thresholds(const ScoreSet& scores) {
  std::vector<double> t;
  t.reserve(scores.genuine.size() + scores.imposter.size() + 2);
  t.push_back(0.0);
  t.insert(t.end(), scores.genuine.begin(), scores.genuine.end());
  t.insert(t.end(), scores.imposter.begin(), scores.imposter.end());
  t.push_back(1.0);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

// Rates at every sweep threshold in one pass over the sorted classes.
std::vector<Rates> sweep_rates(const ScoreSet& scores, const std::vector<double>& thresholds) {
  std::vector<double> imp = scores.imposter, gen = scores.genuine;
  std::sort(imp.begin(), imp.end());
  std::sort(gen.begin(), gen.end());
  std::vector<Rates> out;
  out.reserve(thresholds.size());
  for (double t : thresholds) {
    const auto imp_le = std::upper_bound(imp.begin(), imp.end(), t) - imp.begin();
    const auto gen_le = std::upper_bound(gen.begin(), gen.end(), t) - gen.begin();
    out.push_back({static_cast<double>(imp.size() - imp_le) / static_cast<double>(imp.size()),
                   static_cast<double>(gen_le) / static_cast<double>(gen.size())});
  }
  return out;
}

// First crossing of `curve` through `target` between consecutive sweep points,
// interpolated linearly in the threshold.
double crossing(const std::vector<double>& t, const std::vector<double>& curve, double target, bool decreasing) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    const bool reached = decreasing ? curve[i] <= target : curve[i] >= target;
    if (!reached) continue;
    if (i == 0 || curve[i] == target) return t[i];
    const double span = curve[i] - curve[i - 1];
    const double alpha = span == 0.0 ? 0.0 : (target - curve[i - 1]) / span;
    return t[i - 1] + alpha * (t[i] - t[i - 1]);
  }
  return t.back();
}

NormalFit fit_of(const DistributionSummary& s) { return {s.mean, s.std}; }

}  // namespace

EerPoint equal_error_rate(const ScoreSet& scores) {
  scores.validate();
  const auto t = sweep_thresholds(scores);
  const auto rates = sweep_rates(scores, t);
  // FAR - FRR is non-increasing; find where it changes sign.
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double d = rates[i].far - rates[i].frr;
    if (d > 0.0) continue;
    if (d == 0.0 || i == 0) return {(rates[i].far + rates[i].frr) / 2.0, t[i]};
    const double d_prev = rates[i - 1].far - rates[i - 1].frr;
    const double alpha = d_prev / (d_prev - d);
    const double far = rates[i - 1].far + alpha * (rates[i].far - rates[i - 1].far);
    const double frr = rates[i - 1].frr + alpha * (rates[i].frr - rates[i - 1].frr);
    return {(far + frr) / 2.0, t[i - 1] + alpha * (t[i] - t[i - 1])};
  }
  return {(rates.back().far + rates.back().frr) / 2.0, t.back()};
}

double decidability(const DistributionSummary& imposter, const DistributionSummary& genuine) {
  const double pooled = (genuine.std * genuine.std + imposter.std * imposter.std) / 2.0;
  if (!(pooled > 0.0)) throw Error(ErrorCode::Parameter, "decidability: zero spread in both classes");
  return std::abs(genuine.mean - imposter.mean) / std::sqrt(pooled);
}

double fisher_ratio(const DistributionSummary& imposter, const DistributionSummary& genuine) {
  const double spread = genuine.std * genuine.std + imposter.std * imposter.std;
  if (!(spread > 0.0)) throw Error(ErrorCode::Parameter, "fisher_ratio: zero spread in both classes");
  const double gap = genuine.mean - imposter.mean;
  return gap * gap / spread;
}

double storage_efficiency(double dof, std::size_t code_length_bits) {
  if (!(dof > 0.0) || code_length_bits == 0) throw Error(ErrorCode::Parameter, "storage_efficiency: bad inputs");
  return dof / static_cast<double>(code_length_bits);
}

FarOperatingPoint far_operating_point(const ScoreSet& scores, double target_far) {
  scores.validate();
  const auto t = sweep_thresholds(scores);
  const auto rates = sweep_rates(scores, t);
  std::vector<double> far(rates.size());
  std::transform(rates.begin(), rates.end(), far.begin(), [](const Rates& r) { return r.far; });
  FarOperatingPoint op;
  op.target_far = target_far;
  op.threshold = crossing(t, far, target_far, true);
  op.frr = empirical_rates(scores, op.threshold).frr;
  return op;
}

FrrOperatingPoint frr_operating_point(const ScoreSet& scores, double target_frr, const NormalFit& imposter,
                                      const NormalFit& genuine) {
  scores.validate();
  const auto t = sweep_thresholds(scores);
  const auto rates = sweep_rates(scores, t);
  std::vector<double> frr(rates.size());
  std::transform(rates.begin(), rates.end(), frr.begin(), [](const Rates& r) { return r.frr; });
  FrrOperatingPoint op;
  op.target_frr = target_frr;
  op.threshold = crossing(t, frr, target_frr, false);
  op.far = empirical_rates(scores, op.threshold).far;
  const auto odds = theoretical_odds(imposter, genuine, op.threshold);
  op.ofa = odds.ofa;
  op.ofr = odds.ofr;
  return op;
}

EvaluationPanel build_panel(const ScoreSet& scores, const PanelOptions& opts) {
  scores.validate();
  EvaluationPanel panel;
  panel.code_length_bits = scores.code_length_bits;
  panel.binomial_odds = opts.binomial_odds;
  panel.imposter = summarize(scores.imposter);
  panel.genuine = summarize(scores.genuine);
  panel.imposter_dof = degrees_of_freedom(panel.imposter.mean, panel.imposter.std);
  panel.genuine_dof = degrees_of_freedom(panel.genuine.mean, panel.genuine.std);

  const NormalFit imp_fit = fit_of(panel.imposter);
  const NormalFit gen_fit = fit_of(panel.genuine);
  auto odds_at = [&](double t) -> Odds {
    if (!opts.binomial_odds) return theoretical_odds(imp_fit, gen_fit, t);
    return {binomial_upper_tail(imp_fit.mean, panel.imposter_dof, t),
            binomial_lower_tail(gen_fit.mean, panel.genuine_dof, t)};
  };

  const int steps = static_cast<int>(std::lround(1.0 / opts.roc_step));
  for (int i = 0; i <= steps; ++i) {
    const double t = std::min(1.0, i * opts.roc_step);
    const auto r = empirical_rates(scores, t);
    const auto o = odds_at(t);
    panel.roc.push_back({t, r.far, r.frr, o.ofa, o.ofr});
  }

  const auto eer = equal_error_rate(scores);
  panel.eer = eer.eer;
  panel.eer_threshold = eer.threshold;
  panel.decidability = decidability(panel.imposter, panel.genuine);
  panel.fisher_ratio = fisher_ratio(panel.imposter, panel.genuine);
  if (scores.code_length_bits > 0) {
    panel.storage_efficiency = storage_efficiency(panel.imposter_dof, scores.code_length_bits);
  }

  panel.at_far = far_operating_point(scores, opts.target_far);
  panel.at_frr = frr_operating_point(scores, opts.target_frr, imp_fit, gen_fit);
  if (opts.binomial_odds) {
    const auto o = odds_at(panel.at_frr.threshold);
    panel.at_frr.ofa = o.ofa;
    panel.at_frr.ofr = o.ofr;
  }
  for (double t : opts.fixed_thresholds) {
    const auto r = empirical_rates(scores, t);
    const auto o = odds_at(t);
    panel.fixed.push_back({t, r.frr, o.ofr, r.far, o.ofa});
  }
  panel.suggested_threshold = panel.at_far.threshold;
  return panel;
}

}  // namespace iris
