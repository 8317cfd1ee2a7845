#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace iris {

/// Genuine (same eye) and imposter (different eyes) similarity scores.
struct ScoreSet {
  std::vector<double> genuine;
  std::vector<double> imposter;
  std::size_t code_length_bits = 0;

  void validate() const;
};

struct DistributionSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  double std = 0.0;                 // n - 1 denominator
  std::optional<double> skewness;   // undefined for zero spread
  std::optional<double> kurtosis;   // excess; undefined for zero spread

  friend bool operator==(const DistributionSummary&, const DistributionSummary&) = default;
};

DistributionSummary summarize(std::span<const double> scores);

/// N = p(1 - p) / sigma^2.
double degrees_of_freedom(double p, double sigma);

struct Rates {
  double far = 0.0;
  double frr = 0.0;
};

/// Accept strictly above the threshold: FAR counts imposters > t, FRR
/// counts genuine scores <= t.
Rates empirical_rates(const ScoreSet& scores, double threshold);

struct NormalFit {
  double mean = 0.0;
  double sigma = 0.0;
};

struct Odds {
  double ofa = 0.0;
  double ofr = 0.0;
};

/// Standard normal CDF via erfc, accurate in both tails.
double normal_cdf(double z);

/// Normal tail masses: OFA above t under the imposter fit, OFR below t under
/// the genuine fit.
Odds theoretical_odds(const NormalFit& imposter, const NormalFit& genuine, double threshold);

/// Binomial counterpart: P(X / n > t) for X ~ Binomial(round(dof), p).
double binomial_upper_tail(double p, double dof, double threshold);
/// P(X / n <= t) for X ~ Binomial(round(dof), p).
double binomial_lower_tail(double p, double dof, double threshold);

struct EerPoint {
  double eer = 0.0;
  double threshold = 0.0;
};

/// Sweeps every distinct score as a threshold and interpolates the FAR/FRR
/// crossing linearly.
EerPoint equal_error_rate(const ScoreSet& scores);

double decidability(const DistributionSummary& imposter, const DistributionSummary& genuine);
double fisher_ratio(const DistributionSummary& imposter, const DistributionSummary& genuine);
double storage_efficiency(double dof, std::size_t code_length_bits);

struct RocRow {
  double threshold = 0.0;
  double far = 0.0;
  double frr = 0.0;
  double ofa = 0.0;
  double ofr = 0.0;
  friend bool operator==(const RocRow&, const RocRow&) = default;
};

/// Threshold where the empirical FAR reaches a target, with the FRR paid there.
struct FarOperatingPoint {
  double target_far = 0.0;
  double threshold = 0.0;
  double frr = 0.0;
  friend bool operator==(const FarOperatingPoint&, const FarOperatingPoint&) = default;
};

/// Threshold where the empirical FRR reaches a target, with the costs there.
struct FrrOperatingPoint {
  double target_frr = 0.0;
  double threshold = 0.0;
  double far = 0.0;
  double ofa = 0.0;
  double ofr = 0.0;
  friend bool operator==(const FrrOperatingPoint&, const FrrOperatingPoint&) = default;
};

struct FixedThresholdPoint {
  double threshold = 0.0;
  double frr = 0.0;
  double ofr = 0.0;
  double far = 0.0;
  double ofa = 0.0;
  friend bool operator==(const FixedThresholdPoint&, const FixedThresholdPoint&) = default;
};

struct PanelOptions {
  double target_far = 0.001;
  double target_frr = 0.01;
  std::vector<double> fixed_thresholds = {0.59, 0.60};
  double roc_step = 0.005;
  bool binomial_odds = false;  // exact binomial tails instead of normal fits
};

struct EvaluationPanel {
  std::size_t code_length_bits = 0;
  DistributionSummary imposter;
  DistributionSummary genuine;
  double imposter_dof = 0.0;
  double genuine_dof = 0.0;
  std::vector<RocRow> roc;
  double eer = 0.0;
  double eer_threshold = 0.0;
  double decidability = 0.0;
  double fisher_ratio = 0.0;
  double storage_efficiency = 0.0;
  FarOperatingPoint at_far;
  FrrOperatingPoint at_frr;
  std::vector<FixedThresholdPoint> fixed;
  double suggested_threshold = 0.0;
  bool binomial_odds = false;

  friend bool operator==(const EvaluationPanel&, const EvaluationPanel&) = default;
};

/// Threshold t where a piecewise-linear rate curve through every distinct
/// score (plus 0 and 1) meets `target`.
FarOperatingPoint far_operating_point(const ScoreSet& scores, double target_far);
FrrOperatingPoint frr_operating_point(const ScoreSet& scores, double target_frr, const NormalFit& imposter,
                                      const NormalFit& genuine);

EvaluationPanel build_panel(const ScoreSet& scores, const PanelOptions& opts = {});

}  // namespace iris
