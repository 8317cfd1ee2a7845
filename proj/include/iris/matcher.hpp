#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "iris/encoder.hpp"

namespace iris {

struct MatchScore {
  double similarity = 0.0;  // agreeing bits / compared bits
  std::size_t compared_bits = 0;
  std::string probe_id;
  std::string gallery_id;
  int shift = 0;  // column shift that produced the score
};

struct MatchOptions {
  /// Maximize over circular column shifts in [-max_shift, max_shift].
  int max_shift = 0;
};

/// Masked Hamming similarity. Throws IncomparableCodes when the joint mask is
/// empty and Shape when the code layouts differ.
MatchScore hamming_similarity(const IrisCode& a, const IrisCode& b, const MatchOptions& opts = {});

/// Templates enrolled under one identity; all share one encoder layout.
struct Identity {
  std::string id;
  std::vector<IrisCode> templates;
};

enum class DeviationKind { Sample, Population };

struct MdsOptions {
  MatchOptions match;
  DeviationKind deviation = DeviationKind::Sample;
};

/// mean(S) + std(S) - imposter_sigma / 2 over the similarities S between
/// the probe and each template.
double mds_score(const IrisCode& probe, const Identity& identity, double imposter_sigma,
                 const MdsOptions& opts = {});

/// The combination rule alone, for callers that already hold S.
double mean_deviation_score(const std::vector<double>& similarities, double imposter_sigma,
                            DeviationKind deviation = DeviationKind::Sample);

struct RankedIdentity {
  std::string id;
  double score = 0.0;
};

struct IdentifyResult {
  std::vector<RankedIdentity> ranking;  // best first
  std::vector<std::string> warnings;    // identities skipped as incomparable
};

IdentifyResult identify(const IrisCode& probe, const std::vector<Identity>& gallery, double imposter_sigma,
                        const MdsOptions& opts = {});

}  // namespace iris
