#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "iris/biostats.hpp"
#include "iris/cfis.hpp"
#include "iris/encoder.hpp"
#include "iris/matcher.hpp"
#include "iris/synth.hpp"

namespace iris {

struct GroundTruth {
  double pupil_x = 0.0;
  double pupil_y = 0.0;
  double pupil_radius = 0.0;
  double limbic_radius = 0.0;
};

struct CorpusEntry {
  std::filesystem::path path;
  std::string class_id;
  std::string eye;
  std::optional<GroundTruth> truth;

  /// Stable identifier used in codes and score files.
  std::string id() const;
  /// Genuine comparisons share class and eye.
  std::string identity() const { return class_id + "/" + eye; }
};

struct Corpus {
  std::vector<CorpusEntry> entries;

  void validate() const;
  std::size_t identity_count() const;
};

/// CSV with header `path,class,eye[,pupil_x,pupil_y,pupil_radius,limbic_radius]`.
/// Relative paths resolve against the manifest's directory.
Corpus load_manifest(const std::filesystem::path& csv);
void save_manifest(const Corpus& corpus, const std::filesystem::path& csv);
/// `root/class/eye/capture.{png,pgm}` in sorted order.
Corpus discover_corpus(const std::filesystem::path& root);
/// Manifest file, directory holding `manifest.csv`, or a class/eye tree.
Corpus load_corpus(const std::filesystem::path& path);

struct SynthCorpusOptions {
  SynthEyeParams eye;
  int identities = 20;
  int captures = 10;
  std::uint64_t seed = 1;
};

/// Renders `identities x captures` PNGs under `root/class/eye/` and writes
/// `root/manifest.csv` with ground truth.
Corpus write_synth_corpus(const std::filesystem::path& root, const SynthCorpusOptions& opts);

enum class Scenario { Calibration, EnrollIdentify };
enum class EnrollmentRule { First, Random, MaxInterclass, MinIntraclass };

std::string to_string(Scenario s);
std::string to_string(EnrollmentRule r);
Scenario parse_scenario(const std::string& s);
EnrollmentRule parse_enrollment_rule(const std::string& s);

struct RunConfig {
  EncoderConfig encoder = EncoderConfig::code_192();
  CfisOptions cfis;
  Scenario scenario = Scenario::Calibration;
  int templates_per_identity = 5;
  EnrollmentRule rule = EnrollmentRule::First;
  std::optional<double> threshold;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 1;
  int jobs = 1;
  int max_shift = 0;
  bool dump_stages = false;
  PanelOptions panel;

  void validate() const;
};

/// Runs `fn(i)` for i in [0, n) on up to `jobs` threads. The first
/// exception thrown by any worker is rethrown after all workers join.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

struct EncodedEntry {
  std::optional<IrisCode> code;
  std::optional<IrisRing> ring;
  std::string error;
};

/// Segments and encodes every entry; results are in corpus order whatever
/// the worker count. With `cfg.dump_stages` set, intermediate images land in
/// `cfg.output_dir/stages/<entry id>/`.
std::vector<EncodedEntry> encode_corpus(const Corpus& corpus, const RunConfig& cfg);

struct ScoreRecord {
  std::string probe_id;
  std::string gallery_id;
  bool genuine = false;
  double similarity = 0.0;
  std::size_t compared_bits = 0;
};

struct RunResult {
  Scenario scenario = Scenario::Calibration;
  EvaluationPanel panel;
  std::vector<ScoreRecord> scores;
  std::vector<std::string> failures;  // "<entry id>: <message>"
  std::optional<double> imposter_sigma;
  std::optional<double> chosen_threshold;
  std::optional<Rates> chosen_rates;
  std::vector<std::string> enrolled;  // entry ids used as templates
};

/// All-to-all comparison of every encoded image.
RunResult run_calibration(const Corpus& corpus, const RunConfig& cfg);
RunResult run_calibration(const Corpus& corpus, const RunConfig& cfg, const std::vector<EncodedEntry>& encoded);

/// Enrolls n templates per identity and scores every remaining capture
/// against every identity with the mean-deviation score.
RunResult run_enroll_identify(const Corpus& corpus, const RunConfig& cfg);
RunResult run_enroll_identify(const Corpus& corpus, const RunConfig& cfg,
                              const std::vector<EncodedEntry>& encoded);

/// Indices of the templates enrolled for one identity, given the pairwise
/// similarity of every encoded capture.
std::vector<std::size_t> select_enrollment(const std::vector<std::size_t>& own,
                                           const std::vector<std::size_t>& others,
                                           const std::function<double(std::size_t, std::size_t)>& similarity,
                                           int n, EnrollmentRule rule, std::uint64_t seed);

void write_stage_dump(const CfisStages& stages, const IrisRing* ring, const GrayImage& image,
                      const std::filesystem::path& dir);

}  // namespace iris
