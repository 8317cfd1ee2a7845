#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "iris/biostats.hpp"
#include "iris/workbench.hpp"

namespace iris {

std::string panel_to_json(const EvaluationPanel& panel);
EvaluationPanel panel_from_json(const std::string& text);

void save_panel(const EvaluationPanel& panel, const std::filesystem::path& path);
EvaluationPanel load_panel(const std::filesystem::path& path);

/// `probe_id,gallery_id,kind,similarity,compared_bits`.
void save_scores_csv(const std::vector<ScoreRecord>& scores, const std::filesystem::path& path);
std::vector<ScoreRecord> load_scores_csv(const std::filesystem::path& path);

void save_roc_csv(const EvaluationPanel& panel, const std::filesystem::path& path);

/// Genuine and imposter histograms on a log count axis.
std::string distributions_svg(const std::vector<ScoreRecord>& scores, const EvaluationPanel& panel);
/// FAR, FRR, OFA and OFR against the threshold on a log rate axis.
std::string far_frr_svg(const EvaluationPanel& panel);

struct SummaryInfo {
  std::string scenario;
  std::string timestamp;  // only line allowed to differ between reruns
  std::size_t failures = 0;
  std::optional<double> imposter_sigma;
  std::optional<double> chosen_threshold;
  std::optional<Rates> chosen_rates;
};

std::string summary_text(const EvaluationPanel& panel, const SummaryInfo& info);

/// Writes panel.json, roc.csv, scores.csv, distributions.svg, far_frr.svg
/// and summary.txt into `outdir`.
void write_report(const EvaluationPanel& panel, const std::vector<ScoreRecord>& scores, const SummaryInfo& info,
                  const std::filesystem::path& outdir);
void write_report(const RunResult& result, const std::filesystem::path& outdir);

/// Current UTC time as ISO 8601.
std::string utc_timestamp();

}  // namespace iris
