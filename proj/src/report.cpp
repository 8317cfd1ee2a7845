#include "iris/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "iris/error.hpp"

namespace iris {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// JSON has no infinities; spell non-finite values as strings.
json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double get_num(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw Error(ErrorCode::Format, "panel json: bad number '" + s + "'");
  }
  return j.get<double>();
}

json opt_num(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

std::optional<double> get_opt(const json& j) {
  if (j.is_null()) return std::nullopt;
  return get_num(j);
}

json summary_json(const DistributionSummary& s) {
  return {{"count", s.count},       {"mean", num(s.mean)},
          {"median", num(s.median)}, {"std", num(s.std)},
          {"skewness", opt_num(s.skewness)}, {"kurtosis", opt_num(s.kurtosis)}};
}

DistributionSummary summary_from(const json& j) {
  DistributionSummary s;
  s.count = j.at("count").get<std::size_t>();
  s.mean = get_num(j.at("mean"));
  s.median = get_num(j.at("median"));
  s.std = get_num(j.at("std"));
  s.skewness = get_opt(j.at("skewness"));
  s.kurtosis = get_opt(j.at("kurtosis"));
  return s;
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

constexpr double kPlotW = 640.0;
constexpr double kPlotH = 400.0;
constexpr double kMargin = 50.0;

std::string svg_open(const std::string& title) {
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kPlotW + 2 * kMargin << "\" height=\""
    << kPlotH + 2 * kMargin << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << kMargin << "\" y=\"" << kMargin / 2 << "\" font-size=\"14\">" << title << "</text>\n"
    << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kPlotW << "\" height=\"" << kPlotH
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 10; ++i) {
    const double x = kMargin + kPlotW * i / 10.0;
    s << "<text x=\"" << fixed(x, 1) << "\" y=\"" << kMargin + kPlotH + 16 << "\" text-anchor=\"middle\">"
      << fixed(i / 10.0, 1) << "</text>\n";
  }
  return s.str();
}

std::string polyline(const std::vector<std::pair<double, double>>& pts, const char* color) {
  std::ostringstream s;
  s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
  for (const auto& [x, y] : pts) s << fixed(x, 2) << ',' << fixed(y, 2) << ' ';
  s << "\"/>\n";
  return s.str();
}

std::string vline(double t, const char* color, const std::string& label) {
  const double x = kMargin + kPlotW * std::clamp(t, 0.0, 1.0);
  std::ostringstream s;
  s << "<line x1=\"" << fixed(x, 2) << "\" y1=\"" << kMargin << "\" x2=\"" << fixed(x, 2) << "\" y2=\""
    << kMargin + kPlotH << "\" stroke=\"" << color << "\" stroke-dasharray=\"4 3\"/>\n"
    << "<text x=\"" << fixed(x + 4, 2) << "\" y=\"" << kMargin + 14 << "\" fill=\"" << color << "\">" << label
    << "</text>\n";
  return s.str();
}

std::string legend(const std::vector<std::pair<std::string, const char*>>& items) {
  std::ostringstream s;
  double y = kMargin + 30;
  for (const auto& [name, color] : items) {
    s << "<rect x=\"" << kMargin + kPlotW - 110 << "\" y=\"" << y - 9 << "\" width=\"10\" height=\"10\" fill=\""
      << color << "\"/><text x=\"" << kMargin + kPlotW - 95 << "\" y=\"" << y << "\">" << name << "</text>\n";
    y += 16;
  }
  return s.str();
}

}  // namespace

std::string panel_to_json(const EvaluationPanel& p) {
  json j;
  j["code_length_bits"] = p.code_length_bits;
  j["imposter"] = summary_json(p.imposter);
  j["genuine"] = summary_json(p.genuine);
  j["imposter_dof"] = num(p.imposter_dof);
  j["genuine_dof"] = num(p.genuine_dof);
  j["eer"] = num(p.eer);
  j["eer_threshold"] = num(p.eer_threshold);
  j["decidability"] = num(p.decidability);
  j["fisher_ratio"] = num(p.fisher_ratio);
  j["storage_efficiency"] = num(p.storage_efficiency);
  j["at_far"] = {{"target_far", num(p.at_far.target_far)},
                 {"threshold", num(p.at_far.threshold)},
                 {"frr", num(p.at_far.frr)}};
  j["at_frr"] = {{"target_frr", num(p.at_frr.target_frr)}, {"threshold", num(p.at_frr.threshold)},
                 {"far", num(p.at_frr.far)},               {"ofa", num(p.at_frr.ofa)},
                 {"ofr", num(p.at_frr.ofr)}};
  j["fixed"] = json::array();
  for (const auto& f : p.fixed) {
    j["fixed"].push_back({{"threshold", num(f.threshold)},
                          {"frr", num(f.frr)},
                          {"ofr", num(f.ofr)},
                          {"far", num(f.far)},
                          {"ofa", num(f.ofa)}});
  }
  j["suggested_threshold"] = num(p.suggested_threshold);
  j["binomial_odds"] = p.binomial_odds;
  j["roc"] = json::array();
  for (const auto& r : p.roc) {
    j["roc"].push_back({num(r.threshold), num(r.far), num(r.frr), num(r.ofa), num(r.ofr)});
  }
  return j.dump(2) + "\n";
}

EvaluationPanel panel_from_json(const std::string& text) {
  EvaluationPanel p;
  try {
    const json j = json::parse(text);
    p.code_length_bits = j.at("code_length_bits").get<std::size_t>();
    p.imposter = summary_from(j.at("imposter"));
    p.genuine = summary_from(j.at("genuine"));
    p.imposter_dof = get_num(j.at("imposter_dof"));
    p.genuine_dof = get_num(j.at("genuine_dof"));
    p.eer = get_num(j.at("eer"));
    p.eer_threshold = get_num(j.at("eer_threshold"));
    p.decidability = get_num(j.at("decidability"));
    p.fisher_ratio = get_num(j.at("fisher_ratio"));
    p.storage_efficiency = get_num(j.at("storage_efficiency"));
    const auto& af = j.at("at_far");
    p.at_far = {get_num(af.at("target_far")), get_num(af.at("threshold")), get_num(af.at("frr"))};
    const auto& ar = j.at("at_frr");
    p.at_frr = {get_num(ar.at("target_frr")), get_num(ar.at("threshold")), get_num(ar.at("far")),
                get_num(ar.at("ofa")), get_num(ar.at("ofr"))};
    for (const auto& f : j.at("fixed")) {
      p.fixed.push_back({get_num(f.at("threshold")), get_num(f.at("frr")), get_num(f.at("ofr")),
                         get_num(f.at("far")), get_num(f.at("ofa"))});
    }
    p.suggested_threshold = get_num(j.at("suggested_threshold"));
    p.binomial_odds = j.at("binomial_odds").get<bool>();
    for (const auto& r : j.at("roc")) {
      if (r.size() != 5) throw Error(ErrorCode::Format, "panel json: roc rows need 5 values");
      p.roc.push_back({get_num(r[0]), get_num(r[1]), get_num(r[2]), get_num(r[3]), get_num(r[4])});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Format, std::string("panel json: ") + e.what());
  }
  return p;
}

void save_panel(const EvaluationPanel& panel, const fs::path& path) { write_text(path, panel_to_json(panel)); }

EvaluationPanel load_panel(const fs::path& path) { return panel_from_json(read_text(path)); }

void save_scores_csv(const std::vector<ScoreRecord>& scores, const fs::path& path) {
  std::ostringstream s;
  s << "probe_id,gallery_id,kind,similarity,compared_bits\n";
  for (const auto& r : scores) {
    s << r.probe_id << ',' << r.gallery_id << ',' << (r.genuine ? "genuine" : "imposter") << ','
      << format_double(r.similarity) << ',' << r.compared_bits << '\n';
  }
  write_text(path, s.str());
}

std::vector<ScoreRecord> load_scores_csv(const fs::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  std::getline(in, line);
  if (line.rfind("probe_id,gallery_id,kind,similarity,compared_bits", 0) != 0) {
    throw Error(ErrorCode::Format, "scores csv: unexpected header in " + path.string());
  }
  std::vector<ScoreRecord> out;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 5 || (cells[2] != "genuine" && cells[2] != "imposter")) {
      throw Error(ErrorCode::Format, "scores csv: malformed line '" + line + "'");
    }
    ScoreRecord r;
    r.probe_id = cells[0];
    r.gallery_id = cells[1];
    r.genuine = cells[2] == "genuine";
    auto [e1, ec1] = std::from_chars(cells[3].data(), cells[3].data() + cells[3].size(), r.similarity);
    auto [e2, ec2] = std::from_chars(cells[4].data(), cells[4].data() + cells[4].size(), r.compared_bits);
    if (ec1 != std::errc{} || ec2 != std::errc{}) {
      throw Error(ErrorCode::Format, "scores csv: bad number in '" + line + "'");
    }
    out.push_back(std::move(r));
  }
  return out;
}

void save_roc_csv(const EvaluationPanel& panel, const fs::path& path) {
  std::ostringstream s;
  s << "threshold,far,frr,ofa,ofr\n";
  for (const auto& r : panel.roc) {
    s << format_double(r.threshold) << ',' << format_double(r.far) << ',' << format_double(r.frr) << ','
      << format_double(r.ofa) << ',' << format_double(r.ofr) << '\n';
  }
  write_text(path, s.str());
}

std::string distributions_svg(const std::vector<ScoreRecord>& scores, const EvaluationPanel& panel) {
  constexpr int kBins = 100;
  std::vector<double> gen(kBins, 0.0), imp(kBins, 0.0);
  for (const auto& r : scores) {
    const int b = std::clamp(static_cast<int>(r.similarity * kBins), 0, kBins - 1);
    (r.genuine ? gen : imp)[b] += 1.0;
  }
  double top = 1.0;
  for (int b = 0; b < kBins; ++b) top = std::max({top, gen[b], imp[b]});
  const double decades = std::max(1.0, std::ceil(std::log10(top + 1.0)));
  auto y_of = [&](double count) { return kMargin + kPlotH * (1.0 - std::log10(count + 1.0) / decades); };
  auto steps = [&](const std::vector<double>& h) {
    std::vector<std::pair<double, double>> pts;
    for (int b = 0; b < kBins; ++b) {
      const double x0 = kMargin + kPlotW * b / kBins;
      const double x1 = kMargin + kPlotW * (b + 1) / kBins;
      pts.push_back({x0, y_of(h[b])});
      pts.push_back({x1, y_of(h[b])});
    }
    return pts;
  };
  std::ostringstream s;
  s << svg_open("Similarity distributions (log10(count + 1))");
  for (int d = 0; d <= static_cast<int>(decades); ++d) {
    s << "<text x=\"" << kMargin - 6 << "\" y=\"" << fixed(y_of(std::pow(10.0, d) - 1.0) + 4, 2)
      << "\" text-anchor=\"end\">1e" << d << "</text>\n";
  }
  s << polyline(steps(imp), "#1f77b4") << polyline(steps(gen), "#d62728")
    << vline(panel.suggested_threshold, "#2ca02c", "t = " + fixed(panel.suggested_threshold, 4))
    << legend({{"imposter", "#1f77b4"}, {"genuine", "#d62728"}}) << "</svg>\n";
  return s.str();
}

std::string far_frr_svg(const EvaluationPanel& panel) {
  constexpr double kFloorDecades = 6.0;
  auto y_of = [&](double rate) {
    const double l = std::clamp(std::log10(std::max(rate, 1e-300)), -kFloorDecades, 0.0);
    return kMargin + kPlotH * (-l / kFloorDecades);
  };
  auto curve = [&](auto pick) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : panel.roc) pts.push_back({kMargin + kPlotW * r.threshold, y_of(pick(r))});
    return pts;
  };
  std::ostringstream s;
  s << svg_open("FAR / FRR and fitted odds against threshold (log10 rate)");
  for (int d = 0; d <= static_cast<int>(kFloorDecades); ++d) {
    s << "<text x=\"" << kMargin - 6 << "\" y=\"" << fixed(y_of(std::pow(10.0, -d)) + 4, 2)
      << "\" text-anchor=\"end\">1e-" << d << "</text>\n";
  }
  s << polyline(curve([](const RocRow& r) { return r.far; }), "#1f77b4")
    << polyline(curve([](const RocRow& r) { return r.frr; }), "#d62728")
    << polyline(curve([](const RocRow& r) { return r.ofa; }), "#9467bd")
    << polyline(curve([](const RocRow& r) { return r.ofr; }), "#ff7f0e")
    << vline(panel.eer_threshold, "#7f7f7f", "EER " + sci(panel.eer))
    << legend({{"FAR", "#1f77b4"}, {"FRR", "#d62728"}, {"OFA", "#9467bd"}, {"OFR", "#ff7f0e"}}) << "</svg>\n";
  return s.str();
}

std::string summary_text(const EvaluationPanel& p, const SummaryInfo& info) {
  std::ostringstream s;
  s << "generated: " << info.timestamp << '\n';
  s << "scenario: " << info.scenario << '\n';
  s << "code length: " << p.code_length_bits << " bits (" << p.code_length_bits / 8 << " bytes)\n";
  s << "per-image failures: " << info.failures << "\n\n";
  auto dist = [&](const char* name, const DistributionSummary& d, double dof) {
    s << name << ": n=" << d.count << " mean=" << fixed(d.mean, 4) << " median=" << fixed(d.median, 4)
      << " std=" << fixed(d.std, 4) << " skewness=" << (d.skewness ? fixed(*d.skewness, 4) : "undefined")
      << " kurtosis=" << (d.kurtosis ? fixed(*d.kurtosis, 4) : "undefined") << " dof=" << fixed(dof, 1) << '\n';
  };
  dist("imposter", p.imposter, p.imposter_dof);
  dist("genuine ", p.genuine, p.genuine_dof);
  s << '\n';
  s << "decidability: " << fixed(p.decidability, 4) << '\n';
  s << "fisher ratio: " << fixed(p.fisher_ratio, 4) << '\n';
  s << "storage efficiency: " << fixed(p.storage_efficiency, 4) << '\n';
  s << "EER: " << sci(p.eer) << " at t=" << fixed(p.eer_threshold, 4) << '\n';
  s << "FAR=" << sci(p.at_far.target_far) << ": t=" << fixed(p.at_far.threshold, 4) << " FRR=" << sci(p.at_far.frr)
    << '\n';
  s << "FRR=" << sci(p.at_frr.target_frr) << ": t=" << fixed(p.at_frr.threshold, 4) << " FAR=" << sci(p.at_frr.far)
    << " OFA=" << sci(p.at_frr.ofa) << " OFR=" << sci(p.at_frr.ofr) << '\n';
  for (const auto& f : p.fixed) {
    s << "t=" << fixed(f.threshold, 4) << ": FRR=" << sci(f.frr) << " OFR=" << sci(f.ofr) << " FAR=" << sci(f.far)
      << " OFA=" << sci(f.ofa) << '\n';
  }
  s << "odds model: " << (p.binomial_odds ? "binomial" : "normal") << '\n';
  if (info.imposter_sigma) s << "imposter sigma (single enrollment): " << fixed(*info.imposter_sigma, 6) << '\n';
  s << '\n' << "suggested threshold (FAR=" << sci(p.at_far.target_far) << "): " << fixed(p.suggested_threshold, 4)
    << '\n';
  if (info.chosen_threshold) {
    s << "chosen threshold: " << fixed(*info.chosen_threshold, 4);
    if (info.chosen_rates) s << " FAR=" << sci(info.chosen_rates->far) << " FRR=" << sci(info.chosen_rates->frr);
    s << '\n';
  }
  return s.str();
}

void write_report(const EvaluationPanel& panel, const std::vector<ScoreRecord>& scores, const SummaryInfo& info,
                  const fs::path& outdir) {
  std::error_code ec;
  fs::create_directories(outdir, ec);
  if (ec || !fs::is_directory(outdir)) throw Error(ErrorCode::Io, "cannot create output directory " + outdir.string());
  save_panel(panel, outdir / "panel.json");
  save_roc_csv(panel, outdir / "roc.csv");
  save_scores_csv(scores, outdir / "scores.csv");
  write_text(outdir / "distributions.svg", distributions_svg(scores, panel));
  write_text(outdir / "far_frr.svg", far_frr_svg(panel));
  write_text(outdir / "summary.txt", summary_text(panel, info));
}

void write_report(const RunResult& result, const fs::path& outdir) {
  SummaryInfo info;
  info.scenario = to_string(result.scenario);
  info.timestamp = utc_timestamp();
  info.failures = result.failures.size();
  info.imposter_sigma = result.imposter_sigma;
  info.chosen_threshold = result.chosen_threshold;
  info.chosen_rates = result.chosen_rates;
  write_report(result.panel, result.scores, info, outdir);
  if (!result.failures.empty()) {
    std::ostringstream s;
    for (const auto& f : result.failures) s << f << '\n';
    write_text(outdir / "failures.txt", s.str());
  }
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace iris
