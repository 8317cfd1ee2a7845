#include "iris/workbench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "iris/error.hpp"
#include "iris/image_io.hpp"

namespace iris {

namespace fs = std::filesystem;

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) {
    throw Error(ErrorCode::Format, "manifest: bad number '" + s + "' in column " + what);
  }
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool is_image(const fs::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".pgm";
}

std::vector<fs::path> sorted_children(const fs::path& dir, bool directories) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (directories ? e.is_directory() : (e.is_regular_file() && is_image(e.path()))) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Entries grouped by identity, in order of first appearance.
std::vector<std::pair<std::string, std::vector<std::size_t>>> group_identities(const Corpus& corpus) {
  std::vector<std::pair<std::string, std::vector<std::size_t>>> groups;
  std::map<std::string, std::size_t> slot;
  for (std::size_t i = 0; i < corpus.entries.size(); ++i) {
    const auto key = corpus.entries[i].identity();
    auto [it, inserted] = slot.emplace(key, groups.size());
    if (inserted) groups.push_back({key, {}});
    groups[it->second].second.push_back(i);
  }
  return groups;
}

void record_failures(const Corpus& corpus, const std::vector<EncodedEntry>& encoded, RunResult& out) {
  for (std::size_t i = 0; i < encoded.size(); ++i) {
    if (!encoded[i].code) out.failures.push_back(corpus.entries[i].id() + ": " + encoded[i].error);
  }
}

void finish(RunResult& out, const ScoreSet& set, const RunConfig& cfg) {
  out.panel = build_panel(set, cfg.panel);
  out.chosen_threshold = cfg.threshold.value_or(out.panel.suggested_threshold);
  out.chosen_rates = empirical_rates(set, *out.chosen_threshold);
}

}  // namespace

std::string CorpusEntry::id() const {
  auto id = class_id + "_" + eye + "_" + path.stem().string();
  std::replace_if(id.begin(), id.end(), [](char c) { return c == ',' || c == '/' || c == ' '; }, '-');
  return id;
}

void Corpus::validate() const {
  std::set<std::string> ids;
  for (const auto& e : entries) {
    if (e.class_id.empty()) throw Error(ErrorCode::Parameter, "corpus: empty class id for " + e.path.string());
    if (!ids.insert(e.id()).second) throw Error(ErrorCode::Parameter, "corpus: duplicate entry id " + e.id());
  }
}

std::size_t Corpus::identity_count() const {
  std::set<std::string> ids;
  for (const auto& e : entries) ids.insert(e.identity());
  return ids.size();
}

Corpus load_manifest(const fs::path& csv) {
  std::ifstream in(csv);
  if (!in) throw Error(ErrorCode::Io, "cannot open manifest " + csv.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Format, "manifest " + csv.string() + " is empty");
  const auto header = split_csv(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* required : {"path", "class", "eye"}) {
    if (!col.count(required)) throw Error(ErrorCode::Format, std::string("manifest: missing column ") + required);
  }
  const bool has_truth = col.count("pupil_x") && col.count("pupil_y") && col.count("pupil_radius") &&
                         col.count("limbic_radius");
  const fs::path base = csv.parent_path();
  Corpus corpus;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv(line);
    if (cells.size() < header.size()) {
      throw Error(ErrorCode::Format, "manifest line " + std::to_string(lineno) + ": too few columns");
    }
    CorpusEntry e;
    e.path = cells[col["path"]];
    if (e.path.is_relative()) e.path = base / e.path;
    e.class_id = cells[col["class"]];
    e.eye = cells[col["eye"]];
    if (has_truth && !cells[col["pupil_x"]].empty()) {
      e.truth = GroundTruth{parse_double(cells[col["pupil_x"]], "pupil_x"),
                            parse_double(cells[col["pupil_y"]], "pupil_y"),
                            parse_double(cells[col["pupil_radius"]], "pupil_radius"),
                            parse_double(cells[col["limbic_radius"]], "limbic_radius")};
    }
    corpus.entries.push_back(std::move(e));
  }
  corpus.validate();
  return corpus;
}

void save_manifest(const Corpus& corpus, const fs::path& csv) {
  std::ofstream out(csv, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write manifest " + csv.string());
  const fs::path base = csv.parent_path();
  out << "path,class,eye,pupil_x,pupil_y,pupil_radius,limbic_radius\n";
  for (const auto& e : corpus.entries) {
    auto rel = e.path.lexically_relative(base);
    out << (rel.empty() || *rel.begin() == ".." ? e.path : rel).generic_string() << ',' << e.class_id << ','
        << e.eye << ',';
    if (e.truth) {
      out << format_double(e.truth->pupil_x) << ',' << format_double(e.truth->pupil_y) << ','
          << format_double(e.truth->pupil_radius) << ',' << format_double(e.truth->limbic_radius);
    } else {
      out << ",,,";
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "write failed for " + csv.string());
}

Corpus discover_corpus(const fs::path& root) {
  if (!fs::is_directory(root)) throw Error(ErrorCode::Io, "not a directory: " + root.string());
  Corpus corpus;
  for (const auto& cls : sorted_children(root, true)) {
    for (const auto& eye : sorted_children(cls, true)) {
      for (const auto& img : sorted_children(eye, false)) {
        corpus.entries.push_back({img, cls.filename().string(), eye.filename().string(), std::nullopt});
      }
    }
  }
  if (corpus.entries.empty()) throw Error(ErrorCode::EmptyInput, "no class/eye/capture images under " + root.string());
  corpus.validate();
  return corpus;
}

Corpus load_corpus(const fs::path& path) {
  if (fs::is_regular_file(path)) return load_manifest(path);
  if (fs::is_regular_file(path / "manifest.csv")) return load_manifest(path / "manifest.csv");
  return discover_corpus(path);
}

Corpus write_synth_corpus(const fs::path& root, const SynthCorpusOptions& opts) {
  opts.eye.validate();
  if (opts.identities < 1 || opts.captures < 1) {
    throw Error(ErrorCode::Parameter, "synth corpus: identities and captures must be positive");
  }
  Corpus corpus;
  for (int c = 0; c < opts.identities; ++c) {
    char cls[32];
    std::snprintf(cls, sizeof cls, "id%03d", c);
    const fs::path dir = root / cls / "L";
    fs::create_directories(dir);
    const std::uint64_t identity_seed = mix(opts.seed * 1000003ULL + static_cast<std::uint64_t>(c));
    for (int k = 0; k < opts.captures; ++k) {
      const std::uint64_t capture_seed = mix(identity_seed ^ (static_cast<std::uint64_t>(k) + 1) * 0x2545F4914F6CDD1DULL);
      const auto eye = synth_eye(opts.eye, identity_seed, capture_seed);
      char name[32];
      std::snprintf(name, sizeof name, "%02d.png", k);
      save_png(eye.image, dir / name);
      corpus.entries.push_back({dir / name, cls, "L",
                                GroundTruth{eye.truth.pupil_x, eye.truth.pupil_y, eye.truth.pupil_radius,
                                            eye.truth.limbic_radius}});
    }
  }
  save_manifest(corpus, root / "manifest.csv");
  return corpus;
}

std::string to_string(Scenario s) {
  return s == Scenario::Calibration ? "calibration" : "enroll_identify";
}

std::string to_string(EnrollmentRule r) {
  switch (r) {
    case EnrollmentRule::First: return "first";
    case EnrollmentRule::Random: return "random";
    case EnrollmentRule::MaxInterclass: return "max_interclass";
    case EnrollmentRule::MinIntraclass: return "min_intraclass";
  }
  return "first";
}

Scenario parse_scenario(const std::string& s) {
  if (s == "calibration") return Scenario::Calibration;
  if (s == "enroll_identify" || s == "enroll-identify") return Scenario::EnrollIdentify;
  throw Error(ErrorCode::Parameter, "unknown scenario '" + s + "'");
}

EnrollmentRule parse_enrollment_rule(const std::string& s) {
  for (auto r : {EnrollmentRule::First, EnrollmentRule::Random, EnrollmentRule::MaxInterclass,
                 EnrollmentRule::MinIntraclass}) {
    if (s == to_string(r)) return r;
  }
  throw Error(ErrorCode::Parameter, "unknown enrollment rule '" + s + "'");
}

void RunConfig::validate() const {
  encoder.validate();
  if (templates_per_identity < 1) throw Error(ErrorCode::Parameter, "templates per identity must be >= 1");
  if (jobs < 1) throw Error(ErrorCode::Parameter, "jobs must be >= 1");
  if (max_shift < 0) throw Error(ErrorCode::Parameter, "max shift must be >= 0");
  if (threshold && (*threshold < 0.0 || *threshold > 1.0)) {
    throw Error(ErrorCode::Parameter, "threshold override must lie in [0, 1]");
  }
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<EncodedEntry> encode_corpus(const Corpus& corpus, const RunConfig& cfg) {
  cfg.validate();
  std::vector<EncodedEntry> out(corpus.entries.size());
  parallel_for(corpus.entries.size(), cfg.jobs, [&](std::size_t i) {
    const auto& entry = corpus.entries[i];
    CfisStages stages;
    GrayImage img;
    try {
      img = load_image(entry.path);
      auto ring = segment(img, cfg.cfis, cfg.dump_stages ? &stages : nullptr);
      out[i].code = encode(ring, cfg.encoder, entry.id());
      out[i].ring = std::move(ring);
    } catch (const std::exception& e) {
      out[i].code.reset();
      out[i].error = e.what();
    }
    if (cfg.dump_stages && !img.empty()) {
      write_stage_dump(stages, out[i].ring ? &*out[i].ring : nullptr, img,
                       cfg.output_dir / "stages" / entry.id());
    }
  });
  return out;
}

RunResult run_calibration(const Corpus& corpus, const RunConfig& cfg) {
  return run_calibration(corpus, cfg, encode_corpus(corpus, cfg));
}

RunResult run_calibration(const Corpus& corpus, const RunConfig& cfg, const std::vector<EncodedEntry>& encoded) {
  cfg.validate();
  corpus.validate();
  const auto groups = group_identities(corpus);
  if (groups.size() < 2) throw Error(ErrorCode::InsufficientData, "calibration needs at least 2 classes");
  for (const auto& [name, members] : groups) {
    if (members.size() < 2) {
      throw Error(ErrorCode::InsufficientData, "calibration needs at least 2 images of class " + name);
    }
  }
  if (encoded.size() != corpus.entries.size()) {
    throw Error(ErrorCode::Shape, "calibration: encoded list does not match the corpus");
  }

  RunResult out;
  out.scenario = Scenario::Calibration;
  record_failures(corpus, encoded, out);

  std::vector<std::size_t> valid;
  for (std::size_t i = 0; i < encoded.size(); ++i) {
    if (encoded[i].code) valid.push_back(i);
  }
  const MatchOptions mo{cfg.max_shift};
  std::vector<std::vector<ScoreRecord>> rows(valid.size());
  std::vector<std::vector<std::string>> row_warnings(valid.size());
  parallel_for(valid.size(), cfg.jobs, [&](std::size_t a) {
    const auto& ea = corpus.entries[valid[a]];
    for (std::size_t b = a + 1; b < valid.size(); ++b) {
      const auto& eb = corpus.entries[valid[b]];
      try {
        const auto s = hamming_similarity(*encoded[valid[a]].code, *encoded[valid[b]].code, mo);
        rows[a].push_back({ea.id(), eb.id(), ea.identity() == eb.identity(), s.similarity, s.compared_bits});
      } catch (const Error& e) {
        if (e.code() != ErrorCode::IncomparableCodes) throw;
        row_warnings[a].push_back(ea.id() + " vs " + eb.id() + ": " + e.what());
      }
    }
  });

  ScoreSet set;
  set.code_length_bits = cfg.encoder.bit_count();
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (auto& r : rows[a]) {
      (r.genuine ? set.genuine : set.imposter).push_back(r.similarity);
      out.scores.push_back(std::move(r));
    }
    for (auto& w : row_warnings[a]) out.failures.push_back(std::move(w));
  }
  finish(out, set, cfg);
  return out;
}

std::vector<std::size_t> select_enrollment(const std::vector<std::size_t>& own, const std::vector<std::size_t>& others,
                                           const std::function<double(std::size_t, std::size_t)>& similarity,
                                           int n, EnrollmentRule rule, std::uint64_t seed) {
  const auto count = static_cast<std::size_t>(n);
  if (n < 1 || own.size() < count) {
    throw Error(ErrorCode::InsufficientData, "enrollment: fewer captures than requested templates");
  }
  std::vector<std::size_t> order(own.size());
  std::iota(order.begin(), order.end(), 0);

  auto rank_by = [&](auto&& key, bool ascending) {
    std::vector<double> k(own.size());
    for (std::size_t i = 0; i < own.size(); ++i) k[i] = key(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return ascending ? k[a] < k[b] : k[a] > k[b]; });
  };

  switch (rule) {
    case EnrollmentRule::First:
      break;
    case EnrollmentRule::Random: {
      std::mt19937_64 rng(seed);
      std::shuffle(order.begin(), order.end(), rng);
      break;
    }
    case EnrollmentRule::MaxInterclass:
      // Least similar to every other class first.
      rank_by(
          [&](std::size_t i) {
            if (others.empty()) return 0.0;
            double s = 0.0;
            for (auto o : others) s += similarity(own[i], o);
            return s / static_cast<double>(others.size());
          },
          true);
      break;
    case EnrollmentRule::MinIntraclass:
      // Most similar to the rest of its own class first.
      rank_by(
          [&](std::size_t i) {
            if (own.size() < 2) return 0.0;
            double s = 0.0;
            for (std::size_t j = 0; j < own.size(); ++j) {
              if (j != i) s += similarity(own[i], own[j]);
            }
            return s / static_cast<double>(own.size() - 1);
          },
          false);
      break;
  }
  std::vector<std::size_t> picked;
  for (std::size_t i = 0; i < count; ++i) picked.push_back(own[order[i]]);
  std::sort(picked.begin(), picked.end());
  return picked;
}

RunResult run_enroll_identify(const Corpus& corpus, const RunConfig& cfg) {
  return run_enroll_identify(corpus, cfg, encode_corpus(corpus, cfg));
}

RunResult run_enroll_identify(const Corpus& corpus, const RunConfig& cfg, const std::vector<EncodedEntry>& encoded) {
  cfg.validate();
  corpus.validate();
  if (encoded.size() != corpus.entries.size()) {
    throw Error(ErrorCode::Shape, "enrollment: encoded list does not match the corpus");
  }
  const auto groups = group_identities(corpus);
  if (groups.size() < 2) throw Error(ErrorCode::InsufficientData, "enrollment needs at least 2 classes");
  const auto n = static_cast<std::size_t>(cfg.templates_per_identity);

  RunResult out;
  out.scenario = Scenario::EnrollIdentify;
  record_failures(corpus, encoded, out);

  // Usable captures per identity, after per-image failures.
  std::vector<std::vector<std::size_t>> usable(groups.size());
  std::vector<std::size_t> all_usable;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].second.size() <= n) {
      throw Error(ErrorCode::InsufficientData, "class " + groups[g].first + " has " +
                                                   std::to_string(groups[g].second.size()) +
                                                   " captures; enrollment of " + std::to_string(n) +
                                                   " needs more");
    }
    for (auto i : groups[g].second) {
      if (encoded[i].code) usable[g].push_back(i);
    }
    if (usable[g].size() <= n) {
      throw Error(ErrorCode::InsufficientData, "class " + groups[g].first + " has only " +
                                                   std::to_string(usable[g].size()) +
                                                   " encodable captures; enrollment of " + std::to_string(n) +
                                                   " needs more");
    }
    all_usable.insert(all_usable.end(), usable[g].begin(), usable[g].end());
  }
  std::sort(all_usable.begin(), all_usable.end());

  const MatchOptions mo{cfg.max_shift};
  // Pairwise cache; only filled when a rule needs it.
  std::map<std::pair<std::size_t, std::size_t>, double> cache;
  auto similarity = [&](std::size_t a, std::size_t b) {
    const auto key = std::minmax(a, b);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    double s = 0.0;
    try {
      s = hamming_similarity(*encoded[a].code, *encoded[b].code, mo).similarity;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::IncomparableCodes) throw;
    }
    cache.emplace(key, s);
    return s;
  };

  std::vector<Identity> gallery(groups.size());
  std::vector<std::vector<std::size_t>> enrolled(groups.size());
  std::vector<char> is_enrolled(encoded.size(), 0);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::vector<std::size_t> others;
    std::set_difference(all_usable.begin(), all_usable.end(), usable[g].begin(), usable[g].end(),
                        std::back_inserter(others));
    enrolled[g] = select_enrollment(usable[g], others, similarity, cfg.templates_per_identity, cfg.rule,
                                    mix(cfg.seed ^ mix(g)));
    gallery[g].id = groups[g].first;
    for (auto i : enrolled[g]) {
      gallery[g].templates.push_back(*encoded[i].code);
      is_enrolled[i] = 1;
      out.enrolled.push_back(corpus.entries[i].id());
    }
  }

  // Single-enrollment pass over the enrolled set fixes imposter_sigma.
  std::vector<double> enrolled_imposter;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t h = g + 1; h < groups.size(); ++h) {
      for (auto a : enrolled[g]) {
        for (auto b : enrolled[h]) {
          try {
            enrolled_imposter.push_back(hamming_similarity(*encoded[a].code, *encoded[b].code, mo).similarity);
          } catch (const Error& e) {
            if (e.code() != ErrorCode::IncomparableCodes) throw;
          }
        }
      }
    }
  }
  if (enrolled_imposter.size() < 2) {
    throw Error(ErrorCode::InsufficientData, "enrollment: too few comparable enrolled templates for imposter sigma");
  }
  const double sigma = summarize(enrolled_imposter).std;
  out.imposter_sigma = sigma;

  std::vector<std::size_t> probes;
  std::vector<std::size_t> probe_group;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (auto i : usable[g]) {
      if (!is_enrolled[i]) {
        probes.push_back(i);
        probe_group.push_back(g);
      }
    }
  }
  // Probes in corpus order.
  std::vector<std::size_t> order(probes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return probes[a] < probes[b]; });

  std::vector<std::vector<ScoreRecord>> rows(probes.size());
  std::vector<std::vector<std::string>> row_warnings(probes.size());
  parallel_for(order.size(), cfg.jobs, [&](std::size_t k) {
    const std::size_t p = probes[order[k]];
    const std::size_t own = probe_group[order[k]];
    const auto& probe = *encoded[p].code;
    for (std::size_t g = 0; g < gallery.size(); ++g) {
      std::vector<double> s;
      std::size_t bits = 0;
      for (const auto& t : gallery[g].templates) {
        try {
          const auto m = hamming_similarity(probe, t, mo);
          s.push_back(m.similarity);
          bits += m.compared_bits;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::IncomparableCodes) throw;
        }
      }
      if (s.empty()) {
        row_warnings[k].push_back(corpus.entries[p].id() + " vs " + gallery[g].id + ": no comparable template");
        continue;
      }
      const double mds = std::clamp(mean_deviation_score(s, sigma), 0.0, 1.0);
      rows[k].push_back({corpus.entries[p].id(), gallery[g].id, g == own, mds, bits});
    }
  });

  ScoreSet set;
  set.code_length_bits = cfg.encoder.bit_count();
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (auto& r : rows[k]) {
      (r.genuine ? set.genuine : set.imposter).push_back(r.similarity);
      out.scores.push_back(std::move(r));
    }
    for (auto& w : row_warnings[k]) out.failures.push_back(std::move(w));
  }
  finish(out, set, cfg);
  return out;
}

void write_stage_dump(const CfisStages& stages, const IrisRing* ring, const GrayImage& image, const fs::path& dir) {
  fs::create_directories(dir);
  const auto& ps = stages.pupil;
  if (!ps.cluster.empty()) save_pgm(ps.cluster, dir / "pc.pgm");
  if (!ps.rlv.empty()) save_pgm(ps.rlv, dir / "rlv.pgm");
  if (!ps.rlh.empty()) save_pgm(ps.rlh, dir / "rlh.pgm");
  if (!ps.indicator.empty()) save_pgm(ps.indicator, dir / "pi.pgm");
  if (!ps.flooded.empty()) save_pgm(ps.flooded, dir / "flooded.pgm");
  if (!ps.filled.empty()) save_pgm(ps.filled, dir / "p.pgm");

  const auto& u = stages.unwrapped;
  if (u.rows() > 0 && u.width() > 0) {
    const int w = u.width();
    const int h = static_cast<int>(u.rows());
    GrayImage ui(w, h), rui(w, h);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const auto src = static_cast<std::size_t>(x) * u.ui[y].size() / static_cast<std::size_t>(w);
        ui(x, y) = u.ui[y][std::min(src, u.ui[y].size() - 1)];
        rui(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(u.rui[y][x]), 0L, 255L));
      }
    }
    save_pgm(ui, dir / "ui.pgm");
    save_pgm(rui, dir / "rui.pgm");

    std::ofstream csv(dir / "votes.csv", std::ios::binary);
    csv << "line,radius,a,b,c,p,q,r,votes\n";
    for (std::size_t i = 0; i < u.rows(); ++i) {
      auto at = [&](const std::vector<double>& v) { return i < v.size() ? format_double(v[i]) : std::string(); };
      auto lab = [&](const CombinedCrispIndicator& c) {
        return i < c.labels.size() ? std::to_string(c.labels[i]) : std::string();
      };
      csv << i << ',' << format_double(u.radius_of(i)) << ',' << at(stages.means.a) << ',' << at(stages.means.b)
          << ',' << at(stages.means.c) << ',' << lab(stages.p) << ',' << lab(stages.q) << ',' << lab(stages.r) << ','
          << (i < stages.vote.votes.size() ? std::to_string(stages.vote.votes[i]) : std::string()) << '\n';
    }
  }

  if (ring) {
    RgbImage overlay(image);
    auto circle = [&](double cx, double cy, double r, std::uint8_t red, std::uint8_t green, std::uint8_t blue) {
      const int steps = std::max(64, static_cast<int>(std::ceil(2.0 * std::numbers::pi * r * 2.0)));
      for (int k = 0; k < steps; ++k) {
        const double t = 2.0 * std::numbers::pi * k / steps;
        const int x = static_cast<int>(std::lround(cx + r * std::cos(t)));
        const int y = static_cast<int>(std::lround(cy - r * std::sin(t)));
        if (x >= 0 && y >= 0 && x < image.width() && y < image.height()) overlay.set(x, y, red, green, blue);
      }
    };
    circle(ring->pupil.center_x, ring->pupil.center_y, ring->pupil.radius, 255, 40, 40);
    circle(ring->pupil.center_x, ring->pupil.center_y, ring->limbic_radius, 40, 255, 40);
    save_png(overlay, dir / "overlay.png");
  }
}

}  // namespace iris
