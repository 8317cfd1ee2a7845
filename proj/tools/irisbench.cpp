#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "iris/cfis.hpp"
#include "iris/encoder.hpp"
#include "iris/error.hpp"
#include "iris/image_io.hpp"
#include "iris/matcher.hpp"
#include "iris/report.hpp"
#include "iris/synth.hpp"
#include "iris/workbench.hpp"

namespace fs = std::filesystem;
using namespace iris;

namespace {

constexpr int kOk = 0;
constexpr int kFatal = 1;
constexpr int kPartial = 2;

struct EncoderFlags {
  int bytes = 192;
  std::string phase = "two";
  bool no_butterfly = false;

  void add(CLI::App* cmd) {
    cmd->add_option("--code", bytes, "Code size in bytes")->check(CLI::IsMember({192, 768}))->capture_default_str();
    cmd->add_option("--phase", phase, "Phase convention")->check(CLI::IsMember({"two", "single"}))->capture_default_str();
    cmd->add_flag("--no-butterfly", no_butterfly, "Keep every angular column unmasked");
  }

  EncoderConfig config() const {
    EncoderConfig c = bytes == 768 ? EncoderConfig::code_768() : EncoderConfig::code_192();
    c.phase = phase == "single" ? PhaseConvention::SingleArgument : PhaseConvention::TwoArgument;
    c.butterfly = !no_butterfly;
    return c;
  }
};

struct RunFlags {
  std::string corpus;
  std::string out = "out";
  int shift = 0;
  std::optional<double> threshold;
  bool binomial = false;
  int n = 5;
  std::string rule = "first";
  EncoderFlags enc;

  void add(CLI::App* cmd, bool enrollment) {
    cmd->add_option("corpus", corpus, "Manifest CSV or class/eye/capture directory")->required();
    cmd->add_option("-o,--out", out, "Output directory")->capture_default_str();
    cmd->add_option("--shift", shift, "Maximize similarity over +/- this many column shifts")->capture_default_str();
    cmd->add_option("--threshold", threshold, "Threshold to report rates at instead of the suggested one")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_flag("--binomial", binomial, "Exact binomial odds instead of normal fits");
    if (enrollment) {
      cmd->add_option("-n,--templates", n, "Templates enrolled per identity")->check(CLI::PositiveNumber)->capture_default_str();
      cmd->add_option("--rule", rule, "Enrollment selection rule")
          ->check(CLI::IsMember({"first", "random", "max_interclass", "min_intraclass"}))
          ->capture_default_str();
    }
    enc.add(cmd);
  }
};

int run_scenario(const RunFlags& f, Scenario scenario, std::uint64_t seed, int jobs, bool dump) {
  RunConfig cfg;
  cfg.encoder = f.enc.config();
  cfg.scenario = scenario;
  cfg.templates_per_identity = f.n;
  cfg.rule = parse_enrollment_rule(f.rule);
  cfg.threshold = f.threshold;
  cfg.output_dir = f.out;
  cfg.seed = seed;
  cfg.jobs = jobs;
  cfg.max_shift = f.shift;
  cfg.dump_stages = dump;
  cfg.panel.binomial_odds = f.binomial;
  cfg.validate();

  const Corpus corpus = load_corpus(f.corpus);
  const auto encoded = encode_corpus(corpus, cfg);
  const RunResult result = scenario == Scenario::Calibration ? run_calibration(corpus, cfg, encoded)
                                                             : run_enroll_identify(corpus, cfg, encoded);
  write_report(result, cfg.output_dir);

  const auto& p = result.panel;
  std::printf("%s: %zu genuine, %zu imposter scores\n", to_string(scenario).c_str(), p.genuine.count,
              p.imposter.count);
  std::printf("genuine %.4f +/- %.4f  imposter %.4f +/- %.4f  d'=%.3f  EER=%.4g\n", p.genuine.mean, p.genuine.std,
              p.imposter.mean, p.imposter.std, p.decidability, p.eer);
  std::printf("suggested threshold %.4f (FRR %.4g at FAR %.4g)\n", p.suggested_threshold, p.at_far.frr,
              p.at_far.target_far);
  for (const auto& msg : result.failures) std::fprintf(stderr, "warning: %s\n", msg.c_str());
  std::printf("report written to %s\n", cfg.output_dir.string().c_str());
  return result.failures.empty() ? kOk : kPartial;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"irisbench: iris segmentation, encoding and evaluation workbench"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Key-value configuration file");

  std::uint64_t seed = 1;
  int jobs = 1;
  bool dump = false;
  app.add_option("--seed", seed, "Random seed")->capture_default_str();
  app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_flag("--dump-stages", dump, "Write intermediate segmentation images");

  // synth
  auto* synth = app.add_subcommand("synth", "Render a synthetic eye corpus with ground truth");
  SynthCorpusOptions so;
  std::string synth_out;
  synth->add_option("-o,--out", synth_out, "Corpus directory")->required();
  synth->add_option("--identities", so.identities, "Number of identities")->capture_default_str();
  synth->add_option("--captures", so.captures, "Captures per identity")->capture_default_str();
  synth->add_option("--noise", so.eye.noise_std, "Gaussian noise std")->capture_default_str();
  synth->add_option("--eyelid-max", so.eye.eyelid_occlusion_max, "Largest eyelid occlusion fraction")
      ->capture_default_str();
  synth->add_option("--width", so.eye.width, "Image width")->capture_default_str();
  synth->add_option("--height", so.eye.height, "Image height")->capture_default_str();

  // segment
  auto* seg = app.add_subcommand("segment", "Locate pupil and limbic boundaries");
  std::vector<std::string> seg_images;
  std::string seg_out = "stages";
  seg->add_option("images", seg_images, "Eye images (.png or .pgm)")->required();
  seg->add_option("-o,--out", seg_out, "Stage dump directory")->capture_default_str();

  // encode
  auto* enc = app.add_subcommand("encode", "Segment and encode one eye image");
  std::string enc_image, enc_out;
  EncoderFlags enc_flags;
  enc->add_option("image", enc_image, "Eye image")->required();
  enc->add_option("-o,--out", enc_out, "Output .gcode file")->required();
  enc_flags.add(enc);

  // match
  auto* match = app.add_subcommand("match", "Compare two iris codes");
  std::string code_a, code_b;
  int match_shift = 0;
  match->add_option("a", code_a, "First .gcode")->required();
  match->add_option("b", code_b, "Second .gcode")->required();
  match->add_option("--shift", match_shift, "Maximize over +/- column shifts")->capture_default_str();

  auto* calib = app.add_subcommand("calibrate", "All-to-all comparison of a corpus");
  RunFlags calib_flags;
  calib_flags.add(calib, false);

  auto* enroll = app.add_subcommand("enroll-identify", "Multi-template enrollment and identification");
  RunFlags enroll_flags;
  enroll_flags.add(enroll, true);

  auto* report = app.add_subcommand("report", "Rebuild report files from panel.json and scores.csv");
  std::string report_in, report_out;
  report->add_option("input", report_in, "Directory holding panel.json and scores.csv")->required();
  report->add_option("-o,--out", report_out, "Output directory (default: input)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      so.seed = seed;
      const auto corpus = write_synth_corpus(synth_out, so);
      std::printf("wrote %zu images and %s\n", corpus.entries.size(), (fs::path(synth_out) / "manifest.csv").c_str());
      return kOk;
    }
    if (*seg) {
      int failures = 0;
      for (const auto& path : seg_images) {
        try {
          const auto img = load_image(path);
          CfisStages stages;
          const auto ring = segment(img, {}, dump ? &stages : nullptr);
          std::printf("%s pupil %.2f %.2f r=%.2f limbic r=%.2f band %zu lines\n", path.c_str(), ring.pupil.center_x,
                      ring.pupil.center_y, ring.pupil.radius, ring.limbic_radius, ring.unwrapped.rows());
          if (dump) write_stage_dump(stages, &ring, img, fs::path(seg_out) / fs::path(path).stem());
        } catch (const Error& e) {
          ++failures;
          std::fprintf(stderr, "%s: %s\n", path.c_str(), e.what());
        }
      }
      if (failures == static_cast<int>(seg_images.size())) return kFatal;
      return failures ? kPartial : kOk;
    }
    if (*enc) {
      const auto img = load_image(enc_image);
      const auto ring = segment(img, {});
      const auto code = encode(ring, enc_flags.config(), fs::path(enc_image).stem().string());
      save_code(code, enc_out);
      std::printf("%s: %zu bits, %zu unmasked\n", enc_out.c_str(), code.config.bit_count(), code.mask.popcount());
      return kOk;
    }
    if (*match) {
      const auto a = load_code(code_a);
      const auto b = load_code(code_b);
      const auto s = hamming_similarity(a, b, MatchOptions{match_shift});
      std::printf("similarity %.6f over %zu bits (shift %d)\n", s.similarity, s.compared_bits, s.shift);
      return kOk;
    }
    if (*calib) return run_scenario(calib_flags, Scenario::Calibration, seed, jobs, dump);
    if (*enroll) return run_scenario(enroll_flags, Scenario::EnrollIdentify, seed, jobs, dump);
    if (*report) {
      const fs::path in = report_in;
      const fs::path out = report_out.empty() ? in : fs::path(report_out);
      const auto panel = load_panel(in / "panel.json");
      const auto scores = load_scores_csv(in / "scores.csv");
      SummaryInfo info;
      info.scenario = "report";
      info.timestamp = utc_timestamp();
      info.chosen_threshold = panel.suggested_threshold;
      write_report(panel, scores, info, out);
      std::printf("report written to %s\n", out.c_str());
      return kOk;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFatal;
  }
  return kOk;
}
