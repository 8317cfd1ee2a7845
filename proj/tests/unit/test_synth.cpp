#include "helpers.hpp"

#include "iris/matcher.hpp"
#include "iris/synth.hpp"

using namespace iris;

namespace {

SynthEyeParams frozen() {
  SynthEyeParams p;
  p.center_jitter = 0;
  p.dilation_jitter = 0;
  p.rotation_jitter_deg = 0;
  p.noise_std = 0;
  p.gamma_jitter = 0;
  p.specular_jitter = 0;
  p.eyelid_occlusion_max = 0;
  return p;
}

double hs_of(const GrayImage& a, const GrayImage& b) {
  const auto cfg = EncoderConfig::code_192();
  return hamming_similarity(encode(segment(a), cfg), encode(segment(b), cfg)).similarity;
}

}  // namespace

TEST_CASE("rendering is a pure function of the seeds") {
  SynthEyeParams p;
  const auto a = synth_eye(p, 4, 9);
  const auto b = synth_eye(p, 4, 9);
  CHECK(a.image == b.image);
  CHECK(a.truth.pupil_x == b.truth.pupil_x);
  CHECK_FALSE(synth_eye(p, 4, 10).image == a.image);
  CHECK_FALSE(synth_eye(p, 5, 9).image == a.image);
}

TEST_CASE("without capture variation two captures are identical") {
  const auto p = frozen();
  const auto a = synth_eye(p, 12, 1);
  const auto b = synth_eye(p, 12, 2);
  CHECK(a.image == b.image);
  CHECK(hs_of(a.image, b.image) == 1.0);
}

TEST_CASE("ground truth stays within the configured ranges") {
  SynthEyeParams p;
  for (std::uint64_t id = 0; id < 40; ++id) {
    const auto t = synth_eye(p, id, id * 7 + 1).truth;
    CHECK(std::abs(t.pupil_x - p.width / 2.0) <= p.center_jitter + 0.5);
    CHECK(std::abs(t.pupil_y - p.height / 2.0) <= p.center_jitter + 0.5);
    CHECK(t.pupil_radius >= p.pupil_radius_min * (1 - p.dilation_jitter) - 1e-9);
    CHECK(t.pupil_radius <= p.pupil_radius_max * (1 + p.dilation_jitter) + 1e-9);
    CHECK(t.limbic_radius > t.pupil_radius);
    CHECK(t.eyelid_fraction >= 0.0);
    CHECK(t.eyelid_fraction <= p.eyelid_occlusion_max);
    CHECK(t.gamma >= 1 - p.gamma_jitter);
    CHECK(t.gamma <= 1 + p.gamma_jitter);
  }
}

TEST_CASE("capture overrides are honored") {
  SynthEyeParams p;
  CaptureOverrides o;
  o.eyelid_fraction = 0.25;
  o.gamma = 1.2;
  const auto t = synth_eye(p, 3, 3, o).truth;
  CHECK(t.eyelid_fraction == 0.25);
  CHECK(t.gamma == 1.2);
  o.eyelid_fraction = 0.0;
  const auto open = synth_eye(p, 3, 3, o);
  const auto shut = synth_eye(p, 3, 3, CaptureOverrides{0.25, 1.2, {}});
  CHECK_FALSE(open.image == shut.image);
  CHECK(open.truth.pupil_x == shut.truth.pupil_x);
}

TEST_CASE("parameter validation") {
  auto p = SynthEyeParams{};
  p.width = 16;
  check_error([&] { p.validate(); }, ErrorCode::Parameter);
  p = SynthEyeParams{};
  p.pupil_radius_min = 50;
  check_error([&] { p.validate(); }, ErrorCode::Parameter);
  p = SynthEyeParams{};
  p.limbic_ratio_min = 0.9;
  check_error([&] { p.validate(); }, ErrorCode::Parameter);
  p = SynthEyeParams{};
  p.limbic_ratio_max = 6.0;
  check_error([&] { p.validate(); }, ErrorCode::Parameter);
  p = SynthEyeParams{};
  p.noise_std = -1;
  check_error([&] { p.validate(); }, ErrorCode::Parameter);
  check_error([&] { synth_eye(p, 1, 1); }, ErrorCode::Parameter);
}

TEST_CASE("genuine pairs agree and imposter pairs are at chance") {
  SynthEyeParams p;
  double genuine = 0, imposter = 0;
  const int pairs = 8;
  for (int k = 0; k < pairs; ++k) {
    const auto a = synth_eye(p, 100 + k, 1).image;
    const auto b = synth_eye(p, 100 + k, 2).image;
    const auto c = synth_eye(p, 200 + k, 1).image;
    genuine += hs_of(a, b) / pairs;
    imposter += hs_of(a, c) / pairs;
  }
  CHECK(genuine > 0.62);
  CHECK(imposter >= 0.45);
  CHECK(imposter <= 0.55);
}
