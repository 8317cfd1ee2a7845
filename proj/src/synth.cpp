#include "iris/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "iris/error.hpp"

namespace iris {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kTextureComponents = 72;

// One radially localized angular sinusoid of the iris texture.
struct TextureWave {
  double amplitude;
  int cycles;  // per revolution
  double phase;
  double radial_center;
  double radial_width;
  double radial_tilt;  // phase drift across the band
};

struct IdentityTraits {
  double pupil_radius;
  double limbic_ratio;
  double pupil_level;
  double iris_level;
  double sclera_level;
  double skin_level;
  std::vector<TextureWave> waves;
  double texture_scale = 1.0;

  double texture(double theta, double rho) const {
    double sum = 0.0;
    for (const auto& w : waves) {
      const double d = (rho - w.radial_center) / w.radial_width;
      sum += w.amplitude * std::exp(-0.5 * d * d) * std::cos(w.cycles * theta + w.phase + w.radial_tilt * rho);
    }
    return sum * texture_scale;
  }
};

IdentityTraits identity_traits(const SynthEyeParams& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9E3779B97F4A7C15ULL);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto between = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };

  IdentityTraits t;
  t.pupil_radius = between(p.pupil_radius_min, p.pupil_radius_max);
  t.limbic_ratio = between(p.limbic_ratio_min, p.limbic_ratio_max);
  t.pupil_level = between(15.0, 30.0);
  t.iris_level = between(100.0, 130.0);
  t.sclera_level = between(195.0, 225.0);
  t.skin_level = between(140.0, 165.0);
  std::uniform_int_distribution<int> cycles(6, 36);
  for (int i = 0; i < kTextureComponents; ++i) {
    t.waves.push_back({between(0.5, 1.0), cycles(rng), between(0.0, kTwoPi), between(0.0, 1.0),
                       between(0.08, 0.2), between(-std::numbers::pi, std::numbers::pi)});
  }
  // Normalize the texture to the requested contrast on a fixed polar grid.
  double ss = 0.0;
  int n = 0;
  for (int ri = 0; ri < 32; ++ri) {
    for (int ai = 0; ai < 256; ++ai) {
      const double v = t.texture(kTwoPi * ai / 256.0, (ri + 0.5) / 32.0);
      ss += v * v;
      ++n;
    }
  }
  t.texture_scale = p.texture_contrast / std::sqrt(ss / n);
  return t;
}

// Coverage of a soft edge: 1 well inside (d > 0), 0 well outside.
double coverage(double d, double softness) { return std::clamp(0.5 + d / softness, 0.0, 1.0); }

}  // namespace

void SynthEyeParams::validate() const {
  if (width < 32 || height < 32) throw Error(ErrorCode::Parameter, "synth: image too small");
  if (!(pupil_radius_min > 2.0) || pupil_radius_max < pupil_radius_min) {
    throw Error(ErrorCode::Parameter, "synth: bad pupil radius range");
  }
  if (!(limbic_ratio_min > 1.0) || limbic_ratio_max < limbic_ratio_min) {
    throw Error(ErrorCode::Parameter, "synth: limbic radius must exceed pupil radius");
  }
  if (dilation_jitter < 0.0 || dilation_jitter >= 0.5 || center_jitter < 0.0 || noise_std < 0.0 ||
      gamma_jitter < 0.0 || gamma_jitter >= 1.0 || eyelid_occlusion_max < 0.0 || eyelid_occlusion_max > 0.5 ||
      specular_count < 0 || specular_radius < 0.0 || rotation_jitter_deg < 0.0 || texture_contrast < 0.0) {
    throw Error(ErrorCode::Parameter, "synth: jitter parameters out of range");
  }
  const double limbic = pupil_radius_max * limbic_ratio_max;
  if (limbic + center_jitter + 2.0 > std::min(width, height) / 2.0) {
    throw Error(ErrorCode::Parameter, "synth: iris does not fit inside the image");
  }
  if (limbic_ratio_min * (1.0 - dilation_jitter) <= 1.0) {
    throw Error(ErrorCode::Parameter, "synth: dilated pupil can reach the limbus");
  }
}

SynthEye synth_eye(const SynthEyeParams& p, std::uint64_t identity_seed, std::uint64_t capture_seed,
                   const CaptureOverrides& overrides) {
  p.validate();
  const IdentityTraits id = identity_traits(p, identity_seed);

  std::mt19937_64 rng(capture_seed ^ (identity_seed * 0xD1B54A32D192ED03ULL) ^ 0x632BE59BD9B4E019ULL);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  SynthTruth truth;
  truth.pupil_x = (p.width - 1) / 2.0 + p.center_jitter * u(rng);
  truth.pupil_y = (p.height - 1) / 2.0 + p.center_jitter * u(rng);
  truth.limbic_radius = id.pupil_radius * id.limbic_ratio;
  truth.pupil_radius = id.pupil_radius * (1.0 + p.dilation_jitter * u(rng));
  truth.rotation = p.rotation_jitter_deg * std::numbers::pi / 180.0 * gauss(rng);
  truth.gamma = overrides.gamma.value_or(1.0 + p.gamma_jitter * u(rng));
  const double eyelid_draw = p.eyelid_occlusion_max * 0.5 * (1.0 + u(rng));
  // A random eyelid never reaches the pupil; an explicit one is honored.
  const double eyelid_cap =
      std::max(0.0, (truth.limbic_radius - truth.pupil_radius - 3.0) / (2.0 * truth.limbic_radius));
  truth.eyelid_fraction = overrides.eyelid_fraction ? std::clamp(*overrides.eyelid_fraction, 0.0, 0.5)
                                                    : std::min(eyelid_draw, eyelid_cap);
  const double noise_std = overrides.noise_std.value_or(p.noise_std);

  struct Spot {
    double x, y;
  };
  std::vector<Spot> spots;
  for (int i = 0; i < p.specular_count; ++i) {
    // Fixed offsets up-left of center, moved by up to a third of the pupil radius.
    const double base_angle = 2.2 + 1.3 * i;
    const double reach = truth.pupil_radius * (0.35 + 0.15 * p.specular_jitter * u(rng));
    const double angle = base_angle + 0.5 * p.specular_jitter * u(rng);
    spots.push_back({truth.pupil_x + reach * std::cos(angle), truth.pupil_y - reach * std::sin(angle)});
  }

  const double rp = truth.pupil_radius;
  const double rl = truth.limbic_radius;
  const double lid_y = truth.pupil_y - rl + 2.0 * rl * truth.eyelid_fraction;

  GrayImage img(p.width, p.height);
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width; ++x) {
      const double dx = x - truth.pupil_x;
      const double dy = truth.pupil_y - y;
      const double r = std::hypot(dx, dy);
      const double theta = std::atan2(dy, dx);

      double v = id.sclera_level;
      const double iris_cov = coverage(rl - r, 2.0);
      if (iris_cov > 0.0) {
        const double rho = std::clamp((r - rp) / (rl - rp), 0.0, 1.0);
        const double iris = std::clamp(id.iris_level + id.texture(theta - truth.rotation, rho), 65.0, 190.0);
        v = v * (1.0 - iris_cov) + iris * iris_cov;
      }
      const double pupil_cov = coverage(rp - r, 1.2);
      v = v * (1.0 - pupil_cov) + id.pupil_level * pupil_cov;
      for (const auto& s : spots) {
        const double spot_cov = coverage(p.specular_radius - std::hypot(x - s.x, y - s.y), 1.0);
        v = v * (1.0 - spot_cov) + 250.0 * spot_cov;
      }
      if (truth.eyelid_fraction > 0.0) {
        const double edge = lid_y + 0.3 * dx * dx / rl;
        const double lid_cov = coverage(edge - y, 2.0);
        v = v * (1.0 - lid_cov) + id.skin_level * lid_cov;
      }
      v = 255.0 * std::pow(std::clamp(v, 0.0, 255.0) / 255.0, truth.gamma);
      if (noise_std > 0.0) v += noise_std * gauss(rng);
      img(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  }
  return {std::move(img), truth};
}

}  // namespace iris
