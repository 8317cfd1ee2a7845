#pragma once

#include <cstdint>
#include <optional>

#include "iris/image.hpp"

namespace iris {

/// Knobs of the synthetic eye renderer. Identity-level traits (geometry
/// ratios, intensities, iris texture) come from the identity seed;
/// everything listed as jitter varies per capture.
struct SynthEyeParams {
  int width = 320;
  int height = 280;
  double center_jitter = 8.0;  // uniform +/- pixels around the image center
  double pupil_radius_min = 30.0;
  double pupil_radius_max = 40.0;
  double dilation_jitter = 0.05;  // relative pupil radius change per capture
  double limbic_ratio_min = 2.1;  // limbic radius / identity pupil radius
  double limbic_ratio_max = 2.5;
  double rotation_jitter_deg = 1.0;  // std of in-plane eye rotation
  double noise_std = 3.0;
  double gamma_jitter = 0.08;  // gamma drawn from [1 - g, 1 + g]
  int specular_count = 1;
  double specular_radius = 3.0;
  double specular_jitter = 1.0;        // 0 pins specular spots to fixed offsets
  double eyelid_occlusion_max = 0.15;  // top fraction of the iris diameter covered
  double texture_contrast = 20.0;      // std of the iris texture in gray levels

  void validate() const;
};

/// Forces one capture-level factor, for paired renders.
struct CaptureOverrides {
  std::optional<double> eyelid_fraction;
  std::optional<double> gamma;
  std::optional<double> noise_std;
};

struct SynthTruth {
  double pupil_x = 0.0;
  double pupil_y = 0.0;
  double pupil_radius = 0.0;
  double limbic_radius = 0.0;
  double rotation = 0.0;  // radians
  double eyelid_fraction = 0.0;
  double gamma = 1.0;
};

struct SynthEye {
  GrayImage image;
  SynthTruth truth;
};

SynthEye synth_eye(const SynthEyeParams& params, std::uint64_t identity_seed, std::uint64_t capture_seed,
                   const CaptureOverrides& overrides = {});

}  // namespace iris
