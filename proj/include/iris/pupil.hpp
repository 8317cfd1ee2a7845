#pragma once

#include "iris/image.hpp"
#include "iris/kmeans.hpp"

namespace iris {

/// Axis-aligned ellipse approximating the pupil, plus the filled pupil segment.
struct PupilFit {
  double center_x = 0.0;
  double center_y = 0.0;
  double semi_axis_h = 0.0;
  double semi_axis_v = 0.0;
  double radius = 0.0;  // mean of the semi-axes
  BinaryImage pupil_mask;
};

struct PupilFinderOptions {
  int cluster_k = 16;
  int cluster_max_iter = 10;
  bool reset_first_to_min = false;
  int indicator_k = 2;
};

/// Pupil indicator together with the run-length thresholds that produced it.
struct PupilIndicator {
  BinaryImage mask;
  int threshold_vertical = 0;    // lowest RLV value kept
  int threshold_horizontal = 0;  // lowest RLH value kept
  bool used_fallback = false;    // argmax-membership rule instead of clustering
};

/// Intermediate rasters of find_pupil, in pipeline order.
struct PupilStages {
  BinaryImage cluster;
  GrayImage rlv;
  GrayImage rlh;
  BinaryImage indicator;
  Pixel seed;
  BinaryImage flooded;
  BinaryImage filled;
  int threshold_vertical = 0;
  int threshold_horizontal = 0;
};

/// Pixels whose k-means label is the darkest cluster.
BinaryImage extract_pupil_cluster(const GrayImage& img, int k = 16, int max_iter = 10,
                                  bool reset_first_to_min = false);

/// Erosion-resilient core of the pupil cluster: pixels lying on long runs both
/// vertically and horizontally.
PupilIndicator compute_pupil_indicator(const BinaryImage& pc, int k = 2);
BinaryImage pupil_indicator(const BinaryImage& pc, int k = 2);

/// 4-connected component of `pc` containing `seed`.
BinaryImage flood_fill_pupil(const BinaryImage& pc, Pixel seed);

/// Fills every row or column 0-run enclosed by set pixels, repeated to a fixpoint.
BinaryImage fill_specular_lights(const BinaryImage& p);

/// Bounding-box ellipse of the mask.
PupilFit fit_pupil(const BinaryImage& p);

PupilFit find_pupil(const GrayImage& img, const PupilFinderOptions& opts = {},
                    PupilStages* stages = nullptr);

}  // namespace iris
