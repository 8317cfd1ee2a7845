#include "iris/image.hpp"

#include <algorithm>

namespace iris {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput: return "empty-input";
    case ErrorCode::InvalidRun: return "invalid-run";
    case ErrorCode::DegenerateInput: return "degenerate-input";
    case ErrorCode::Parameter: return "parameter";
    case ErrorCode::Shape: return "shape";
    case ErrorCode::NoPupilIndicator: return "no-pupil-indicator";
    case ErrorCode::InvalidSeed: return "invalid-seed";
    case ErrorCode::EmptyMask: return "empty-mask";
    case ErrorCode::NoIrisAnnulus: return "no-iris-annulus";
    case ErrorCode::SegmentationFailure: return "segmentation-failure";
    case ErrorCode::DegenerateRing: return "degenerate-ring";
    case ErrorCode::IncomparableCodes: return "incomparable-codes";
    case ErrorCode::InsufficientData: return "insufficient-data";
    case ErrorCode::Io: return "io";
    case ErrorCode::Format: return "format";
  }
  return "unknown";
}

std::size_t count_set(const BinaryImage& img) {
  const auto px = img.pixels();
  return static_cast<std::size_t>(std::count_if(px.begin(), px.end(), [](auto v) { return v != 0; }));
}

BinaryImage logical_and(const BinaryImage& a, const BinaryImage& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorCode::Shape, "logical_and: dimension mismatch");
  }
  BinaryImage out(a.width(), a.height());
  auto dst = out.pixels();
  const auto pa = a.pixels();
  const auto pb = b.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = (pa[i] && pb[i]) ? 1 : 0;
  return out;
}

GrayImage to_gray(const BinaryImage& img) {
  GrayImage out(img.width(), img.height());
  auto dst = out.pixels();
  const auto src = img.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i] ? 255 : 0;
  return out;
}

}  // namespace iris
