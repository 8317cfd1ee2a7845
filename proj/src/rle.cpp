#include "iris/rle.hpp"

#include <algorithm>
#include <cmath>

namespace iris {

std::vector<std::uint8_t> rqf(std::span<const double> v) {
  if (v.empty()) throw Error(ErrorCode::EmptyInput, "rqf: empty input");
  const double peak = *std::max_element(v.begin(), v.end());
  if (!(peak > 0.0)) throw Error(ErrorCode::DegenerateInput, "rqf: all coefficients are zero");
  std::vector<std::uint8_t> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [peak](double x) {
    if (x < 0.0) throw Error(ErrorCode::Parameter, "rqf: negative coefficient");
    const double q = std::round(255.0 * x / peak);
    return static_cast<std::uint8_t>(std::clamp(q, 1.0, 255.0));
  });
  return out;
}

std::vector<std::size_t> run_lengths(const BinaryImage& img, Axis axis) {
  const int w = img.width();
  const int h = img.height();
  std::vector<std::size_t> lengths(img.size(), 0);
  const bool horizontal = axis == Axis::Horizontal;
  const int lines = horizontal ? h : w;
  const int span = horizontal ? w : h;
  auto at = [&](int line, int pos) -> std::size_t {
    return horizontal ? static_cast<std::size_t>(line) * w + pos
                      : static_cast<std::size_t>(pos) * w + line;
  };
  const auto px = img.pixels();
  for (int line = 0; line < lines; ++line) {
    int pos = 0;
    while (pos < span) {
      if (!px[at(line, pos)]) {
        ++pos;
        continue;
      }
      int end = pos;
      while (end < span && px[at(line, end)]) ++end;
      for (int i = pos; i < end; ++i) lengths[at(line, i)] = static_cast<std::size_t>(end - pos);
      pos = end;
    }
  }
  return lengths;
}

GrayImage rlq_directional(const BinaryImage& img, Axis axis) {
  const auto lengths = run_lengths(img, axis);
  const std::size_t longest = *std::max_element(lengths.begin(), lengths.end());
  if (longest == 0) throw Error(ErrorCode::DegenerateInput, "rlq: image has no set pixels");
  // Only lengths 1..longest occur, so quantize through a lookup table.
  std::vector<double> coeffs(longest);
  for (std::size_t i = 0; i < longest; ++i) coeffs[i] = static_cast<double>(i + 1);
  const auto table = rqf(coeffs);
  GrayImage out(img.width(), img.height());
  auto dst = out.pixels();
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    dst[i] = lengths[i] == 0 ? 0 : table[lengths[i] - 1];
  }
  return out;
}

}  // namespace iris
