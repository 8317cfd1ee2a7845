#include <doctest.h>

#include <cmath>
#include <random>

#include "iris/error.hpp"
#include "iris/rle.hpp"

using namespace iris;

namespace {

std::vector<RleRun<int>> runs(std::initializer_list<std::pair<int, std::size_t>> list) {
  std::vector<RleRun<int>> out;
  for (auto [v, n] : list) out.push_back({v, n});
  return out;
}

// Oracle: longest streak of equal values through each index, by scanning
// left and right from it.
std::vector<std::size_t> brute_runs(const std::vector<int>& v, int on) {
  std::vector<std::size_t> out(v.size(), 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != on) continue;
    std::size_t l = i, r = i;
    while (l > 0 && v[l - 1] == on) --l;
    while (r + 1 < v.size() && v[r + 1] == on) ++r;
    out[i] = r - l + 1;
  }
  return out;
}

BinaryImage from_rows(const std::vector<std::vector<int>>& rows) {
  BinaryImage img(static_cast<int>(rows[0].size()), static_cast<int>(rows.size()));
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) img(x, y) = static_cast<std::uint8_t>(rows[y][x]);
  return img;
}

}  // namespace

TEST_CASE("rle_encode counts maximal runs") {
  std::vector<int> v{1, 1, 1, 1, 0, 0, 1, 1, 1, 1, 1, 1};
  CHECK(rle_encode(v) == runs({{1, 4}, {0, 2}, {1, 6}}));
  CHECK(rle_encode(std::vector<int>{7}) == runs({{7, 1}}));
  CHECK(rle_encode(std::vector<int>{0, 0, 0}) == runs({{0, 3}}));
}

TEST_CASE("rle_encode rejects empty input") {
  try {
    rle_encode(std::vector<int>{});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyInput);
  }
}

TEST_CASE("rle_decode inverts and validates") {
  CHECK(rle_decode(runs({{1, 4}, {0, 2}, {1, 6}})) == std::vector<int>{1, 1, 1, 1, 0, 0, 1, 1, 1, 1, 1, 1});
  CHECK(rle_decode(runs({{5, 1}})) == std::vector<int>{5});
  try {
    rle_decode(runs({{1, 2}, {0, 0}}));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidRun);
  }
  CHECK_THROWS_AS(rle_decode(std::vector<RleRun<int>>{}), Error);
}

TEST_CASE("encode of decode equals the normalized runs") {
  const auto r = runs({{3, 2}, {3, 1}, {4, 5}, {4, 1}, {3, 2}});
  CHECK(rle_encode(rle_decode(r)) == rle_normalize(std::span<const RleRun<int>>(r)));
  CHECK(rle_normalize(std::span<const RleRun<int>>(r)) == runs({{3, 3}, {4, 6}, {3, 2}}));
}

TEST_CASE("round trip on random binary and 8-bit vectors") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 200;
    const int range = trial % 2 == 0 ? 2 : 256;
    std::vector<int> v(n);
    for (auto& x : v) x = static_cast<int>(rng() % range);
    const auto enc = rle_encode(v);
    REQUIRE(rle_decode(enc) == v);
    for (std::size_t i = 1; i < enc.size(); ++i) REQUIRE(enc[i].value != enc[i - 1].value);
  }
}

TEST_CASE("rqf requantizes against the maximum") {
  CHECK(rqf(std::vector<double>{3, 6}) == std::vector<std::uint8_t>{128, 255});
  CHECK(rqf(std::vector<double>{6, 6}) == std::vector<std::uint8_t>{255, 255});
  CHECK(rqf(std::vector<double>{1, 255000}) == std::vector<std::uint8_t>{1, 255});
  CHECK_THROWS_AS(rqf(std::vector<double>{0, 0}), Error);
}

TEST_CASE("rqf output stays in [1, 255] with the maximum at 255") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(1e-6, 1000.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(1 + rng() % 50);
    for (auto& x : v) x = u(rng);
    const auto q = rqf(v);
    const double mx = *std::max_element(v.begin(), v.end());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double want = std::min(255.0, std::max(1.0, std::round(255.0 * v[i] / mx)));
      REQUIRE(q[i] == static_cast<std::uint8_t>(want));
      if (v[i] == mx) REQUIRE(q[i] == 255);
    }
  }
}

TEST_CASE("rlq on a single row") {
  const auto img = from_rows({{1, 1, 1, 1, 0, 0, 1, 1, 1, 1, 1, 1}});
  const auto q = rlq_directional(img, Axis::Horizontal);
  const std::vector<int> want{170, 170, 170, 170, 0, 0, 255, 255, 255, 255, 255, 255};
  for (int x = 0; x < 12; ++x) CHECK(q(x, 0) == want[x]);
}

TEST_CASE("rlq examples") {
  const BinaryImage ones(3, 3, 1);
  const auto v = rlq_directional(ones, Axis::Vertical);
  for (auto p : v.pixels()) CHECK(p == 255);

  const auto col = from_rows({{1}, {0}, {1}, {1}});
  const auto c = rlq_directional(col, Axis::Vertical);
  CHECK(c(0, 0) == 128);
  CHECK(c(0, 1) == 0);
  CHECK(c(0, 2) == 255);
  CHECK(c(0, 3) == 255);

  CHECK_THROWS_AS(rlq_directional(BinaryImage(4, 4, 0), Axis::Horizontal), Error);
}

TEST_CASE("rlq matches a brute-force run oracle and keeps the zero set") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int w = 1 + rng() % 17, h = 1 + rng() % 13;
    BinaryImage img(w, h);
    for (auto& p : img.pixels()) p = rng() % 3 != 0;
    if (count_set(img) == 0) img(0, 0) = 1;
    for (Axis axis : {Axis::Horizontal, Axis::Vertical}) {
      std::vector<std::size_t> lens(static_cast<std::size_t>(w) * h);
      std::size_t longest = 0;
      if (axis == Axis::Horizontal) {
        for (int y = 0; y < h; ++y) {
          std::vector<int> line(w);
          for (int x = 0; x < w; ++x) line[x] = img(x, y);
          const auto r = brute_runs(line, 1);
          for (int x = 0; x < w; ++x) lens[y * w + x] = r[x];
        }
      } else {
        for (int x = 0; x < w; ++x) {
          std::vector<int> line(h);
          for (int y = 0; y < h; ++y) line[y] = img(x, y);
          const auto r = brute_runs(line, 1);
          for (int y = 0; y < h; ++y) lens[y * w + x] = r[y];
        }
      }
      for (auto l : lens) longest = std::max(longest, l);
      REQUIRE(run_lengths(img, axis) == lens);
      const auto q = rlq_directional(img, axis);
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const auto l = lens[y * w + x];
          const int want = l == 0 ? 0
                                  : static_cast<int>(std::min(
                                        255.0, std::max(1.0, std::round(255.0 * l / static_cast<double>(longest)))));
          REQUIRE(q(x, y) == want);
          REQUIRE((q(x, y) == 0) == (img(x, y) == 0));
        }
      }
    }
  }
}
