#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "iris/error.hpp"
#include "iris/kmeans.hpp"

using namespace iris;

namespace {

GrayImage random_image(std::mt19937& rng, int w, int h, int lo = 0, int hi = 255) {
  GrayImage img(w, h);
  std::uniform_int_distribution<int> d(lo, hi);
  for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(d(rng));
  return img;
}

// Per-pixel squared deviation from the assigned centroid.
double sse(const GrayImage& img, const KmqResult& r) {
  double s = 0.0;
  for (std::size_t i = 0; i < img.size(); ++i) {
    const double d = img.pixels()[i] - r.centroids[r.labels[i]];
    s += d * d;
  }
  return s;
}

}  // namespace

TEST_CASE("constant image collapses to one cluster") {
  const GrayImage img(7, 5, 42);
  for (int k : {2, 3, 16}) {
    const auto r = fkmq(img, k);
    REQUIRE(r.centroids.size() == 1);
    CHECK(r.centroids[0] == 42.0);
    for (auto l : r.labels) CHECK(l == 0);
  }
}

TEST_CASE("two-valued image splits exactly by value") {
  GrayImage img(10, 10, 10);
  std::mt19937 rng(1);
  for (auto& p : img.pixels()) p = rng() % 2 ? 200 : 10;
  const auto r = fkmq(img, 2);
  REQUIRE(r.centroids == std::vector<double>{10.0, 200.0});
  for (std::size_t i = 0; i < img.size(); ++i) CHECK(r.labels[i] == (img.pixels()[i] == 200 ? 1 : 0));
}

TEST_CASE("k below 2 is a parameter error") {
  const GrayImage img(3, 3, 1);
  try {
    fkmq(img, 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parameter);
  }
}

TEST_CASE("k clamps to the number of distinct intensities") {
  GrayImage img(3, 1);
  img(0, 0) = 5;
  img(1, 0) = 9;
  img(2, 0) = 250;
  const auto r = fkmq(img, 16);
  CHECK(r.centroids == std::vector<double>{5.0, 9.0, 250.0});
}

TEST_CASE("labels point at the nearest centroid with ties to the lower index") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const auto img = random_image(rng, 31, 23);
    for (int k : {2, 3, 8, 16}) {
      for (bool reset : {false, true}) {
        const auto r = fkmq(img, k, 10, reset);
        for (std::size_t c = 1; c < r.centroids.size(); ++c) REQUIRE(r.centroids[c] > r.centroids[c - 1]);
        for (std::size_t i = 0; i < img.size(); ++i) {
          const double v = img.pixels()[i];
          const double mine = std::abs(v - r.centroids[r.labels[i]]);
          for (std::size_t j = 0; j < r.centroids.size(); ++j) {
            const double other = std::abs(v - r.centroids[j]);
            REQUIRE(mine <= other);
            if (other == mine) REQUIRE(r.labels[i] <= j);
          }
        }
      }
    }
  }
}

TEST_CASE("objective never increases across iterations") {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto img = random_image(rng, 40, 30);
    KmqOptions opts;
    opts.k = 8;
    opts.max_iter = 50;
    const auto r = fkmq(img, opts);
    REQUIRE(!r.objective.empty());
    for (std::size_t i = 1; i < r.objective.size(); ++i) REQUIRE(r.objective[i] <= r.objective[i - 1] + 1e-9);
    CHECK(r.iterations <= opts.max_iter);
  }
}

TEST_CASE("reported objective equals the per-pixel squared deviation") {
  std::mt19937 rng(13);
  const auto img = random_image(rng, 25, 25, 30, 220);
  KmqOptions opts;
  opts.k = 5;
  opts.max_iter = 100;
  const auto r = fkmq(img, opts);
  CHECK(r.objective.back() == doctest::Approx(sse(img, r)).epsilon(1e-12));
}

TEST_CASE("converged centroids are the means of their clusters") {
  std::mt19937 rng(17);
  const auto img = random_image(rng, 50, 40);
  KmqOptions opts;
  opts.k = 4;
  opts.max_iter = 500;
  const auto r = fkmq(img, opts);
  REQUIRE(r.iterations < opts.max_iter);
  std::vector<double> sum(r.centroids.size()), cnt(r.centroids.size());
  for (std::size_t i = 0; i < img.size(); ++i) {
    sum[r.labels[i]] += img.pixels()[i];
    cnt[r.labels[i]] += 1;
  }
  for (std::size_t c = 0; c < r.centroids.size(); ++c) {
    REQUIRE(cnt[c] > 0);
    CHECK(r.centroids[c] == doctest::Approx(sum[c] / cnt[c]).epsilon(1e-12));
  }
}

TEST_CASE("reset to minimum pins the first centroid") {
  std::mt19937 rng(19);
  const auto img = random_image(rng, 20, 20, 40, 200);
  int lo = 255;
  for (auto p : img.pixels()) lo = std::min<int>(lo, p);
  const auto r = fkmq(img, 6, 10, true);
  CHECK(r.centroids[0] == lo);
}

TEST_CASE("histogram counts respect the support mask") {
  GrayImage img(4, 1);
  for (int x = 0; x < 4; ++x) img(x, 0) = static_cast<std::uint8_t>(x * 10);
  BinaryImage support(4, 1, 0);
  support(1, 0) = support(3, 0) = 1;
  const auto all = histogram(img);
  const auto some = histogram(img, &support);
  CHECK(all[0] == 1);
  CHECK(all[20] == 1);
  CHECK(some[0] == 0);
  CHECK(some[10] == 1);
  CHECK(some[30] == 1);
}

TEST_CASE("fkmq is deterministic") {
  std::mt19937 rng(23);
  const auto img = random_image(rng, 64, 48);
  const auto a = fkmq(img, 16);
  const auto b = fkmq(img, 16);
  CHECK(a.labels == b.labels);
  CHECK(a.centroids == b.centroids);
}
