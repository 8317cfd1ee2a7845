#include "helpers.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "iris/hilbert.hpp"

using namespace iris;

namespace {

constexpr double kPi = std::numbers::pi;

// Oracle: textbook discrete Hilbert transform, multiplying the spectrum by
// -j sign(k) and zeroing DC and Nyquist.
std::vector<double> dft_hilbert(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> X(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t t = 0; t < n; ++t) X[k] += x[t] * std::polar(1.0, -2 * kPi * double(k) * double(t) / double(n));
  for (std::size_t k = 0; k < n; ++k) {
    if (k == 0 || 2 * k == n) X[k] = 0;
    else if (2 * k < n) X[k] *= std::complex<double>(0, -1);
    else X[k] *= std::complex<double>(0, 1);
  }
  std::vector<double> h(n);
  for (std::size_t t = 0; t < n; ++t) {
    std::complex<double> acc;
    for (std::size_t k = 0; k < n; ++k) acc += X[k] * std::polar(1.0, 2 * kPi * double(k) * double(t) / double(n));
    h[t] = acc.real() / double(n);
  }
  return h;
}

// Random window with its DC and Nyquist components projected out.
std::vector<double> random_clean_window(std::mt19937& rng, std::size_t s) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> x(s);
  for (auto& v : x) v = g(rng);
  double mean = 0, nyq = 0;
  for (std::size_t k = 0; k < s; ++k) {
    mean += x[k] / double(s);
    nyq += x[k] * (k % 2 ? -1.0 : 1.0) / double(s);
  }
  for (std::size_t k = 0; k < s; ++k) x[k] -= mean + nyq * (k % 2 ? -1.0 : 1.0);
  return x;
}

double norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("hilbert of a cosine is the sine") {
  for (std::size_t s : {8u, 16u}) {
    std::vector<double> x(s);
    for (std::size_t k = 0; k < s; ++k) x[k] = std::cos(2 * kPi * double(k) / double(s));
    const auto h = hilbert_window(x);
    for (std::size_t k = 0; k < s; ++k) CHECK(std::abs(h[k] - std::sin(2 * kPi * double(k) / double(s))) <= 1e-9);
  }
}

TEST_CASE("hilbert of a constant is exactly zero") {
  for (double c : {0.0, 1.0, 113.7, -5.25}) {
    const std::vector<double> x(16, c);
    for (double v : hilbert_window(x)) CHECK(v == 0.0);
  }
}

TEST_CASE("hilbert window length is checked") {
  check_error([] { hilbert_window(std::vector<double>(7, 1.0)); }, ErrorCode::Parameter);
  check_error([] { hilbert_window(std::vector<double>(2, 1.0)); }, ErrorCode::Parameter);
}

TEST_CASE("hilbert matches the spectral oracle") {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  for (std::size_t s : {4u, 6u, 8u, 16u, 32u}) {
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> x(s);
      for (auto& v : x) v = u(rng);
      const auto h = hilbert_window(x);
      const auto want = dft_hilbert(x);
      for (std::size_t k = 0; k < s; ++k) REQUIRE(std::abs(h[k] - want[k]) <= 1e-9);
    }
  }
}

TEST_CASE("hilbert twice negates and preserves energy on clean windows") {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t s = trial % 2 ? 8 : 16;
    const auto x = random_clean_window(rng, s);
    const auto h = hilbert_window(x);
    const auto hh = hilbert_window(h);
    const double nx = norm(x);
    for (std::size_t k = 0; k < s; ++k) REQUIRE(std::abs(hh[k] + x[k]) <= 1e-9 * std::max(1.0, nx));
    REQUIRE(std::abs(norm(h) - nx) <= 1e-9 * nx);
  }
}

TEST_CASE("analytic row decomposition") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  std::vector<double> row(64);
  for (auto& v : row) v = u(rng);
  const auto a = analytic_row(row, 8);
  for (std::size_t w = 0; w < 8; ++w) {
    double mean = 0;
    for (std::size_t k = 0; k < 8; ++k) mean += row[w * 8 + k] / 8.0;
    for (std::size_t k = 0; k < 8; ++k) {
      const std::size_t i = w * 8 + k;
      CHECK(a.real[i] == row[i] - mean);
      CHECK(a.amplitude[i] * a.amplitude[i] == doctest::Approx(a.real[i] * a.real[i] + a.imag[i] * a.imag[i]));
      CHECK(a.phase[i] > -kPi);
      CHECK(a.phase[i] <= kPi);
    }
  }
  check_error([&] { analytic_row(std::span<const double>(row).first(60), 8); }, ErrorCode::Shape);
}

TEST_CASE("phase of an analytic cosine ramps from zero") {
  const std::size_t s = 16;
  std::vector<double> x(s);
  for (std::size_t k = 0; k < s; ++k) x[k] = std::cos(2 * kPi * double(k) / double(s));
  const auto phase = instant_phase(x, int(s));
  CHECK(std::abs(phase[0]) <= 1e-12);
  for (std::size_t k = 1; k < s / 2; ++k) CHECK(phase[k] > phase[k - 1]);
  for (std::size_t k = 0; k < s; ++k) {
    CHECK(std::abs(std::remainder(phase[k] - 2 * kPi * double(k) / double(s), 2 * kPi)) <= 1e-9);
    // Bits: 1 on the first half cycle, 0 on the second.
    const bool bit = phase[k] >= 0;
    if (k % (s / 2) == 0) continue;  // quadrature is zero up to rounding
    CHECK(bit == (k < s / 2));
  }
}

TEST_CASE("first quadrant gives positive phase under both conventions") {
  // cos + sin has a positive analytic part and quadrature in the first window samples.
  const std::size_t s = 8;
  std::vector<double> x(s);
  for (std::size_t k = 0; k < s; ++k) x[k] = std::cos(2 * kPi * double(k) / double(s) - kPi / 4);
  const auto a2 = analytic_row(x, int(s), PhaseConvention::TwoArgument);
  const auto a1 = analytic_row(x, int(s), PhaseConvention::SingleArgument);
  for (std::size_t k = 0; k < s; ++k) {
    if (a2.real[k] > 1e-9 && a2.imag[k] > 1e-9) {
      CHECK(a2.phase[k] > 0);
      CHECK(a1.phase[k] > 0);
    }
  }
}

TEST_CASE("code bit sign table") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> row(32);
    for (auto& v : row) v = u(rng);
    const auto two = analytic_row(row, 8, PhaseConvention::TwoArgument);
    const auto one = analytic_row(row, 8, PhaseConvention::SingleArgument);
    for (std::size_t i = 0; i < row.size(); ++i) {
      REQUIRE((two.phase[i] >= 0) == (two.imag[i] >= 0));
      REQUIRE((one.phase[i] >= 0) == (one.real[i] * one.imag[i] >= 0));
      REQUIRE(std::abs(one.phase[i]) < kPi / 2);
    }
  }
}

TEST_CASE("single-argument phase is zero where the real part vanishes") {
  // Mean-subtracted window [1, -1, ...] style with an exact zero sample.
  const std::vector<double> x{0, 1, 0, -1, 0, 1, 0, -1};
  const auto a = analytic_row(x, 8, PhaseConvention::SingleArgument);
  for (std::size_t i = 0; i < x.size(); i += 2) {
    REQUIRE(a.real[i] == 0.0);
    CHECK(a.phase[i] == 0.0);
  }
}
