#include "iris/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include "iris/error.hpp"

namespace iris {
namespace {

void check_window(std::size_t s) {
  if (s < 4 || s % 2 != 0) {
    throw Error(ErrorCode::Parameter, "hilbert: window length must be even and at least 4");
  }
}

double phase_of(double f, double h, PhaseConvention convention) {
  if (convention == PhaseConvention::SingleArgument) {
    return f == 0.0 ? 0.0 : std::atan(h / f);
  }
  const double phi = std::atan2(h, f);
  return phi == -std::numbers::pi ? std::numbers::pi : phi;
}

}  // namespace

std::vector<double> hilbert_window(std::span<const double> x) {
  const std::size_t s = x.size();
  check_window(s);
  std::vector<double> h(s, 0.0);
  if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) return h;
  // The DC bin never reaches the imaginary part, so transform the centered
  // window; this also keeps large offsets from swamping the rounding.
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(s);
  // Twiddles indexed by (j*k) mod s keep every factor exact to one rounding.
  std::vector<std::complex<double>> twiddle(s);
  for (std::size_t m = 0; m < s; ++m) {
    twiddle[m] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(s));
  }
  std::vector<std::complex<double>> spectrum(s);
  for (std::size_t k = 0; k < s; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < s; ++j) acc += (x[j] - mean) * twiddle[(j * k) % s];
    spectrum[k] = acc;
  }
  const std::size_t nyquist = s / 2;
  for (std::size_t k = 1; k < nyquist; ++k) spectrum[k] *= 2.0;
  for (std::size_t k = nyquist + 1; k < s; ++k) spectrum[k] = 0.0;

  for (std::size_t j = 0; j < s; ++j) {
    std::complex<double> acc = 0.0;
    for (std::size_t k = 0; k < s; ++k) acc += spectrum[k] * std::conj(twiddle[(j * k) % s]);
    h[j] = acc.imag() / static_cast<double>(s);
  }
  return h;
}

AnalyticRow analytic_row(std::span<const double> row, int window, PhaseConvention convention) {
  if (window < 1 || row.size() % static_cast<std::size_t>(window) != 0) {
    throw Error(ErrorCode::Shape, "instant_phase: row length is not a multiple of the window size");
  }
  check_window(static_cast<std::size_t>(window));
  AnalyticRow out;
  out.real.reserve(row.size());
  for (std::size_t start = 0; start < row.size(); start += window) {
    const auto block = row.subspan(start, window);
    const double mean = std::accumulate(block.begin(), block.end(), 0.0) / window;
    std::vector<double> centered(block.begin(), block.end());
    for (auto& v : centered) v -= mean;
    const auto h = hilbert_window(centered);
    out.real.insert(out.real.end(), centered.begin(), centered.end());
    out.imag.insert(out.imag.end(), h.begin(), h.end());
  }
  out.amplitude.resize(row.size());
  out.phase.resize(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) {
    out.amplitude[i] = std::hypot(out.real[i], out.imag[i]);
    out.phase[i] = phase_of(out.real[i], out.imag[i], convention);
  }
  return out;
}

std::vector<double> instant_phase(std::span<const double> row, int window, PhaseConvention convention) {
  return analytic_row(row, window, convention).phase;
}

}  // namespace iris
