#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace iris {

enum class PhaseConvention : std::uint8_t {
  /// atan2(H(f), f) in (-pi, pi]; the code bit is the sign of H(f).
  TwoArgument = 0,
  /// atan(H(f) / f) in (-pi/2, pi/2), 0 where f == 0.
  SingleArgument = 1,
};

/// Discrete Hilbert transform of one window: imaginary part of the analytic
/// signal obtained by zeroing negative frequencies, doubling positive ones and
/// keeping DC and Nyquist at unit gain. The window length must be even, >= 4.
std::vector<double> hilbert_window(std::span<const double> x);

/// Per-sample analytic decomposition z = f + jH(f) = A e^{j phi}.
struct AnalyticRow {
  std::vector<double> real;
  std::vector<double> imag;
  std::vector<double> amplitude;
  std::vector<double> phase;
};

/// Splits `row` into non-overlapping windows of `window` samples, removes each
/// window's mean and builds its analytic signal.
AnalyticRow analytic_row(std::span<const double> row, int window,
                         PhaseConvention convention = PhaseConvention::TwoArgument);

std::vector<double> instant_phase(std::span<const double> row, int window,
                                  PhaseConvention convention = PhaseConvention::TwoArgument);

}  // namespace iris
