#pragma once

// Fourier-frequency grids over D = [-A, A] \ {0}, centered periodograms of
// point patterns, their rescaled versions for thinned subsamples, and the
// Riemann quadrature used for every spectral functional.

#include <span>
#include <vector>

#include "spectridge/core.hpp"

namespace spectridge {

/// Frequencies j / T for 0 < |j| <= floor(A T), ordered from -A to A, with
/// weight 1 / T (halved at the two outermost frequencies).
struct FrequencyGrid {
  std::vector<double> frequencies;
  std::vector<double> weights;
  /// (2 pi nu)^2 per frequency, cached for density evaluation.
  std::vector<double> omega_sq;
  double half_width = 0.0;
  double spacing = 0.0;
  /// Window length whose Fourier frequencies make up the grid.
  double fourier_length = 0.0;

  std::size_t size() const { return frequencies.size(); }
  double weight_sum() const;
};

/// Throws std::domain_error when T <= 0, A <= 0 or A T < 1.
FrequencyGrid fourier_grid(double T, double A);

enum class PeriodogramKind { raw, rescaled_train, rescaled_test };

struct Periodogram {
  FrequencyGrid grid;
  std::vector<double> values;
  double m_hat = 0.0;
  PeriodogramKind kind = PeriodogramKind::raw;
  /// Retention probability behind a rescaled periodogram; 1 for raw.
  double p = 1.0;
};

/// (1/T) |sum_k e^{-2 pi i nu t_k} - rate * int_0^T e^{-2 pi i nu t} dt|^2
/// with times measured from the window start. On the window's own Fourier
/// frequencies the centering integral vanishes and a trigonometric
/// recurrence replaces per-event sin/cos calls.
Periodogram periodogram(const PointPattern& pattern, const FrequencyGrid& grid,
                        double centering_rate);

/// Direct O(n k) evaluation with the centering term computed explicitly.
Periodogram periodogram_direct(const PointPattern& pattern,
                               const FrequencyGrid& grid,
                               double centering_rate);

/// (I - p(1-p) m_hat) / p^2. Negative values are kept.
Periodogram rescale_train(const Periodogram& raw, double p, double m_hat);

/// (I - p(1-p) m_hat) / (1-p)^2.
Periodogram rescale_test(const Periodogram& raw, double p, double m_hat);

/// sum_j w_j v_j. Throws std::invalid_argument on a length mismatch.
double quadrature(const FrequencyGrid& grid, std::span<const double> values);

}  // namespace spectridge
