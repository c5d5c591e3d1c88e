#pragma once

// Exponential Hawkes process: kernel h(t) = alpha * beta * exp(-beta t).

#include <vector>

#include "spectridge/core.hpp"

namespace spectridge {

inline constexpr double kDefaultBurnIn = 100.0;

/// (mu, alpha, beta) with mu > 0, 0 < alpha < 1, beta > 0.
class HawkesParams {
 public:
  HawkesParams(double mu, double alpha, double beta);

  double mu() const { return mu_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  /// m = mu / (1 - alpha).
  double stationary_intensity() const { return mu_ / (1.0 - alpha_); }

 private:
  double mu_;
  double alpha_;
  double beta_;
};

/// Cluster (immigrant/offspring) simulation on [start - burn_in, end),
/// restricted to `window`.
PointPattern simulate(const HawkesParams& params,
                      const ObservationWindow& window, double burn_in,
                      const RngStream& rng);

/// lambda(t_i) for every event, via A_i = exp(-beta dt)(1 + A_{i-1}).
std::vector<double> conditional_intensity_at_events(
    const HawkesParams& params, const PointPattern& pattern);

/// Integrated intensity over the pattern window (closed form).
double compensator(const HawkesParams& params, const PointPattern& pattern);

/// m (1 + beta^2 alpha (2 - alpha) / (beta^2 (1 - alpha)^2 + 4 pi^2 nu^2)).
double spectral_density(const HawkesParams& params, double m, double nu);

/// f - m for the exponential kernel, written on (alpha, beta) only. Takes
/// omega_sq = (2 pi nu)^2 so grid loops can precompute it.
inline double compensated_density_omega(double alpha, double beta, double m,
                                        double omega_sq) {
  const double b2 = beta * beta;
  const double one_minus = 1.0 - alpha;
  return m * b2 * alpha * (2.0 - alpha) / (b2 * one_minus * one_minus + omega_sq);
}

double compensated_density(double alpha, double beta, double m, double nu);

/// mu-hat = m-hat (1 - alpha-hat).
double mu_from_branching(double m_hat, double alpha);

}  // namespace spectridge
