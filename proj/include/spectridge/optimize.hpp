#pragma once

// Box-constrained derivative-free minimisation. Every coordinate is mapped
// to an unconstrained one (logit for alpha, logit of log-position for beta
// and mu) and a Nelder-Mead simplex runs from each start.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "spectridge/contrasts.hpp"

namespace spectridge {

struct Bounds {
  double lower;
  double upper;
};

/// Parameter box. Coordinates are (alpha, beta), or (mu, alpha, beta) when
/// mu is free.
struct FeasibleRegion {
  Bounds alpha{1e-4, 1.0 - 1e-4};
  Bounds beta{1e-4, 50.0};
  Bounds mu{1e-6, 100.0};
  bool mu_free = false;

  static FeasibleRegion for_method(Method m) {
    FeasibleRegion r;
    r.mu_free = !is_spectral(m);
    return r;
  }

  std::size_t dimension() const { return mu_free ? 3 : 2; }
  /// Throws std::invalid_argument when some bound pair is not ordered.
  void validate() const;
  bool contains(std::span<const double> theta) const;

  std::vector<double> to_unconstrained(std::span<const double> theta) const;
  std::vector<double> to_constrained(std::span<const double> u) const;
};

struct OptimResult {
  std::vector<double> theta_hat;
  double objective_value = 0.0;
  bool converged = false;
  int iterations = 0;
  int restarts_used = 0;
  std::size_t best_start = 0;
};

struct NelderMeadOptions {
  double initial_step = 0.5;
  double diameter_tolerance = 1e-8;
  int max_iterations = 500;
};

using ObjectiveFn = std::function<double(std::span<const double>)>;

/// Best terminal point over all starts; ties within 1e-12 go to the lowest
/// start index. Throws EstimationFailure if every start ends non-finite and
/// std::invalid_argument when no start is given or a start lies outside.
OptimResult minimize(const ObjectiveFn& objective, const FeasibleRegion& region,
                     const std::vector<std::vector<double>>& starts,
                     const NelderMeadOptions& options = {});

OptimResult minimize(const Objective& objective, const FeasibleRegion& region,
                     const std::vector<std::vector<double>>& starts,
                     const NelderMeadOptions& options = {});

/// (alpha, beta) in {(0.3, 1), (0.5, 2), (0.7, 5)}, crossed with
/// mu in {m_hat / 2, m_hat} when mu is free (mu clamped into its bounds).
std::vector<std::vector<double>> default_starts(const FeasibleRegion& region,
                                                double m_hat);

}  // namespace spectridge
