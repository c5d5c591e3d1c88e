#pragma once

// Independent reference computations used only by tests: brute-force sums,
// adaptive quadrature and a few classical test statistics.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "spectridge/core.hpp"

namespace oracle {

/// lambda(t) = mu + sum_{t_i < t} alpha beta e^{-beta (t - t_i)}, O(n).
inline double intensity(const std::vector<double>& times, double mu,
                        double alpha, double beta, double t) {
  double s = 0.0;
  for (double ti : times) {
    if (ti < t) s += std::exp(-beta * (t - ti));
  }
  return mu + alpha * beta * s;
}

/// Left limits lambda(t_i-) by a double sum.
inline std::vector<double> intensity_at_events(const std::vector<double>& times,
                                               double mu, double alpha,
                                               double beta) {
  std::vector<double> out;
  for (double t : times) out.push_back(intensity(times, mu, alpha, beta, t));
  return out;
}

/// Adaptive Gauss-Kronrod of g over [a, b], split at every event time so the
/// integrand is smooth on each piece.
template <typename G>
double integrate_over_events(const std::vector<double>& times, double a,
                             double b, G g) {
  std::vector<double> cuts{a};
  for (double t : times) {
    if (t > a && t < b) cuts.push_back(t);
  }
  cuts.push_back(b);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        g, cuts[i], cuts[i + 1], 6, 1e-13);
  }
  return total;
}

template <typename G>
double integrate(G g, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      g, a, b, 12, 1e-13);
}

/// f(nu) = m / |1 - h~(nu)|^2 with h~(nu) = alpha beta / (beta + 2 pi i nu).
inline double hawkes_density_transfer(double m, double alpha, double beta,
                                      double nu) {
  const std::complex<double> h =
      alpha * beta / std::complex<double>(beta, 2.0 * std::numbers::pi * nu);
  return m / std::norm(1.0 - h);
}

/// Asymptotic Kolmogorov p-value for the one-sample statistic.
inline double ks_pvalue(std::vector<double> sample, auto cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f,
                  f - static_cast<double>(i) / n});
  }
  const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) {
    p += 2.0 * (k % 2 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
  }
  return std::clamp(p, 0.0, 1.0);
}

/// Two-sided exact sign-test p-value for `wins` successes out of n at 1/2.
inline double sign_test_pvalue(std::size_t wins, std::size_t n) {
  boost::math::binomial_distribution<double> b(static_cast<double>(n), 0.5);
  const double k = static_cast<double>(std::min(wins, n - wins));
  return std::min(1.0, 2.0 * boost::math::cdf(b, k));
}

/// Two-sided exact one-sample binomial p-value (doubling the smaller tail).
inline double binomial_pvalue(std::size_t successes, std::size_t n, double p) {
  boost::math::binomial_distribution<double> b(static_cast<double>(n), p);
  const double k = static_cast<double>(successes);
  const double lower = boost::math::cdf(b, k);
  const double upper = k > 0 ? boost::math::cdf(boost::math::complement(b, k - 1))
                             : 1.0;
  return std::min(1.0, 2.0 * std::min(lower, upper));
}

inline std::vector<double> uniform_times(std::size_t n, double T,
                                         std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, T);
  std::vector<double> t(n);
  for (auto& x : t) x = u(gen);
  std::sort(t.begin(), t.end());
  return t;
}

inline double relative_error(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace oracle
