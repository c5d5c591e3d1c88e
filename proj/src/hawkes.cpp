#include "spectridge/hawkes.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spectridge {

HawkesParams::HawkesParams(double mu, double alpha, double beta)
    : mu_(mu), alpha_(alpha), beta_(beta) {
  if (!(mu > 0.0) || !(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0) ||
      !std::isfinite(mu) || !std::isfinite(beta)) {
    throw std::domain_error(
        "Hawkes parameters require mu > 0, 0 < alpha < 1, beta > 0");
  }
}

PointPattern simulate(const HawkesParams& params,
                      const ObservationWindow& window, double burn_in,
                      const RngStream& rng) {
  if (!(burn_in >= 0.0)) {
    throw std::domain_error("burn-in must be nonnegative");
  }
  auto engine = rng.engine();
  const double origin = window.start() - burn_in;
  const double span = window.end() - origin;

  std::poisson_distribution<long> immigrant_count(params.mu() * span);
  std::uniform_real_distribution<double> position(origin, window.end());
  std::poisson_distribution<long> offspring_count(params.alpha());
  std::exponential_distribution<double> delay(params.beta());

  // Breadth-first over generations; offspring at or past window.end are
  // discarded, and their own descendants could only land later still.
  std::vector<double> generation;
  const long n_immigrants = immigrant_count(engine);
  generation.reserve(static_cast<std::size_t>(n_immigrants));
  for (long i = 0; i < n_immigrants; ++i) {
    generation.push_back(position(engine));
  }
  std::vector<double> all;
  std::vector<double> next;
  while (!generation.empty()) {
    next.clear();
    for (double parent : generation) {
      const long children = offspring_count(engine);
      for (long c = 0; c < children; ++c) {
        const double t = parent + delay(engine);
        if (t < window.end()) next.push_back(t);
      }
    }
    all.insert(all.end(), generation.begin(), generation.end());
    generation.swap(next);
  }
  return PointPattern::from_unsorted(std::move(all), window);
}

std::vector<double> conditional_intensity_at_events(
    const HawkesParams& params, const PointPattern& pattern) {
  const auto& t = pattern.times();
  std::vector<double> lambda(t.size());
  const double scale = params.alpha() * params.beta();
  double a = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i > 0) a = std::exp(-params.beta() * (t[i] - t[i - 1])) * (1.0 + a);
    lambda[i] = params.mu() + scale * a;
  }
  return lambda;
}

double compensator(const HawkesParams& params, const PointPattern& pattern) {
  const double end = pattern.window().end();
  double excitation = 0.0;
  for (double ti : pattern.times()) {
    excitation += -std::expm1(-params.beta() * (end - ti));
  }
  return params.mu() * pattern.window().length() +
         params.alpha() * excitation;
}

double spectral_density(const HawkesParams& params, double m, double nu) {
  const double omega = 2.0 * std::numbers::pi * nu;
  return m + compensated_density_omega(params.alpha(), params.beta(), m,
                                       omega * omega);
}

double compensated_density(double alpha, double beta, double m, double nu) {
  const double omega = 2.0 * std::numbers::pi * nu;
  return compensated_density_omega(alpha, beta, m, omega * omega);
}

double mu_from_branching(double m_hat, double alpha) {
  return m_hat * (1.0 - alpha);
}

}  // namespace spectridge
