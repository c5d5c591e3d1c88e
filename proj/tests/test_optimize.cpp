#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "spectridge/hawkes.hpp"
#include "spectridge/optimize.hpp"

using namespace spectridge;

TEST_CASE("quadratic bowls are solved to 1e-6") {
  const FeasibleRegion region;
  const std::vector<double> target{0.4, 3.0};
  const ObjectiveFn bowl = [&](std::span<const double> t) {
    return (t[0] - target[0]) * (t[0] - target[0]) +
           (t[1] - target[1]) * (t[1] - target[1]);
  };
  const auto r = minimize(bowl, region, default_starts(region, 1.0));
  CHECK(std::abs(r.theta_hat[0] - target[0]) < 1e-6);
  CHECK(std::abs(r.theta_hat[1] - target[1]) < 1e-6);
  CHECK(r.converged);
  CHECK(r.restarts_used == 3);

  FeasibleRegion region3;
  region3.mu_free = true;
  const std::vector<double> target3{1.3, 0.7, 0.9};
  const ObjectiveFn bowl3 = [&](std::span<const double> t) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) s += (t[i] - target3[i]) * (t[i] - target3[i]);
    return s;
  };
  const auto r3 = minimize(bowl3, region3, default_starts(region3, 2.0));
  for (int i = 0; i < 3; ++i) CHECK(std::abs(r3.theta_hat[i] - target3[i]) < 1e-6);
}

TEST_CASE("maximum likelihood on Poisson data recovers N / T") {
  const PointPattern p(oracle::uniform_times(400, 200.0, 31), ObservationWindow(0.0, 200.0));
  FeasibleRegion region;
  region.mu_free = true;
  // Excitation pinned near zero; the other two coordinates are kept well posed.
  const ObjectiveFn f = [&](std::span<const double> t) {
    return ml_nll(p, t[0], 1e-9, 1.0) + (t[1] - 0.5) * (t[1] - 0.5) +
           (t[2] - 2.0) * (t[2] - 2.0);
  };
  const auto r = minimize(f, region, default_starts(region, p.mean_rate()));
  CHECK(std::abs(r.theta_hat[0] - 2.0) < 1e-4);
}

TEST_CASE("sls minimiser agrees with an exhaustive grid search") {
  const auto pattern = simulate(HawkesParams(1.0, 0.5, 2.0), ObservationWindow(0.0, 400.0),
                                kDefaultBurnIn, RngStream(2024, 4));
  const auto pg = std::make_shared<const Periodogram>(
      periodogram(pattern, fourier_grid(400.0, 2.0), pattern.mean_rate()));
  const double m = pattern.mean_rate();
  const auto objective = Objective::spectral(SpectralMethod::SLS, pg, m);
  const FeasibleRegion region;
  const auto r = minimize(objective, region, default_starts(region, m));

  double best = std::numeric_limits<double>::infinity();
  std::vector<double> argbest;
  for (int i = 0; i < 200; ++i) {
    for (int j = 0; j < 200; ++j) {
      const std::vector<double> t{
          region.alpha.lower + (region.alpha.upper - region.alpha.lower) * (i + 0.5) / 200.0,
          region.beta.lower + (region.beta.upper - region.beta.lower) * (j + 0.5) / 200.0};
      const double v = objective(t);
      if (v < best) best = v, argbest = t;
    }
  }
  CHECK(r.objective_value <= best + 1e-12);
  CHECK(std::abs(r.theta_hat[0] - argbest[0]) < 0.2);
  CHECK(std::abs(r.theta_hat[1] - argbest[1]) < 0.2);
}

TEST_CASE("result invariants: descent, feasibility, reported value") {
  const auto pattern = simulate(HawkesParams(0.8, 0.6, 1.5), ObservationWindow(0.0, 100.0),
                                kDefaultBurnIn, RngStream(7, 7));
  const auto data = std::make_shared<const PointPattern>(pattern);
  const auto pg = std::make_shared<const Periodogram>(
      periodogram(pattern, fourier_grid(100.0, 2.0), pattern.mean_rate()));
  const double m = pattern.mean_rate();
  const std::vector<Objective> objectives{
      Objective::spectral(SpectralMethod::SLS, pg, m, 0.01),
      Objective::spectral(SpectralMethod::SL, pg, m),
      Objective::temporal(TemporalMethod::OLS, data),
      Objective::temporal(TemporalMethod::ML, data, 0.1),
  };
  for (const auto& obj : objectives) {
    const auto region = FeasibleRegion::for_method(obj.method());
    const auto starts = default_starts(region, m);
    const auto r = minimize(obj, region, starts);
    CHECK(region.contains(r.theta_hat));
    CHECK(r.objective_value == obj(r.theta_hat));
    for (const auto& s : starts) CHECK(r.objective_value <= obj(s));
    const auto again = minimize(obj, region, starts);
    CHECK(again.theta_hat == r.theta_hat);
    CHECK(again.objective_value == r.objective_value);
    CHECK(again.best_start == r.best_start);
  }
}

TEST_CASE("transform round trip") {
  FeasibleRegion region;
  region.mu_free = true;
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const std::vector<double> theta{
        region.mu.lower + (region.mu.upper - region.mu.lower) * (0.001 + 0.998 * u(gen)),
        region.alpha.lower + (region.alpha.upper - region.alpha.lower) * (0.001 + 0.998 * u(gen)),
        region.beta.lower + (region.beta.upper - region.beta.lower) * (0.001 + 0.998 * u(gen))};
    const auto back = region.to_constrained(region.to_unconstrained(theta));
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(back[k] - theta[k]) <= 1e-12 * std::max(1.0, std::abs(theta[k])));
    }
  }
  const FeasibleRegion r2;
  const auto u2 = r2.to_unconstrained(std::vector<double>{0.5, 2.0});
  CHECK(u2.size() == 2);
  for (double big : {-1e6, 1e6}) {
    const auto t = r2.to_constrained(std::vector<double>{big, big});
    CHECK(r2.contains(t));
  }
}

TEST_CASE("starts and errors") {
  const FeasibleRegion spectral_region;
  const auto s2 = default_starts(spectral_region, 2.0);
  REQUIRE(s2.size() == 3);
  CHECK(s2[0] == std::vector<double>{0.3, 1.0});
  CHECK(s2[1] == std::vector<double>{0.5, 2.0});
  CHECK(s2[2] == std::vector<double>{0.7, 5.0});
  const auto temporal = FeasibleRegion::for_method(Method::ML);
  const auto s3 = default_starts(temporal, 2.0);
  REQUIRE(s3.size() == 6);
  for (const auto& s : s3) CHECK((s[0] == 1.0 || s[0] == 2.0));

  const ObjectiveFn nan_fn = [](std::span<const double>) {
    return std::numeric_limits<double>::quiet_NaN();
  };
  CHECK_THROWS_AS(minimize(nan_fn, spectral_region, s2), EstimationFailure);
  CHECK_THROWS_AS(minimize(nan_fn, spectral_region, {}), std::invalid_argument);
  CHECK_THROWS_AS(minimize(nan_fn, spectral_region, {{1.5, 2.0}}), std::invalid_argument);

  FeasibleRegion bad;
  bad.beta = {5.0, 1.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("iteration cap and tie-breaking") {
  const FeasibleRegion region;
  const ObjectiveFn bowl = [](std::span<const double> t) {
    return (t[0] - 0.2) * (t[0] - 0.2) + (t[1] - 7.0) * (t[1] - 7.0);
  };
  NelderMeadOptions capped;
  capped.max_iterations = 3;
  CHECK_FALSE(minimize(bowl, region, default_starts(region, 1.0), capped).converged);

  const ObjectiveFn flat = [](std::span<const double>) { return 1.0; };
  CHECK(minimize(flat, region, default_starts(region, 1.0)).best_start == 0);
  // Equal minima from distinct starts resolve to the first start.
  const ObjectiveFn two_wells = [](std::span<const double> t) {
    const double a = (t[0] - 0.3) * (t[0] - 0.3) + (t[1] - 1.0) * (t[1] - 1.0);
    const double b = (t[0] - 0.7) * (t[0] - 0.7) + (t[1] - 5.0) * (t[1] - 5.0);
    return std::min(a, b);
  };
  const auto r = minimize(two_wells, region, {{0.7, 5.0}, {0.3, 1.0}});
  CHECK(r.best_start == 0);
  CHECK(r.theta_hat[0] == doctest::Approx(0.7));
}
