#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "spectridge/hawkes.hpp"
#include "spectridge/spectral.hpp"

using namespace spectridge;

namespace {

PointPattern random_pattern(std::size_t n, double T, std::uint64_t seed) {
  return PointPattern(oracle::uniform_times(n, T, seed), ObservationWindow(0.0, T));
}

}  // namespace

TEST_CASE("fourier grid layout") {
  const auto g = fourier_grid(100.0, 2.0);
  REQUIRE(g.size() == 400);
  CHECK(g.frequencies.front() == doctest::Approx(-2.0));
  CHECK(g.frequencies.back() == doctest::Approx(2.0));
  CHECK(g.frequencies[199] == doctest::Approx(-0.01));
  CHECK(g.frequencies[200] == doctest::Approx(0.01));
  for (std::size_t j = 0; j < g.size(); ++j) {
    CHECK(g.frequencies[j] != 0.0);
    CHECK(g.frequencies[j] == -g.frequencies[g.size() - 1 - j]);
  }
  CHECK(g.weight_sum() == doctest::Approx(4.0 - 0.01).epsilon(1e-12));

  const auto g50 = fourier_grid(50.0, 2.0);
  CHECK(g50.size() == 200);
  CHECK(g50.spacing == doctest::Approx(0.02));
  CHECK(g50.weight_sum() == doctest::Approx(4.0 - 0.02).epsilon(1e-12));

  CHECK_THROWS_AS(fourier_grid(0.4, 2.0), std::domain_error);
  CHECK_THROWS_AS(fourier_grid(0.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(fourier_grid(10.0, -1.0), std::domain_error);
}

TEST_CASE("periodogram of trivial patterns") {
  const auto grid = fourier_grid(20.0, 2.0);
  const auto empty = periodogram(PointPattern::empty(ObservationWindow(0.0, 20.0)),
                                 grid, 0.0);
  for (double v : empty.values) CHECK(v == 0.0);
  CHECK(empty.kind == PeriodogramKind::raw);

  const PointPattern one({3.7}, ObservationWindow(0.0, 20.0));
  const auto single = periodogram(one, grid, one.mean_rate());
  for (double v : single.values) CHECK(v == doctest::Approx(1.0 / 20.0).epsilon(1e-12));
}

TEST_CASE("fast periodogram matches direct summation") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto p = random_pattern(50, 100.0, seed);
    const auto grid = fourier_grid(100.0, 2.0);
    const auto fast = periodogram(p, grid, p.mean_rate());
    // Direct summation without the cancelled centering term.
    for (std::size_t j = 0; j < grid.size(); ++j) {
      std::complex<double> s;
      for (double t : p.times()) {
        s += std::polar(1.0, -2.0 * std::numbers::pi * grid.frequencies[j] * t);
      }
      const double direct = std::norm(s) / 100.0;
      CHECK(oracle::relative_error(fast.values[j], direct) < 1e-10);
    }
  }
}

TEST_CASE("fast periodogram on long patterns and offset windows") {
  const double T = 400.0;
  std::vector<double> times = oracle::uniform_times(900, T, 99);
  for (double& t : times) t += 1000.0;
  const PointPattern p(times, ObservationWindow(1000.0, 1000.0 + T));
  const auto grid = fourier_grid(T, 2.0);
  const auto fast = periodogram(p, grid, p.mean_rate());
  const auto direct = periodogram_direct(p, grid, p.mean_rate());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    CHECK(oracle::relative_error(fast.values[j], direct.values[j]) < 1e-10);
  }
}

TEST_CASE("centering cancels on Fourier frequencies") {
  const auto p = random_pattern(200, 50.0, 3);
  const auto grid = fourier_grid(50.0, 2.0);
  const auto centered = periodogram_direct(p, grid, p.mean_rate());
  const auto uncentered = periodogram_direct(p, grid, 0.0);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    CHECK(oracle::relative_error(centered.values[j], uncentered.values[j]) < 1e-10);
  }
}

TEST_CASE("periodogram off the Fourier lattice uses explicit centering") {
  const auto p = random_pattern(60, 30.0, 8);
  const auto foreign = fourier_grid(47.0, 1.0);
  const auto pg = periodogram(p, foreign, p.mean_rate());
  const double m = p.mean_rate();
  for (std::size_t j = 0; j < foreign.size(); j += 7) {
    const double nu = foreign.frequencies[j];
    std::complex<double> s;
    for (double t : p.times()) s += std::polar(1.0, -2.0 * std::numbers::pi * nu * t);
    const double re = oracle::integrate(
        [&](double t) { return std::cos(2.0 * std::numbers::pi * nu * t); }, 0.0, 30.0);
    const double im = oracle::integrate(
        [&](double t) { return -std::sin(2.0 * std::numbers::pi * nu * t); }, 0.0, 30.0);
    const double expected = std::norm(s - m * std::complex<double>(re, im)) / 30.0;
    CHECK(oracle::relative_error(pg.values[j], expected) < 1e-9);
  }
}

TEST_CASE("raw periodogram is symmetric and nonnegative") {
  const auto p = simulate(HawkesParams(1.0, 0.5, 2.0), ObservationWindow(0.0, 100.0),
                          kDefaultBurnIn, RngStream(5, 5));
  const auto grid = fourier_grid(100.0, 2.0);
  const auto pg = periodogram(p, grid, p.mean_rate());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    CHECK(pg.values[j] >= 0.0);
    CHECK(pg.values[j] == pg.values[grid.size() - 1 - j]);
  }
}

TEST_CASE("rescaled periodograms") {
  const auto p = random_pattern(120, 40.0, 17);
  const auto grid = fourier_grid(40.0, 2.0);
  const double m = p.mean_rate();
  const auto raw = periodogram(p, grid, m);

  const auto near_one = rescale_train(raw, 0.999, m);
  CHECK(near_one.kind == PeriodogramKind::rescaled_train);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    CHECK(near_one.values[j] ==
          doctest::Approx(raw.values[j]).epsilon(3e-3).scale(m));
  }

  Periodogram flat = raw;
  const double p0 = 0.35;
  for (double& v : flat.values) v = p0 * (1 - p0) * m;
  for (double v : rescale_train(flat, p0, m).values) CHECK(v == doctest::Approx(0.0));
  for (double v : rescale_test(flat, p0, m).values) CHECK(v == doctest::Approx(0.0));

  const auto tr = rescale_train(raw, 0.5, m);
  const auto te = rescale_test(raw, 0.5, m);
  CHECK(tr.values == te.values);

  Periodogram zeros = raw;
  for (double& v : zeros.values) v = 0.0;
  for (double v : rescale_test(zeros, 0.4, 0.0).values) CHECK(v == 0.0);

  // Relabeling: the rejected part at p is the retained part at 1 - p.
  for (double q : {0.2, 0.45, 0.7}) {
    const auto a = rescale_test(raw, q, m);
    const auto b = rescale_train(raw, 1.0 - q, m);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      CHECK(a.values[j] == doctest::Approx(b.values[j]).epsilon(1e-12));
    }
  }

  CHECK_THROWS_AS(rescale_train(raw, 1.0, m), std::domain_error);
  CHECK_THROWS_AS(rescale_test(raw, 0.0, m), std::domain_error);
  CHECK_THROWS_AS(rescale_train(tr, 0.5, m), std::invalid_argument);
}

TEST_CASE("rescaled thinned periodogram is unbiased for the parent") {
  // Conditionally on N, E[|sum_k xi_k e_k|^2] = p^2 |sum e_k|^2 + p(1-p) N,
  // so the rescaled statistic has conditional mean exactly I(nu).
  const auto parent = simulate(HawkesParams(1.0, 0.5, 2.0),
                               ObservationWindow(0.0, 100.0), kDefaultBurnIn,
                               RngStream(123, 0));
  const auto grid = fourier_grid(100.0, 2.0);
  const double m = parent.mean_rate();
  const auto full = periodogram(parent, grid, m);
  const double p = 0.6;
  const std::size_t reps = 200;
  std::vector<double> sum(grid.size()), sum_sq(grid.size());
  for (std::size_t r = 0; r < reps; ++r) {
    const auto split = thin(parent, p, RngStream(123, 1).child(r));
    const auto pg = rescale_train(periodogram(split.retained, grid, p * m), p, m);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      sum[j] += pg.values[j];
      sum_sq[j] += pg.values[j] * pg.values[j];
    }
  }
  auto z_score = [&](std::size_t j) {
    const double mean = sum[j] / reps;
    const double var = (sum_sq[j] - reps * mean * mean) / (reps - 1);
    return (mean - full.values[j]) / std::sqrt(var / reps);
  };
  for (double nu : {0.1, 0.5, 1.0, 1.5}) {
    const auto j = static_cast<std::size_t>(std::lround(nu * 100.0)) + 199;
    REQUIRE(grid.frequencies[j] == doctest::Approx(nu));
    CHECK(std::abs(z_score(j)) < 3.0);
  }
  // Every frequency at a Bonferroni-corrected level (400 tests, 0.05).
  for (std::size_t j = 0; j < grid.size(); ++j) CHECK(std::abs(z_score(j)) < 4.0);
}

TEST_CASE("quadrature") {
  const auto grid = fourier_grid(100.0, 2.0);
  const std::vector<double> ones(grid.size(), 1.0);
  CHECK(quadrature(grid, ones) == doctest::Approx(4.0 - 0.01).epsilon(1e-12));

  std::vector<double> odd;
  for (double nu : grid.frequencies) odd.push_back(nu * nu * nu - 2.0 * nu);
  CHECK(std::abs(quadrature(grid, odd)) < 1e-12);

  const std::vector<double> short_values(3, 1.0);
  CHECK_THROWS_AS(quadrature(grid, short_values), std::invalid_argument);

  const double alpha = 0.5, beta = 2.0, m = 2.0;
  std::vector<double> f0;
  for (double nu : grid.frequencies) f0.push_back(compensated_density(alpha, beta, m, nu));
  auto f = [&](double nu) { return compensated_density(alpha, beta, m, nu); };
  const double half_cell = 0.5 / 100.0;
  const double exact = oracle::integrate(f, -2.0, -half_cell) +
                       oracle::integrate(f, half_cell, 2.0);
  CHECK(oracle::relative_error(quadrature(grid, f0), exact) < 1e-3);
}
