#include "spectridge/spectral.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace spectridge {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Re-seed the recurrence e^{-2 pi i j t/T} from an exact polar value this
// often; keeps accumulated rounding near 1e-15 per term.
constexpr std::size_t kReanchorEvery = 32;

bool is_fourier_grid_of(const FrequencyGrid& grid, double length) {
  return grid.fourier_length > 0.0 &&
         std::abs(grid.fourier_length - length) <= 1e-12 * length;
}

Periodogram make_result(const FrequencyGrid& grid, double rate) {
  Periodogram out;
  out.grid = grid;
  out.values.assign(grid.size(), 0.0);
  out.m_hat = rate;
  return out;
}

Periodogram rescale(const Periodogram& raw, double p, double m_hat,
                    double divisor, PeriodogramKind kind) {
  if (raw.kind != PeriodogramKind::raw) {
    throw std::invalid_argument("rescaling expects a raw periodogram");
  }
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("thinning probability must lie in (0, 1)");
  }
  Periodogram out = raw;
  const double offset = p * (1.0 - p) * m_hat;
  for (double& v : out.values) v = (v - offset) / divisor;
  out.m_hat = m_hat;
  out.kind = kind;
  out.p = p;
  return out;
}

}  // namespace

double FrequencyGrid::weight_sum() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

FrequencyGrid fourier_grid(double T, double A) {
  if (!(T > 0.0) || !(A > 0.0)) {
    throw std::domain_error("frequency grid requires T > 0 and A > 0");
  }
  const auto per_side =
      static_cast<long>(std::floor(A * T * (1.0 + 1e-12)));
  if (per_side < 1) {
    throw std::domain_error("frequency grid is empty: A T < 1");
  }
  FrequencyGrid grid;
  grid.half_width = A;
  grid.spacing = 1.0 / T;
  grid.fourier_length = T;
  const auto n = static_cast<std::size_t>(2 * per_side);
  grid.frequencies.reserve(n);
  for (long j = -per_side; j <= per_side; ++j) {
    if (j == 0) continue;
    grid.frequencies.push_back(static_cast<double>(j) / T);
  }
  // Midpoint cells of width 1/T; the cells at +-A are cut at the edge of D,
  // so the weights cover D minus the central cell (-1/2T, 1/2T).
  grid.weights.assign(n, 1.0 / T);
  grid.weights.front() = grid.weights.back() = 0.5 / T;
  grid.omega_sq.reserve(n);
  for (double nu : grid.frequencies) {
    grid.omega_sq.push_back(kTwoPi * kTwoPi * nu * nu);
  }
  return grid;
}

Periodogram periodogram_direct(const PointPattern& pattern,
                               const FrequencyGrid& grid,
                               double centering_rate) {
  const double origin = pattern.window().start();
  const double T = pattern.window().length();
  Periodogram out = make_result(grid, centering_rate);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double nu = grid.frequencies[j];
    std::complex<double> sum(0.0, 0.0);
    for (double t : pattern.times()) {
      sum += std::polar(1.0, -kTwoPi * nu * (t - origin));
    }
    // int_0^T e^{-2 pi i nu t} dt = (1 - e^{-2 pi i nu T}) / (2 pi i nu)
    const std::complex<double> integral =
        (1.0 - std::polar(1.0, -kTwoPi * nu * T)) /
        std::complex<double>(0.0, kTwoPi * nu);
    out.values[j] = std::norm(sum - centering_rate * integral) / T;
  }
  return out;
}

Periodogram periodogram(const PointPattern& pattern, const FrequencyGrid& grid,
                        double centering_rate) {
  const double T = pattern.window().length();
  if (!is_fourier_grid_of(grid, T)) {
    return periodogram_direct(pattern, grid, centering_rate);
  }
  const std::size_t per_side = grid.size() / 2;
  const double origin = pattern.window().start();
  std::vector<std::complex<double>> sums(per_side);
  for (double t : pattern.times()) {
    const double phase = (t - origin) / T;
    const std::complex<double> step = std::polar(1.0, -kTwoPi * phase);
    std::complex<double> w = step;
    for (std::size_t j = 1; j <= per_side; ++j) {
      if (j % kReanchorEvery == 0) {
        const double turns = std::fmod(static_cast<double>(j) * phase, 1.0);
        w = std::polar(1.0, -kTwoPi * turns);
      }
      sums[j - 1] += w;
      w *= step;
    }
  }
  Periodogram out = make_result(grid, centering_rate);
  // Grid layout: indices [0, per_side) hold -A..-1/T, the rest 1/T..A.
  for (std::size_t j = 1; j <= per_side; ++j) {
    const double value = std::norm(sums[j - 1]) / T;
    out.values[per_side - j] = value;
    out.values[per_side + j - 1] = value;
  }
  return out;
}

Periodogram rescale_train(const Periodogram& raw, double p, double m_hat) {
  return rescale(raw, p, m_hat, p * p, PeriodogramKind::rescaled_train);
}

Periodogram rescale_test(const Periodogram& raw, double p, double m_hat) {
  return rescale(raw, p, m_hat, (1.0 - p) * (1.0 - p),
                 PeriodogramKind::rescaled_test);
}

double quadrature(const FrequencyGrid& grid, std::span<const double> values) {
  if (values.size() != grid.size()) {
    throw std::invalid_argument("quadrature: values not aligned with grid");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    total += grid.weights[j] * values[j];
  }
  return total;
}

}  // namespace spectridge
