#include "spectridge/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace spectridge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logit(double s) { return std::log(s) - std::log1p(-s); }
double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }

struct Coordinate {
  Bounds bounds;
  bool log_scale;

  double forward(double x) const {
    const double s =
        log_scale ? (std::log(x) - std::log(bounds.lower)) /
                        (std::log(bounds.upper) - std::log(bounds.lower))
                  : (x - bounds.lower) / (bounds.upper - bounds.lower);
    return logit(std::clamp(s, 1e-300, 1.0 - 1e-16));
  }

  double backward(double u) const {
    const double s = logistic(u);
    if (log_scale) {
      const double lo = std::log(bounds.lower);
      const double x = std::exp(lo + s * (std::log(bounds.upper) - lo));
      return std::clamp(x, bounds.lower, bounds.upper);
    }
    return std::clamp(bounds.lower + s * (bounds.upper - bounds.lower),
                      bounds.lower, bounds.upper);
  }
};

std::vector<Coordinate> coordinates(const FeasibleRegion& r) {
  std::vector<Coordinate> c;
  if (r.mu_free) c.push_back({r.mu, true});
  c.push_back({r.alpha, false});
  c.push_back({r.beta, true});
  return c;
}

double safe(double v) { return std::isfinite(v) ? v : kInf; }

struct Run {
  std::vector<double> u;
  double value;
  bool converged;
  int iterations;
};

Run nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                std::vector<double> start, const NelderMeadOptions& opt) {
  const std::size_t n = start.size();
  std::vector<std::vector<double>> simplex(n + 1, start);
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += opt.initial_step;
  for (std::size_t i = 0; i <= n; ++i) values[i] = safe(f(simplex[i]));

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  auto along = [&](double t, const std::vector<double>& worst,
                   std::vector<double>& out) {
    for (std::size_t k = 0; k < n; ++k) {
      out[k] = centroid[k] + t * (centroid[k] - worst[k]);
    }
  };

  int iter = 0;
  bool converged = false;
  for (;;) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
      return values[a] < values[b];
    });
    {
      auto s2 = simplex;
      auto v2 = values;
      for (std::size_t i = 0; i <= n; ++i) {
        simplex[i] = s2[order[i]];
        values[i] = v2[order[i]];
      }
    }
    double diameter = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        diameter = std::max(diameter, std::abs(simplex[i][k] - simplex[0][k]));
      }
    }
    if (diameter < opt.diameter_tolerance) {
      converged = true;
      break;
    }
    if (iter >= opt.max_iterations) break;
    ++iter;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / n;
    }
    const auto& worst = simplex[n];
    along(1.0, worst, trial);
    const double fr = safe(f(trial));
    if (fr < values[0]) {
      along(2.0, worst, trial2);
      const double fe = safe(f(trial2));
      if (fe < fr) {
        simplex[n] = trial2;
        values[n] = fe;
      } else {
        simplex[n] = trial;
        values[n] = fr;
      }
      continue;
    }
    if (fr < values[n - 1]) {
      simplex[n] = trial;
      values[n] = fr;
      continue;
    }
    if (fr < values[n]) {
      along(0.5, worst, trial2);
      const double fc = safe(f(trial2));
      if (fc <= fr) {
        simplex[n] = trial2;
        values[n] = fc;
        continue;
      }
    } else {
      along(-0.5, worst, trial2);
      const double fc = safe(f(trial2));
      if (fc < values[n]) {
        simplex[n] = trial2;
        values[n] = fc;
        continue;
      }
    }
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        simplex[i][k] = simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k]);
      }
      values[i] = safe(f(simplex[i]));
    }
  }
  return Run{simplex[0], values[0], converged, iter};
}

}  // namespace

void FeasibleRegion::validate() const {
  for (const Bounds& b : {alpha, beta, mu}) {
    if (!(b.lower < b.upper)) {
      throw std::invalid_argument("feasible region bounds must be ordered");
    }
  }
  if (!(beta.lower > 0.0) || !(mu.lower > 0.0) || !(alpha.lower >= 0.0) ||
      !(alpha.upper <= 1.0)) {
    throw std::invalid_argument("feasible region outside parameter domain");
  }
}

bool FeasibleRegion::contains(std::span<const double> theta) const {
  if (theta.size() != dimension()) return false;
  const auto coords = coordinates(*this);
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!(theta[i] >= coords[i].bounds.lower &&
          theta[i] <= coords[i].bounds.upper)) {
      return false;
    }
  }
  return true;
}

std::vector<double> FeasibleRegion::to_unconstrained(
    std::span<const double> theta) const {
  const auto coords = coordinates(*this);
  std::vector<double> u(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    u[i] = coords[i].forward(theta[i]);
  }
  return u;
}

std::vector<double> FeasibleRegion::to_constrained(
    std::span<const double> u) const {
  const auto coords = coordinates(*this);
  std::vector<double> theta(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    theta[i] = coords[i].backward(u[i]);
  }
  return theta;
}

OptimResult minimize(const ObjectiveFn& objective, const FeasibleRegion& region,
                     const std::vector<std::vector<double>>& starts,
                     const NelderMeadOptions& options) {
  region.validate();
  if (starts.empty()) {
    throw std::invalid_argument("minimize needs at least one start");
  }
  for (const auto& s : starts) {
    if (!region.contains(s)) {
      throw std::invalid_argument("start point outside feasible region");
    }
  }
  auto in_u = [&](const std::vector<double>& u) {
    const auto theta = region.to_constrained(u);
    return objective(theta);
  };

  OptimResult best;
  best.objective_value = kInf;
  bool found = false;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    Run run = nelder_mead(in_u, region.to_unconstrained(starts[i]), options);
    auto theta = region.to_constrained(run.u);
    double value = safe(objective(theta));
    // The simplex starts from the round-tripped point; keep the raw start
    // when it is at least as good so the result never exceeds it.
    const double at_start = safe(objective(starts[i]));
    if (at_start <= value) {
      theta = starts[i];
      value = at_start;
    }
    if (!std::isfinite(value)) continue;
    if (!found || value < best.objective_value - 1e-12) {
      best.theta_hat = std::move(theta);
      best.objective_value = value;
      best.converged = run.converged;
      best.iterations = run.iterations;
      best.best_start = i;
      found = true;
    }
  }
  if (!found) {
    throw EstimationFailure("objective non-finite from every start");
  }
  best.restarts_used = static_cast<int>(starts.size());
  return best;
}

OptimResult minimize(const Objective& objective, const FeasibleRegion& region,
                     const std::vector<std::vector<double>>& starts,
                     const NelderMeadOptions& options) {
  if (objective.dimension() != region.dimension()) {
    throw std::invalid_argument("objective and region dimensions differ");
  }
  return minimize(
      [&objective](std::span<const double> theta) { return objective(theta); },
      region, starts, options);
}

std::vector<std::vector<double>> default_starts(const FeasibleRegion& region,
                                                double m_hat) {
  const std::vector<std::pair<double, double>> shape{
      {0.3, 1.0}, {0.5, 2.0}, {0.7, 5.0}};
  auto clamp_to = [](double x, Bounds b) {
    return std::clamp(x, b.lower, b.upper);
  };
  std::vector<std::vector<double>> starts;
  for (auto [a, b] : shape) {
    a = clamp_to(a, region.alpha);
    b = clamp_to(b, region.beta);
    if (region.mu_free) {
      for (double scale : {0.5, 1.0}) {
        starts.push_back({clamp_to(scale * m_hat, region.mu), a, b});
      }
    } else {
      starts.push_back({a, b});
    }
  }
  return starts;
}

}  // namespace spectridge
