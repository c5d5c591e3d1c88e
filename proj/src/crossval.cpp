#include "spectridge/crossval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "spectridge/hawkes.hpp"
#include "spectridge/parallel.hpp"

namespace spectridge {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Estimate to_estimate(const Objective& objective,
                     const std::vector<double>& theta) {
  if (objective.dimension() == 3) return {theta[0], theta[1], theta[2]};
  return {mu_from_branching(objective.m_hat(), theta[0]), theta[0], theta[1]};
}

std::vector<double> theta_of(const Estimate& e, Method m) {
  if (is_spectral(m)) return {e.alpha, e.beta};
  return {e.mu, e.alpha, e.beta};
}

std::vector<std::size_t> ascending_order(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return v[a] < v[b]; });
  return order;
}

void allocate(CvReport& r) {
  const std::size_t cells = r.p_rows() * r.kappa_values.size();
  r.errors.assign(cells * r.n_splits, kNaN);
  r.valid.assign(cells * r.n_splits, false);
  r.estimates.assign(cells * r.n_splits, Estimate{});
  r.fit_converged.assign(cells * r.n_splits, false);
  r.mean_errors.assign(cells, kNaN);
}

// Means over valid splits, then argmin with ties to the smallest kappa and
// then the smallest p.
void select(CvReport& r) {
  for (std::size_t ip = 0; ip < r.p_rows(); ++ip) {
    for (std::size_t ik = 0; ik < r.kappa_values.size(); ++ik) {
      double sum = 0.0;
      std::size_t n = 0;
      for (std::size_t j = 0; j < r.n_splits; ++j) {
        if (r.valid[r.index(ip, ik, j)]) {
          sum += r.errors[r.index(ip, ik, j)];
          ++n;
        }
      }
      if (n > 0) r.mean_errors[r.cell(ip, ik)] = sum / static_cast<double>(n);
    }
  }
  const auto kappa_order = ascending_order(r.kappa_values);
  const auto p_order = r.p_values.empty() ? std::vector<std::size_t>{0}
                                          : ascending_order(r.p_values);
  bool found = false;
  double best = 0.0;
  for (std::size_t ik : kappa_order) {
    for (std::size_t ip : p_order) {
      const double e = r.mean_errors[r.cell(ip, ik)];
      if (std::isnan(e)) continue;
      if (!found || e < best) {
        best = e;
        r.selected_p_index = ip;
        r.selected_kappa_index = ik;
        found = true;
      }
    }
  }
  if (!found) throw EstimationFailure("every cross-validation cell failed");
  r.selected_kappa = r.kappa_values[r.selected_kappa_index];
  if (!r.p_values.empty()) r.selected_p = r.p_values[r.selected_p_index];

  r.per_thinning_estimates.clear();
  r.converged = true;
  for (std::size_t j = 0; j < r.n_splits; ++j) {
    const std::size_t idx =
        r.index(r.selected_p_index, r.selected_kappa_index, j);
    if (!r.valid[idx]) continue;
    r.per_thinning_estimates.push_back(r.estimates[idx]);
    r.converged = r.converged && r.fit_converged[idx];
  }
}

std::shared_ptr<const Periodogram> share(Periodogram pg) {
  return std::make_shared<const Periodogram>(std::move(pg));
}

}  // namespace

std::vector<double> power_of_two_grid(int lo, int hi) {
  std::vector<double> grid;
  for (int e = lo; e <= hi; ++e) grid.push_back(std::ldexp(1.0, e));
  return grid;
}

void CvGrid::validate() const {
  if (p_values.empty() || kappa_values.empty() || n_thinnings == 0) {
    throw std::invalid_argument("CV grid needs p values, kappas and n >= 1");
  }
  for (double p : p_values) {
    if (!(p > 0.0 && p < 1.0)) {
      throw std::domain_error("CV p values must lie in (0, 1)");
    }
  }
  for (double k : kappa_values) {
    if (!(k >= 0.0)) throw std::domain_error("CV kappas must be >= 0");
  }
}

FitResult fit_objective(const Objective& objective,
                        const FitOptions& options) {
  const auto region = FeasibleRegion::for_method(objective.method());
  const auto starts = default_starts(region, objective.m_hat());
  const OptimResult opt =
      minimize(objective, region, starts, options.optimizer);
  return FitResult{to_estimate(objective, opt.theta_hat), opt.objective_value,
                   opt.converged};
}

FitResult fit_pattern(const PointPattern& pattern, Method method, double A,
                      double kappa, const FitOptions& options) {
  if (pattern.is_empty()) {
    throw EstimationFailure("cannot estimate from an empty pattern");
  }
  if (is_spectral(method)) {
    const double m_hat = pattern.mean_rate();
    const auto grid = fourier_grid(pattern.window().length(), A);
    auto pg = share(periodogram(pattern, grid, m_hat));
    return fit_objective(
        Objective::spectral(as_spectral(method), pg, m_hat, kappa), options);
  }
  auto data = std::make_shared<const PointPattern>(pattern);
  return fit_objective(Objective::temporal(as_temporal(method), data, kappa),
                       options);
}

CvReport pthin_cv(const PointPattern& pattern, SpectralMethod method,
                  const CvGrid& grid, const FrequencyGrid& freq_grid,
                  const RngStream& rng, const FitOptions& options) {
  grid.validate();
  if (pattern.is_empty()) {
    throw EstimationFailure("cannot cross-validate an empty pattern");
  }
  CvReport report;
  report.method = to_method(method);
  report.p_values = grid.p_values;
  report.kappa_values = grid.kappa_values;
  report.n_splits = grid.n_thinnings;
  report.m_hat = pattern.mean_rate();
  allocate(report);
  const double m_hat = report.m_hat;
  const bool whittle = method == SpectralMethod::SL;

  // One task per (thinning, p); the split is shared by every kappa.
  const std::size_t n_p = grid.p_values.size();
  parallel_for(grid.n_thinnings * n_p, options.jobs, [&](std::size_t task) {
    const std::size_t j = task / n_p;
    const std::size_t ip = task % n_p;
    const double p = grid.p_values[ip];
    const ThinningSplit split = thin(pattern, p, rng.child({j, ip}));

    const Periodogram train_raw =
        periodogram(split.retained, freq_grid, p * m_hat);
    const Periodogram test_raw =
        periodogram(split.rejected, freq_grid, (1.0 - p) * m_hat);
    std::optional<double> train_scale;
    std::optional<double> test_scale;
    std::shared_ptr<const Periodogram> train;
    std::shared_ptr<const Periodogram> test;
    if (whittle) {
      train = share(train_raw);
      test = share(test_raw);
      train_scale = p;
      test_scale = 1.0 - p;
    } else {
      train = share(rescale_train(train_raw, p, m_hat));
      test = share(rescale_test(test_raw, p, m_hat));
    }
    const Objective base =
        Objective::spectral(method, train, m_hat, 0.0, train_scale);
    const Objective scorer =
        Objective::spectral(method, test, m_hat, 0.0, test_scale);

    for (std::size_t ik = 0; ik < grid.kappa_values.size(); ++ik) {
      const std::size_t idx = report.index(ip, ik, j);
      try {
        const FitResult fit =
            fit_objective(base.with_kappa(grid.kappa_values[ik]), options);
        const double score = scorer.unpenalised(
            std::vector<double>{fit.estimate.alpha, fit.estimate.beta});
        if (!std::isfinite(score)) continue;
        report.errors[idx] = score;
        report.estimates[idx] = fit.estimate;
        report.fit_converged[idx] = fit.converged;
        report.valid[idx] = true;
      } catch (const EstimationFailure&) {
      }
    }
  });

  select(report);
  Estimate mean{0.0, 0.0, 0.0};
  for (const Estimate& e : report.per_thinning_estimates) {
    mean.alpha += e.alpha;
    mean.beta += e.beta;
  }
  const auto n = static_cast<double>(report.per_thinning_estimates.size());
  mean.alpha /= n;
  mean.beta /= n;
  mean.mu = mu_from_branching(m_hat, mean.alpha);
  report.final_estimate = mean;
  return report;
}

std::vector<ObservationWindow> loocv_blocks(const ObservationWindow& window,
                                            std::size_t k) {
  if (k < 2) throw std::domain_error("block LOOCV needs k >= 2");
  const double length = window.length() / static_cast<double>(k);
  std::vector<ObservationWindow> blocks;
  for (std::size_t i = 0; i < k; ++i) {
    const double lo = window.start() + static_cast<double>(i) * length;
    blocks.emplace_back(lo, i + 1 == k ? window.end() : lo + length);
  }
  return blocks;
}

CvReport block_loocv(const PointPattern& pattern, Method method,
                     const std::vector<double>& kappas, std::size_t k,
                     double half_width, const FitOptions& options) {
  if (k < 2) throw std::domain_error("block LOOCV needs k >= 2");
  if (kappas.empty()) throw std::invalid_argument("LOOCV needs kappas");
  for (double kappa : kappas) {
    if (!(kappa >= 0.0)) throw std::domain_error("kappas must be >= 0");
  }
  if (pattern.is_empty()) {
    throw EstimationFailure("cannot cross-validate an empty pattern");
  }
  CvReport report;
  report.method = method;
  report.kappa_values = kappas;
  report.n_splits = k;
  report.m_hat = pattern.mean_rate();
  allocate(report);

  const ObservationWindow& window = pattern.window();
  const auto blocks = loocv_blocks(window, k);
  const double m_hat = report.m_hat;

  parallel_for(k, options.jobs, [&](std::size_t fold) {
    const ObservationWindow& block = blocks[fold];
    const PointPattern train = concatenate_blocks(pattern, block);
    const PointPattern test = shift_to(restrict(pattern, block), window.start());

    std::optional<Objective> base;
    std::optional<Objective> scorer;
    if (is_spectral(method)) {
      const auto sm = as_spectral(method);
      const auto train_grid = fourier_grid(train.window().length(), half_width);
      const auto test_grid = fourier_grid(test.window().length(), half_width);
      base = Objective::spectral(sm, share(periodogram(train, train_grid, m_hat)),
                                 m_hat);
      scorer = Objective::spectral(sm, share(periodogram(test, test_grid, m_hat)),
                                   m_hat);
    } else {
      const auto tm = as_temporal(method);
      base = Objective::temporal(tm, std::make_shared<const PointPattern>(train));
      scorer =
          Objective::temporal(tm, std::make_shared<const PointPattern>(test));
    }

    for (std::size_t ik = 0; ik < kappas.size(); ++ik) {
      const std::size_t idx = report.index(0, ik, fold);
      try {
        const FitResult fit = fit_objective(base->with_kappa(kappas[ik]), options);
        const double score =
            scorer->unpenalised(theta_of(fit.estimate, method));
        if (!std::isfinite(score)) continue;
        report.errors[idx] = score;
        report.estimates[idx] = fit.estimate;
        report.fit_converged[idx] = fit.converged;
        report.valid[idx] = true;
      } catch (const EstimationFailure&) {
      }
    }
  });

  select(report);
  const FitResult full =
      fit_pattern(pattern, method, half_width, report.selected_kappa, options);
  report.final_estimate = full.estimate;
  report.converged = full.converged;
  return report;
}

}  // namespace spectridge
