#pragma once

// Fitting and hyperparameter selection.
//
// p-thinning CV (spectral methods): each event is kept with probability p
// to form a training pattern; the rejected events form the testing
// pattern. For every (p, kappa) the ridge fit on the training periodogram
// is scored by the unpenalised objective on the testing periodogram, n
// thinnings are averaged and the best cell's thinned fits are averaged
// into the final estimate.
//
// Block LOOCV (all methods): the window is cut into k blocks; each block
// is scored in turn by a fit on the remaining blocks glued together, and
// the chosen kappa is refitted on the full pattern.

#include <optional>
#include <vector>

#include "spectridge/contrasts.hpp"
#include "spectridge/optimize.hpp"
#include "spectridge/spectral.hpp"

namespace spectridge {

/// Full parameter estimate (mu, alpha, beta). Spectral fits recover mu as
/// m_hat (1 - alpha).
struct Estimate {
  double mu = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
};

struct FitResult {
  Estimate estimate;
  double objective_value = 0.0;
  bool converged = false;
};

struct FitOptions {
  NelderMeadOptions optimizer;
  /// Threads across CV cells.
  std::size_t jobs = 1;
};

/// kappa values 2^lo, 2^(lo+1), ..., 2^hi.
std::vector<double> power_of_two_grid(int lo, int hi);

struct CvGrid {
  std::vector<double> p_values{0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  std::vector<double> kappa_values = power_of_two_grid(-14, 3);
  std::size_t n_thinnings = 10;

  void validate() const;
};

struct CvReport {
  Method method = Method::SLS;
  /// Empty for block LOOCV.
  std::vector<double> p_values;
  std::vector<double> kappa_values;
  /// Thinnings (p-thinning) or folds (LOOCV).
  std::size_t n_splits = 0;
  /// Row-major [p][kappa][split]; LOOCV has a single p row.
  std::vector<double> errors;
  std::vector<char> valid;  // char, not bool: written concurrently
  std::vector<Estimate> estimates;
  std::vector<char> fit_converged;
  /// [p][kappa]; NaN where no split is valid.
  std::vector<double> mean_errors;

  std::size_t selected_p_index = 0;
  std::size_t selected_kappa_index = 0;
  std::optional<double> selected_p;
  double selected_kappa = 0.0;
  /// Valid split estimates at the selected cell.
  std::vector<Estimate> per_thinning_estimates;
  Estimate final_estimate;
  bool converged = false;
  double m_hat = 0.0;

  std::size_t p_rows() const { return p_values.empty() ? 1 : p_values.size(); }
  std::size_t cell(std::size_t ip, std::size_t ik) const {
    return ip * kappa_values.size() + ik;
  }
  std::size_t index(std::size_t ip, std::size_t ik, std::size_t j) const {
    return cell(ip, ik) * n_splits + j;
  }
};

/// Spectral estimate from a periodogram objective: mu = m_hat (1 - alpha).
FitResult fit_objective(const Objective& objective, const FitOptions& options);

/// Fit on the full pattern at penalty kappa. Spectral methods use the
/// Fourier grid of the window over [-A, A]. Throws EstimationFailure on an
/// empty pattern.
FitResult fit_pattern(const PointPattern& pattern, Method method, double A,
                      double kappa, const FitOptions& options = {});

CvReport pthin_cv(const PointPattern& pattern, SpectralMethod method,
                  const CvGrid& grid, const FrequencyGrid& freq_grid,
                  const RngStream& rng, const FitOptions& options = {});

/// The k contiguous, equal-length blocks of `window` left out in turn.
std::vector<ObservationWindow> loocv_blocks(const ObservationWindow& window,
                                            std::size_t k);

/// Spectral methods build Fourier grids for the training and testing
/// windows with the same half-width as `half_width`.
CvReport block_loocv(const PointPattern& pattern, Method method,
                     const std::vector<double>& kappas, std::size_t k,
                     double half_width, const FitOptions& options = {});

}  // namespace spectridge
