#pragma once

// Estimation objectives for the exponential Hawkes model.
//
// Spectral objectives act on a periodogram and are parametrised by
// theta = (alpha, beta), with m fixed at the plug-in m_hat:
//   SLS  int f0^2 - 2 int f0 I + 2 m_hat int f0
//   SP   int (f0 - (I - m_hat))^2
//   SL   sum w [log f + I / f]   (Whittle)
// Temporal objectives act on the event times with theta = (mu, alpha, beta):
//   OLS  int lambda^2 - 2 sum lambda(t_i)
//   ML   -sum log lambda(t_i) + int lambda
// Ridge adds kappa (alpha^2 + beta^2); mu is never penalised.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "spectridge/core.hpp"
#include "spectridge/spectral.hpp"

namespace spectridge {

enum class Method { OLS, ML, SL, SLS, SP };
enum class SpectralMethod { SL, SLS, SP };
enum class TemporalMethod { OLS, ML };

Method to_method(SpectralMethod m);
Method to_method(TemporalMethod m);
bool is_spectral(Method m);
SpectralMethod as_spectral(Method m);  // throws std::invalid_argument
TemporalMethod as_temporal(Method m);  // throws std::invalid_argument
std::string_view method_name(Method m);
Method parse_method(std::string_view name);  // throws std::invalid_argument

double sls_contrast(const Periodogram& pg, double m_hat, double alpha,
                    double beta);

double sp_distance(const Periodogram& pg, double m_hat, double alpha,
                   double beta);

/// Whittle negative log-likelihood against a raw periodogram. With a
/// thinning scale p the model density is p^2 f + p(1-p) m_hat, the
/// spectrum of a p-thinned process. Throws EstimationFailure if m_hat <= 0.
double whittle_nll(const Periodogram& pg, double m_hat, double alpha,
                   double beta, std::optional<double> thinning_scale = {});

/// Integral of lambda^2 is evaluated exactly on each inter-event interval.
double ols_contrast(const PointPattern& pattern, double mu, double alpha,
                    double beta);

/// Throws std::domain_error if mu <= 0.
double ml_nll(const PointPattern& pattern, double mu, double alpha,
              double beta);

/// value + kappa (alpha^2 + beta^2).
double ridge(double value, double alpha, double beta, double kappa);

/// An evaluable objective bound to its data. Spectral objectives take
/// theta = (alpha, beta); temporal ones take (mu, alpha, beta). Temporal
/// objectives have no thinned form (their conditional intensity after
/// thinning is intractable), so only spectral ones accept a thinning scale.
class Objective {
 public:
  static Objective spectral(SpectralMethod method,
                            std::shared_ptr<const Periodogram> data,
                            double m_hat, double kappa = 0.0,
                            std::optional<double> thinning_scale = {});
  static Objective temporal(TemporalMethod method,
                            std::shared_ptr<const PointPattern> data,
                            double kappa = 0.0);

  Method method() const { return method_; }
  std::size_t dimension() const { return is_spectral(method_) ? 2 : 3; }
  double kappa() const { return kappa_; }
  double m_hat() const { return m_hat_; }

  Objective with_kappa(double kappa) const;

  /// Penalised value.
  double operator()(std::span<const double> theta) const;
  double unpenalised(std::span<const double> theta) const;

 private:
  Objective() = default;

  Method method_ = Method::SLS;
  std::shared_ptr<const Periodogram> spectrum_;
  std::shared_ptr<const PointPattern> pattern_;
  double m_hat_ = 0.0;
  double kappa_ = 0.0;
  std::optional<double> thinning_scale_;
};

}  // namespace spectridge
