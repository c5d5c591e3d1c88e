#include "spectridge/contrasts.hpp"

#include <cmath>
#include <stdexcept>

#include "spectridge/hawkes.hpp"

namespace spectridge {

Method to_method(SpectralMethod m) {
  switch (m) {
    case SpectralMethod::SL: return Method::SL;
    case SpectralMethod::SLS: return Method::SLS;
    case SpectralMethod::SP: return Method::SP;
  }
  throw std::invalid_argument("unknown spectral method");
}

Method to_method(TemporalMethod m) {
  return m == TemporalMethod::OLS ? Method::OLS : Method::ML;
}

bool is_spectral(Method m) {
  return m == Method::SL || m == Method::SLS || m == Method::SP;
}

SpectralMethod as_spectral(Method m) {
  switch (m) {
    case Method::SL: return SpectralMethod::SL;
    case Method::SLS: return SpectralMethod::SLS;
    case Method::SP: return SpectralMethod::SP;
    default: break;
  }
  throw std::invalid_argument("not a spectral method");
}

TemporalMethod as_temporal(Method m) {
  if (m == Method::OLS) return TemporalMethod::OLS;
  if (m == Method::ML) return TemporalMethod::ML;
  throw std::invalid_argument("not a temporal method");
}

std::string_view method_name(Method m) {
  switch (m) {
    case Method::OLS: return "OLS";
    case Method::ML: return "ML";
    case Method::SL: return "SL";
    case Method::SLS: return "SLS";
    case Method::SP: return "SP";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::OLS, Method::ML, Method::SL, Method::SLS,
                   Method::SP}) {
    if (method_name(m) == name) return m;
  }
  throw std::invalid_argument("unknown estimator: " + std::string(name));
}

double sls_contrast(const Periodogram& pg, double m_hat, double alpha,
                    double beta) {
  const auto& grid = pg.grid;
  double total = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double f0 =
        compensated_density_omega(alpha, beta, m_hat, grid.omega_sq[j]);
    total += grid.weights[j] * f0 * (f0 - 2.0 * pg.values[j] + 2.0 * m_hat);
  }
  return total;
}

double sp_distance(const Periodogram& pg, double m_hat, double alpha,
                   double beta) {
  const auto& grid = pg.grid;
  double total = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double f0 =
        compensated_density_omega(alpha, beta, m_hat, grid.omega_sq[j]);
    const double r = f0 - (pg.values[j] - m_hat);
    total += grid.weights[j] * r * r;
  }
  return total;
}

double whittle_nll(const Periodogram& pg, double m_hat, double alpha,
                   double beta, std::optional<double> thinning_scale) {
  if (!(m_hat > 0.0)) {
    throw EstimationFailure("Whittle likelihood undefined for m_hat = 0");
  }
  if (pg.kind != PeriodogramKind::raw) {
    throw std::invalid_argument("Whittle likelihood expects a raw periodogram");
  }
  double scale = 1.0;
  double floor = 0.0;
  if (thinning_scale) {
    const double p = *thinning_scale;
    if (!(p > 0.0 && p <= 1.0)) {
      throw std::domain_error("thinning scale must lie in (0, 1]");
    }
    scale = p * p;
    floor = p * (1.0 - p) * m_hat;
  }
  const auto& grid = pg.grid;
  double total = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double f =
        m_hat + compensated_density_omega(alpha, beta, m_hat, grid.omega_sq[j]);
    const double model = scale * f + floor;
    total += grid.weights[j] * (std::log(model) + pg.values[j] / model);
  }
  return total;
}

double ols_contrast(const PointPattern& pattern, double mu, double alpha,
                    double beta) {
  const double c = alpha * beta;
  // S is the excitation sum just after the previous event.
  double s = 0.0;
  double prev = pattern.window().start();
  double integral = 0.0;
  double at_events = 0.0;
  auto piece = [&](double dt) {
    const double decay = -std::expm1(-beta * dt);
    const double decay2 = -std::expm1(-2.0 * beta * dt);
    return mu * mu * dt + 2.0 * mu * c * s * decay / beta +
           c * c * s * s * decay2 / (2.0 * beta);
  };
  for (double t : pattern.times()) {
    const double dt = t - prev;
    integral += piece(dt);
    s *= std::exp(-beta * dt);
    at_events += mu + c * s;
    s += 1.0;
    prev = t;
  }
  integral += piece(pattern.window().end() - prev);
  return integral - 2.0 * at_events;
}

double ml_nll(const PointPattern& pattern, double mu, double alpha,
              double beta) {
  if (!(mu > 0.0)) {
    throw std::domain_error("ML likelihood requires mu > 0");
  }
  const auto& t = pattern.times();
  const double c = alpha * beta;
  const double end = pattern.window().end();
  double a = 0.0;
  double log_sum = 0.0;
  double excitation = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i > 0) a = std::exp(-beta * (t[i] - t[i - 1])) * (1.0 + a);
    log_sum += std::log(mu + c * a);
    excitation += -std::expm1(-beta * (end - t[i]));
  }
  const double comp = mu * pattern.window().length() + alpha * excitation;
  return comp - log_sum;
}

double ridge(double value, double alpha, double beta, double kappa) {
  return value + kappa * (alpha * alpha + beta * beta);
}

Objective Objective::spectral(SpectralMethod method,
                              std::shared_ptr<const Periodogram> data,
                              double m_hat, double kappa,
                              std::optional<double> thinning_scale) {
  if (!data) throw std::invalid_argument("objective needs data");
  if (!(kappa >= 0.0)) throw std::domain_error("kappa must be nonnegative");
  if (thinning_scale && method != SpectralMethod::SL) {
    throw std::invalid_argument(
        "thinning scale applies to the Whittle objective only; SLS and SP "
        "take a rescaled periodogram");
  }
  if (method == SpectralMethod::SL && data->kind != PeriodogramKind::raw) {
    throw std::invalid_argument("Whittle objective expects a raw periodogram");
  }
  Objective obj;
  obj.method_ = to_method(method);
  obj.spectrum_ = std::move(data);
  obj.m_hat_ = m_hat;
  obj.kappa_ = kappa;
  obj.thinning_scale_ = thinning_scale;
  return obj;
}

Objective Objective::temporal(TemporalMethod method,
                              std::shared_ptr<const PointPattern> data,
                              double kappa) {
  if (!data) throw std::invalid_argument("objective needs data");
  if (!(kappa >= 0.0)) throw std::domain_error("kappa must be nonnegative");
  Objective obj;
  obj.method_ = to_method(method);
  obj.pattern_ = std::move(data);
  obj.m_hat_ = obj.pattern_->mean_rate();
  obj.kappa_ = kappa;
  return obj;
}

Objective Objective::with_kappa(double kappa) const {
  if (!(kappa >= 0.0)) throw std::domain_error("kappa must be nonnegative");
  Objective copy = *this;
  copy.kappa_ = kappa;
  return copy;
}

double Objective::unpenalised(std::span<const double> theta) const {
  if (theta.size() != dimension()) {
    throw std::invalid_argument("parameter vector has wrong dimension");
  }
  switch (method_) {
    case Method::SLS:
      return sls_contrast(*spectrum_, m_hat_, theta[0], theta[1]);
    case Method::SP:
      return sp_distance(*spectrum_, m_hat_, theta[0], theta[1]);
    case Method::SL:
      return whittle_nll(*spectrum_, m_hat_, theta[0], theta[1],
                         thinning_scale_);
    case Method::OLS:
      return ols_contrast(*pattern_, theta[0], theta[1], theta[2]);
    case Method::ML:
      return ml_nll(*pattern_, theta[0], theta[1], theta[2]);
  }
  throw std::logic_error("unreachable");
}

double Objective::operator()(std::span<const double> theta) const {
  const double value = unpenalised(theta);
  if (kappa_ == 0.0) return value;
  const std::size_t offset = dimension() - 2;
  return ridge(value, theta[offset], theta[offset + 1], kappa_);
}

}  // namespace spectridge
