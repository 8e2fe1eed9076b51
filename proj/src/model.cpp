#include "ewr/model.hpp"

#include <cmath>
#include <string>

namespace ewr {

namespace {

void require_measurement(const MeasurementEnsemble& e, const RVector& g, const char* what) {
  if (g.size() != e.rows())
    throw ValidationError(std::string(what) + ": measurement has length " + std::to_string(g.size()) +
                          ", expected KN = " + std::to_string(e.rows()));
}

}  // namespace

Observation Observation::from_intensities(RVector g_tilde, double delta) {
  Observation obs;
  obs.g = transform_gamma(g_tilde, delta);
  obs.g_tilde = std::move(g_tilde);
  obs.delta = delta;
  return obs;
}

RVector synthesize(const MeasurementEnsemble& e, const CVector& psi) {
  const CVector y = e.apply(psi);
  RVector out(y.size());
  for (Index i = 0; i < y.size(); ++i) out(i) = std::norm(y(i));
  return out;
}

RVector transform_gamma(const RVector& g_tilde, double delta) {
  if (!(delta > 0.0)) throw ValidationError("transform_gamma: delta must be positive");
  RVector out(g_tilde.size());
  for (Index i = 0; i < g_tilde.size(); ++i) {
    const double x = g_tilde(i);
    if (!(x >= 0.0)) throw ValidationError("transform_gamma: intensities must be >= 0");
    out(i) = std::sqrt(x + delta * delta) - delta;
  }
  return out;
}

RVector inverse_gamma(const RVector& g, double delta) {
  if (!(delta > 0.0)) throw ValidationError("inverse_gamma: delta must be positive");
  RVector out(g.size());
  for (Index i = 0; i < g.size(); ++i) {
    if (!(g(i) >= 0.0)) throw ValidationError("inverse_gamma: measurements must be >= 0");
    out(i) = g(i) * (g(i) + 2.0 * delta);
  }
  return out;
}

RVector add_intensity_noise(Rng& rng, const RVector& g_tilde, double sigma) {
  if (!(sigma >= 0.0)) throw ValidationError("noise sigma must be >= 0");
  RVector out = g_tilde;
  if (sigma == 0.0) return out;
  for (Index i = 0; i < out.size(); ++i) out(i) = std::max(0.0, out(i) + sigma * rng.normal());
  return out;
}

double data_term(const MeasurementEnsemble& e, const CVector& psi, const RVector& g,
                 const Nonlinearity& nl) {
  require_measurement(e, g, "data_term");
  const CVector y = e.apply(psi);
  double acc = 0.0;
  for (Index i = 0; i < y.size(); ++i) acc += nl.residual_sq(y(i), g(i));
  return acc / (2.0 * static_cast<double>(e.rows()));
}

double data_term(const MeasurementEnsemble& e, const CVector& psi, const Observation& obs) {
  return data_term(e, psi, obs.g, Nonlinearity::pseudo_huber(obs.delta));
}

CVector data_gradient(const MeasurementEnsemble& e, const CMatrix& phi, const CVector& z,
                      const RVector& g, const Nonlinearity& nl) {
  require_measurement(e, g, "data_gradient");
  if (phi.rows() != e.signal_size() || phi.cols() != z.size())
    throw ValidationError("data_gradient: dictionary / code dimensions do not match N");
  const CVector y = e.apply(CVector(phi * z));
  CVector r(y.size());
  for (Index i = 0; i < y.size(); ++i) r(i) = nl.gradient_factor(y(i), g(i));
  return phi.adjoint() * e.apply_adjoint(r) / static_cast<double>(e.rows());
}

}  // namespace ewr
