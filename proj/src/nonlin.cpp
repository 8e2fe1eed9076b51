#include "ewr/nonlin.hpp"

#include <cmath>

namespace ewr {

PseudoHuber::PseudoHuber(double delta) : delta_(delta) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw ValidationError("pseudo-Huber: delta must be positive and finite");
}

// std::norm(z) = |z|^2; the same expression is used by the forward model so a
// consistent measurement reproduces phi(A psi) bit for bit.
double PseudoHuber::phi(cplx z) const { return std::sqrt(std::norm(z) + delta_ * delta_) - delta_; }

cplx PseudoHuber::phi_prime(cplx z) const { return z / std::sqrt(std::norm(z) + delta_ * delta_); }

cplx PseudoHuber::prox(cplx z) const { return delta_ * z / std::sqrt(std::norm(z) + delta_ * delta_); }

cplx PseudoHuber::prox_conjugate(cplx z) const { return z - prox(z); }

double prox_phi1(double y) { return y / std::sqrt(1.0 + y * y); }

Nonlinearity Nonlinearity::pseudo_huber(double delta) {
  return Nonlinearity(NonlinearityKind::pseudo_huber, delta);
}

Nonlinearity Nonlinearity::linear() { return Nonlinearity(NonlinearityKind::linear, 1.0); }

std::string Nonlinearity::name() const {
  return kind_ == NonlinearityKind::linear ? "linear" : "pseudo_huber";
}

cplx Nonlinearity::value(cplx z) const {
  return kind_ == NonlinearityKind::linear ? z : cplx(ph_.phi(z), 0.0);
}

cplx Nonlinearity::derivative(cplx z) const {
  return kind_ == NonlinearityKind::linear ? cplx(1.0, 0.0) : ph_.phi_prime(z);
}

cplx Nonlinearity::gradient_factor(cplx z, double g) const {
  if (kind_ == NonlinearityKind::linear) return z - g;
  return (ph_.phi(z) - g) * ph_.phi_prime(z);
}

double Nonlinearity::residual_sq(cplx z, double g) const {
  if (kind_ == NonlinearityKind::linear) return std::norm(z - g);
  const double r = ph_.phi(z) - g;
  return r * r;
}

cplx Nonlinearity::t_part(cplx z) const {
  return kind_ == NonlinearityKind::linear ? z : ph_.prox_conjugate(z);
}

cplx Nonlinearity::s_part(cplx z, double g) const {
  if (kind_ == NonlinearityKind::linear) return {g, 0.0};
  return (g / delta_) * ph_.prox(z);
}

double Nonlinearity::s_lipschitz(double g_inf) const {
  return kind_ == NonlinearityKind::linear ? 0.0 : g_inf / delta_;
}

Nonlinearity nonlinearity_variant(const std::string& kind, double delta) {
  if (kind == "pseudo_huber") return Nonlinearity::pseudo_huber(delta);
  if (kind == "linear") return Nonlinearity::linear();
  throw ValidationError("unknown nonlinearity '" + kind + "' (expected pseudo_huber or linear)");
}

}  // namespace ewr
