#pragma once

#include <string>

#include "ewr/types.hpp"

namespace ewr {

/// The smoothed amplitude phi_d(z) = sqrt(|z|^2 + d^2) - d and the two
/// proximal maps it factors into:
///
///   prox_f(z)      = d z / sqrt(|z|^2 + d^2)  = d * phi_d'(z)
///   prox_fconj(z)  = z - prox_f(z)            = phi_d(z) * phi_d'(z)
///
/// where f(z) = d^2 g(|z| / d) and g is the even function whose prox is
/// y / sqrt(1 + y^2). Everything is closed form.
class PseudoHuber {
 public:
  explicit PseudoHuber(double delta);

  double delta() const { return delta_; }

  double phi(cplx z) const;
  /// Wirtinger derivative z / sqrt(|z|^2 + d^2); |phi'(z)| <= 1.
  cplx phi_prime(cplx z) const;
  cplx prox(cplx z) const;
  cplx prox_conjugate(cplx z) const;

 private:
  double delta_;
};

/// prox of the even function phi_1(x) = -x^2/2 - sqrt(1 - x^2) on [-1, 1].
double prox_phi1(double y);

enum class NonlinearityKind { pseudo_huber, linear };

/// The nonlinearity that enters the data term, either the pseudo-Huber
/// amplitude or the identity phi(z) = z. The identity variant turns every
/// stage into a plain ISTA step: phi' = 1, the "T" part is the identity and
/// the "S" part is the constant g, so S has Lipschitz constant 0.
class Nonlinearity {
 public:
  /// pseudo_huber(1).
  Nonlinearity() : Nonlinearity(NonlinearityKind::pseudo_huber, 1.0) {}
  static Nonlinearity pseudo_huber(double delta);
  static Nonlinearity linear();

  NonlinearityKind kind() const { return kind_; }
  /// Smoothing scale; 1 for the linear variant (unused there).
  double delta() const { return delta_; }
  std::string name() const;

  cplx value(cplx z) const;
  cplx derivative(cplx z) const;
  /// (phi(z) - g) * phi'(z), the pointwise factor of the data gradient.
  cplx gradient_factor(cplx z, double g) const;
  /// |phi(z) - g|^2.
  double residual_sq(cplx z, double g) const;

  /// T(z): prox_{f*}(z) for pseudo-Huber, z for linear.
  cplx t_part(cplx z) const;
  /// S^g(z): (g/d) prox_f(z) for pseudo-Huber, g for linear.
  cplx s_part(cplx z, double g) const;

  /// Lipschitz constant of S^g on a measurement with sup-norm g_inf.
  double s_lipschitz(double g_inf) const;

 private:
  Nonlinearity(NonlinearityKind kind, double delta) : kind_(kind), delta_(delta), ph_(delta) {}

  NonlinearityKind kind_;
  double delta_;
  PseudoHuber ph_;
};

/// nonlinearity_variant: "pseudo_huber" (needs delta > 0) or "linear".
Nonlinearity nonlinearity_variant(const std::string& kind, double delta);

}  // namespace ewr
