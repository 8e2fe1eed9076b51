#pragma once

#include "ewr/ensemble.hpp"
#include "ewr/nonlin.hpp"
#include "ewr/rng.hpp"
#include "ewr/types.hpp"

namespace ewr {

/// Raw intensities and their pseudo-Huber transform g = sqrt(g~ + d^2) - d.
struct Observation {
  RVector g_tilde;
  RVector g;
  double delta = 1.0;

  static Observation from_intensities(RVector g_tilde, double delta);
};

/// g~ = |A psi|^2.
RVector synthesize(const MeasurementEnsemble& e, const CVector& psi);

/// sqrt(x + d^2) - d entrywise; rejects negative input.
RVector transform_gamma(const RVector& g_tilde, double delta);
/// (g + d)^2 - d^2, the inverse of transform_gamma on [0, inf).
RVector inverse_gamma(const RVector& g, double delta);

/// Additive Gaussian noise on raw intensities, clipped at 0.
RVector add_intensity_noise(Rng& rng, const RVector& g_tilde, double sigma);

/// D(psi) = 1/(2KN) ||phi(A psi) - g||^2.
double data_term(const MeasurementEnsemble& e, const CVector& psi, const RVector& g,
                 const Nonlinearity& nl);
double data_term(const MeasurementEnsemble& e, const CVector& psi, const Observation& obs);

/// Gradient of z -> D(Phi z):  1/(KN) (A Phi)* [(phi(A Phi z) - g) .* phi'(A Phi z)].
///
/// This is the R^{2N} gradient of D with Re/Im parts packed into one complex
/// vector (central differences agree with factor 1).
CVector data_gradient(const MeasurementEnsemble& e, const CMatrix& phi, const CVector& z,
                      const RVector& g, const Nonlinearity& nl);

}  // namespace ewr
