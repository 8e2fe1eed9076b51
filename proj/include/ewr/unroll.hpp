#pragma once

#include <cstdint>
#include <vector>

#include "ewr/ensemble.hpp"
#include "ewr/nonlin.hpp"
#include "ewr/prox.hpp"
#include "ewr/types.hpp"

namespace ewr {

enum class InitMode { fixed_unit_vector, spectral };

const char* to_string(InitMode m);
InitMode parse_init_mode(const std::string& s);

/// Parameters of an L-stage unrolled proximal-gradient network. Step sizes
/// are fixed, one per stage; the dictionary is passed separately.
struct UnrollConfig {
  std::vector<double> taus;
  Regularizer reg;
  Nonlinearity nl;
  InitMode init = InitMode::fixed_unit_vector;
  ClipRadius clip;
  /// Throw AssumptionViolation on tau > KN/||A||^2; otherwise run anyway.
  bool strict_assumption1 = true;
  PowerIterationOptions spectral_power{};

  Index depth() const { return static_cast<Index>(taus.size()); }

  /// L stages of tau = tau_scale * KN/||A||^2, pseudo-Huber(delta), R = 0,
  /// fixed e_1 initialization, unit clip radii.
  static UnrollConfig constant(const MeasurementEnsemble& e, Index depth, double delta,
                               double tau_scale = 0.9);
};

/// T_Phi(z) = 1/(KN) (A Phi)* T(A Phi z).
CVector t_phi(const MeasurementEnsemble& e, const CMatrix& phi, const CVector& z,
              const Nonlinearity& nl);
/// S^g_Phi(z) = 1/(KN) (A Phi)* S^g(A Phi z).
CVector s_g_phi(const MeasurementEnsemble& e, const CMatrix& phi, const RVector& g,
                const CVector& z, const Nonlinearity& nl);

/// One stage, gradient form: prox_{tau R}(z - tau * grad D(Phi .)(z)).
CVector stage(const MeasurementEnsemble& e, const CMatrix& phi, const CVector& z, const RVector& g,
              double tau, const Regularizer& reg, const Nonlinearity& nl);
/// The same stage written through the operators: prox_{tau R}(z - tau (T_Phi - S^g_Phi)(z)).
CVector stage_prox_form(const MeasurementEnsemble& e, const CMatrix& phi, const CVector& z,
                        const RVector& g, double tau, const Regularizer& reg,
                        const Nonlinearity& nl);

struct SpectralInit {
  CVector psi0;
  /// g was identically zero; psi0 is e_1.
  bool fell_back = false;
  /// The power method missed its tolerance and a dense eigensolve was used.
  bool dense_eigensolve = false;
  int power_iterations = 0;
};

/// Initial signal estimate from one measurement.
///
/// spectral: leading eigenvector of Y = 1/(KN) sum_r g~_r a_r a_r* (a_r* the
/// rows of A, g~ the raw intensities), scaled to sqrt(N sum g~ / ||A||_F^2)
/// and phase-fixed so its largest entry is real positive.
/// fixed_unit_vector: e_1.
SpectralInit spectral_init(const MeasurementEnsemble& e, const RVector& g, double delta,
                           InitMode mode, const PowerIterationOptions& opts = {});

/// f^0(G): one initial code per column of G.
CMatrix initial_codes(const MeasurementEnsemble& e, const CMatrix& phi, const RMatrix& g,
                      const UnrollConfig& cfg);

/// f^L_Phi(G), column by column.
CMatrix unroll(const MeasurementEnsemble& e, const CMatrix& phi, const RMatrix& g,
               const UnrollConfig& cfg);
/// f^0_Phi(G), ..., f^L_Phi(G).
std::vector<CMatrix> unroll_trace(const MeasurementEnsemble& e, const CMatrix& phi,
                                  const RMatrix& g, const UnrollConfig& cfg);

/// sigma(Psi f^L_Phi(G)), clipped column by column to radius c_out.
CMatrix network_output(const MeasurementEnsemble& e, const CMatrix& psi, const CMatrix& phi,
                       const RMatrix& g, const UnrollConfig& cfg);

struct PgaOptions {
  double tau = 0.0;
  Regularizer reg;
  Nonlinearity nl;
  InitMode init = InitMode::spectral;
  int max_iters = 500;
  bool strict_assumption1 = false;
  PowerIterationOptions spectral_power{};
};

struct PgaResult {
  CVector z;
  CVector psi;
  /// D(Phi z_k) + R(z_k) for k = 0..iterations.
  std::vector<double> objective;
  bool assumption1_ok = true;
  bool init_fell_back = false;
};

/// Classical proximal gradient with a fixed dictionary and constant step.
PgaResult pga_reconstruct(const MeasurementEnsemble& e, const RVector& g, const CMatrix& phi,
                          const PgaOptions& opts);

}  // namespace ewr
