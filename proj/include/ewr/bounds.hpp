#pragma once

#include <utility>
#include <vector>

#include "ewr/ensemble.hpp"
#include "ewr/nonlin.hpp"
#include "ewr/types.hpp"

namespace ewr {

/// Largest admissible step, KN / ||A||^2.
double max_step(double norm_a, Index k, Index n);
double max_step(const MeasurementEnsemble& e);
/// True iff every tau_l <= KN / ||A||^2.
bool check_assumption1(const std::vector<double>& taus, double norm_a, Index k, Index n);
bool check_assumption1(const std::vector<double>& taus, const MeasurementEnsemble& e);

/// ||G||_inf as the entrywise max modulus over the whole matrix.
double sup_norm(const RMatrix& g);

/// Everything the closed-form constants depend on. A report can be rebuilt
/// from this snapshot alone.
struct BoundInputs {
  Index n = 1;
  Index k = 1;
  Index m = 1;
  double delta = 1.0;
  double norm_a = 1.0;
  double g_inf = 0.0;
  std::vector<double> taus;
  double c_in = 1.0;
  double c_out = 1.0;
  double alpha = 0.05;
  NonlinearityKind nonlinearity = NonlinearityKind::pseudo_huber;

  static BoundInputs from(const MeasurementEnsemble& e, const RMatrix& g,
                          const std::vector<double>& taus, double delta);
  Index depth() const { return static_cast<Index>(taus.size()); }
};

struct CoveringPoint {
  double eps;
  double log_n;
};

struct BoundReport {
  BoundInputs inputs;
  bool assumption1_ok = true;
  double gamma = 1.0;
  /// T_0, ..., T_L with T_l = sum_{k<l} tau_k.
  std::vector<double> t_cumsum;
  /// B_0, ..., B_{L-1}.
  std::vector<double> b;
  /// K_0, ..., K_L by K_{l+1} = gamma (K_l + B_l); +inf once it overflows.
  std::vector<double> k_seq;
  /// log K_l, carried separately so large depths stay finite (log K_0 = -inf).
  std::vector<double> log_k_seq;
  double k_l = 0.0;
  double log_k_l = 0.0;
  bool k_l_overflow = false;
  double m_l = 0.0;
  double m_l_prime = 0.0;
  double log_m_l_prime = 0.0;
  std::vector<CoveringPoint> covering;
  double rademacher = 0.0;
  double gen_bound = 0.0;
};

/// gamma, T_l, B_l, K_L, M_L, M'_L = K_L, the covering-number logs on a fixed
/// eps grid, the Rademacher bound and the generalization bound.
/// Throws AssumptionViolation when strict and a step is too large.
BoundReport bound_constants(const BoundInputs& in, bool strict = true);

/// K_L by the closed sum sum_{l<L} gamma^{L-l} B_l.
double k_closed_sum(double gamma, const std::vector<double>& b);

/// log N(M_2, eps) <= 2N^2 log(1 + 4 M_L/eps) + 2KN^2 log(1 + 4 M'_L ||A|| / eps).
double covering_log(double eps, Index n, Index k, double m_l, double m_l_prime, double norm_a);
/// Same, with M'_L passed as a logarithm.
double covering_log_lg(double eps, Index n, Index k, double m_l, double log_m_l_prime,
                       double norm_a);

/// 4 C_out N/sqrt(m) [ sqrt(log(e(1 + 8 M_L/(sqrt(m) C_out))))
///                   + sqrt(K) sqrt(log(e(1 + 8 ||A|| M'_L/(sqrt(m) C_out)))) ].
double rademacher_bound(Index n, Index k, Index m, double c_out, double m_l, double m_l_prime,
                        double norm_a);
double rademacher_bound_lg(Index n, Index k, Index m, double c_out, double m_l,
                           double log_m_l_prime, double norm_a);

/// 2 R + 4 (C_in + C_out) sqrt(2 log(4/alpha) / m).
double generalization_bound(Index n, Index k, Index m, double c_out, double m_l,
                            double m_l_prime, double norm_a, double c_in, double alpha);
double generalization_bound_from_rademacher(double rademacher, Index m, double c_in,
                                            double c_out, double alpha);

struct ScalingRow {
  Index depth;
  double m_l;
  double k_l;
  double log_k_l;
  double gen_bound;
};

struct ScalingSummary {
  std::vector<ScalingRow> rows;
  /// Largest |M_L - fit| / M_L of the least-squares line through (L, M_L).
  double m_l_affine_residual = 0.0;
  /// Least-squares slope of log K_L against L.
  double log_k_slope = 0.0;
  double log_gamma = 0.0;
  double slope_rel_error = 0.0;
};

/// Bounds for every depth in [l_min, l_max] with the constant step `tau`;
/// `base.taus` is ignored.
ScalingSummary scaling_summary(const BoundInputs& base, Index l_min, Index l_max, double tau);

/// (1/m) sum_j ||outputs_j - truths_j||_2.
double empirical_risk(const CMatrix& outputs, const CMatrix& truths);

/// d((Phi1, Psi1), (Phi2, Psi2)) = M_L ||Psi1 - Psi2|| + M'_L ||A Phi1 - A Phi2||.
double parameter_distance(const MeasurementEnsemble& e, double m_l, double m_l_prime,
                          const CMatrix& phi1, const CMatrix& psi1, const CMatrix& phi2,
                          const CMatrix& psi2);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LinearFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ewr
