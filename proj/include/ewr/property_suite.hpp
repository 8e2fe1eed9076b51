#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ewr/ensemble.hpp"
#include "ewr/prox.hpp"
#include "ewr/rng.hpp"
#include "ewr/types.hpp"

namespace ewr {

/// The constant c with (central differences of D on R^{2N}) = c * data_gradient.
inline constexpr double kGradientConstant = 1.0;

/// One named invariant checked over many random trials. `worst` is the
/// largest violation measure seen (relative or absolute, per check) and the
/// entry passes iff worst <= tolerance.
struct PropertyResult {
  std::string name;
  bool passed = true;
  long trials = 0;
  long failures = 0;
  double worst = -std::numeric_limits<double>::infinity();
  double tolerance = 0.0;
  std::string detail;
};

/// Random small problem: Gaussian weights with N in [2, 8], K in [1, 3],
/// Haar Phi, G uniform on [0, 1] with m in [1, max_cols] columns, delta in
/// {0.1, 1}, depth in [1, max_depth] and steps tau_l = u_l * KN/||A||^2
/// (u_l uniform on [0.05, 1], or all 1 in a quarter of the draws), then
/// multiplied by tau_factor. Half the draws use R = 0, the rest l1.
struct RandomInstance {
  MeasurementEnsemble e;
  CMatrix phi;
  RMatrix g;
  double delta;
  std::vector<double> taus;
  Regularizer reg;
};

RandomInstance random_instance(Rng& rng, Index max_depth, Index max_cols, double tau_factor = 1.0);

/// A unitary near u: u * Q with Q from the QR of I + eps * (complex Gaussian).
CMatrix perturbed_unitary(Rng& rng, const CMatrix& u, double eps);

// core
PropertyResult check_norm_vs_svd(Rng& rng, long per_shape);
PropertyResult check_norm_vs_power_iteration(Rng& rng, long count);
PropertyResult check_composed_norm_invariance(Rng& rng, long count);
PropertyResult check_adjoint_pairing(Rng& rng, long count);
PropertyResult check_operator_inequalities(Rng& rng, long count);
PropertyResult check_random_unitary(Rng& rng, long count);
// nonlin
PropertyResult check_prox_identities(Rng& rng, long per_delta);
PropertyResult check_moreau(Rng& rng, long per_delta);
PropertyResult check_phi_prime_bound(Rng& rng, long per_delta);
PropertyResult check_prox_firmly_nonexpansive(Rng& rng, long count);
PropertyResult check_prox_scaling(Rng& rng, long count);
PropertyResult check_prox_modulus(Rng& rng, long count);
// prox
PropertyResult check_reg_firmly_nonexpansive(Rng& rng, long count);
PropertyResult check_reg_zero(Rng& rng, long count);
PropertyResult check_sigma_lipschitz(Rng& rng, long count);
// model
PropertyResult check_gradient_fd(Rng& rng, long count);
PropertyResult check_descent(Rng& rng, long count);
PropertyResult check_factor_identity(Rng& rng, long count);
PropertyResult check_gradient_vs_prox_form(Rng& rng, long count);
// unroll
PropertyResult check_t_firmly_nonexpansive(Rng& rng, long count, double tau_factor = 1.0);
PropertyResult check_s_lipschitz(Rng& rng, long count);
PropertyResult check_combined_step(Rng& rng, long count, double tau_factor = 1.0);
/// ||f^l||_F <= sqrt(m) + ||A|| ||G||_inf T_l / KN at every stage.
PropertyResult check_output_norm_sup(Rng& rng, long runs);
/// The same with ||G||_F in place of ||G||_inf.
PropertyResult check_output_norm_frobenius(Rng& rng, long runs);
PropertyResult check_perturbation(Rng& rng, long runs);
PropertyResult check_output_map(Rng& rng, long runs);
// bounds
PropertyResult check_k_recursion(Rng& rng, long count, Index l_max = 50);
PropertyResult check_bounds_monotone(Rng& rng, long count);
PropertyResult check_metric(Rng& rng, long count);
PropertyResult check_risk_bound(Rng& rng, long count);
PropertyResult check_linear_variant(Rng& rng, long count, Index l_max = 20);
PropertyResult check_scaling();
// exper
PropertyResult check_dataset(Rng& rng, long count);

struct SuiteOptions {
  std::uint64_t seed = 1;
  /// Base trial count; pair checks use 10x, scalar checks 100x, the
  /// finite-difference check 1/10.
  long trials = 1000;
  /// Multiplies the step size in the firm-nonexpansiveness checks.
  double tau_factor = 1.0;
  /// Run only entries whose name starts with one of these (empty = all).
  std::vector<std::string> only;
  /// Skip entries whose name starts with one of these.
  std::vector<std::string> skip;
};

struct PropertyReport {
  SuiteOptions options;
  std::vector<PropertyResult> entries;
  bool all_passed() const;
};

/// Names of every suite entry in run order.
std::vector<std::string> property_names();

/// Each entry draws from its own stream rng.split(index), so filtering does
/// not change the results of the entries that remain.
PropertyReport property_suite(const SuiteOptions& opts);

}  // namespace ewr
