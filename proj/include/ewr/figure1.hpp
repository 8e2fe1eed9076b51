#pragma once

#include <cstdint>
#include <vector>

#include "ewr/bounds.hpp"
#include "ewr/ensemble.hpp"
#include "ewr/prox.hpp"
#include "ewr/types.hpp"

namespace ewr {

/// Lipschitz lower bounds of Phi -> f^L_Phi(g) found by maximizing
///   r(Phi1, Phi2) = ||f^L_Phi1(g) - f^L_Phi2(g)||_F / ||Phi1 - Phi2||_2
/// over pairs of 2x2 rotations.
struct Figure1Options {
  Index l_max = 8;
  double delta = 0.1;
  Regularizer reg;
  /// Constant step tau = tau_scale * KN/||A||^2.
  double tau_scale = 0.9;
  int grid = 64;
  /// Rounds of coordinate-wise golden-section search after the grid.
  int refine = 20;
  /// Golden-section steps per coordinate per round.
  int inner = 50;
  /// Search all of U(2) (4 angles per matrix) instead of rotations. The grid
  /// is then replaced by grid*grid random pairs drawn from `search_seed`.
  bool general_u2 = false;
  std::uint64_t search_seed = 7;
};

struct Figure1Row {
  Index depth = 0;
  double grid_max = 0.0;
  double lower_bound = 0.0;
  /// Maximizer. For rotations, params hold (theta1) and (theta2); in
  /// general mode each holds four angles.
  std::vector<double> params1, params2;
  /// ||A Phi1 - A Phi2|| at the maximizer and the ratio measured against it.
  double a_denominator = 0.0;
  double a_ratio = 0.0;
  double k_l = 0.0;
};

struct Figure1Result {
  Figure1Options options;
  RVector g;
  double tau = 0.0;
  double gamma = 1.0;
  std::vector<Figure1Row> rows;
  /// Least-squares line through (L, log lower_bound).
  LinearFit fit;
};

/// The default measurement: N = 2 entries uniform on [0, 1] from `seed`,
/// rescaled so the largest equals 1.
RVector figure1_measurement(std::uint64_t seed = 42);

/// 2x2 element of U(2): e^{i a} [[e^{i b} cos t, -e^{-i c} sin t], [e^{i c} sin t, e^{-i b} cos t]]
/// for params (t, a, b, c).
CMatrix u2_element(const std::vector<double>& params);

/// Rotation mode needs N = 2 and K = 1.
Figure1Result figure1(const MeasurementEnsemble& e, const RVector& g, const Figure1Options& opts);

}  // namespace ewr
