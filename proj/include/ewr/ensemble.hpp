#pragma once

#include <cstdint>
#include <vector>

#include "ewr/rng.hpp"
#include "ewr/types.hpp"

namespace ewr {

/// Square matrix checked on construction to satisfy ||U*U - I||_F <= 1e-10 * N.
class UnitaryMatrix {
 public:
  UnitaryMatrix() = default;
  explicit UnitaryMatrix(CMatrix m);

  static UnitaryMatrix identity(Index n);

  const CMatrix& matrix() const { return m_; }
  Index size() const { return m_.rows(); }
  double unitarity_defect() const;

  CVector operator*(const CVector& v) const { return m_ * v; }
  CMatrix operator*(const CMatrix& v) const { return m_ * v; }
  UnitaryMatrix adjoint() const;

 private:
  CMatrix m_;
};

/// Real rotation by theta, embedded in U(2).
UnitaryMatrix rotation(double theta);

/// Haar-distributed unitary: QR of an i.i.d. complex Gaussian matrix with the
/// diagonal of R rotated onto the positive reals.
UnitaryMatrix random_unitary(Rng& rng, Index n);

/// Largest singular value of an arbitrary matrix (dense SVD).
double spectral_norm(const CMatrix& m);

/// The stacked focal-series operator A = [A_1; ...; A_K], A_j z = IDFT(z .* w_j),
/// with the unitary 1/sqrt(N) DFT normalization.
///
/// With that normalization A*A = diag(sum_j |w_j|^2), so ||A||_{2->2} has the
/// closed form max_n sqrt(sum_j |w_j(n)|^2) and ||A M||_{2->2} reduces to an
/// N x N problem for any M.
class MeasurementEnsemble {
 public:
  /// make_ensemble: K >= 1 weight vectors of a common length N >= 1.
  static MeasurementEnsemble make(const std::vector<CVector>& weights);
  /// Weights given as the rows of a K x N matrix.
  static MeasurementEnsemble from_rows(const CMatrix& weights);

  Index signal_size() const { return weights_.cols(); }
  Index num_focal() const { return weights_.rows(); }
  Index rows() const { return weights_.rows() * weights_.cols(); }

  /// K x N, row j holds w_j.
  const CMatrix& weights() const { return weights_; }
  /// sum_j |w_j(n)|^2, the diagonal of A*A.
  const RVector& column_energy() const { return energy_; }
  double operator_norm() const { return norm_; }
  /// ||A||_F^2, the sum of squared row norms of A.
  double frobenius_norm_sq() const { return energy_.sum(); }

  CVector apply(const CVector& psi) const;
  CVector apply_adjoint(const CVector& y) const;
  CMatrix apply(const CMatrix& psi) const;
  CMatrix apply_adjoint(const CMatrix& y) const;

  /// ||A M||_{2->2} for a matrix with N rows.
  double composed_norm(const CMatrix& m) const;

  /// Explicit KN x N matrix; for tests and small problems only.
  CMatrix dense() const;

  static constexpr const char* dft_convention = "unitary";

 private:
  explicit MeasurementEnsemble(CMatrix weights);

  CMatrix weights_;
  RVector energy_;
  double norm_ = 0.0;
};

struct PowerIterationOptions {
  int max_iters = 200;
  double tol = 1e-10;
  std::uint64_t seed = 0x5eed;
};

struct PowerIterationResult {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// ||A||_{2->2} estimated by power iteration on A*A (apply/adjoint only).
PowerIterationResult power_iteration_norm(const MeasurementEnsemble& e,
                                          const PowerIterationOptions& opts = {});

}  // namespace ewr
