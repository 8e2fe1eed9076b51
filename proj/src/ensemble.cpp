#include "ewr/ensemble.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/FFT>

namespace ewr {

namespace {

// Unitary inverse DFT: (1/sqrt(N)) sum_k x_k exp(+2 pi i k n / N).
CVector idft_unitary(const CVector& x) {
  if (x.size() == 1) return x;  // kissfft does not handle length 1
  Eigen::FFT<double> fft;
  CVector out(x.size());
  fft.inv(out, x);  // scaled by 1/N
  return out * std::sqrt(static_cast<double>(x.size()));
}

// Unitary forward DFT, the adjoint of idft_unitary.
CVector dft_unitary(const CVector& x) {
  if (x.size() == 1) return x;
  Eigen::FFT<double> fft;
  CVector out(x.size());
  fft.fwd(out, x);
  return out / std::sqrt(static_cast<double>(x.size()));
}

}  // namespace

UnitaryMatrix::UnitaryMatrix(CMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw ValidationError("UnitaryMatrix: matrix must be square");
  const double defect = unitarity_defect();
  if (!(defect <= 1e-10 * std::max<double>(1.0, static_cast<double>(m_.rows()))))
    throw ValidationError("UnitaryMatrix: ||U*U - I||_F = " + std::to_string(defect));
}

UnitaryMatrix UnitaryMatrix::identity(Index n) { return UnitaryMatrix(CMatrix::Identity(n, n)); }

double UnitaryMatrix::unitarity_defect() const {
  return (m_.adjoint() * m_ - CMatrix::Identity(m_.rows(), m_.cols())).norm();
}

UnitaryMatrix UnitaryMatrix::adjoint() const { return UnitaryMatrix(CMatrix(m_.adjoint())); }

UnitaryMatrix rotation(double theta) {
  CMatrix r(2, 2);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  r << c, -s, s, c;
  return UnitaryMatrix(std::move(r));
}

UnitaryMatrix random_unitary(Rng& rng, Index n) {
  if (n < 1) throw ValidationError("random_unitary: n must be >= 1");
  const CMatrix x = complex_normal_matrix(rng, n, n);
  Eigen::HouseholderQR<CMatrix> qr(x);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix& r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    const double a = std::abs(d);
    if (a > 0.0) q.col(j) *= d / a;
  }
  return UnitaryMatrix(std::move(q));
}

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

MeasurementEnsemble::MeasurementEnsemble(CMatrix weights) : weights_(std::move(weights)) {
  energy_ = weights_.cwiseAbs2().colwise().sum().transpose();
  norm_ = std::sqrt(energy_.maxCoeff());
}

MeasurementEnsemble MeasurementEnsemble::make(const std::vector<CVector>& weights) {
  if (weights.empty()) throw ValidationError("make_ensemble: need at least one weight vector");
  const Index n = weights.front().size();
  if (n < 1) throw ValidationError("make_ensemble: weight vectors must be nonempty");
  CMatrix w(static_cast<Index>(weights.size()), n);
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (weights[j].size() != n)
      throw ValidationError("make_ensemble: weight vector " + std::to_string(j) + " has length " +
                            std::to_string(weights[j].size()) + ", expected " + std::to_string(n));
    w.row(static_cast<Index>(j)) = weights[j].transpose();
  }
  return MeasurementEnsemble(std::move(w));
}

MeasurementEnsemble MeasurementEnsemble::from_rows(const CMatrix& weights) {
  if (weights.rows() < 1) throw ValidationError("make_ensemble: need at least one weight vector");
  if (weights.cols() < 1) throw ValidationError("make_ensemble: weight vectors must be nonempty");
  return MeasurementEnsemble(weights);
}

CVector MeasurementEnsemble::apply(const CVector& psi) const {
  const Index n = signal_size();
  if (psi.size() != n)
    throw ValidationError("apply_A: expected length " + std::to_string(n) + ", got " +
                          std::to_string(psi.size()));
  CVector out(rows());
  for (Index j = 0; j < num_focal(); ++j) {
    const CVector weighted = psi.cwiseProduct(weights_.row(j).transpose());
    out.segment(j * n, n) = idft_unitary(weighted);
  }
  return out;
}

CVector MeasurementEnsemble::apply_adjoint(const CVector& y) const {
  const Index n = signal_size();
  if (y.size() != rows())
    throw ValidationError("apply_A_adjoint: expected length " + std::to_string(rows()) + ", got " +
                          std::to_string(y.size()));
  CVector out = CVector::Zero(n);
  for (Index j = 0; j < num_focal(); ++j) {
    const CVector block = y.segment(j * n, n);
    out += dft_unitary(block).cwiseProduct(weights_.row(j).transpose().conjugate());
  }
  return out;
}

CMatrix MeasurementEnsemble::apply(const CMatrix& psi) const {
  CMatrix out(rows(), psi.cols());
  for (Index c = 0; c < psi.cols(); ++c) out.col(c) = apply(CVector(psi.col(c)));
  return out;
}

CMatrix MeasurementEnsemble::apply_adjoint(const CMatrix& y) const {
  CMatrix out(signal_size(), y.cols());
  for (Index c = 0; c < y.cols(); ++c) out.col(c) = apply_adjoint(CVector(y.col(c)));
  return out;
}

double MeasurementEnsemble::composed_norm(const CMatrix& m) const {
  if (m.rows() != signal_size()) throw ValidationError("composed_norm: row count must equal N");
  // ||A M||^2 = lambda_max(M* A*A M) = ||diag(sqrt(energy)) M||^2.
  const CMatrix scaled = energy_.cwiseSqrt().asDiagonal() * m;
  return spectral_norm(scaled);
}

CMatrix MeasurementEnsemble::dense() const {
  const Index n = signal_size();
  CMatrix a(rows(), n);
  for (Index k = 0; k < n; ++k) a.col(k) = apply(CVector(CVector::Unit(n, k)));
  return a;
}

PowerIterationResult power_iteration_norm(const MeasurementEnsemble& e,
                                          const PowerIterationOptions& opts) {
  Rng rng(opts.seed);
  CVector v = complex_normal_vector(rng, e.signal_size());
  v.normalize();
  PowerIterationResult res;
  double lambda = 0.0;
  for (int it = 1; it <= opts.max_iters; ++it) {
    const CVector w = e.apply_adjoint(e.apply(v));
    lambda = std::real(v.dot(w));  // Rayleigh quotient of A*A
    res.iterations = it;
    // Stop on the eigen-residual rather than on successive changes, which
    // stall long before convergence when the top two energies are close.
    if ((w - lambda * v).norm() <= opts.tol * std::abs(lambda)) {
      res.converged = true;
      break;
    }
    const double wn = w.norm();
    if (wn == 0.0) {
      res.converged = true;
      break;
    }
    v = w / wn;
  }
  res.value = std::sqrt(std::max(lambda, 0.0));
  return res;
}

}  // namespace ewr
