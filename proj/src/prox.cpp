#include "ewr/prox.hpp"

#include <cmath>

namespace ewr {

Regularizer Regularizer::l1(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ValidationError("l1 regularizer: lambda must be >= 0");
  return {Kind::l1, lambda};
}

double Regularizer::value(const CVector& z) const {
  if (kind == Kind::none) return 0.0;
  return lambda * z.cwiseAbs().sum();
}

CVector prox_reg(const Regularizer& r, double t, const CVector& z) {
  if (!(t >= 0.0)) throw ValidationError("prox_reg: t must be >= 0");
  if (r.kind == Regularizer::Kind::none) return z;
  const double thr = t * r.lambda;
  CVector out(z.size());
  for (Index i = 0; i < z.size(); ++i) {
    const double a = std::abs(z(i));
    out(i) = a > thr ? z(i) * ((a - thr) / a) : cplx(0.0, 0.0);
  }
  return out;
}

ClipRadius::ClipRadius(double c_in_, double c_out_) : c_in(c_in_), c_out(c_out_) {
  if (!(c_in > 0.0) || !(c_out > 0.0)) throw ValidationError("clip radii must be positive");
}

CVector sigma_clip(const ClipRadius& c, const CVector& x) {
  const double n = x.norm();
  if (n <= c.c_out) return x;
  return x * (c.c_out / n);
}

CMatrix sigma_clip_columns(const ClipRadius& c, const CMatrix& x) {
  CMatrix out(x.rows(), x.cols());
  for (Index j = 0; j < x.cols(); ++j) out.col(j) = sigma_clip(c, CVector(x.col(j)));
  return out;
}

}  // namespace ewr
