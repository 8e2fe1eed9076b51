#pragma once

#include <string>

#include "ewr/types.hpp"

namespace ewr {

/// Convex regularizer with 0 in its argmin, so prox(0) = 0.
struct Regularizer {
  enum class Kind { none, l1 };

  Kind kind = Kind::none;
  double lambda = 0.0;

  static Regularizer none() { return {}; }
  static Regularizer l1(double lambda);

  std::string name() const { return kind == Kind::l1 ? "l1" : "none"; }
  double value(const CVector& z) const;
};

/// prox_{t R}(z). l1 shrinks each modulus by t*lambda and keeps the phase.
CVector prox_reg(const Regularizer& r, double t, const CVector& z);

struct ClipRadius {
  double c_in = 1.0;
  double c_out = 1.0;

  ClipRadius() = default;
  explicit ClipRadius(double c_out_) : ClipRadius(c_out_, c_out_) {}
  ClipRadius(double c_in_, double c_out_);
};

/// Radial projection onto the l2 ball of radius c_out.
CVector sigma_clip(const ClipRadius& c, const CVector& x);
/// sigma_clip applied to every column.
CMatrix sigma_clip_columns(const ClipRadius& c, const CMatrix& x);

}  // namespace ewr
