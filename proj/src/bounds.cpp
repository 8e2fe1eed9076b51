#include "ewr/bounds.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace ewr {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without overflow.
double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// log(1 + exp(x)).
double log1p_exp(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

void require_positive_dims(Index n, Index k, Index m) {
  if (n < 1 || k < 1 || m < 1) throw ValidationError("N, K and m must be >= 1");
}

}  // namespace

double max_step(double norm_a, Index k, Index n) {
  if (!(norm_a > 0.0)) throw ValidationError("max_step: ||A|| must be positive");
  return static_cast<double>(k * n) / (norm_a * norm_a);
}

double max_step(const MeasurementEnsemble& e) {
  return max_step(e.operator_norm(), e.num_focal(), e.signal_size());
}

bool check_assumption1(const std::vector<double>& taus, double norm_a, Index k, Index n) {
  const double limit = max_step(norm_a, k, n);
  for (double t : taus)
    if (!(t <= limit)) return false;
  return true;
}

bool check_assumption1(const std::vector<double>& taus, const MeasurementEnsemble& e) {
  return check_assumption1(taus, e.operator_norm(), e.num_focal(), e.signal_size());
}

double sup_norm(const RMatrix& g) { return g.size() == 0 ? 0.0 : g.cwiseAbs().maxCoeff(); }

BoundInputs BoundInputs::from(const MeasurementEnsemble& e, const RMatrix& g,
                              const std::vector<double>& taus, double delta) {
  BoundInputs in;
  in.n = e.signal_size();
  in.k = e.num_focal();
  in.m = g.cols();
  in.delta = delta;
  in.norm_a = e.operator_norm();
  in.g_inf = sup_norm(g);
  in.taus = taus;
  return in;
}

double k_closed_sum(double gamma, const std::vector<double>& b) {
  const auto depth = static_cast<double>(b.size());
  double acc = 0.0;
  for (std::size_t l = 0; l < b.size(); ++l) acc += std::pow(gamma, depth - static_cast<double>(l)) * b[l];
  return acc;
}

double covering_log(double eps, Index n, Index k, double m_l, double m_l_prime, double norm_a) {
  return covering_log_lg(eps, n, k, m_l, safe_log(m_l_prime), norm_a);
}

double covering_log_lg(double eps, Index n, Index k, double m_l, double log_m_l_prime,
                       double norm_a) {
  if (!(eps > 0.0)) throw ValidationError("covering_log: eps must be positive");
  const double n2 = static_cast<double>(n) * static_cast<double>(n);
  const double first = 2.0 * n2 * std::log1p(4.0 * m_l / eps);
  const double lg = std::log(4.0 * norm_a / eps) + log_m_l_prime;
  const double second = 2.0 * static_cast<double>(k) * n2 * (norm_a > 0.0 ? log1p_exp(lg) : 0.0);
  return first + second;
}

double rademacher_bound(Index n, Index k, Index m, double c_out, double m_l, double m_l_prime,
                        double norm_a) {
  return rademacher_bound_lg(n, k, m, c_out, m_l, safe_log(m_l_prime), norm_a);
}

double rademacher_bound_lg(Index n, Index k, Index m, double c_out, double m_l,
                           double log_m_l_prime, double norm_a) {
  require_positive_dims(n, k, m);
  if (!(c_out > 0.0)) throw ValidationError("rademacher_bound: C_out must be positive");
  const double sm = std::sqrt(static_cast<double>(m));
  // log(e (1 + x)) = 1 + log1p(x)
  const double t1 = 1.0 + std::log1p(8.0 * m_l / (sm * c_out));
  const double t2 =
      1.0 + (norm_a > 0.0 ? log1p_exp(std::log(8.0 * norm_a / (sm * c_out)) + log_m_l_prime) : 0.0);
  return 4.0 * c_out * static_cast<double>(n) / sm *
         (std::sqrt(t1) + std::sqrt(static_cast<double>(k)) * std::sqrt(t2));
}

double generalization_bound_from_rademacher(double rademacher, Index m, double c_in, double c_out,
                                            double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
  if (m < 1) throw ValidationError("m must be >= 1");
  return 2.0 * rademacher +
         4.0 * (c_in + c_out) * std::sqrt(2.0 * std::log(4.0 / alpha) / static_cast<double>(m));
}

double generalization_bound(Index n, Index k, Index m, double c_out, double m_l, double m_l_prime,
                            double norm_a, double c_in, double alpha) {
  const double r = rademacher_bound(n, k, m, c_out, m_l, m_l_prime, norm_a);
  return generalization_bound_from_rademacher(r, m, c_in, c_out, alpha);
}

BoundReport bound_constants(const BoundInputs& in, bool strict) {
  require_positive_dims(in.n, in.k, in.m);
  if (!(in.delta > 0.0)) throw ValidationError("bound_constants: delta must be positive");
  if (!(in.g_inf >= 0.0)) throw ValidationError("bound_constants: ||G||_inf must be >= 0");
  for (double t : in.taus)
    if (!(t > 0.0)) throw ValidationError("bound_constants: step sizes must be positive");

  BoundReport r;
  r.inputs = in;
  r.assumption1_ok = check_assumption1(in.taus, in.norm_a, in.k, in.n);
  if (strict && !r.assumption1_ok)
    throw AssumptionViolation("bound_constants: a step size exceeds KN/||A||^2 = " +
                              std::to_string(max_step(in.norm_a, in.k, in.n)));

  const double kn = static_cast<double>(in.k * in.n);
  const double sm = std::sqrt(static_cast<double>(in.m));
  const double s_lip = in.nonlinearity == NonlinearityKind::linear ? 0.0 : in.g_inf / in.delta;
  r.gamma = 1.0 + s_lip;
  const double log_gamma = std::log(r.gamma);

  r.t_cumsum.assign(1, 0.0);
  for (double t : in.taus) r.t_cumsum.push_back(r.t_cumsum.back() + t);

  r.k_seq.assign(1, 0.0);
  r.log_k_seq.assign(1, kNegInf);
  for (std::size_t l = 0; l < in.taus.size(); ++l) {
    const double bl = 2.0 * in.taus[l] / kn * in.norm_a * (sm + r.t_cumsum[l] / kn * in.norm_a * in.g_inf);
    r.b.push_back(bl);
    r.k_seq.push_back(r.gamma * (r.k_seq.back() + bl));
    r.log_k_seq.push_back(log_gamma + log_add_exp(r.log_k_seq.back(), safe_log(bl)));
  }
  r.k_l = r.k_seq.back();
  r.log_k_l = r.log_k_seq.back();
  r.k_l_overflow = !std::isfinite(r.k_l);
  r.m_l = sm + r.t_cumsum.back() / kn * in.norm_a * in.g_inf;
  r.m_l_prime = r.k_l;
  r.log_m_l_prime = r.log_k_l;

  for (double eps : {1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0})
    r.covering.push_back({eps, covering_log_lg(eps, in.n, in.k, r.m_l, r.log_m_l_prime, in.norm_a)});
  r.rademacher = rademacher_bound_lg(in.n, in.k, in.m, in.c_out, r.m_l, r.log_m_l_prime, in.norm_a);
  r.gen_bound = generalization_bound_from_rademacher(r.rademacher, in.m, in.c_in, in.c_out, in.alpha);
  return r;
}

LinearFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("least_squares_line: need >= 2 points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

ScalingSummary scaling_summary(const BoundInputs& base, Index l_min, Index l_max, double tau) {
  if (l_min < 1 || l_max < l_min) throw ValidationError("scaling_summary: need 1 <= l_min <= l_max");
  ScalingSummary s;
  std::vector<double> xs, ms, lks;
  for (Index depth = l_min; depth <= l_max; ++depth) {
    BoundInputs in = base;
    in.taus.assign(static_cast<std::size_t>(depth), tau);
    const BoundReport r = bound_constants(in);
    s.rows.push_back({depth, r.m_l, r.k_l, r.log_k_l, r.gen_bound});
    xs.push_back(static_cast<double>(depth));
    ms.push_back(r.m_l);
    lks.push_back(r.log_k_l);
    s.log_gamma = std::log(r.gamma);
  }
  if (xs.size() >= 2) {
    const LinearFit mf = least_squares_line(xs, ms);
    for (std::size_t i = 0; i < xs.size(); ++i)
      s.m_l_affine_residual =
          std::max(s.m_l_affine_residual, std::abs(ms[i] - (mf.intercept + mf.slope * xs[i])) / ms[i]);
    s.log_k_slope = least_squares_line(xs, lks).slope;
    s.slope_rel_error = s.log_gamma > 0.0 ? std::abs(s.log_k_slope - s.log_gamma) / s.log_gamma
                                          : std::abs(s.log_k_slope);
  }
  return s;
}

double empirical_risk(const CMatrix& outputs, const CMatrix& truths) {
  if (outputs.rows() != truths.rows() || outputs.cols() != truths.cols())
    throw ValidationError("empirical_risk: shape mismatch");
  if (outputs.cols() == 0) throw ValidationError("empirical_risk: need at least one sample");
  double acc = 0.0;
  for (Index j = 0; j < outputs.cols(); ++j) acc += (outputs.col(j) - truths.col(j)).norm();
  return acc / static_cast<double>(outputs.cols());
}

double parameter_distance(const MeasurementEnsemble& e, double m_l, double m_l_prime,
                          const CMatrix& phi1, const CMatrix& psi1, const CMatrix& phi2,
                          const CMatrix& psi2) {
  return m_l * spectral_norm(psi1 - psi2) + m_l_prime * e.composed_norm(phi1 - phi2);
}

}  // namespace ewr
