#include "ewr/unroll.hpp"

#include <cmath>
#include <string>

#include "ewr/bounds.hpp"
#include "ewr/model.hpp"

namespace ewr {

const char* to_string(InitMode m) {
  return m == InitMode::spectral ? "spectral" : "fixed_unit_vector";
}

InitMode parse_init_mode(const std::string& s) {
  if (s == "spectral") return InitMode::spectral;
  if (s == "fixed_unit_vector" || s == "fixed") return InitMode::fixed_unit_vector;
  throw ValidationError("unknown init mode '" + s + "' (expected spectral or fixed_unit_vector)");
}

UnrollConfig UnrollConfig::constant(const MeasurementEnsemble& e, Index depth, double delta,
                                    double tau_scale) {
  if (depth < 0) throw ValidationError("depth must be >= 0");
  if (!(tau_scale > 0.0)) throw ValidationError("tau_scale must be positive");
  UnrollConfig cfg;
  cfg.taus.assign(static_cast<std::size_t>(depth), tau_scale * max_step(e));
  cfg.nl = Nonlinearity::pseudo_huber(delta);
  return cfg;
}

namespace {

void require_dims(const MeasurementEnsemble& e, const CMatrix& phi, Index z_size, Index g_size,
                  const char* what) {
  const Index n = e.signal_size();
  if (phi.rows() != n || phi.cols() != n)
    throw ValidationError(std::string(what) + ": dictionary must be N x N with N = " + std::to_string(n));
  if (z_size != n) throw ValidationError(std::string(what) + ": code length must be N");
  if (g_size >= 0 && g_size != e.rows())
    throw ValidationError(std::string(what) + ": measurement length must be KN = " +
                          std::to_string(e.rows()));
}

void check_steps(const MeasurementEnsemble& e, const std::vector<double>& taus, bool strict) {
  for (double t : taus)
    if (!(t > 0.0)) throw ValidationError("step sizes must be positive");
  if (strict && !check_assumption1(taus, e))
    throw AssumptionViolation("step size exceeds KN/||A||^2 = " + std::to_string(max_step(e)));
}

}  // namespace

CVector t_phi(const MeasurementEnsemble& e, const CMatrix& phi, const CVector& z,
              const Nonlinearity& nl) {
  require_dims(e, phi, z.size(), -1, "T_Phi");
  CVector y = e.apply(CVector(phi * z));
  for (Index i = 0; i < y.size(); ++i) y(i) = nl.t_part(y(i));
  return phi.adjoint() * e.apply_adjoint(y) / static_cast<double>(e.rows());
}

CVector s_g_phi(const MeasurementEnsemble& e, const CMatrix& phi, const RVector& g,
                const CVector& z, const Nonlinearity& nl) {
  require_dims(e, phi, z.size(), g.size(), "S_Phi");
  CVector y = e.apply(CVector(phi * z));
  for (Index i = 0; i < y.size(); ++i) y(i) = nl.s_part(y(i), g(i));
  return phi.adjoint() * e.apply_adjoint(y) / static_cast<double>(e.rows());
}

CVector stage(const MeasurementEnsemble& e, const CMatrix& phi, const CVector& z, const RVector& g,
              double tau, const Regularizer& reg, const Nonlinearity& nl) {
  require_dims(e, phi, z.size(), g.size(), "stage");
  return prox_reg(reg, tau, z - tau * data_gradient(e, phi, z, g, nl));
}

CVector stage_prox_form(const MeasurementEnsemble& e, const CMatrix& phi, const CVector& z,
                        const RVector& g, double tau, const Regularizer& reg,
                        const Nonlinearity& nl) {
  const CVector step = t_phi(e, phi, z, nl) - s_g_phi(e, phi, g, z, nl);
  return prox_reg(reg, tau, z - tau * step);
}

SpectralInit spectral_init(const MeasurementEnsemble& e, const RVector& g, double delta,
                           InitMode mode, const PowerIterationOptions& opts) {
  const Index n = e.signal_size();
  if (g.size() != e.rows()) throw ValidationError("spectral_init: measurement length must be KN");
  SpectralInit out;
  out.psi0 = CVector::Unit(n, 0);
  if (mode == InitMode::fixed_unit_vector) return out;

  const RVector g_tilde = inverse_gamma(g, delta);
  const double total = g_tilde.sum();
  if (!(total > 0.0)) {
    out.fell_back = true;
    return out;
  }
  const double kn = static_cast<double>(e.rows());
  auto apply_y = [&](const CVector& v) -> CVector {
    return e.apply_adjoint(CVector(g_tilde.cast<cplx>().cwiseProduct(e.apply(v)))) / kn;
  };

  Rng rng(opts.seed);
  CVector v = complex_normal_vector(rng, n);
  v.normalize();
  bool converged = false;
  for (int it = 1; it <= opts.max_iters; ++it) {
    const CVector w = apply_y(v);
    const double mu = std::real(v.dot(w));
    out.power_iterations = it;
    const double wn = w.norm();
    if (wn == 0.0) break;
    if ((w - mu * v).norm() <= opts.tol * std::max(std::abs(mu), 1e-300)) {
      converged = true;
      break;
    }
    v = w / wn;
  }
  if (!converged) {
    // Small eigengap: finish with a dense Hermitian eigensolve of Y (N x N).
    CMatrix y(n, n);
    for (Index k = 0; k < n; ++k) y.col(k) = apply_y(CVector(CVector::Unit(n, k)));
    const CMatrix herm = (y + y.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm);
    v = es.eigenvectors().col(n - 1);
    out.dense_eigensolve = true;
  }

  Index big = 0;
  for (Index i = 1; i < n; ++i)
    if (std::abs(v(i)) > std::abs(v(big))) big = i;
  const double a = std::abs(v(big));
  if (a > 0.0) v *= std::conj(v(big)) / a;
  v.normalize();

  const double scale = std::sqrt(static_cast<double>(n) * total / e.frobenius_norm_sq());
  out.psi0 = v * scale;
  return out;
}

CMatrix initial_codes(const MeasurementEnsemble& e, const CMatrix& phi, const RMatrix& g,
                      const UnrollConfig& cfg) {
  const Index n = e.signal_size();
  CMatrix f(n, g.cols());
  for (Index j = 0; j < g.cols(); ++j) {
    if (cfg.init == InitMode::fixed_unit_vector) {
      f.col(j) = CVector::Unit(n, 0);
    } else {
      const SpectralInit s = spectral_init(e, RVector(g.col(j)), cfg.nl.delta(), cfg.init, cfg.spectral_power);
      // Spectral init estimates the signal; the network iterates on codes.
      f.col(j) = phi.adjoint() * s.psi0;
    }
  }
  return f;
}

std::vector<CMatrix> unroll_trace(const MeasurementEnsemble& e, const CMatrix& phi,
                                  const RMatrix& g, const UnrollConfig& cfg) {
  require_dims(e, phi, e.signal_size(), g.rows(), "unroll");
  if (g.cols() < 1) throw ValidationError("unroll: need at least one measurement column");
  check_steps(e, cfg.taus, cfg.strict_assumption1);

  std::vector<CMatrix> trace;
  trace.reserve(cfg.taus.size() + 1);
  trace.push_back(initial_codes(e, phi, g, cfg));
  for (double tau : cfg.taus) {
    const CMatrix& prev = trace.back();
    CMatrix next(prev.rows(), prev.cols());
    for (Index j = 0; j < prev.cols(); ++j)
      next.col(j) = stage(e, phi, CVector(prev.col(j)), RVector(g.col(j)), tau, cfg.reg, cfg.nl);
    trace.push_back(std::move(next));
  }
  return trace;
}

CMatrix unroll(const MeasurementEnsemble& e, const CMatrix& phi, const RMatrix& g,
               const UnrollConfig& cfg) {
  return unroll_trace(e, phi, g, cfg).back();
}

CMatrix network_output(const MeasurementEnsemble& e, const CMatrix& psi, const CMatrix& phi,
                       const RMatrix& g, const UnrollConfig& cfg) {
  if (psi.rows() != e.signal_size() || psi.cols() != e.signal_size())
    throw ValidationError("network_output: synthesis dictionary must be N x N");
  return sigma_clip_columns(cfg.clip, psi * unroll(e, phi, g, cfg));
}

PgaResult pga_reconstruct(const MeasurementEnsemble& e, const RVector& g, const CMatrix& phi,
                          const PgaOptions& opts) {
  require_dims(e, phi, e.signal_size(), g.size(), "pga_reconstruct");
  if (opts.max_iters < 0) throw ValidationError("pga_reconstruct: max_iters must be >= 0");
  if (!(opts.tau > 0.0)) throw ValidationError("pga_reconstruct: tau must be positive");
  PgaResult res;
  res.assumption1_ok = check_assumption1({opts.tau}, e);
  if (opts.strict_assumption1 && !res.assumption1_ok)
    throw AssumptionViolation("pga_reconstruct: tau exceeds KN/||A||^2");

  const SpectralInit init = spectral_init(e, g, opts.nl.delta(), opts.init, opts.spectral_power);
  res.init_fell_back = init.fell_back;
  // Fixed mode starts from the code e_1, matching the unrolled network.
  CVector z = opts.init == InitMode::spectral ? CVector(phi.adjoint() * init.psi0) : init.psi0;

  auto objective = [&](const CVector& code) {
    return data_term(e, CVector(phi * code), g, opts.nl) + opts.reg.value(code);
  };
  res.objective.reserve(static_cast<std::size_t>(opts.max_iters) + 1);
  res.objective.push_back(objective(z));
  for (int it = 0; it < opts.max_iters; ++it) {
    z = stage(e, phi, z, g, opts.tau, opts.reg, opts.nl);
    res.objective.push_back(objective(z));
  }
  res.psi = phi * z;
  res.z = std::move(z);
  return res;
}

}  // namespace ewr
