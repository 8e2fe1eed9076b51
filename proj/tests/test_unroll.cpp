#include <gtest/gtest.h>

#include <cmath>

#include "ewr/bounds.hpp"
#include "ewr/model.hpp"
#include "ewr/property_suite.hpp"
#include "ewr/unroll.hpp"
#include "oracles.hpp"

using namespace ewr;

namespace {

struct Setup {
  MeasurementEnsemble e;
  CMatrix phi;
  RMatrix g;
};

Setup make_setup(std::uint64_t seed, Index k = 2, Index n = 6, Index m = 3) {
  Rng rng(seed);
  auto e = MeasurementEnsemble::from_rows(complex_normal_matrix(rng, k, n));
  CMatrix phi = random_unitary(rng, n).matrix();
  RMatrix g(e.rows(), m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < e.rows(); ++i) g(i, j) = rng.uniform();
  return {std::move(e), std::move(phi), std::move(g)};
}

}  // namespace

TEST(Stage, FixedPointOnConsistentData) {
  Rng rng(1);
  const auto s = make_setup(1);
  const CVector z = complex_normal_vector(rng, 6);
  const RVector g = transform_gamma(synthesize(s.e, CVector(s.phi * z)), 0.1);
  const CVector out = stage(s.e, s.phi, z, g, 0.9 * max_step(s.e), Regularizer::none(), Nonlinearity::pseudo_huber(0.1));
  EXPECT_LE((out - z).norm(), 1e-14 * z.norm());
}

TEST(Stage, FullShrinkage) {
  Rng rng(2);
  const auto s = make_setup(2);
  const CVector z = complex_normal_vector(rng, 6);
  const double tau = 0.5 * max_step(s.e);
  const Nonlinearity nl = Nonlinearity::pseudo_huber(1.0);
  const CVector pre = z - tau * data_gradient(s.e, s.phi, z, RVector(s.g.col(0)), nl);
  const double lambda = pre.cwiseAbs().maxCoeff() / tau * 1.01;
  EXPECT_EQ(stage(s.e, s.phi, z, RVector(s.g.col(0)), tau, Regularizer::l1(lambda), nl).norm(), 0.0);
}

TEST(Stage, DirectEqualsProxForm) {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const auto s = make_setup(100 + i, 1 + Index(rng.below(3)), 1 + Index(rng.below(8)), 1);
    const CVector z = complex_normal_vector(rng, s.e.signal_size());
    const double tau = rng.uniform(0.05, 1.0) * max_step(s.e);
    const Regularizer reg = i % 2 ? Regularizer::none() : Regularizer::l1(0.05);
    const Nonlinearity nl = Nonlinearity::pseudo_huber(i % 3 ? 0.1 : 1.0);
    const CVector a = stage(s.e, s.phi, z, RVector(s.g.col(0)), tau, reg, nl);
    const CVector b = stage_prox_form(s.e, s.phi, z, RVector(s.g.col(0)), tau, reg, nl);
    ASSERT_LE((a - b).norm(), 1e-12 * std::max(1.0, a.norm()));
  }
}

TEST(Operators, VanishAtZero) {
  const auto s = make_setup(4);
  const Nonlinearity nl = Nonlinearity::pseudo_huber(0.1);
  EXPECT_EQ(t_phi(s.e, s.phi, CVector::Zero(6), nl).norm(), 0.0);
  EXPECT_EQ(s_g_phi(s.e, s.phi, RVector(s.g.col(0)), CVector::Zero(6), nl).norm(), 0.0);
}

TEST(Operators, DimensionChecks) {
  const auto s = make_setup(5);
  const Nonlinearity nl;
  EXPECT_THROW(t_phi(s.e, s.phi, CVector(CVector::Zero(5)), nl), ValidationError);
  EXPECT_THROW(s_g_phi(s.e, s.phi, RVector(RVector::Zero(3)), CVector(CVector::Zero(6)), nl), ValidationError);
  EXPECT_THROW(unroll(s.e, s.phi, RMatrix(RMatrix::Zero(5, 2)), UnrollConfig::constant(s.e, 2, 0.1)), ValidationError);
}

TEST(Unroll, DepthZeroIsInitialization) {
  const auto s = make_setup(6);
  const UnrollConfig cfg = UnrollConfig::constant(s.e, 0, 0.1);
  const CMatrix f = unroll(s.e, s.phi, s.g, cfg);
  EXPECT_NEAR(f.norm(), std::sqrt(3.0), 1e-15);
  for (Index j = 0; j < 3; ++j) EXPECT_EQ(f.col(j), CVector(CVector::Unit(6, 0)));
}

TEST(Unroll, MatrixEqualsColumnByColumn) {
  const auto s = make_setup(7);
  UnrollConfig cfg = UnrollConfig::constant(s.e, 5, 0.1);
  cfg.reg = Regularizer::l1(0.01);
  const CMatrix f = unroll(s.e, s.phi, s.g, cfg);
  for (Index j = 0; j < 3; ++j) {
    CVector z = CVector::Unit(6, 0);
    for (double tau : cfg.taus) z = stage(s.e, s.phi, z, RVector(s.g.col(j)), tau, cfg.reg, cfg.nl);
    EXPECT_EQ(f.col(j), z);
    EXPECT_EQ(unroll(s.e, s.phi, RMatrix(s.g.col(j)), cfg).col(0), z);
  }
}

TEST(Unroll, TraceEndsAtUnroll) {
  const auto s = make_setup(8);
  const UnrollConfig cfg = UnrollConfig::constant(s.e, 4, 1.0);
  const auto trace = unroll_trace(s.e, s.phi, s.g, cfg);
  ASSERT_EQ(trace.size(), 5u);
  EXPECT_EQ(trace.back(), unroll(s.e, s.phi, s.g, cfg));
}

TEST(Unroll, AssumptionOneEnforced) {
  const auto s = make_setup(9);
  UnrollConfig cfg = UnrollConfig::constant(s.e, 2, 0.1, 1.5);
  EXPECT_THROW(unroll(s.e, s.phi, s.g, cfg), AssumptionViolation);
  cfg.strict_assumption1 = false;
  EXPECT_NO_THROW(unroll(s.e, s.phi, s.g, cfg));
  cfg.taus = {0.1, -0.1};
  EXPECT_THROW(unroll(s.e, s.phi, s.g, cfg), ValidationError);
}

// With unit weights, g = 1 and a large step, the first iterate leaves the
// ball sqrt(m) + ||A|| ||G||_inf T_1 / KN; the Frobenius-norm version holds.
TEST(Unroll, SupNormOutputBoundCounterexample) {
  const Index n = 8;
  const auto e = MeasurementEnsemble::make({CVector::Ones(n)});
  const RMatrix g = RMatrix::Ones(n, 1);
  UnrollConfig cfg = UnrollConfig::constant(e, 1, 0.1);
  ASSERT_DOUBLE_EQ(cfg.taus[0], 7.2);
  const CMatrix f1 = unroll(e, CMatrix::Identity(n, n), g, cfg);
  const double sup_bound = 1.0 + e.operator_norm() * sup_norm(g) * cfg.taus[0] / double(n);
  const double fro_bound = 1.0 + e.operator_norm() * g.norm() * cfg.taus[0] / double(n);
  EXPECT_NEAR(sup_bound, 1.9, 1e-15);
  EXPECT_GT(f1.norm(), 2.7);
  EXPECT_GT(f1.norm(), sup_bound);
  EXPECT_LE(f1.norm(), fro_bound);
  // all of the mass stays on e_1
  EXPECT_NEAR(std::abs(f1(0, 0)), f1.norm(), 1e-12);
}

TEST(NetworkOutput, ClippedColumns) {
  const auto s = make_setup(10);
  Rng rng(10);
  UnrollConfig cfg = UnrollConfig::constant(s.e, 6, 0.1);
  cfg.clip = ClipRadius(0.5);
  const CMatrix psi = random_unitary(rng, 6).matrix();
  const CMatrix out = network_output(s.e, psi, s.phi, s.g, cfg);
  for (Index j = 0; j < out.cols(); ++j) EXPECT_LE(out.col(j).norm(), 0.5 * (1 + 1e-15));
  // depth 0 gives sigma(Psi e_1)
  const CMatrix out0 = network_output(s.e, psi, s.phi, s.g, UnrollConfig::constant(s.e, 0, 0.1));
  for (Index j = 0; j < out0.cols(); ++j) EXPECT_LE((out0.col(j) - psi.col(0)).norm(), 1e-15);
}

TEST(SpectralInit, FixedModeIsE1) {
  const auto s = make_setup(11);
  const SpectralInit si = spectral_init(s.e, RVector(s.g.col(0)), 0.1, InitMode::fixed_unit_vector);
  EXPECT_EQ(si.psi0, CVector(CVector::Unit(6, 0)));
  EXPECT_DOUBLE_EQ(si.psi0.norm(), 1.0);
}

TEST(SpectralInit, ZeroMeasurementFallsBack) {
  const auto s = make_setup(12);
  const SpectralInit si = spectral_init(s.e, RVector::Zero(s.e.rows()), 0.1, InitMode::spectral);
  EXPECT_TRUE(si.fell_back);
  EXPECT_EQ(si.psi0, CVector(CVector::Unit(6, 0)));
}

TEST(SpectralInit, IsLeadingEigenvector) {
  for (std::uint64_t seed = 20; seed < 30; ++seed) {
    const auto s = make_setup(seed, 3, 8, 1);
    const double d = 0.1;
    const RVector g(s.g.col(0));
    const SpectralInit si = spectral_init(s.e, g, d, InitMode::spectral);
    const CMatrix a = oracle::dense_a(s.e.weights());
    const RVector gt = (g.array() + d).square() - d * d;
    const CMatrix y = a.adjoint() * gt.cast<cplx>().asDiagonal() * a / double(a.rows());
    const CVector& v = si.psi0;
    const double mu = std::real(v.dot(y * v)) / v.squaredNorm();
    EXPECT_LE((y * v - mu * v).norm(), 1e-8 * v.norm() * std::max(1.0, y.norm()));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(y);
    EXPECT_NEAR(mu, es.eigenvalues()(7), 1e-8 * es.eigenvalues()(7));
    EXPECT_NEAR(v.norm(), std::sqrt(8.0 * gt.sum() / a.squaredNorm()), 1e-12);
  }
}

TEST(Pga, ZeroIterationsReturnsInit) {
  const auto s = make_setup(13);
  PgaOptions o;
  o.tau = 0.5 * max_step(s.e);
  o.nl = Nonlinearity::pseudo_huber(0.1);
  o.max_iters = 0;
  const PgaResult r = pga_reconstruct(s.e, RVector(s.g.col(0)), s.phi, o);
  const SpectralInit si = spectral_init(s.e, RVector(s.g.col(0)), 0.1, InitMode::spectral);
  EXPECT_EQ(r.objective.size(), 1u);
  EXPECT_LE((r.psi - si.psi0).norm(), 1e-14 * si.psi0.norm());
}

// Objective non-increasing on noiseless data with tau = 0.1 KN/||A||^2,
// halving tau (at most five times) when a step goes up.
TEST(Pga, MonotoneTrace) {
  Rng rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const auto e = MeasurementEnsemble::from_rows(complex_normal_matrix(rng, 3, 8));
    const CMatrix phi = random_unitary(rng, 8).matrix();
    const CVector z = complex_normal_vector(rng, 8);
    const RVector g = transform_gamma(synthesize(e, CVector(phi * z)), 0.1);
    PgaOptions o;
    o.tau = 0.1 * max_step(e);
    o.nl = Nonlinearity::pseudo_huber(0.1);
    o.max_iters = 200;
    bool ok = false;
    for (int attempt = 0; attempt <= 5 && !ok; ++attempt, o.tau /= 2) {
      const PgaResult r = pga_reconstruct(e, g, phi, o);
      ok = true;
      for (std::size_t k = 1; k < r.objective.size(); ++k) ok = ok && r.objective[k] <= r.objective[k - 1] + 1e-10;
      ok = ok && r.objective.back() <= r.objective.front();
    }
    EXPECT_TRUE(ok) << "trial " << trial;
  }
}

TEST(Pga, AssumptionFlag) {
  const auto s = make_setup(15);
  PgaOptions o;
  o.tau = 1.5 * max_step(s.e);
  o.max_iters = 3;
  EXPECT_FALSE(pga_reconstruct(s.e, RVector(s.g.col(0)), s.phi, o).assumption1_ok);
  o.strict_assumption1 = true;
  EXPECT_THROW(pga_reconstruct(s.e, RVector(s.g.col(0)), s.phi, o), AssumptionViolation);
}

TEST(InitMode, Parse) {
  EXPECT_EQ(parse_init_mode("spectral"), InitMode::spectral);
  EXPECT_EQ(parse_init_mode("fixed"), InitMode::fixed_unit_vector);
  EXPECT_EQ(parse_init_mode("fixed_unit_vector"), InitMode::fixed_unit_vector);
  EXPECT_THROW(parse_init_mode("random"), ValidationError);
}
