#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "ewr/ensemble.hpp"
#include "ewr/matrix_io.hpp"
#include "ewr/rng.hpp"
#include "oracles.hpp"

using namespace ewr;

TEST(Rng, SameSeedSameStream) {
  Rng a(123), b(123);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
  Rng c(123), d(123);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(c.normal(), d.normal());
}

TEST(Rng, EngineIsStandardMt19937_64) {
  // The standard fixes the 10000th output of a default-seeded engine.
  Rng r(5489u);
  for (int i = 0; i < 9999; ++i) r.next_u64();
  EXPECT_EQ(r.next_u64(), 9981545732273789042ULL);
}

TEST(Rng, UniformFromTopBits) {
  Rng a(77), b(77);
  const std::uint64_t x = a.next_u64();
  EXPECT_EQ(b.uniform(), static_cast<double>(x >> 11) * 0x1.0p-53);
}

TEST(Rng, BelowStaysInRange) {
  Rng r(9);
  for (int i = 0; i < 10000; ++i) ASSERT_LT(r.below(7), 7u);
}

TEST(Rng, SplitStreamsDiffer) {
  const Rng root(1);
  Rng a = root.split(1), b = root.split(2);
  EXPECT_NE(a.next_u64(), b.next_u64());
  EXPECT_EQ(root.split(1).next_u64(), Rng(1).split(1).next_u64());
}

TEST(Rng, NormalMoments) {
  Rng r(2);
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    s += x;
    s2 += x * x;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.01);
}

TEST(Unitary, RotationEntries) {
  EXPECT_TRUE(rotation(0.0).matrix().isApprox(CMatrix::Identity(2, 2)));
  const CMatrix r = rotation(std::numbers::pi / 2).matrix();
  EXPECT_NEAR(std::abs(r(0, 0)), 0.0, 1e-15);
  EXPECT_NEAR(r(0, 1).real(), -1.0, 1e-15);
  EXPECT_NEAR(r(1, 0).real(), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(r(1, 1)), 0.0, 1e-15);
}

TEST(Unitary, RandomUnitarySeven) {
  Rng rng(7);
  const UnitaryMatrix u = random_unitary(rng, 4);
  EXPECT_LE(u.unitarity_defect(), 1e-12);
  // Independent oracle: U* U computed entrywise.
  const CMatrix& m = u.matrix();
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j) {
      cplx acc = 0;
      for (Index r = 0; r < 4; ++r) acc += std::conj(m(r, i)) * m(r, j);
      EXPECT_NEAR(std::abs(acc - (i == j ? 1.0 : 0.0)), 0.0, 1e-12);
    }
}

TEST(Unitary, RejectsNonUnitary) {
  CMatrix m = CMatrix::Identity(3, 3);
  m(0, 0) = 2.0;
  EXPECT_THROW(UnitaryMatrix{m}, ValidationError);
  EXPECT_THROW(UnitaryMatrix{CMatrix::Identity(2, 3)}, ValidationError);
}

TEST(Unitary, PreservesNorms) {
  Rng rng(11);
  const UnitaryMatrix u = random_unitary(rng, 6);
  for (int i = 0; i < 100; ++i) {
    const CVector v = complex_normal_vector(rng, 6);
    EXPECT_NEAR((u * v).norm(), v.norm(), 1e-10 * v.norm());
  }
}

TEST(Ensemble, UnitWeightsNormOne) {
  const auto e = MeasurementEnsemble::make({CVector::Ones(2)});
  EXPECT_DOUBLE_EQ(e.operator_norm(), 1.0);
}

TEST(Ensemble, TwoOneWeightsNormTwo) {
  CVector w(2);
  w << 2.0, 1.0;
  const auto e = MeasurementEnsemble::make({w});
  const CMatrix a = oracle::dense_a(e.weights());
  Eigen::JacobiSVD<CMatrix> svd(a);
  EXPECT_NEAR(svd.singularValues()(0), 2.0, 1e-14);
  EXPECT_NEAR(e.operator_norm(), 2.0, 1e-14);
}

TEST(Ensemble, ConstantWeights) {
  const cplx c(0.6, -0.8 * 1.5);
  const auto e = MeasurementEnsemble::from_rows(CMatrix::Constant(3, 5, c));
  EXPECT_NEAR(e.operator_norm(), std::sqrt(3.0) * std::abs(c), 1e-14);
}

TEST(Ensemble, ConstructionErrors) {
  EXPECT_THROW(MeasurementEnsemble::make({}), ValidationError);
  EXPECT_THROW(MeasurementEnsemble::make({CVector::Ones(3), CVector::Ones(2)}), ValidationError);
  EXPECT_THROW(MeasurementEnsemble::make({CVector(0)}), ValidationError);
}

TEST(Ensemble, ApplyMatchesExplicitMatrix) {
  Rng rng(3);
  for (Index n = 1; n <= 9; ++n) {
    const auto e = MeasurementEnsemble::from_rows(complex_normal_matrix(rng, 3, n));
    const CMatrix a = oracle::dense_a(e.weights());
    const CVector psi = complex_normal_vector(rng, n);
    const CVector y = complex_normal_vector(rng, 3 * n);
    EXPECT_LE((e.apply(psi) - a * psi).norm(), 1e-12 * a.norm() * psi.norm());
    EXPECT_LE((e.apply_adjoint(y) - a.adjoint() * y).norm(), 1e-12 * a.norm() * y.norm());
    EXPECT_LE((e.dense() - a).norm(), 1e-12 * a.norm());
  }
}

TEST(Ensemble, ZeroAndUnitaryCases) {
  const auto e = MeasurementEnsemble::make({CVector::Ones(4)});
  EXPECT_EQ(e.apply(CVector(CVector::Zero(4))).norm(), 0.0);
  Rng rng(4);
  const CVector psi = complex_normal_vector(rng, 4);
  EXPECT_LE((e.apply_adjoint(e.apply(psi)) - psi).norm(), 1e-14);
}

TEST(Ensemble, AdjointPairing) {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto e = MeasurementEnsemble::from_rows(complex_normal_matrix(rng, 2, 7));
    const CVector psi = complex_normal_vector(rng, 7), y = complex_normal_vector(rng, 14);
    EXPECT_LE(std::abs(e.apply(psi).dot(y) - psi.dot(e.apply_adjoint(y))), 1e-10 * psi.norm() * y.norm());
  }
}

TEST(Ensemble, DimensionMismatch) {
  const auto e = MeasurementEnsemble::make({CVector::Ones(4)});
  EXPECT_THROW(e.apply(CVector(CVector::Ones(3))), ValidationError);
  EXPECT_THROW(e.apply_adjoint(CVector(CVector::Ones(5))), ValidationError);
}

TEST(Ensemble, PowerIterationNEightKThree) {
  Rng rng(8);
  const auto e = MeasurementEnsemble::from_rows(complex_normal_matrix(rng, 3, 8));
  const PowerIterationResult p = power_iteration_norm(e);
  ASSERT_TRUE(p.converged);
  EXPECT_LE(std::abs(p.value - e.operator_norm()) / e.operator_norm(), 1e-8);
}

TEST(Ensemble, ComposedNormWithUnitary) {
  Rng rng(12);
  const auto e = MeasurementEnsemble::from_rows(complex_normal_matrix(rng, 2, 5));
  const CMatrix phi = random_unitary(rng, 5).matrix();
  const CMatrix a = oracle::dense_a(e.weights());
  Eigen::JacobiSVD<CMatrix> svd(CMatrix(a * phi));
  EXPECT_NEAR(e.composed_norm(phi), svd.singularValues()(0), 1e-12);
  EXPECT_NEAR(e.composed_norm(phi), e.operator_norm(), 1e-12);
  const CMatrix m = complex_normal_matrix(rng, 5, 5);
  Eigen::JacobiSVD<CMatrix> svd2(CMatrix(a * m));
  EXPECT_NEAR(e.composed_norm(m), svd2.singularValues()(0), 1e-11 * svd2.singularValues()(0));
}

TEST(MatrixIo, RoundTripIsExact) {
  Rng rng(13);
  CMatrix m = complex_normal_matrix(rng, 3, 4);
  m(0, 0) = cplx(1e-300, -1e300);
  std::stringstream ss;
  write_matrix(ss, m);
  EXPECT_EQ(read_matrix(ss), m);
}

TEST(MatrixIo, HeaderAndLayout) {
  CMatrix m(1, 2);
  m << cplx(1.0, 2.0), cplx(0.5, -0.25);
  std::stringstream ss;
  write_matrix(ss, m);
  EXPECT_EQ(ss.str(), "# 1 2 complex\n1,2,0.5,-0.25\n");
}

TEST(MatrixIo, RealMatrices) {
  RMatrix r(2, 1);
  r << 0.1, 3.0;
  std::stringstream ss;
  write_matrix(ss, r);
  EXPECT_EQ(read_real_matrix(ss), r);
  std::stringstream bad("# 1 1 complex\n1,0.5\n");
  EXPECT_THROW(read_real_matrix(bad), IoError);
}

TEST(MatrixIo, Malformed) {
  std::stringstream a("nonsense\n");
  EXPECT_THROW(read_matrix(a), IoError);
  std::stringstream b("# 2 1 complex\n1,2\n");
  EXPECT_THROW(read_matrix(b), IoError);
  std::stringstream c("# 1 2 complex\n1,2,3\n");
  EXPECT_THROW(read_matrix(c), IoError);
  EXPECT_THROW(load_matrix("/nonexistent/file"), IoError);
}
