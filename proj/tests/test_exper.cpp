#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "ewr/dataset.hpp"
#include "ewr/figure1.hpp"
#include "ewr/model.hpp"
#include "ewr/property_suite.hpp"

using namespace ewr;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir(const std::string& name) {
  const fs::path p = fs::path(EWR_TEST_TMPDIR) / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST(Dataset, ConsistentAndSparse) {
  DatasetParams p;
  p.m = 20;
  const Dataset d = generate_dataset(p, 3);
  const auto e = d.ensemble();
  EXPECT_NEAR(e.operator_norm(), std::sqrt(3.0), 1e-12);
  EXPECT_LE((d.phi0.adjoint() * d.phi0 - CMatrix::Identity(16, 16)).norm(), 1e-12);
  EXPECT_LE((d.psi - d.phi0 * d.z).norm(), 1e-13);
  for (Index j = 0; j < p.m; ++j) {
    Index nnz = 0;
    for (Index i = 0; i < 16; ++i) nnz += d.z(i, j) != cplx(0.0);
    EXPECT_EQ(nnz, p.s);
    const double r = d.psi.col(j).norm();
    EXPECT_GE(r, 0.5 - 1e-12);
    EXPECT_LE(r, 1.0 + 1e-12);
    const RVector gj = transform_gamma(synthesize(e, CVector(d.psi.col(j))), p.delta);
    EXPECT_LE((gj - d.g.col(j)).norm(), 1e-14);
  }
}

TEST(Dataset, Deterministic) {
  DatasetParams p;
  p.noise = 0.01;
  const Dataset a = generate_dataset(p, 9), b = generate_dataset(p, 9), c = generate_dataset(p, 10);
  EXPECT_EQ(a.g, b.g);
  EXPECT_EQ(a.psi, b.psi);
  EXPECT_NE(a.g, c.g);
  const fs::path d1 = tmp_dir("ds_det1"), d2 = tmp_dir("ds_det2");
  save_dataset(a, d1.string());
  save_dataset(b, d2.string());
  for (const char* f : {"meta", "weights", "phi0", "Z", "psi", "G"}) EXPECT_EQ(slurp(d1 / f), slurp(d2 / f)) << f;
}

TEST(Dataset, RoundTrip) {
  DatasetParams p;
  p.weights = WeightKind::gaussian;
  p.n = 5;
  p.k = 2;
  p.m = 4;
  const Dataset a = generate_dataset(p, 11);
  const fs::path dir = tmp_dir("ds_rt");
  save_dataset(a, dir.string());
  const Dataset b = load_dataset(dir.string());
  EXPECT_EQ(b.seed, 11u);
  EXPECT_EQ(b.params.n, 5);
  EXPECT_EQ(b.params.weights, WeightKind::gaussian);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.phi0, b.phi0);
  EXPECT_EQ(a.z, b.z);
  EXPECT_EQ(a.g, b.g);
  EXPECT_THROW(load_dataset((dir / "missing").string()), IoError);
}

TEST(Dataset, Validation) {
  DatasetParams p;
  p.s = 17;
  EXPECT_THROW(generate_dataset(p, 1), ValidationError);
  EXPECT_THROW(parse_weight_kind("unknown"), ValidationError);
  EXPECT_EQ(parse_weight_kind("ones"), WeightKind::ones);
}

TEST(Weights, Defocus) {
  Rng rng(1);
  const CMatrix w = make_weights(WeightKind::defocus, 8, 3, rng);
  EXPECT_LE((w.cwiseAbs().array() - 1.0).abs().maxCoeff(), 1e-15);
  EXPECT_LE((w.row(0).array() - 1.0).abs().maxCoeff(), 1e-15);
  // frequency -3 at bin 5, j = 2: exp(i pi 2 9 / 8)
  EXPECT_LE(std::abs(w(2, 5) - std::polar(1.0, std::numbers::pi * 18.0 / 8.0)), 1e-14);
  EXPECT_EQ(w(2, 3), w(2, 5));
}

TEST(Figure1, SmallRun) {
  Figure1Options o;
  o.l_max = 3;
  o.grid = 16;
  o.refine = 4;
  o.inner = 20;
  const auto e = MeasurementEnsemble::make({CVector::Ones(2)});
  const RVector g = figure1_measurement();
  EXPECT_DOUBLE_EQ(g.maxCoeff(), 1.0);
  EXPECT_GE(g.minCoeff(), 0.0);
  const Figure1Result r = figure1(e, g, o);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_DOUBLE_EQ(r.tau, 0.9 * 2.0);
  for (const auto& row : r.rows) {
    EXPECT_GE(row.lower_bound, row.grid_max);
    EXPECT_LE(row.lower_bound, row.k_l);
    EXPECT_GT(row.lower_bound, 0.0);
  }
  const Figure1Result r2 = figure1(e, g, o);
  for (std::size_t i = 0; i < r.rows.size(); ++i) EXPECT_EQ(r.rows[i].lower_bound, r2.rows[i].lower_bound);
}

TEST(Figure1, RejectsWrongShape) {
  const auto e = MeasurementEnsemble::make({CVector::Ones(3)});
  EXPECT_THROW(figure1(e, RVector::Ones(3), Figure1Options{}), ValidationError);
}

TEST(Figure1, GeneralU2) {
  Figure1Options o;
  o.l_max = 2;
  o.grid = 6;
  o.refine = 2;
  o.inner = 10;
  o.general_u2 = true;
  const auto e = MeasurementEnsemble::make({CVector::Ones(2)});
  const Figure1Result r = figure1(e, figure1_measurement(), o);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.params1.size(), 4u);
    EXPECT_LE(row.lower_bound, row.k_l);
  }
  const CMatrix u = u2_element({0.3, 0.1, -0.7, 1.9});
  EXPECT_LE((u.adjoint() * u - CMatrix::Identity(2, 2)).norm(), 1e-14);
}

TEST(PropertySuite, NamesUnique) {
  const auto names = property_names();
  EXPECT_EQ(std::set<std::string>(names.begin(), names.end()).size(), names.size());
  EXPECT_GE(names.size(), 30u);
}

TEST(PropertySuite, FilteringDoesNotChangeResults) {
  SuiteOptions all;
  all.trials = 20;
  all.only = {"nonlin.", "prox."};
  SuiteOptions one = all;
  one.only = {"prox.sigma"};
  const PropertyReport a = property_suite(all), b = property_suite(one);
  ASSERT_EQ(b.entries.size(), 1u);
  bool found = false;
  for (const auto& r : a.entries)
    if (r.name == b.entries[0].name) {
      found = true;
      EXPECT_EQ(r.worst, b.entries[0].worst);
      EXPECT_EQ(r.trials, b.entries[0].trials);
    }
  EXPECT_TRUE(found);
  SuiteOptions skip = all;
  skip.skip = {"prox."};
  for (const auto& r : property_suite(skip).entries) EXPECT_NE(r.name.rfind("prox.", 0), 0u);
}

TEST(PropertySuite, InjectedFaultIsCaught) {
  Rng rng(5);
  EXPECT_TRUE(check_t_firmly_nonexpansive(rng, 500).passed);
  const PropertyResult bad = check_t_firmly_nonexpansive(rng, 500, 2.0);
  EXPECT_FALSE(bad.passed);
  EXPECT_GT(bad.failures, 0);
}

TEST(PropertySuite, QuickChecksPass) {
  Rng root(1);
  for (auto r : {check_prox_identities(root, 200), check_moreau(root, 200), check_reg_zero(root, 50),
                 check_gradient_fd(root, 10), check_k_recursion(root, 20, 10), check_metric(root, 20),
                 check_output_norm_frobenius(root, 50), check_perturbation(root, 50), check_scaling(),
                 check_dataset(root, 3)})
    EXPECT_TRUE(r.passed) << r.name << ": " << r.detail;
}
