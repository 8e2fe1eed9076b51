#include "ewr/dataset.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "ewr/matrix_io.hpp"
#include "ewr/model.hpp"
#include "json.hpp"

namespace ewr {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(WeightKind k) {
  switch (k) {
    case WeightKind::defocus: return "defocus";
    case WeightKind::gaussian: return "gaussian";
    case WeightKind::ones: return "ones";
  }
  return "?";
}

WeightKind parse_weight_kind(const std::string& s) {
  if (s == "defocus") return WeightKind::defocus;
  if (s == "gaussian") return WeightKind::gaussian;
  if (s == "ones") return WeightKind::ones;
  throw ValidationError("unknown weight kind '" + s + "' (defocus, gaussian, ones)");
}

CMatrix make_weights(WeightKind kind, Index n, Index k, Rng& rng) {
  if (n < 1 || k < 1) throw ValidationError("make_weights: N and K must be >= 1");
  CMatrix w(k, n);
  switch (kind) {
    case WeightKind::ones:
      w.setOnes();
      break;
    case WeightKind::gaussian:
      w = complex_normal_matrix(rng, k, n);
      break;
    case WeightKind::defocus:
      for (Index j = 0; j < k; ++j)
        for (Index c = 0; c < n; ++c) {
          const double f = 2 * c < n ? double(c) : double(c - n);
          w(j, c) = std::polar(1.0, std::numbers::pi * double(j) * f * f / double(n));
        }
      break;
  }
  return w;
}

Dataset generate_dataset(const DatasetParams& p, std::uint64_t seed) {
  if (p.n < 1 || p.k < 1 || p.m < 1) throw ValidationError("generate_dataset: N, K, m must be >= 1");
  if (p.s < 1 || p.s > p.n) throw ValidationError("generate_dataset: need 1 <= s <= N");
  if (!(p.delta > 0.0)) throw ValidationError("generate_dataset: delta must be positive");
  if (!(p.c_in > 0.0)) throw ValidationError("generate_dataset: C_in must be positive");
  if (!(p.noise >= 0.0)) throw ValidationError("generate_dataset: noise must be >= 0");

  Rng rng(seed);
  Rng wrng = rng.split(1), urng = rng.split(2), zrng = rng.split(3), nrng = rng.split(4);

  Dataset d;
  d.params = p;
  d.seed = seed;
  d.weights = make_weights(p.weights, p.n, p.k, wrng);
  d.phi0 = random_unitary(urng, p.n).matrix();

  d.z = CMatrix::Zero(p.n, p.m);
  std::vector<Index> perm(static_cast<std::size_t>(p.n));
  for (Index j = 0; j < p.m; ++j) {
    for (Index i = 0; i < p.n; ++i) perm[static_cast<std::size_t>(i)] = i;
    // partial Fisher-Yates
    for (Index i = 0; i < p.s; ++i) {
      const auto r = i + static_cast<Index>(zrng.below(static_cast<std::uint64_t>(p.n - i)));
      std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(r)]);
      d.z(perm[static_cast<std::size_t>(i)], j) = zrng.complex_normal();
    }
    const double radius = zrng.uniform(0.5 * p.c_in, p.c_in);
    d.z.col(j) *= radius / d.z.col(j).norm();
  }
  d.psi = d.phi0 * d.z;

  const MeasurementEnsemble e = d.ensemble();
  d.g.resize(e.rows(), p.m);
  for (Index j = 0; j < p.m; ++j) {
    RVector gt = synthesize(e, CVector(d.psi.col(j)));
    if (p.noise > 0.0) gt = add_intensity_noise(nrng, gt, p.noise);
    d.g.col(j) = transform_gamma(gt, p.delta);
  }
  return d;
}

void save_dataset(const Dataset& d, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
  json meta = {{"N", d.params.n},
               {"K", d.params.k},
               {"m", d.params.m},
               {"s", d.params.s},
               {"delta", d.params.delta},
               {"C_in", d.params.c_in},
               {"noise", d.params.noise},
               {"weights", to_string(d.params.weights)},
               {"seed", d.seed},
               {"dft_convention", MeasurementEnsemble::dft_convention}};
  const fs::path root(dir);
  std::ofstream os(root / "meta");
  if (!os) throw IoError("cannot write " + (root / "meta").string());
  os << meta.dump(2) << '\n';
  save_matrix((root / "weights").string(), d.weights);
  save_matrix((root / "phi0").string(), d.phi0);
  save_matrix((root / "Z").string(), d.z);
  save_matrix((root / "psi").string(), d.psi);
  save_matrix((root / "G").string(), d.g);
}

Dataset load_dataset(const std::string& dir) {
  const fs::path root(dir);
  if (!fs::is_directory(root)) throw IoError("dataset directory not found: " + dir);
  std::ifstream is(root / "meta");
  if (!is) throw IoError("cannot read " + (root / "meta").string());
  json meta;
  try {
    meta = json::parse(is);
  } catch (const json::exception& ex) {
    throw IoError("malformed meta in " + dir + ": " + ex.what());
  }
  Dataset d;
  try {
    d.params.n = meta.at("N").get<Index>();
    d.params.k = meta.at("K").get<Index>();
    d.params.m = meta.at("m").get<Index>();
    d.params.s = meta.at("s").get<Index>();
    d.params.delta = meta.at("delta").get<double>();
    d.params.c_in = meta.at("C_in").get<double>();
    d.params.noise = meta.value("noise", 0.0);
    d.params.weights = parse_weight_kind(meta.value("weights", std::string("defocus")));
    d.seed = meta.at("seed").get<std::uint64_t>();
  } catch (const json::exception& ex) {
    throw IoError("incomplete meta in " + dir + ": " + ex.what());
  }
  d.weights = load_matrix((root / "weights").string());
  d.phi0 = load_matrix((root / "phi0").string());
  d.z = load_matrix((root / "Z").string());
  d.psi = load_matrix((root / "psi").string());
  d.g = load_real_matrix((root / "G").string());

  const auto& p = d.params;
  if (d.weights.rows() != p.k || d.weights.cols() != p.n || d.phi0.rows() != p.n ||
      d.phi0.cols() != p.n || d.z.rows() != p.n || d.z.cols() != p.m || d.psi.rows() != p.n ||
      d.psi.cols() != p.m || d.g.rows() != p.k * p.n || d.g.cols() != p.m)
    throw ValidationError("dataset " + dir + ": matrix shapes disagree with meta");
  return d;
}

}  // namespace ewr
