#pragma once

#include <cstdint>
#include <string>

#include "ewr/ensemble.hpp"
#include "ewr/rng.hpp"
#include "ewr/types.hpp"

namespace ewr {

enum class WeightKind { defocus, gaussian, ones };

const char* to_string(WeightKind k);
WeightKind parse_weight_kind(const std::string& s);

/// K x N weights.
///   defocus   w_j(n) = exp(i pi j k_n^2 / N), j = 0..K-1, k_n the signed
///             FFT frequency of bin n; |w_j| = 1 so ||A|| = sqrt(K)
///   gaussian  i.i.d. complex standard normal
///   ones      all ones
CMatrix make_weights(WeightKind kind, Index n, Index k, Rng& rng);

struct DatasetParams {
  Index n = 16;
  Index k = 3;
  Index m = 8;
  Index s = 2;
  double delta = 0.1;
  double c_in = 1.0;
  /// Std-dev of additive Gaussian noise on the raw intensities; 0 = noiseless.
  double noise = 0.0;
  WeightKind weights = WeightKind::defocus;
};

struct Dataset {
  DatasetParams params;
  std::uint64_t seed = 0;
  CMatrix weights;  // K x N
  CMatrix phi0;     // N x N, unitary
  CMatrix z;        // N x m, s nonzeros per column
  CMatrix psi;      // phi0 * z
  RMatrix g;        // KN x m

  MeasurementEnsemble ensemble() const { return MeasurementEnsemble::from_rows(weights); }
};

/// Sparse generative model: Haar phi0, s-sparse complex Gaussian codes on a
/// uniformly drawn support, each signal rescaled to a norm drawn uniformly
/// from [C_in/2, C_in], then G_j = gamma(|A psi_j|^2).
Dataset generate_dataset(const DatasetParams& p, std::uint64_t seed);

/// Directory layout: meta (JSON), weights, phi0, Z, psi, G (matrix files).
void save_dataset(const Dataset& d, const std::string& dir);
Dataset load_dataset(const std::string& dir);

}  // namespace ewr
