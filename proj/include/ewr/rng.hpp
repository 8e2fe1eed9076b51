#pragma once

#include <cstdint>
#include <random>

#include "ewr/types.hpp"

namespace ewr {

/// Deterministic random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Every derived variate is computed here rather than through the
/// <random> distributions (those are implementation-defined):
///   uniform()        (x >> 11) * 2^-53, in [0, 1)
///   normal()         Box-Muller on (1 - u1, u2); both outputs are used in order
///   complex_normal() (normal() + i normal()) / sqrt(2), unit variance
///   below(n)         rejection sampling on the top bits, unbiased
/// so the same seed gives the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();
  double uniform();
  double uniform(double lo, double hi);
  double normal();
  cplx complex_normal();
  std::uint64_t below(std::uint64_t n);

  /// Independent child stream; the child seed is splitmix64(seed ^ stream).
  Rng split(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

CVector complex_normal_vector(Rng& rng, Index n);
CMatrix complex_normal_matrix(Rng& rng, Index rows, Index cols);

}  // namespace ewr
