#pragma once

#include <cstdint>

#include "qsl/matrix.hpp"

namespace qsl {

// SplitMix64: a fixed counter-based 64-bit generator.  The stream for a
// given seed is defined entirely by integer arithmetic, so seeded results
// are reproducible everywhere.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  // Uniform double in (0, 1] (never zero, safe under log).
  double next_unit();
  // Standard normal deviate via Box-Muller; generated in pairs.
  double next_normal();

private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Ginibre construction: rho = G G^dag / Tr(G G^dag) with G an n x rank
// matrix of standard complex normal deviates drawn from SplitMix64(seed).
DensityMatrix random_density(int n, int rank, std::uint64_t seed);

// Haar-like random unitary: complex normal matrix orthonormalized by
// modified Gram-Schmidt.  The triangular factor's diagonal is real-positive
// by construction, which pins the column phases deterministically.
UnitaryMatrix random_unitary(int n, std::uint64_t seed);

}  // namespace qsl
