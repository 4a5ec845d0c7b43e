#include "qsl/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace qsl {

std::uint64_t SplitMix64::next_u64() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::next_unit() {
  // 53 high bits, shifted into (0, 1].
  return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double SplitMix64::next_normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = next_unit();
  const double u2 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

DensityMatrix random_density(int n, int rank, std::uint64_t seed) {
  if (n < kMinDim || n > kMaxDim) {
    throw std::invalid_argument("random_density: dimension outside [2, 8]");
  }
  if (rank < 1 || rank > n) {
    throw std::invalid_argument("random_density: rank outside [1, n]");
  }
  SplitMix64 rng(seed);
  std::vector<Complex> g(static_cast<size_t>(n) * rank);
  for (Complex& z : g) {
    const double re = rng.next_normal();
    const double im = rng.next_normal();
    z = Complex{re, im};
  }
  ComplexMatrix m(n);
  double tr = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Complex s{0.0, 0.0};
      for (int k = 0; k < rank; ++k) {
        s += g[static_cast<size_t>(i) * rank + k] *
             std::conj(g[static_cast<size_t>(j) * rank + k]);
      }
      m.at(i, j) = s;
    }
    tr += m.at(i, i).real();
  }
  m *= Complex{1.0 / tr, 0.0};
  return DensityMatrix(std::move(m));
}

UnitaryMatrix random_unitary(int n, std::uint64_t seed) {
  if (n < kMinDim || n > kMaxDim) {
    throw std::invalid_argument("random_unitary: dimension outside [2, 8]");
  }
  SplitMix64 rng(seed);
  ComplexMatrix a(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double re = rng.next_normal();
      const double im = rng.next_normal();
      a.at(i, j) = Complex{re, im};
    }
  }
  // Modified Gram-Schmidt over columns; normalization by the real-positive
  // residual norm fixes each column's phase.
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < j; ++k) {
      Complex proj{0.0, 0.0};
      for (int i = 0; i < n; ++i) proj += std::conj(a.at(i, k)) * a.at(i, j);
      for (int i = 0; i < n; ++i) a.at(i, j) -= proj * a.at(i, k);
    }
    double norm = 0.0;
    for (int i = 0; i < n; ++i) norm += std::norm(a.at(i, j));
    norm = std::sqrt(norm);
    if (norm < 1e-12) {
      throw std::runtime_error("random_unitary: degenerate sample");
    }
    for (int i = 0; i < n; ++i) a.at(i, j) *= 1.0 / norm;
  }
  return UnitaryMatrix(std::move(a));
}

}  // namespace qsl
