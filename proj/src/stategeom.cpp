#include "qsl/stategeom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qsl {

namespace {

constexpr double kAlphaMargin = 1e-12;
constexpr double kFrameResidueTol = 1e-8;

void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) +
                                ": dimension mismatch (" + std::to_string(a) +
                                " vs " + std::to_string(b) + ")");
  }
}

void require_alpha_in_range(double v, int dim, const char* what) {
  if (!std::isfinite(v) || v <= 1.0 / dim + kAlphaMargin || v > 1.0) {
    throw std::invalid_argument(std::string(what) + ": alpha " +
                                std::to_string(v) + " outside (1/" +
                                std::to_string(dim) + ", 1]");
  }
}

void require_offdiag_index(int dim, int i, int j) {
  if (i < 0 || j < 0 || i >= dim || j >= dim || i == j) {
    throw std::invalid_argument("pair index (" + std::to_string(i) + ", " +
                                std::to_string(j) + ") invalid for dim " +
                                std::to_string(dim));
  }
}

}  // namespace

AlphaValue::AlphaValue(double value, int dim) : v_(value), dim_(dim) {
  if (dim < kMinDim || dim > kMaxDim) {
    throw std::invalid_argument("AlphaValue: dim " + std::to_string(dim) +
                                " outside [" + std::to_string(kMinDim) + ", " +
                                std::to_string(kMaxDim) + "]");
  }
  require_alpha_in_range(value, dim, "AlphaValue");
}

AlphaAssignment::AlphaAssignment(int dim, double uniform_value)
    : dim_(dim), a_(static_cast<size_t>(dim) * dim, uniform_value) {
  AlphaValue check(uniform_value, dim);
  (void)check;
}

double AlphaAssignment::at(int i, int j) const {
  require_offdiag_index(dim_, i, j);
  return a_[static_cast<size_t>(i) * dim_ + j];
}

void AlphaAssignment::set(int i, int j, double value) {
  require_offdiag_index(dim_, i, j);
  require_alpha_in_range(value, dim_, "AlphaAssignment");
  a_[static_cast<size_t>(i) * dim_ + j] = value;
}

HermitianOperator f_map(const DensityMatrix& rho, const AlphaValue& alpha) {
  require_same_dim(rho.dim(), alpha.dim(), "f_map");
  const int n = rho.dim();
  const double shift = (1.0 + alpha.value() - rho.purity()) / n;
  ComplexMatrix m = rho.matrix();
  for (int i = 0; i < n; ++i) m.at(i, i) -= shift;
  return HermitianOperator(std::move(m));
}

double distance_alpha(const DensityMatrix& rho, const DensityMatrix& sigma,
                      const AlphaValue& alpha) {
  require_same_dim(rho.dim(), sigma.dim(), "distance_alpha");
  const HermitianOperator fr = f_map(rho, alpha);
  const HermitianOperator fs = f_map(sigma, alpha);
  const double nr = std::sqrt(hs_inner(fr, fr));
  const double ns = std::sqrt(hs_inner(fs, fs));
  // Angle from the chord and anti-chord of the normalized images. Unlike
  // acos of the inner product, this loses no precision near 0 or pi, which
  // finite-difference callers probing separations of order 1e-6 rely on.
  const int n = rho.dim();
  double chord2 = 0.0;
  double anti2 = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Complex a = fr.matrix().at(i, j) / nr;
      const Complex b = fs.matrix().at(i, j) / ns;
      chord2 += std::norm(a - b);
      anti2 += std::norm(a + b);
    }
  }
  return 2.0 * std::atan2(std::sqrt(chord2), std::sqrt(anti2));
}

ProjectiveFamily::ProjectiveFamily(const DensityMatrix& rho)
    : source_(rho), frame_(eig_hermitian(rho.hermitian()).vectors) {
  build();
}

ProjectiveFamily::ProjectiveFamily(const DensityMatrix& rho,
                                   const UnitaryMatrix& frame)
    : source_(rho), frame_(frame) {
  require_same_dim(rho.dim(), frame.dim(), "ProjectiveFamily");
  build();
}

int ProjectiveFamily::pair_index(int i, int j) const {
  require_offdiag_index(dim(), i, j);
  return i * (dim() - 1) + (j > i ? j - 1 : j);
}

const DensityMatrix& ProjectiveFamily::pair(int i, int j) const {
  return pairs_[static_cast<size_t>(pair_index(i, j))];
}

Complex ProjectiveFamily::offdiag(int i, int j) const {
  require_offdiag_index(dim(), i, j);
  return offdiag_[static_cast<size_t>(i) * dim() + j];
}

double ProjectiveFamily::pair_purity(int i, int j) const {
  return pair(i, j).purity();
}

void ProjectiveFamily::build() {
  const int n = dim();
  // rho expressed in the frame; must be diagonal up to the residue tolerance.
  const ComplexMatrix rot = frame_.matrix().adjoint() *
                            (source_.matrix() * frame_.matrix());
  double residue = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) residue = std::max(residue, std::abs(rot.at(i, j)));
  if (residue > kFrameResidueTol) {
    throw std::invalid_argument(
        "ProjectiveFamily: frame does not diagonalize the state (residue " +
        std::to_string(residue) + ")");
  }

  std::vector<double> lambda(n);
  for (int i = 0; i < n; ++i) lambda[i] = rot.at(i, i).real();

  // Coherence coefficients m(i, j) = <i_F| Lambda |j_F>, evaluated as a
  // root-of-unity sum with the exponent reduced mod n so axis-aligned cases
  // stay exact.
  const double step = 2.0 * std::numbers::pi / n;
  const auto unit_outer = [&](int i, int j, int r, int c) {
    const int k = ((r * i - c * j) % n + n) % n;
    return std::polar(1.0 / n, step * k);
  };
  std::vector<Complex> m(static_cast<size_t>(n) * n, Complex{0.0, 0.0});
  offdiag_.assign(static_cast<size_t>(n) * n, Complex{0.0, 0.0});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      Complex acc{0.0, 0.0};
      for (int k = 0; k < n; ++k) {
        const int e = ((k * (j - i)) % n + n) % n;
        acc += lambda[k] * std::polar(1.0 / n, step * e);
      }
      m[static_cast<size_t>(i) * n + j] = acc;
      // The recorded value follows the circulant U^F Lambda (U^F)*, whose
      // (i, j) entry is the conjugate coefficient.
      offdiag_[static_cast<size_t>(j) * n + i] = acc;
    }
  }

  const bool identity_frame =
      max_abs_diff(frame_.matrix(), ComplexMatrix::identity(n)) == 0.0;
  pairs_.clear();
  pairs_.reserve(static_cast<size_t>(n) * (n - 1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const Complex mij = m[static_cast<size_t>(i) * n + j];
      ComplexMatrix core(n);
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
          Complex val = mij * unit_outer(i, j, r, c) +
                        std::conj(mij) * unit_outer(j, i, r, c);
          if (r == c) val += 1.0 / n;
          core.at(r, c) = val;
        }
      }
      ComplexMatrix full =
          identity_frame ? std::move(core)
                         : frame_.matrix() *
                               (core * frame_.matrix().adjoint());
      // The trace drifts from 1 only through roundoff; renormalize when the
      // drift is visible.
      const double tr = full.trace().real();
      if (std::abs(tr - 1.0) > 1e-13) full *= Complex{1.0 / tr, 0.0};
      pairs_.emplace_back(std::move(full));
    }
  }
}

double framed_distance(const ProjectiveFamily& a, const ProjectiveFamily& b,
                       const AlphaAssignment& alphas) {
  require_same_dim(a.dim(), b.dim(), "framed_distance");
  require_same_dim(a.dim(), alphas.dim(), "framed_distance");
  const int n = a.dim();
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j)
        total += distance_alpha(a.pair(i, j), b.pair(i, j),
                                AlphaValue(alphas.at(i, j), n));
  return total;
}

double framed_distance(const DensityMatrix& rho, const DensityMatrix& sigma,
                       const UnitaryMatrix& rho_frame,
                       const UnitaryMatrix& sigma_frame,
                       const AlphaAssignment& alphas) {
  return framed_distance(ProjectiveFamily(rho, rho_frame),
                         ProjectiveFamily(sigma, sigma_frame), alphas);
}

PermutedDistance permuted_distance(const ProjectiveFamily& a,
                                   const ProjectiveFamily& b,
                                   const AlphaAssignment& alphas) {
  require_same_dim(a.dim(), b.dim(), "permuted_distance");
  require_same_dim(a.dim(), alphas.dim(), "permuted_distance");
  const int n = a.dim();

  // Distances depend on the slot only through its alpha, so tabulate one
  // pair-distance matrix per distinct alpha value.
  std::vector<double> uniq;
  std::vector<int> slot_alpha(static_cast<size_t>(n) * n, -1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = alphas.at(i, j);
      auto it = std::find(uniq.begin(), uniq.end(), v);
      if (it == uniq.end()) {
        uniq.push_back(v);
        it = std::prev(uniq.end());
      }
      slot_alpha[static_cast<size_t>(i) * n + j] =
          static_cast<int>(it - uniq.begin());
    }
  }
  std::vector<std::vector<double>> table(
      uniq.size(), std::vector<double>(static_cast<size_t>(n) * n, 0.0));
  for (size_t u = 0; u < uniq.size(); ++u) {
    const AlphaValue av(uniq[u], n);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        if (p != q)
          table[u][static_cast<size_t>(p) * n + q] =
              distance_alpha(a.pair(p, q), b.pair(p, q), av);
  }

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  PermutedDistance best{-1.0, {}};
  do {
    double total = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j)
          total += table[static_cast<size_t>(
              slot_alpha[static_cast<size_t>(i) * n + j])]
                        [static_cast<size_t>(perm[i]) * n + perm[j]];
    // Enumeration is lexicographic, so requiring a real improvement leaves
    // ties with the earliest permutation.
    if (total > best.radians + 1e-12 * (1.0 + std::abs(best.radians))) {
      best.radians = total;
      best.permutation = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

PermutedDistance permuted_distance(const DensityMatrix& rho,
                                   const DensityMatrix& sigma,
                                   const UnitaryMatrix& rho_frame,
                                   const UnitaryMatrix& sigma_frame,
                                   const AlphaAssignment& alphas) {
  return permuted_distance(ProjectiveFamily(rho, rho_frame),
                           ProjectiveFamily(sigma, sigma_frame), alphas);
}

AlphaAssignment default_alphas(const ProjectiveFamily& a,
                               const ProjectiveFamily& b) {
  require_same_dim(a.dim(), b.dim(), "default_alphas");
  const int n = a.dim();
  AlphaAssignment out(n, 1.0);
  const double floor = 1.0 / n + 1e-12;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double p = std::max(a.pair_purity(i, j), b.pair_purity(i, j));
      out.set(i, j, p > floor ? p : 1.0);
    }
  }
  return out;
}

AlphaAssignment default_alphas(const DensityMatrix& rho0,
                               const DensityMatrix& rhotau) {
  return default_alphas(ProjectiveFamily(rho0), ProjectiveFamily(rhotau));
}

}  // namespace qsl
