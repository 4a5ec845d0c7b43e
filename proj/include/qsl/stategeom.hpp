#pragma once

#include <vector>

#include "qsl/matrix.hpp"

namespace qsl {

// Mapping constant for a fixed dimension N, restricted to (1/N, 1].  The
// lower bound is strict with margin 1e-12: values at or below 1/N collapse
// the uniform state's image and break normalization downstream.
class AlphaValue {
public:
  AlphaValue(double value, int dim);

  double value() const { return v_; }
  int dim() const { return dim_; }

private:
  double v_;
  int dim_;
};

// One alpha per ordered index pair (i, j), i != j, for framed distances.
// Entries satisfy the AlphaValue range for the table's dimension.
class AlphaAssignment {
public:
  AlphaAssignment(int dim, double uniform_value);

  int dim() const { return dim_; }
  double at(int i, int j) const;
  void set(int i, int j, double value);

private:
  int dim_;
  std::vector<double> a_;
};

// rho - ((1 + alpha - Tr rho^2)/N) I.  The image is never zero on the valid
// alpha range, so normalizing it is always safe.
HermitianOperator f_map(const DensityMatrix& rho, const AlphaValue& alpha);

// Angle between the unit-normalized images of rho and sigma under f_map,
// in [0, pi].  The cosine is clamped to [-1, 1] before acos to absorb
// roundoff at the endpoints.
double distance_alpha(const DensityMatrix& rho, const DensityMatrix& sigma,
                      const AlphaValue& alpha);
inline double distance_alpha(const DensityMatrix& rho,
                             const DensityMatrix& sigma, double alpha) {
  return distance_alpha(rho, sigma, AlphaValue(alpha, rho.dim()));
}

// The two-level reductions of a state relative to a diagonalizing frame Phi:
// for each ordered pair (i, j) of Fourier-basis directions,
//   pair(i, j) = P rho P + (I - P)/N,  P = Phi (|i_F><i_F| + |j_F><j_F|) Phi*
// where |k_F> is the k-th column of the discrete Fourier unitary.  Every
// pair matrix is again a density matrix; it differs from the uniform state
// only inside a two-dimensional subspace.
//
// offdiag(i, j) stores the (i, j) entry of U^F Lambda (U^F)*, with Lambda the
// diagonal of rho in the frame; its modulus is at most 1/N and determines the
// pair purity 1/N + 2|offdiag|^2.
class ProjectiveFamily {
public:
  // Uses the deterministic eigensolver frame.
  explicit ProjectiveFamily(const DensityMatrix& rho);
  // The frame must diagonalize rho: off-diagonal residue of Phi* rho Phi
  // above 1e-8 is rejected.  Eigenvalues may appear in any order.
  ProjectiveFamily(const DensityMatrix& rho, const UnitaryMatrix& frame);

  int dim() const { return source_.dim(); }
  const DensityMatrix& source() const { return source_; }
  const UnitaryMatrix& frame() const { return frame_; }
  const DensityMatrix& pair(int i, int j) const;
  Complex offdiag(int i, int j) const;
  // Tr pair(i, j)^2
  double pair_purity(int i, int j) const;

private:
  void build();
  int pair_index(int i, int j) const;

  DensityMatrix source_;
  UnitaryMatrix frame_;
  std::vector<DensityMatrix> pairs_;
  std::vector<Complex> offdiag_;
};

inline ProjectiveFamily projective_family(const DensityMatrix& rho) {
  return ProjectiveFamily(rho);
}
inline ProjectiveFamily projective_family(const DensityMatrix& rho,
                                          const UnitaryMatrix& frame) {
  return ProjectiveFamily(rho, frame);
}

// Sum over ordered pairs (i, j), i != j, of the distance between the two
// families' pair matrices at (i, j) with the pair's alpha.  Non-negative and
// unbounded (each of the N(N-1) terms can reach pi).
double framed_distance(const ProjectiveFamily& a, const ProjectiveFamily& b,
                       const AlphaAssignment& alphas);
double framed_distance(const DensityMatrix& rho, const DensityMatrix& sigma,
                       const UnitaryMatrix& rho_frame,
                       const UnitaryMatrix& sigma_frame,
                       const AlphaAssignment& alphas);

struct PermutedDistance {
  double radians;
  std::vector<int> permutation;
};

// Maximum of the framed distance over all N! relabelings of the Fourier
// directions: permutation p sends the (i, j) term to the pair matrices at
// (p(i), p(j)) while alphas stay attached to the slot (i, j).  Ties resolve
// to the lexicographically smallest permutation.
PermutedDistance permuted_distance(const ProjectiveFamily& a,
                                   const ProjectiveFamily& b,
                                   const AlphaAssignment& alphas);
PermutedDistance permuted_distance(const DensityMatrix& rho,
                                   const DensityMatrix& sigma,
                                   const UnitaryMatrix& rho_frame,
                                   const UnitaryMatrix& sigma_frame,
                                   const AlphaAssignment& alphas);

// Per-pair alpha = max of the two pair purities, the choice that makes the
// framed distance additive along the attainable evolutions.  Pairs whose
// purity stays at the uniform floor 1/N (no coherence) fall back to 1.0.
AlphaAssignment default_alphas(const ProjectiveFamily& a,
                               const ProjectiveFamily& b);
// Same, with both families built in their eigensolver frames.
AlphaAssignment default_alphas(const DensityMatrix& rho0,
                               const DensityMatrix& rhotau);

}  // namespace qsl
