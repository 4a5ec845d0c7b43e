#pragma once

#include <complex>
#include <span>
#include <vector>

namespace qsl {

using Complex = std::complex<double>;

// Dimensions are capped: the projective-family machinery enumerates ordered
// index pairs and permutations, so everything downstream assumes small N.
inline constexpr int kMinDim = 2;
inline constexpr int kMaxDim = 8;

// Dense square complex matrix, row-major, value semantics.
class ComplexMatrix {
public:
  explicit ComplexMatrix(int dim);
  ComplexMatrix(int dim, std::vector<Complex> rowmajor);

  static ComplexMatrix identity(int dim);
  static ComplexMatrix diagonal(std::span<const double> entries);

  int dim() const { return dim_; }
  Complex& at(int i, int j) { return a_[static_cast<size_t>(i) * dim_ + j]; }
  const Complex& at(int i, int j) const {
    return a_[static_cast<size_t>(i) * dim_ + j];
  }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  double max_abs() const;
  double frobenius() const;
  bool is_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(Complex s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
    return a += b;
  }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
    return a -= b;
  }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a,
                                 const ComplexMatrix& b);

private:
  int dim_;
  std::vector<Complex> a_;
};

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
// max_ij |A_ij - conj(A_ji)|
double hermiticity_defect(const ComplexMatrix& a);
// max-abs of U^dag U - I
double unitarity_defect(const ComplexMatrix& u);

// Hermitian operator. The constructor validates the Hermiticity defect and
// stores the exact Hermitian part (A + A^dag)/2 so downstream algebra can
// rely on a_ij == conj(a_ji) holding bitwise.
class HermitianOperator {
public:
  explicit HermitianOperator(ComplexMatrix m);
  static HermitianOperator diagonal(std::span<const double> entries);

  int dim() const { return m_.dim(); }
  const ComplexMatrix& matrix() const { return m_; }

private:
  ComplexMatrix m_;
};

class UnitaryMatrix {
public:
  explicit UnitaryMatrix(ComplexMatrix m);
  static UnitaryMatrix identity(int dim);

  int dim() const { return m_.dim(); }
  const ComplexMatrix& matrix() const { return m_; }

private:
  ComplexMatrix m_;
};

// Density matrix: Hermitian, unit trace, positive semidefinite.  Eigenvalues
// in [-1e-10, 0) are clamped to zero on construction (the matrix is rebuilt
// from its clamped spectrum and the trace renormalized); anything more
// negative is rejected.
class DensityMatrix {
public:
  explicit DensityMatrix(ComplexMatrix m);

  static DensityMatrix pure_basis_state(int dim, int k);
  static DensityMatrix maximally_mixed(int dim);
  static DensityMatrix from_diagonal(std::span<const double> probabilities);

  int dim() const { return h_.dim(); }
  const ComplexMatrix& matrix() const { return h_.matrix(); }
  const HermitianOperator& hermitian() const { return h_; }
  // Tr rho^2, computed as sum |rho_ij|^2
  double purity() const;

private:
  HermitianOperator h_;
};

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  UnitaryMatrix vectors;       // k-th column pairs with values[k]
};

// Hilbert-Schmidt inner product Tr(a^dag b) = Tr(a b) for Hermitian inputs.
// The imaginary residue must be negligible; it is asserted and discarded.
double hs_inner(const HermitianOperator& a, const HermitianOperator& b);

// Cyclic complex Jacobi diagonalization.  Deterministic for identical input
// bits: fixed (p,q) sweep order, convergence when the off-diagonal Frobenius
// mass drops below 1e-13 * ||A||_F, ascending eigenvalue order with a stable
// tie-break.  Throws std::runtime_error if the sweep budget is exhausted.
EigenDecomposition eig_hermitian(const HermitianOperator& a);

// exp(-i h t) through the spectral decomposition of h.
UnitaryMatrix propagator(const HermitianOperator& h, double t);

// Discrete Fourier unitary, entries exp(2*pi*i*m*n/n_dim)/sqrt(n_dim) with
// zero-based indices; row and column zero are uniform.
UnitaryMatrix fourier_unitary(int n);

// Permutation unitary with (U)_{perm[j], j} = 1: maps basis vector j to
// basis vector perm[j].
UnitaryMatrix permutation_unitary(std::span<const int> perm);

// u rho u^dag / u h u^dag convenience wrappers.
DensityMatrix conjugate_state(const UnitaryMatrix& u, const DensityMatrix& rho);
HermitianOperator conjugate_operator(const UnitaryMatrix& u,
                                     const HermitianOperator& h);

}  // namespace qsl
