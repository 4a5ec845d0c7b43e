#include "qsl/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qsl {

namespace {

void require_dim(int dim) {
  if (dim < kMinDim || dim > kMaxDim) {
    throw std::invalid_argument("matrix dimension " + std::to_string(dim) +
                                " outside supported range [2, 8]");
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(int dim)
    : dim_(dim), a_(static_cast<size_t>(dim) * dim, Complex{0.0, 0.0}) {
  require_dim(dim);
}

ComplexMatrix::ComplexMatrix(int dim, std::vector<Complex> rowmajor)
    : dim_(dim), a_(std::move(rowmajor)) {
  require_dim(dim);
  if (a_.size() != static_cast<size_t>(dim) * dim) {
    throw std::invalid_argument("matrix data size does not match dimension");
  }
  if (!is_finite()) {
    throw std::invalid_argument("matrix entries must be finite");
  }
}

ComplexMatrix ComplexMatrix::identity(int dim) {
  ComplexMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> entries) {
  ComplexMatrix m(static_cast<int>(entries.size()));
  for (int i = 0; i < m.dim(); ++i) m.at(i, i) = entries[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix r(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) r.at(i, j) = std::conj(at(j, i));
  return r;
}

Complex ComplexMatrix::trace() const {
  Complex t{0.0, 0.0};
  for (int i = 0; i < dim_; ++i) t += at(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const Complex& z : a_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::frobenius() const {
  double s = 0.0;
  for (const Complex& z : a_) s += std::norm(z);
  return std::sqrt(s);
}

bool ComplexMatrix::is_finite() const {
  for (const Complex& z : a_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("dimension mismatch");
  for (size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("dimension mismatch");
  for (size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (Complex& z : a_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("dimension mismatch");
  const int n = a.dim_;
  ComplexMatrix r(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const Complex aik = a.at(i, k);
      if (aik == Complex{0.0, 0.0}) continue;
      for (int j = 0; j < n; ++j) r.at(i, j) += aik * b.at(k, j);
    }
  }
  return r;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
  double m = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      m = std::max(m, std::abs(a.at(i, j) - b.at(i, j)));
  return m;
}

double hermiticity_defect(const ComplexMatrix& a) {
  double m = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = i; j < a.dim(); ++j)
      m = std::max(m, std::abs(a.at(i, j) - std::conj(a.at(j, i))));
  return m;
}

double unitarity_defect(const ComplexMatrix& u) {
  ComplexMatrix g = u.adjoint() * u;
  return max_abs_diff(g, ComplexMatrix::identity(u.dim()));
}

HermitianOperator::HermitianOperator(ComplexMatrix m) : m_(std::move(m)) {
  if (!m_.is_finite()) {
    throw std::invalid_argument("Hermitian operator entries must be finite");
  }
  const double defect = hermiticity_defect(m_);
  if (defect > 1e-12 * (1.0 + m_.max_abs())) {
    throw std::invalid_argument("matrix is not Hermitian (defect " +
                                std::to_string(defect) + ")");
  }
  // Store the exact Hermitian part so a_ij == conj(a_ji) holds bitwise.
  for (int i = 0; i < m_.dim(); ++i) {
    m_.at(i, i) = Complex{m_.at(i, i).real(), 0.0};
    for (int j = i + 1; j < m_.dim(); ++j) {
      const Complex h = 0.5 * (m_.at(i, j) + std::conj(m_.at(j, i)));
      m_.at(i, j) = h;
      m_.at(j, i) = std::conj(h);
    }
  }
}

HermitianOperator HermitianOperator::diagonal(std::span<const double> entries) {
  return HermitianOperator(ComplexMatrix::diagonal(entries));
}

UnitaryMatrix::UnitaryMatrix(ComplexMatrix m) : m_(std::move(m)) {
  if (!m_.is_finite()) {
    throw std::invalid_argument("unitary entries must be finite");
  }
  const double defect = unitarity_defect(m_);
  if (defect > 1e-10) {
    throw std::invalid_argument("matrix is not unitary (defect " +
                                std::to_string(defect) + ")");
  }
}

UnitaryMatrix UnitaryMatrix::identity(int dim) {
  return UnitaryMatrix(ComplexMatrix::identity(dim));
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : h_(std::move(m)) {
  const Complex tr = h_.matrix().trace();
  if (std::abs(tr - Complex{1.0, 0.0}) > 1e-10) {
    throw std::invalid_argument("density matrix trace must be 1");
  }
  EigenDecomposition eig = eig_hermitian(h_);
  if (eig.values.front() < -1e-10) {
    throw std::invalid_argument("density matrix has negative eigenvalue " +
                                std::to_string(eig.values.front()));
  }
  if (eig.values.front() < 0.0) {
    // Clamp roundoff-negative eigenvalues and rebuild.
    double total = 0.0;
    for (double& v : eig.values) {
      v = std::max(v, 0.0);
      total += v;
    }
    const int n = h_.dim();
    ComplexMatrix r(n);
    const ComplexMatrix& phi = eig.vectors.matrix();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        Complex s{0.0, 0.0};
        for (int k = 0; k < n; ++k) {
          s += phi.at(i, k) * (eig.values[k] / total) * std::conj(phi.at(j, k));
        }
        r.at(i, j) = s;
      }
    }
    h_ = HermitianOperator(std::move(r));
  }
  const double p = purity();
  const int n = h_.dim();
  if (p < 1.0 / n - 1e-12 || p > 1.0 + 1e-10) {
    throw std::invalid_argument("density matrix purity " + std::to_string(p) +
                                " outside [1/N, 1]");
  }
}

DensityMatrix DensityMatrix::pure_basis_state(int dim, int k) {
  ComplexMatrix m(dim);
  if (k < 0 || k >= dim) throw std::invalid_argument("basis index out of range");
  m.at(k, k) = 1.0;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  ComplexMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0 / dim;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::from_diagonal(std::span<const double> probabilities) {
  return DensityMatrix(ComplexMatrix::diagonal(probabilities));
}

double DensityMatrix::purity() const {
  const ComplexMatrix& m = h_.matrix();
  double s = 0.0;
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) s += std::norm(m.at(i, j));
  return s;
}

double hs_inner(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
  const ComplexMatrix& ma = a.matrix();
  const ComplexMatrix& mb = b.matrix();
  Complex s{0.0, 0.0};
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) s += std::conj(ma.at(i, j)) * mb.at(i, j);
  const double scale = 1.0 + std::abs(s.real());
  if (std::abs(s.imag()) > 1e-12 * scale) {
    throw std::runtime_error("hs_inner imaginary residue too large: " +
                             std::to_string(s.imag()));
  }
  return s.real();
}

EigenDecomposition eig_hermitian(const HermitianOperator& a) {
  const int n = a.dim();
  ComplexMatrix w = a.matrix();
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double anorm = w.frobenius();
  const double stop = 1e-13 * anorm;

  auto offdiag_mass = [&]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) s += std::norm(w.at(i, j));
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 64;
  int sweep = 0;
  while (offdiag_mass() > stop) {
    if (++sweep > kMaxSweeps) {
      throw std::runtime_error(
          "eig_hermitian: Jacobi sweeps exhausted without convergence");
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const Complex apq = w.at(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = w.at(p, p).real();
        const double aqq = w.at(q, q).real();
        // Complex Jacobi rotation J with J_pp = c, J_pq = -s e^{i phi},
        // J_qp = s e^{-i phi}, J_qq = c annihilates the (p,q) entry when
        // tan(2 theta) = 2|a_pq| / (a_pp - a_qq) and phi = arg(a_pq).
        const double theta = 0.5 * std::atan2(2.0 * mag, app - aqq);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        const Complex eiphi = apq / mag;

        // Column update: A <- A J, V <- V J.
        for (int k = 0; k < n; ++k) {
          const Complex akp = w.at(k, p);
          const Complex akq = w.at(k, q);
          w.at(k, p) = c * akp + s * std::conj(eiphi) * akq;
          w.at(k, q) = -s * eiphi * akp + c * akq;
          const Complex vkp = v.at(k, p);
          const Complex vkq = v.at(k, q);
          v.at(k, p) = c * vkp + s * std::conj(eiphi) * vkq;
          v.at(k, q) = -s * eiphi * vkp + c * vkq;
        }
        // Row update: A <- J^dag A.
        for (int k = 0; k < n; ++k) {
          const Complex apk = w.at(p, k);
          const Complex aqk = w.at(q, k);
          w.at(p, k) = c * apk + s * eiphi * aqk;
          w.at(q, k) = -s * std::conj(eiphi) * apk + c * aqk;
        }
        // The rotated pair is zero by construction; pin it to kill drift.
        w.at(p, q) = Complex{0.0, 0.0};
        w.at(q, p) = Complex{0.0, 0.0};
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return w.at(x, x).real() < w.at(y, y).real();
  });

  EigenDecomposition out{std::vector<double>(n), UnitaryMatrix::identity(n)};
  ComplexMatrix sorted(n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = w.at(order[k], order[k]).real();
    for (int i = 0; i < n; ++i) sorted.at(i, k) = v.at(i, order[k]);
  }
  out.vectors = UnitaryMatrix(std::move(sorted));
  return out;
}

UnitaryMatrix propagator(const HermitianOperator& h, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("time must be finite");
  const int n = h.dim();
  EigenDecomposition eig = eig_hermitian(h);
  const ComplexMatrix& phi = eig.vectors.matrix();
  ComplexMatrix u(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Complex s{0.0, 0.0};
      for (int k = 0; k < n; ++k) {
        const Complex phase = std::polar(1.0, -eig.values[k] * t);
        s += phi.at(i, k) * phase * std::conj(phi.at(j, k));
      }
      u.at(i, j) = s;
    }
  }
  return UnitaryMatrix(std::move(u));
}

UnitaryMatrix fourier_unitary(int n) {
  require_dim(n);
  ComplexMatrix u(n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (int m = 0; m < n; ++m) {
    for (int k = 0; k < n; ++k) {
      // Reduce m*k mod n before taking the phase for exactness at the axes.
      const int e = (m * k) % n;
      u.at(m, k) = std::polar(norm, 2.0 * M_PI * e / n);
    }
  }
  return UnitaryMatrix(std::move(u));
}

UnitaryMatrix permutation_unitary(std::span<const int> perm) {
  const int n = static_cast<int>(perm.size());
  require_dim(n);
  std::vector<bool> seen(n, false);
  for (int j = 0; j < n; ++j) {
    if (perm[j] < 0 || perm[j] >= n || seen[perm[j]]) {
      throw std::invalid_argument("not a permutation of 0..n-1");
    }
    seen[perm[j]] = true;
  }
  ComplexMatrix u(n);
  for (int j = 0; j < n; ++j) u.at(perm[j], j) = 1.0;
  return UnitaryMatrix(std::move(u));
}

DensityMatrix conjugate_state(const UnitaryMatrix& u, const DensityMatrix& rho) {
  return DensityMatrix(u.matrix() * rho.matrix() * u.matrix().adjoint());
}

HermitianOperator conjugate_operator(const UnitaryMatrix& u,
                                     const HermitianOperator& h) {
  return HermitianOperator(u.matrix() * h.matrix() * u.matrix().adjoint());
}

}  // namespace qsl
