#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "qsl/matrix.hpp"
#include "qsl/rng.hpp"
#include "qsl/stategeom.hpp"

using namespace qsl;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent construction of a pair matrix for a state diagonal in the
// computational basis (frame = identity): I/N plus the (i, j) coherence in
// the Fourier directions.
ComplexMatrix pair_oracle(const std::vector<double>& lambda, int i, int j) {
  const int n = static_cast<int>(lambda.size());
  Complex m{0.0, 0.0};
  for (int k = 0; k < n; ++k)
    m += lambda[k] * std::polar(1.0 / n, 2.0 * kPi * k * (j - i) / n);
  ComplexMatrix out(n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const Complex fi_r = std::polar(1.0 / std::sqrt(double(n)),
                                      2.0 * kPi * r * i / n);
      const Complex fj_c = std::polar(1.0 / std::sqrt(double(n)),
                                      2.0 * kPi * c * j / n);
      const Complex fj_r = std::polar(1.0 / std::sqrt(double(n)),
                                      2.0 * kPi * r * j / n);
      const Complex fi_c = std::polar(1.0 / std::sqrt(double(n)),
                                      2.0 * kPi * c * i / n);
      out.at(r, c) = m * fi_r * std::conj(fj_c) +
                     std::conj(m) * fj_r * std::conj(fi_c);
      if (r == c) out.at(r, c) += 1.0 / n;
    }
  }
  return out;
}

DensityMatrix depolarize(const DensityMatrix& rho, double p) {
  ComplexMatrix m = rho.matrix();
  m *= Complex{p, 0.0};
  for (int i = 0; i < rho.dim(); ++i) m.at(i, i) += (1.0 - p) / rho.dim();
  return DensityMatrix(m);
}

}  // namespace

TEST_CASE("f_map closed forms") {
  const DensityMatrix mm3 = DensityMatrix::maximally_mixed(3);
  const HermitianOperator f3 = f_map(mm3, AlphaValue(1.0, 3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const Complex want = (i == j) ? Complex{-2.0 / 9.0, 0.0} : Complex{0, 0};
      CHECK(std::abs(f3.matrix().at(i, j) - want) <= 1e-15);
    }
  CHECK(hs_inner(f3, f3) == doctest::Approx(4.0 / 27.0).epsilon(1e-13));

  const DensityMatrix e0 = DensityMatrix::pure_basis_state(2, 0);
  const HermitianOperator f2 = f_map(e0, AlphaValue(1.0, 2));
  CHECK(std::abs(f2.matrix().at(0, 0) - Complex{0.5, 0.0}) <= 1e-15);
  CHECK(std::abs(f2.matrix().at(1, 1) - Complex{-0.5, 0.0}) <= 1e-15);
  CHECK(hs_inner(f2, f2) == doctest::Approx(0.5).epsilon(1e-14));

  for (std::uint64_t s = 0; s < 40; ++s) {
    const int n = 2 + static_cast<int>(s % 5);
    const DensityMatrix rho = random_density(n, 1 + int(s % n), s + 7);
    const double alpha = 0.9;
    const HermitianOperator f = f_map(rho, AlphaValue(alpha, n));
    const double pur = rho.purity();
    const double want =
        pur - 1.0 / n + (alpha - pur) * (alpha - pur) / n;
    CHECK(hs_inner(f, f) == doctest::Approx(want).epsilon(1e-12));
    CHECK(std::sqrt(hs_inner(f, f)) >= 1e-8);
  }
}

TEST_CASE("alpha range enforcement") {
  CHECK_THROWS_AS(AlphaValue(1.0 / 3.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(AlphaValue(1.0 / 3.0 + 1e-13, 3), std::invalid_argument);
  CHECK_THROWS_AS(AlphaValue(1.0 + 1e-9, 3), std::invalid_argument);
  CHECK_THROWS_AS(AlphaValue(0.125, 8), std::invalid_argument);
  CHECK_NOTHROW(AlphaValue(0.4, 8));
  CHECK_NOTHROW(AlphaValue(1.0, 3));
  CHECK_NOTHROW(AlphaValue(0.34, 3));

  AlphaAssignment table(3, 0.9);
  CHECK_THROWS_AS(table.set(0, 1, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(table.at(1, 1), std::invalid_argument);
  table.set(0, 1, 0.5);
  CHECK(table.at(0, 1) == 0.5);
  CHECK(table.at(1, 0) == 0.9);
}

TEST_CASE("distance_alpha basics") {
  const DensityMatrix r = random_density(4, 3, 11);
  CHECK(distance_alpha(r, r, 0.9) <= 1e-7);

  const DensityMatrix e0 = DensityMatrix::pure_basis_state(2, 0);
  const DensityMatrix e1 = DensityMatrix::pure_basis_state(2, 1);
  CHECK(distance_alpha(e0, e1, 1.0) == doctest::Approx(kPi).epsilon(1e-12));

  for (std::uint64_t s = 0; s < 20; ++s) {
    const int n = 2 + static_cast<int>(s % 4);
    const DensityMatrix a = random_density(n, n, 3 * s + 1);
    const DensityMatrix b = random_density(n, 1 + int(s % n), 3 * s + 2);
    const UnitaryMatrix u = random_unitary(n, 3 * s + 3);
    const double d0 = distance_alpha(a, b, 0.9);
    const double d1 =
        distance_alpha(conjugate_state(u, a), conjugate_state(u, b), 0.9);
    CHECK(std::abs(d0 - d1) <= 1e-10);
  }
}

TEST_CASE("distance_alpha metric axioms") {
  for (int n = 2; n <= 6; ++n) {
    for (double alpha : {0.6, 0.9, 1.0}) {
      for (std::uint64_t s = 0; s < 60; ++s) {
        const std::uint64_t base = (n * 1000 + std::uint64_t(alpha * 100)) * 100 + s;
        const DensityMatrix rho = random_density(n, 1 + int(s % n), base);
        const DensityMatrix sig = random_density(n, 1 + int((s / 2) % n), base + 40000);
        const DensityMatrix chi = random_density(n, n, base + 80000);
        const double drs = distance_alpha(rho, sig, alpha);
        CHECK(drs >= 0.0);
        CHECK(std::abs(drs - distance_alpha(sig, rho, alpha)) <= 1e-12);
        CHECK(drs <= distance_alpha(rho, chi, alpha) +
                         distance_alpha(chi, sig, alpha) + 1e-9);
        if (max_abs_diff(rho.matrix(), sig.matrix()) > 1e-6) CHECK(drs > 0.0);
        CHECK(distance_alpha(rho, rho, alpha) <= 1e-7);
      }
    }
  }
}

TEST_CASE("projective family of the uniform state") {
  const DensityMatrix mm = DensityMatrix::maximally_mixed(4);
  const ProjectiveFamily fam(mm);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      CHECK(max_abs_diff(fam.pair(i, j).matrix(), mm.matrix()) <= 1e-14);
      CHECK(std::abs(fam.offdiag(i, j)) <= 1e-14);
    }
}

TEST_CASE("projective family matches the direct construction") {
  const std::vector<double> lambda{0.5, 0.3, 0.2};
  const DensityMatrix rho = DensityMatrix::from_diagonal(lambda);
  const ProjectiveFamily fam(rho, UnitaryMatrix::identity(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      CHECK(max_abs_diff(fam.pair(i, j).matrix(), pair_oracle(lambda, i, j)) <=
            1e-12);
    }
  // Coherence magnitude is bounded by 1/N.
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) CHECK(std::abs(fam.offdiag(i, j)) <= 1.0 / 3 + 1e-15);
}

TEST_CASE("projective family invariants") {
  for (int n = 2; n <= 6; ++n) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const DensityMatrix rho = random_density(n, 1 + int(s % n), 900 + s);
      const ProjectiveFamily fam(rho);
      ComplexMatrix sum(n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          CHECK(max_abs_diff(fam.pair(i, j).matrix(),
                             fam.pair(j, i).matrix()) <= 1e-12);
          const double pur = fam.pair(i, j).purity();
          const double want = 1.0 / n + 2.0 * std::norm(fam.offdiag(i, j));
          CHECK(std::abs(pur - want) <= 1e-10);
          sum += fam.pair(i, j).matrix();
        }
      ComplexMatrix expect = rho.matrix();
      expect *= Complex{2.0, 0.0};
      for (int i = 0; i < n; ++i) expect.at(i, i) += n - 1.0 - 2.0 / n;
      CHECK(max_abs_diff(sum, expect) <= 1e-10);
    }
  }
}

TEST_CASE("projective family frame covariance") {
  for (std::uint64_t s = 0; s < 8; ++s) {
    const int n = 2 + static_cast<int>(s % 4);
    const DensityMatrix rho = random_density(n, n, 500 + s);
    const ProjectiveFamily fam(rho);
    const UnitaryMatrix u = random_unitary(n, 600 + s);
    const UnitaryMatrix moved_frame(u.matrix() * fam.frame().matrix());
    const ProjectiveFamily moved(conjugate_state(u, rho), moved_frame);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const ComplexMatrix want =
            u.matrix() * (fam.pair(i, j).matrix() * u.matrix().adjoint());
        CHECK(max_abs_diff(moved.pair(i, j).matrix(), want) <= 1e-10);
      }
  }
}

TEST_CASE("projective family rejects a non-diagonalizing frame") {
  const DensityMatrix rho = random_density(3, 3, 77);
  double offdiag = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) offdiag = std::max(offdiag, std::abs(rho.matrix().at(i, j)));
  REQUIRE(offdiag > 1e-6);
  CHECK_THROWS_AS(ProjectiveFamily(rho, UnitaryMatrix::identity(3)),
                  std::invalid_argument);
}

TEST_CASE("framed distance basics") {
  const DensityMatrix rho = random_density(3, 3, 4242);
  const ProjectiveFamily fam(rho);
  CHECK(framed_distance(fam, fam, AlphaAssignment(3, 0.9)) <= 1e-6);

  // For qubits both pair matrices coincide with the state itself, so the
  // framed distance is exactly twice the plain one.
  const DensityMatrix a = random_density(2, 2, 91);
  const DensityMatrix b = random_density(2, 1, 92);
  const double framed = framed_distance(ProjectiveFamily(a),
                                        ProjectiveFamily(b),
                                        AlphaAssignment(2, 0.8));
  CHECK(framed ==
        doctest::Approx(2.0 * distance_alpha(a, b, 0.8)).epsilon(1e-12));
}

TEST_CASE("framed distance adds pairwise energy gaps under phase rotation") {
  const DensityMatrix rho0 = DensityMatrix::from_diagonal(
      std::vector<double>{0.5, 0.3, 0.2});
  const std::vector<double> energies{0.0, 0.5, 1.0};
  const UnitaryMatrix fourier = fourier_unitary(3);
  const HermitianOperator h(fourier.matrix() *
                            (ComplexMatrix::diagonal(energies) *
                             fourier.matrix().adjoint()));
  const double tau = 1.0;
  const UnitaryMatrix u = propagator(h, tau);
  const DensityMatrix rhot = conjugate_state(u, rho0);

  const ProjectiveFamily fam0(rho0, UnitaryMatrix::identity(3));
  const ProjectiveFamily famt(rhot, u);
  const AlphaAssignment alphas = default_alphas(fam0, famt);
  double expect = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) expect += std::abs(energies[i] - energies[j]) * tau;
  CHECK(expect == doctest::Approx(4.0));
  CHECK(framed_distance(fam0, famt, alphas) ==
        doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("framed distance metric axioms on shared frames") {
  for (std::uint64_t s = 0; s < 12; ++s) {
    const int n = 2 + static_cast<int>(s % 3);
    const ProjectiveFamily fa(random_density(n, n, 3000 + s));
    const ProjectiveFamily fb(random_density(n, 1 + int(s % n), 3100 + s));
    const ProjectiveFamily fc(random_density(n, n, 3200 + s));
    const AlphaAssignment al(n, 0.9);
    const double dab = framed_distance(fa, fb, al);
    CHECK(dab >= 0.0);
    CHECK(std::abs(dab - framed_distance(fb, fa, al)) <= 1e-12);
    CHECK(dab <=
          framed_distance(fa, fc, al) + framed_distance(fc, fb, al) + 1e-9);
  }
}

TEST_CASE("permuted distance of identical states") {
  const DensityMatrix rho = random_density(4, 4, 1234);
  const ProjectiveFamily fam(rho);
  const PermutedDistance res =
      permuted_distance(fam, fam, AlphaAssignment(4, 0.9));
  CHECK(res.radians <= 1e-6);
  CHECK(res.permutation == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("permuted distance of orthogonal pure states") {
  {
    const DensityMatrix e0 = DensityMatrix::pure_basis_state(2, 0);
    const DensityMatrix e1 = DensityMatrix::pure_basis_state(2, 1);
    const ProjectiveFamily f0(e0, UnitaryMatrix::identity(2));
    const ProjectiveFamily f1(e1, UnitaryMatrix::identity(2));
    const PermutedDistance res =
        permuted_distance(f0, f1, default_alphas(f0, f1));
    CHECK(res.radians == doctest::Approx(2.0 * kPi).epsilon(1e-10));
  }
  {
    const DensityMatrix e0 = DensityMatrix::pure_basis_state(3, 0);
    const DensityMatrix e1 = DensityMatrix::pure_basis_state(3, 1);
    const ProjectiveFamily f0(e0, UnitaryMatrix::identity(3));
    const ProjectiveFamily f1(e1, UnitaryMatrix::identity(3));
    const AlphaAssignment alphas = default_alphas(f0, f1);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) CHECK(alphas.at(i, j) == doctest::Approx(5.0 / 9.0));
    const PermutedDistance res = permuted_distance(f0, f1, alphas);
    CHECK(res.radians == doctest::Approx(4.0 * kPi).epsilon(1e-10));
    // Every relabeling gives the same total here, so the tie-break picks
    // the identity.
    CHECK(res.permutation == std::vector<int>{0, 1, 2});
    CHECK(framed_distance(f0, f1, alphas) ==
          doctest::Approx(4.0 * kPi).epsilon(1e-10));
  }
}

TEST_CASE("default alphas") {
  const DensityMatrix mm = DensityMatrix::maximally_mixed(3);
  const AlphaAssignment flat = default_alphas(mm, mm);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) CHECK(flat.at(i, j) == 1.0);

  const DensityMatrix rho0 = random_density(3, 1, 555);
  const DensityMatrix rhop = depolarize(rho0, 0.6);
  const AlphaAssignment al = default_alphas(rho0, rhop);
  const ProjectiveFamily fam0(rho0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j)
        CHECK(al.at(i, j) ==
              doctest::Approx(fam0.pair_purity(i, j)).epsilon(1e-12));
}
