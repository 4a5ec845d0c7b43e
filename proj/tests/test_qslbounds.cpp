#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "qsl/dynamics.hpp"
#include "qsl/matrix.hpp"
#include "qsl/qslbounds.hpp"
#include "qsl/rng.hpp"
#include "qsl/stategeom.hpp"

using namespace qsl;

namespace {

constexpr double kPi = std::numbers::pi;

ComplexMatrix two_band_hamiltonian() {
  ComplexMatrix h(3);
  h.at(0, 0) = 0.0;
  h.at(1, 1) = 0.5;
  h.at(2, 2) = 1.0;
  h.at(0, 2) = 1.0;
  h.at(2, 0) = 1.0;
  return h;
}

ComplexMatrix random_hermitian(int n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  ComplexMatrix a(n);
  for (int i = 0; i < n; ++i) {
    a.at(i, i) = rng.next_normal();
    for (int j = i + 1; j < n; ++j) {
      const Complex z{rng.next_normal(), rng.next_normal()};
      a.at(i, j) = z;
      a.at(j, i) = std::conj(z);
    }
  }
  return a;
}

HermitianOperator commutator_derivative(const HermitianOperator& h,
                                        const DensityMatrix& rho) {
  ComplexMatrix comm = h.matrix() * rho.matrix() - rho.matrix() * h.matrix();
  comm *= Complex{0.0, -1.0};
  return HermitianOperator(comm);
}

double gamma_closed(double cutoff, double k, double t) {
  const double x = cutoff * t;
  if (k == 1.0) return 0.5 * std::log1p(x * x);
  return std::tgamma(k) / (k - 1.0) *
         (1.0 - std::pow(1.0 + x * x, -0.5 * (k - 1.0)) *
                    std::cos((k - 1.0) * std::atan(x)));
}

}  // namespace

TEST_CASE("speed_alpha basics and validation") {
  const DensityMatrix rho = random_density(3, 2, 71);
  const HermitianOperator zero(ComplexMatrix(3));
  CHECK(speed_alpha(rho, zero, AlphaValue(0.9, 3)) == 0.0);

  CHECK_THROWS_AS(
      speed_alpha(rho, HermitianOperator(ComplexMatrix::identity(3)),
                  AlphaValue(0.9, 3)),
      std::invalid_argument);
  CHECK_THROWS_AS(speed_alpha(rho, zero, AlphaValue(0.9, 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(speed_alpha(random_density(2, 2, 5), zero,
                              AlphaValue(0.9, 2)),
                  std::invalid_argument);
}

TEST_CASE("speed_alpha matches finite-difference distances") {
  const double h = 1e-6;
  for (int n : {2, 3, 4}) {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
      const DensityMatrix rho = random_density(n, n, seed);
      const double alpha = (n == 2) ? 0.7 : 0.6;
      const AlphaValue a(alpha, n);

      // Unitary path through rho.
      const HermitianOperator ham(random_hermitian(n, seed + 100));
      const HermitianOperator rhodot = commutator_derivative(ham, rho);
      const DensityMatrix fwd = conjugate_state(propagator(ham, h), rho);
      const DensityMatrix bwd = conjugate_state(propagator(ham, -h), rho);
      const double fd_unitary = distance_alpha(bwd, fwd, a) / (2.0 * h);
      const double sp_unitary = speed_alpha(rho, rhodot, a);
      CHECK(std::abs(sp_unitary - fd_unitary) <=
            1e-5 * std::max(1.0, fd_unitary));

      // Straight mixing path rho + t (sigma - rho).
      const DensityMatrix sigma = random_density(n, n, seed + 200);
      const HermitianOperator mixdot(sigma.matrix() - rho.matrix());
      const auto mix = [&](double t) {
        ComplexMatrix m = rho.matrix();
        m *= Complex{1.0 - t, 0.0};
        ComplexMatrix s = sigma.matrix();
        s *= Complex{t, 0.0};
        return DensityMatrix(m + s);
      };
      const double fd_mix = distance_alpha(mix(-h), mix(h), a) / (2.0 * h);
      const double sp_mix = speed_alpha(rho, mixdot, a);
      CHECK(std::abs(sp_mix - fd_mix) <= 1e-5 * std::max(1.0, fd_mix));
    }
  }
}

TEST_CASE("speed_alpha tracks the depolarizing angle rate") {
  const DensityMatrix rho0 = random_density(3, 2, 21);
  const Trajectory traj =
      depolarizing_trajectory(rho0, PSchedule::exponential(), 1.0);
  const AlphaValue alpha(rho0.purity(), 3);
  const double h = 1e-6;
  for (double t : {0.2, 0.6, 0.9}) {
    const double sp = speed_alpha(traj.state(t), traj.derivative(t), alpha);
    const double fd =
        distance_alpha(traj.state(t - h), traj.state(t + h), alpha) / (2 * h);
    CHECK(std::abs(sp - fd) <= 1e-5 * std::max(1.0, fd));
    // Along the geodesic the speed is the rate of the angle from the start.
    const double angle_rate = (distance_alpha(rho0, traj.state(t + h), alpha) -
                               distance_alpha(rho0, traj.state(t - h), alpha)) /
                              (2 * h);
    CHECK(std::abs(sp - std::abs(angle_rate)) <= 1e-5 * std::max(1.0, sp));
  }
}

TEST_CASE("energy_variance closed forms") {
  const HermitianOperator h =
      HermitianOperator::diagonal(std::vector<double>{1.0, 2.0, 3.0});
  CHECK(energy_variance(h, DensityMatrix::pure_basis_state(3, 1)) <= 1e-12);

  for (std::uint64_t seed : {31u, 32u, 33u}) {
    const HermitianOperator hr(random_hermitian(3, seed));
    const DensityMatrix rho = random_density(3, 3, seed + 50);
    // Direct trace oracle, entry by entry.
    const ComplexMatrix hm = hr.matrix();
    const ComplexMatrix rm = rho.matrix();
    const ComplexMatrix h2r2 = hm * (hm * (rm * rm));
    const ComplexMatrix hrhr = hm * (rm * (hm * rm));
    const double want = std::sqrt(h2r2.trace().real() - hrhr.trace().real());
    CHECK(energy_variance(hr, rho) == doctest::Approx(want).epsilon(1e-12));
  }

  // In the geodesic setup each pair's variance is the gap times the
  // coherence magnitude, constant along the evolution.
  const DensityMatrix rho0 = DensityMatrix::from_diagonal(
      std::vector<double>{0.5, 0.3, 0.2});
  const EnergySpec spec(std::vector<double>{0.0, 0.5, 1.0});
  const HermitianOperator ht = saturating_hamiltonian(rho0, spec);
  const Trajectory traj = unitary_trajectory(ht, rho0, 1.0);
  const ProjectiveFamily fam0(rho0, traj.frame(0.0));
  for (double t : {0.0, 0.7}) {
    const ProjectiveFamily fam(traj.state(t), traj.frame(t));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        if (i == j) continue;
        const double want = std::abs(spec.energies()[i] - spec.energies()[j]) *
                            std::abs(fam0.offdiag(i, j));
        CHECK(energy_variance(ht, fam.pair(i, j)) ==
              doctest::Approx(want).epsilon(1e-10));
      }
  }

  CHECK_THROWS_AS(energy_variance(h, DensityMatrix::maximally_mixed(2)),
                  std::invalid_argument);
}

TEST_CASE("tau_alpha saturates the depolarizing geodesic") {
  for (int n : {2, 3, 4}) {
    const DensityMatrix rho0 = random_density(n, n - 1, 40 + n);
    const Trajectory traj =
        depolarizing_trajectory(rho0, PSchedule::exponential(), 1.0);
    const QslReport r = tau_alpha(traj, AlphaValue(rho0.purity(), n), 65);
    CHECK(std::abs(r.ratio - 1.0) <= 1e-3);
    CHECK(r.converged);
    CHECK(r.bound <= 1.0 + 2e-3);
    CHECK(r.grid_points > 65);
    CHECK(r.refinements >= 1);
  }
}

TEST_CASE("tau_alpha stays below one for three-level unitary dynamics") {
  const DensityMatrix rho0 = DensityMatrix::pure_basis_state(3, 0);
  const Trajectory coupled = unitary_trajectory(
      HermitianOperator(two_band_hamiltonian()), rho0, 1.0);
  const QslReport rc = tau_alpha(coupled, AlphaValue(1.0, 3), 65);
  CHECK(rc.ratio <= 1.0 + 2e-3);
  CHECK(rc.ratio < 0.999);

  const HermitianOperator ht = saturating_hamiltonian(
      rho0, EnergySpec(std::vector<double>{0.0, 0.5, 1.0}));
  const Trajectory geo = unitary_trajectory(ht, rho0, 1.0);
  const QslReport rg = tau_alpha(geo, AlphaValue(1.0, 3), 65);
  CHECK(rg.ratio <= 1.0 + 2e-3);
  CHECK(rg.ratio < 0.999);
}

TEST_CASE("tau_alpha handles constant trajectories and validates input") {
  PSchedule flat;
  flat.value = [](double) { return 1.0; };
  flat.derivative = [](double) { return 0.0; };
  const DensityMatrix rho0 = random_density(3, 2, 44);
  const Trajectory still = depolarizing_trajectory(rho0, flat, 1.0);
  const QslReport r = tau_alpha(still, AlphaValue(0.8, 3), 65);
  CHECK(r.bound == 0.0);
  CHECK(r.distance <= 1e-9);
  CHECK(r.converged);

  const Trajectory moving =
      depolarizing_trajectory(rho0, PSchedule::exponential(), 1.0);
  CHECK_THROWS_AS(tau_alpha(moving, AlphaValue(0.8, 3), 64),
                  std::invalid_argument);
  CHECK_THROWS_AS(tau_alpha(moving, AlphaValue(0.8, 2), 65),
                  std::invalid_argument);
}

TEST_CASE("chord path lengths never shrink under grid doubling") {
  const DensityMatrix rho0 = random_density(3, 3, 45);
  const Trajectory depol =
      depolarizing_trajectory(rho0, PSchedule::exponential(), 1.0);
  const Trajectory coupled = unitary_trajectory(
      HermitianOperator(two_band_hamiltonian()),
      DensityMatrix::pure_basis_state(3, 0), 2.0);
  const AlphaValue alpha(0.8, 3);
  for (const Trajectory* traj : {&depol, &coupled}) {
    const auto path = [&](int intervals) {
      double len = 0.0;
      DensityMatrix prev = traj->state(0.0);
      for (int k = 1; k <= intervals; ++k) {
        DensityMatrix cur = traj->state(traj->horizon * k / intervals);
        len += distance_alpha(prev, cur, alpha);
        prev = cur;
      }
      return len;
    };
    const double p64 = path(64);
    const double p128 = path(128);
    const double p256 = path(256);
    CHECK(p128 >= p64 - 1e-9);
    CHECK(p256 >= p128 - 1e-9);
  }
}

TEST_CASE("tau_qsl saturates depolarizing dynamics") {
  for (int n : {2, 3, 4}) {
    const DensityMatrix rho0 = random_density(n, n, 50 + n);
    const Trajectory traj =
        depolarizing_trajectory(rho0, PSchedule::exponential(), 1.0);
    const QslReport r = tau_qsl(traj, 65);
    CHECK(std::abs(r.ratio - 1.0) <= 1e-3);
    CHECK(r.converged);
  }
}

TEST_CASE("tau_qsl saturates the geodesic hamiltonian inside its window") {
  const EnergySpec spec(std::vector<double>{0.0, 0.5, 1.0});
  const DensityMatrix pure = DensityMatrix::pure_basis_state(3, 0);
  const DensityMatrix mixed = DensityMatrix::from_diagonal(
      std::vector<double>{0.5, 0.3, 0.2});
  for (const DensityMatrix* rho0 : {&pure, &mixed}) {
    const HermitianOperator ht = saturating_hamiltonian(*rho0, spec);
    for (double tau : {0.5, 1.0, 3.0}) {
      const Trajectory traj = unitary_trajectory(ht, *rho0, tau);
      const QslReport r = tau_qsl(traj, 65);
      CHECK(std::abs(r.ratio - 1.0) <= 1e-3);
    }
  }
}

TEST_CASE("tau_qsl separates equal and unequal damping populations") {
  const std::vector<double> equal{0.2, 0.4, 0.4};
  const Trajectory sat = amplitude_damping_trajectory(
      equal, DecayModel::constant(1.0), 1.0);
  const QslReport rs = tau_qsl(sat, 65);
  CHECK(std::abs(rs.ratio - 1.0) <= 1e-3);

  const std::vector<double> zero_ground{0.0, 0.5, 0.5};
  const Trajectory sat2 = amplitude_damping_trajectory(
      zero_ground, DecayModel::constant(1.0), 1.0);
  CHECK(std::abs(tau_qsl(sat2, 65).ratio - 1.0) <= 1e-3);

  const std::vector<double> skewed{0.0, 0.7, 0.3};
  const Trajectory off = amplitude_damping_trajectory(
      skewed, DecayModel::constant(1.0), 1.0);
  const QslReport ro = tau_qsl(off, 65);
  CHECK(ro.ratio <= 1.0 + 2e-3);
  CHECK(ro.ratio < 0.999);
}

TEST_CASE("tau_qsl on dephasing saturates only for a uniform diagonal") {
  const std::vector<double> uniform{1.0 / 3, 1.0 / 3, 1.0 / 3};
  std::vector<Coherence> coh{{0, 1, Complex{0.2, 0.0}}};
  const Trajectory geo = dephasing_trajectory(uniform, coh, 1.0, 1.0);
  const QslReport rg = tau_qsl(geo, 65);
  CHECK(std::abs(rg.ratio - 1.0) <= 1e-3);

  const std::vector<double> tilted{0.5, 0.3, 0.2};
  std::vector<Coherence> coh2{{0, 1, Complex{0.15, 0.05}}};
  const Trajectory off = dephasing_trajectory(tilted, coh2, 1.0, 1.0);
  const QslReport ro = tau_qsl(off, 65);
  CHECK(ro.ratio <= 1.0 + 2e-3);
  CHECK(ro.ratio < 0.999);
}

TEST_CASE("tau_qsl accepts explicit alpha tables") {
  const DensityMatrix rho0 = random_density(3, 2, 61);
  const Trajectory traj =
      depolarizing_trajectory(rho0, PSchedule::exponential(), 1.0);
  const QslReport tuned = tau_qsl(traj, 65);
  const QslReport flat = tau_qsl(traj, AlphaAssignment(3, 1.0), 65);
  // Pair images move on great circles here, so any uniform table still
  // saturates; the table must show up in the distance scale though.
  CHECK(flat.ratio <= 1.0 + 2e-3);
  CHECK(std::abs(flat.distance - tuned.distance) > 1e-6);

  CHECK_THROWS_AS(tau_qsl(traj, AlphaAssignment(2, 0.9), 65),
                  std::invalid_argument);
}

TEST_CASE("unitary evolution conserves pair purities") {
  const DensityMatrix rho0 = DensityMatrix::from_diagonal(
      std::vector<double>{0.5, 0.3, 0.2});
  const Trajectory traj = unitary_trajectory(
      HermitianOperator(two_band_hamiltonian()), rho0, 2.0);
  const ProjectiveFamily fam0(rho0, traj.frame(0.0));
  for (double t : {0.4, 1.1, 1.7}) {
    const ProjectiveFamily fam(traj.state(t), traj.frame(t));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j)
          CHECK(std::abs(fam.pair_purity(i, j) - fam0.pair_purity(i, j)) <=
                1e-10);
  }
}

TEST_CASE("tau_qsl_closed agrees with the generic bound") {
  for (int n : {2, 3}) {
    for (std::uint64_t seed : {71u, 72u, 73u}) {
      const DensityMatrix rho0 = random_density(n, n, seed);
      const HermitianOperator h(random_hermitian(n, seed + 10));
      const double tau = 0.8;
      const QslReport closed = tau_qsl_closed(h, rho0, tau, 65);
      const Trajectory traj = unitary_trajectory(h, rho0, tau);
      const QslReport generic = tau_qsl(traj, 65);
      CHECK(std::abs(closed.bound - generic.bound) <=
            1e-4 * std::max(std::abs(generic.bound), 1e-6));
    }
  }
}

TEST_CASE("tau_qsl_closed reproduces the unitary saturation window") {
  const DensityMatrix rho0 = DensityMatrix::pure_basis_state(3, 0);
  const EnergySpec spec(std::vector<double>{0.0, 0.5, 1.0});
  const HermitianOperator ht = saturating_hamiltonian(rho0, spec);
  for (double tau : {0.5, 1.0, 3.0}) {
    const QslReport r = tau_qsl_closed(ht, rho0, tau, 65);
    CHECK(std::abs(r.bound - tau) <= 1e-3 * tau);
  }
  // Past tau = pi / max gap the principal branch folds and the bound drops.
  const QslReport folded = tau_qsl_closed(ht, rho0, 3.5, 65);
  CHECK(folded.ratio < 0.999);

  const QslReport coupled = tau_qsl_closed(
      HermitianOperator(two_band_hamiltonian()), rho0, 1.0, 65);
  CHECK(coupled.ratio <= 1.0 + 2e-3);
  CHECK(coupled.ratio < 0.999);
}

TEST_CASE("tau_qsl_closed edge cases") {
  const DensityMatrix rho0 = DensityMatrix::from_diagonal(
      std::vector<double>{0.5, 0.3, 0.2});
  // A multiple of the identity commutes with every pair: nothing moves.
  const HermitianOperator inert(
      HermitianOperator::diagonal(std::vector<double>{0.7, 0.7, 0.7}));
  const QslReport r = tau_qsl_closed(inert, rho0, 1.0, 65);
  CHECK(r.bound == 0.0);
  CHECK(r.distance <= 1e-9);
  CHECK(r.converged);

  CHECK_THROWS_AS(tau_qsl_closed(inert, DensityMatrix::maximally_mixed(3), 1.0, 65),
                  std::runtime_error);
  CHECK_THROWS_AS(tau_qsl_closed(inert, rho0, 1.0, 64), std::invalid_argument);
}

TEST_CASE("saturating_hamiltonian construction") {
  const DensityMatrix ground = DensityMatrix::pure_basis_state(3, 0);
  const EnergySpec spec(std::vector<double>{0.0, 0.5, 1.0});
  CHECK(spec.max_gap() == 1.0);
  const HermitianOperator ht = saturating_hamiltonian(ground, spec);

  const ComplexMatrix f = fourier_unitary(3).matrix();
  const ComplexMatrix want =
      f * (ComplexMatrix::diagonal(spec.energies()) * f.adjoint());
  CHECK(max_abs_diff(ht.matrix(), want) <= 1e-12);

  // The generated dynamics saturates for a mixed start as well.
  const DensityMatrix mixed = random_density(3, 3, 81);
  const HermitianOperator hm = saturating_hamiltonian(mixed, spec);
  const Trajectory traj = unitary_trajectory(hm, mixed, 1.0);
  CHECK(std::abs(tau_qsl(traj, 65).ratio - 1.0) <= 1e-3);

  CHECK_THROWS_AS(EnergySpec(std::vector<double>{1.0, 1.0, 2.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(EnergySpec(std::vector<double>{1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(EnergySpec(std::vector<double>{0.0, 1.0 / 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      saturating_hamiltonian(ground, EnergySpec(std::vector<double>{0.0, 1.0})),
      std::invalid_argument);
}

TEST_CASE("saturating_initial_state construction") {
  const HermitianOperator hdiag =
      HermitianOperator::diagonal(std::vector<double>{0.0, 0.5, 1.0});
  const std::vector<double> populations{0.6, 0.3, 0.1};
  const DensityMatrix rho = saturating_initial_state(hdiag, populations);

  const ComplexMatrix f = fourier_unitary(3).matrix();
  const ComplexMatrix want =
      f * (ComplexMatrix::diagonal(populations) * f.adjoint());
  CHECK(max_abs_diff(rho.matrix(), want) <= 1e-12);

  const auto eig = eig_hermitian(rho.hermitian());
  CHECK(eig.values[0] == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(eig.values[1] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(eig.values[2] == doctest::Approx(0.6).epsilon(1e-12));

  // The given Hamiltonian then saturates the bound from this state.
  const std::vector<double> basis_pop{1.0, 0.0, 0.0};
  const DensityMatrix rho1 = saturating_initial_state(hdiag, basis_pop);
  const Trajectory t1 = unitary_trajectory(hdiag, rho1, 1.0);
  CHECK(std::abs(tau_qsl(t1, 65).ratio - 1.0) <= 1e-3);

  const HermitianOperator hfull(random_hermitian(3, 91));
  const EigenDecomposition he = eig_hermitian(hfull);
  const double gap = he.values[2] - he.values[0];
  const double tau = std::min(1.0, 0.9 * kPi / gap);
  const DensityMatrix rho2 =
      saturating_initial_state(hfull, std::vector<double>{0.7, 0.2, 0.1});
  const Trajectory t2 = unitary_trajectory(hfull, rho2, tau);
  CHECK(std::abs(tau_qsl(t2, 65).ratio - 1.0) <= 1e-3);

  // Uniform populations give the uniform state: nothing moves.
  const DensityMatrix flat = saturating_initial_state(
      hdiag, std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3});
  CHECK(max_abs_diff(flat.matrix(),
                     DensityMatrix::maximally_mixed(3).matrix()) <= 1e-12);
  const QslReport rflat = tau_qsl(unitary_trajectory(hdiag, flat, 1.0), 65);
  CHECK(rflat.bound == 0.0);
  CHECK(rflat.distance <= 1e-9);

  CHECK_THROWS_AS(
      saturating_initial_state(hdiag, std::vector<double>{0.5, 0.5}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      saturating_initial_state(hdiag, std::vector<double>{0.8, 0.3, -0.1}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      saturating_initial_state(hdiag, std::vector<double>{0.5, 0.3, 0.1}),
      std::invalid_argument);
}

TEST_CASE("orthogonal_reference_distance closed form") {
  CHECK(orthogonal_reference_distance(2) ==
        doctest::Approx(2.0 * kPi).epsilon(1e-14));
  CHECK(orthogonal_reference_distance(3) ==
        doctest::Approx(32.0 * kPi / 3.0).epsilon(1e-14));
  CHECK(orthogonal_reference_distance(4) ==
        doctest::Approx(30.0 * kPi).epsilon(1e-14));
  CHECK_THROWS_AS(orthogonal_reference_distance(1), std::invalid_argument);
}

TEST_CASE("tau_qsl_orthogonal on the qubit pulse") {
  ComplexMatrix sx(2);
  sx.at(0, 1) = 1.0;
  sx.at(1, 0) = 1.0;
  const DensityMatrix rho0 = DensityMatrix::pure_basis_state(2, 0);
  for (double tau : {1.0, 2.0}) {
    ComplexMatrix hm = sx;
    hm *= Complex{kPi / (2.0 * tau), 0.0};
    const QslReport r =
        tau_qsl_orthogonal(HermitianOperator(hm), rho0, tau, 65);
    CHECK(std::abs(r.bound - tau) <= 1e-3 * tau);
    CHECK(r.distance == doctest::Approx(2.0 * kPi).epsilon(1e-9));
  }
}

TEST_CASE("tau_qsl_orthogonal on the three-level geodesic") {
  const DensityMatrix rho0 = DensityMatrix::pure_basis_state(3, 0);
  const EnergySpec spec(std::vector<double>{0.0, 0.5, 1.0});
  const HermitianOperator ht = saturating_hamiltonian(rho0, spec);
  const double tau = 4.0 * kPi / 3.0;

  const QslReport r = tau_qsl_orthogonal(ht, rho0, tau, 65);
  CHECK(r.distance == doctest::Approx(4.0 * kPi).epsilon(1e-9));
  CHECK(r.bound == doctest::Approx(kPi).epsilon(1e-3));
  CHECK(std::abs(r.ratio - 0.75) <= 1e-3);
  // The closed-form reference value stays larger than the principal branch.
  CHECK(orthogonal_reference_distance(3) > r.distance);

  CHECK_THROWS_AS(tau_qsl_orthogonal(ht, rho0, 1.0, 65), std::invalid_argument);
  CHECK_THROWS_AS(
      tau_qsl_orthogonal(ht, DensityMatrix::maximally_mixed(3), tau, 65),
      std::invalid_argument);
}

TEST_CASE("time_average quadrature") {
  CHECK(time_average([](double) { return 3.7; }, 2.0) ==
        doctest::Approx(3.7).epsilon(1e-15));
  CHECK(time_average([](double t) { return t; }, 1.0) ==
        doctest::Approx(0.5).epsilon(1e-14));

  const DecayModel ohmic4 = DecayModel::ohmic_zero_temperature(1.0, 4.0);
  const double want = gamma_closed(1.0, 4.0, 2.0) / 2.0;
  CHECK(time_average([&](double t) { return decay_rate(ohmic4, t); }, 2.0) ==
        doctest::Approx(want).epsilon(1e-8));

  CHECK_THROWS_AS(time_average([](double) { return 1.0; }, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(time_average([](double) { return 1.0; }, 1.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      time_average(
          [](double t) {
            return t < 0.5 ? 1.0 : std::numeric_limits<double>::infinity();
          },
          1.0),
      std::runtime_error);
}

TEST_CASE("bound validity fuzz across trajectory families") {
  int checked = 0;
  for (int n : {2, 3}) {
    for (std::uint64_t seed : {101u, 102u, 103u}) {
      const DensityMatrix rho0 = random_density(n, n, seed);
      const double pur = rho0.purity();
      const AlphaValue alpha(pur > 1.0 / n + 1e-9 ? pur : 1.0, n);

      std::vector<Trajectory> family;
      family.push_back(
          depolarizing_trajectory(rho0, PSchedule::exponential(), 1.0));
      family.push_back(unitary_trajectory(
          HermitianOperator(random_hermitian(n, seed + 7)), rho0, 1.0));
      SplitMix64 rng(seed + 13);
      std::vector<double> lam(n);
      double sum = 0.0;
      for (double& v : lam) {
        v = std::abs(rng.next_normal()) + 0.05;
        sum += v;
      }
      for (double& v : lam) v /= sum;
      family.push_back(
          amplitude_damping_trajectory(lam, DecayModel::constant(1.0), 1.0));

      for (const Trajectory& traj : family) {
        CHECK(tau_alpha(traj, alpha, 65).ratio <= 1.0 + 2e-3);
        CHECK(tau_qsl(traj, 65).ratio <= 1.0 + 2e-3);
        ++checked;
      }
    }
  }
  CHECK(checked == 18);
}
