import math

import numpy as np
import pytest

import qslkit as q


def test_module_imports():
    assert q.__version__ == "0.1.0"


def test_density_matrix_round_trip_and_validation():
    rho = q.DensityMatrix(np.diag([0.5, 0.3, 0.2]))
    assert rho.dim == 3
    assert rho.purity == pytest.approx(0.38, abs=1e-15)
    arr = rho.matrix()
    assert arr.shape == (3, 3)
    assert arr.dtype == np.complex128
    np.testing.assert_allclose(arr, np.diag([0.5, 0.3, 0.2]), atol=1e-15)
    with pytest.raises(ValueError):
        q.DensityMatrix(np.diag([1.5, -0.5]))
    with pytest.raises(ValueError):
        q.HermitianOperator(np.array([[0, 1], [0, 0]], dtype=complex))
    with pytest.raises(ValueError):
        q.DensityMatrix(np.zeros((2, 3), dtype=complex))


def test_distance_between_orthogonal_pure_states():
    a = q.DensityMatrix.pure_basis_state(2, 0)
    b = q.DensityMatrix.pure_basis_state(2, 1)
    assert q.distance_alpha(a, b) == pytest.approx(math.pi, abs=1e-12)
    a3 = q.DensityMatrix.pure_basis_state(3, 0)
    b3 = q.DensityMatrix.pure_basis_state(3, 1)
    assert q.distance_alpha(a3, b3) == pytest.approx(2 * math.pi / 3, abs=1e-12)
    assert q.distance_alpha(a3, a3) == 0.0


def test_distance_is_a_unitarily_invariant_metric():
    rho = q.random_density(3, 3, seed=5)
    sigma = q.random_density(3, 2, seed=6)
    chi = q.random_density(3, 1, seed=7)

    def d(x, y):
        return q.distance_alpha(x, y, alpha=0.9)

    assert d(rho, sigma) == pytest.approx(d(sigma, rho), abs=1e-14)
    assert d(rho, chi) <= d(rho, sigma) + d(sigma, chi) + 1e-12
    u = q.random_unitary(3, seed=8)
    assert d(q.conjugate_state(u, rho), q.conjugate_state(u, sigma)) == pytest.approx(
        d(rho, sigma), abs=1e-9
    )


def test_framed_distance_reaches_the_orthogonal_maxima():
    eye2 = q.UnitaryMatrix.identity(2)
    a = q.DensityMatrix.pure_basis_state(2, 0)
    b = q.DensityMatrix.pure_basis_state(2, 1)
    radians, perm = q.permuted_distance(a, b, rho_frame=eye2, sigma_frame=eye2)
    assert radians == pytest.approx(2 * math.pi, abs=1e-9)
    assert sorted(perm) == [0, 1]

    eye3 = q.UnitaryMatrix.identity(3)
    a3 = q.DensityMatrix.pure_basis_state(3, 0)
    b3 = q.DensityMatrix.pure_basis_state(3, 1)
    radians3, _ = q.permuted_distance(a3, b3, rho_frame=eye3, sigma_frame=eye3)
    assert radians3 == pytest.approx(4 * math.pi, abs=1e-9)
    assert q.framed_distance(a3, b3, rho_frame=eye3, sigma_frame=eye3) == pytest.approx(
        4 * math.pi, abs=1e-9
    )
    assert q.orthogonal_brute_force(3) == pytest.approx(4 * math.pi, abs=1e-9)
    assert q.orthogonal_reference_distance(3) == pytest.approx(32 * math.pi / 3)

    alphas = q.default_alphas(a3, b3)
    assert alphas.at(0, 1) == pytest.approx(5 / 9, abs=1e-12)


def test_projective_family_pair_structure():
    rho = q.random_density(3, 3, seed=11)
    fam = q.ProjectiveFamily(rho)
    for i in range(3):
        for j in range(3):
            if i == j:
                continue
            pair = fam.pair(i, j)
            assert pair.purity == pytest.approx(fam.pair_purity(i, j), abs=1e-12)
            assert fam.pair_purity(i, j) == pytest.approx(
                1 / 3 + 2 * abs(fam.offdiag(i, j)) ** 2, abs=1e-12
            )


def test_speed_matches_the_finite_difference_oracle():
    h = q.HermitianOperator.diagonal([0.0, 0.7, 1.3])
    rho0 = q.random_density(3, 3, seed=21)
    traj = q.unitary_trajectory(h, rho0, 2.0)
    t = 0.8
    exact = q.speed_alpha(traj.state(t), traj.derivative(t), 0.9)
    approx = q.finite_diff_speed(traj, t, 1e-6, 0.9)
    assert approx == pytest.approx(exact, rel=1e-5)


def test_saturating_hamiltonian_meets_its_bound():
    rho0 = q.DensityMatrix.pure_basis_state(3, 0)
    ht = q.saturating_hamiltonian(rho0, [0.0, 0.5, 1.0])
    report = q.tau_qsl_closed(ht, rho0, 1.0)
    assert report.converged
    assert report.ratio == pytest.approx(1.0, abs=1e-3)
    assert report.bound == pytest.approx(report.distance / report.mean_speed, rel=1e-12)
    assert repr(report).startswith("QslReport(")


def test_bounds_hold_across_the_dissipative_families():
    traj = q.depolarizing_trajectory(q.random_density(3, 3, seed=31), 1.5, rate=0.7)
    report = q.tau_alpha(traj, 0.9)
    assert report.actual_tau == 1.5
    assert 0.0 < report.ratio <= 1.0 + 2e-3

    balanced = q.amplitude_damping_trajectory([1 / 3, 1 / 3, 1 / 3], 1.0, gamma=1.0)
    assert balanced.kind == "amplitude_damping"
    assert q.tau_qsl(balanced).ratio == pytest.approx(1.0, abs=1e-3)

    lopsided = q.amplitude_damping_trajectory([0.2, 0.7, 0.1], 1.0, gamma=1.0)
    assert q.tau_qsl(lopsided).ratio <= 0.999

    with pytest.raises(ValueError):
        q.amplitude_damping_trajectory([0.5, 0.5], 1.0)
    with pytest.raises(ValueError):
        q.amplitude_damping_trajectory([0.5, 0.5], 1.0, gamma=1.0, cutoff=1.0, ohmicity=4.0)


def test_ohmic_rate_changes_sign_where_feedback_starts():
    assert q.ohmic_decay_rate(1.0, 4.0, 0.5) > 0.0
    assert abs(q.ohmic_decay_rate(1.0, 4.0, 1.0)) <= 1e-9
    assert q.ohmic_decay_rate(1.0, 4.0, 1.5) < 0.0
    traj = q.amplitude_damping_trajectory(
        [1 / 3, 1 / 3, 1 / 3], 0.5, cutoff=1.0, ohmicity=4.0
    )
    assert q.tau_qsl(traj).ratio == pytest.approx(1.0, abs=1e-3)


def test_dephasing_keeps_the_diagonal_fixed():
    traj = q.dephasing_trajectory([1 / 3, 1 / 3, 1 / 3], [(0, 2, 1 / 3)], 1.0, 1.0)
    state = traj.state(0.7)
    np.testing.assert_allclose(
        np.diag(state.matrix()), [1 / 3, 1 / 3, 1 / 3], atol=1e-12
    )
    assert abs(state.matrix()[0, 2]) == pytest.approx(math.exp(-0.7) / 3, abs=1e-12)
    report = q.tau_alpha(traj, traj.state(0.0).purity)
    assert 0.9 < report.ratio <= 1.0 + 2e-3


def test_frames_track_the_evolution():
    h = q.HermitianOperator.diagonal([0.0, 1.0])
    rho0 = q.DensityMatrix(np.array([[0.7, 0.2], [0.2, 0.3]], dtype=complex))
    traj = q.unitary_trajectory(h, rho0, 1.0)
    frames = q.track_frame(traj, 9)
    assert len(frames) == 9
    assert all(f.dim == 2 for f in frames)
    u = q.propagator(h, 0.5)
    mid = q.conjugate_state(u, rho0)
    np.testing.assert_allclose(mid.matrix(), traj.state(0.5).matrix(), atol=1e-12)


def test_eigendecomposition_and_fourier_frame():
    h = q.HermitianOperator(np.array([[1.0, 2.0], [2.0, 1.0]], dtype=complex))
    values, vectors = q.eig_hermitian(h)
    np.testing.assert_allclose(values, [-1.0, 3.0], atol=1e-12)
    v = vectors.matrix()
    np.testing.assert_allclose(v @ np.diag(values) @ v.conj().T, h.matrix(), atol=1e-12)
    f = q.fourier_unitary(2).matrix()
    np.testing.assert_allclose(f, np.array([[1, 1], [1, -1]]) / math.sqrt(2), atol=1e-12)


def test_self_checks_pass_and_render_stable_lines():
    reports = q.axiom_suite(samples=10, seed=7, dims=[2, 3])
    assert len(reports) == 12
    assert all(r.passed for r in reports)
    assert all(r.offending_seed is None for r in reports)
    lines = [repr(r) for r in reports]
    assert all(" pass=1 " in line for line in lines)
    again = [repr(r) for r in q.axiom_suite(samples=10, seed=7, dims=[2, 3])]
    assert lines == again

    crosschecks = q.supplement_crosscheck()
    assert all(r.passed for r in crosschecks)
    names = {r.name for r in crosschecks}
    assert "crosscheck.fourier_convention_distance" in names
