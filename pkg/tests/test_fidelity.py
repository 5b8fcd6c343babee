import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gatefid.channels import (
    channel_from_kraus,
    choi_from_kraus,
    depolarizing,
    identity_channel,
    random_channel,
    reduce_to_lambda,
    unitary_channel,
)
from gatefid.fidelity import (
    CONCENTRATION_C,
    LIPSCHITZ_CONSTANT,
    average_gate_fidelity,
    depolarizing_gate_fidelity,
    gate_fidelity_batch,
    gate_fidelity_pure,
    l2_distance_to_depolarizing,
    phase_min_distance,
    state_fidelity,
    variance_bounds,
)
from gatefid.linalg import partial_transpose, tensor
from gatefid.sampling import haar_states, mc_fidelity_stats

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


def _rand_state(rng, d):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def _rand_density(rng, d, rank=None):
    rank = rank or d
    m = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = m @ m.conj().T
    return rho / np.trace(rho).real


def _haar_unitary(rng, d):
    raw = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(raw)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


class TestStateFidelity:
    def test_self_fidelity(self):
        rng = np.random.default_rng(60)
        for d in (2, 3, 4):
            rho = _rand_density(rng, d)
            assert abs(state_fidelity(rho, rho) - 1.0) < 1e-10

    def test_orthogonal_pure_states(self):
        zero = np.diag([1.0, 0.0]).astype(complex)
        one = np.diag([0.0, 1.0]).astype(complex)
        assert state_fidelity(zero, one) < 1e-12

    def test_pure_vs_mixed_collapses_to_overlap(self):
        # when one argument is pure, F = <phi| sigma |phi>; square roots of
        # the projector's zero eigenvalues set the achievable precision
        rng = np.random.default_rng(61)
        for _ in range(10):
            phi = _rand_state(rng, 3)
            sigma = _rand_density(rng, 3)
            expected = float((phi.conj() @ sigma @ phi).real)
            got = state_fidelity(np.outer(phi, phi.conj()), sigma)
            assert abs(got - expected) < 1e-7

    def test_symmetric(self):
        rng = np.random.default_rng(62)
        rho = _rand_density(rng, 3)
        sigma = _rand_density(rng, 3)
        assert abs(state_fidelity(rho, sigma) - state_fidelity(sigma, rho)) < 1e-10

    def test_unitary_invariance(self):
        rng = np.random.default_rng(63)
        rho = _rand_density(rng, 3)
        sigma = _rand_density(rng, 3)
        u = _haar_unitary(rng, 3)
        before = state_fidelity(rho, sigma)
        after = state_fidelity(u @ rho @ u.conj().T, u @ sigma @ u.conj().T)
        assert abs(before - after) < 1e-10

    def test_rejects_non_states(self):
        with pytest.raises(ValueError):
            state_fidelity(2.0 * np.eye(2), np.eye(2) / 2.0)
        skew = np.array([[0.5, 0.5], [0.0, 0.5]])
        with pytest.raises(ValueError):
            state_fidelity(skew, np.eye(2) / 2.0)
        with pytest.raises(ValueError):
            state_fidelity(np.diag([1.5, -0.5]), np.eye(2) / 2.0)
        with pytest.raises(ValueError):
            state_fidelity(np.eye(2) / 2.0, np.eye(3) / 3.0)


class TestGateFidelityPointwise:
    def test_unitary_channel_is_perfect(self):
        rng = np.random.default_rng(64)
        u = _haar_unitary(rng, 3)
        ch = unitary_channel(u)
        for _ in range(10):
            phi = _rand_state(rng, 3)
            assert abs(gate_fidelity_pure(ch, u, phi) - 1.0) < 1e-12

    def test_depolarizing_is_constant(self):
        rng = np.random.default_rng(65)
        for p, d in ((0.3, 2), (0.7, 3), (0.9, 4)):
            ch = depolarizing(p, d)
            expected = p + (1.0 - p) / d
            phis = np.stack([_rand_state(rng, d) for _ in range(100)])
            values = gate_fidelity_batch(ch, None, phis)
            assert np.max(np.abs(values - expected)) < 1e-12

    def test_bit_flip_on_basis_state(self):
        ch = unitary_channel(PAULI_X)
        assert gate_fidelity_pure(ch, None, np.array([1.0, 0.0])) < 1e-15
        plus = np.array([1.0, 1.0]) / np.sqrt(2.0)
        assert abs(gate_fidelity_pure(ch, None, plus) - 1.0) < 1e-12

    @given(st.floats(0.0, 2.0 * np.pi), st.integers(0, 10**6))
    @settings(max_examples=25, deadline=None)
    def test_global_phase_invariance(self, theta, seed):
        rng = np.random.default_rng(seed)
        ch = random_channel(2, 2, rng=seed)
        phi = _rand_state(rng, 2)
        a = gate_fidelity_pure(ch, None, phi)
        b = gate_fidelity_pure(ch, None, np.exp(1j * theta) * phi)
        assert abs(a - b) < 1e-12

    def test_matches_state_fidelity_for_unitary_target(self):
        rng = np.random.default_rng(66)
        ch = random_channel(3, 2, rng=67)
        u = _haar_unitary(rng, 3)
        for _ in range(10):
            phi = _rand_state(rng, 3)
            rho = np.outer(phi, phi.conj())
            target = u @ rho @ u.conj().T
            from gatefid.channels import apply_channel

            expected = state_fidelity(target, apply_channel(ch, rho))
            got = gate_fidelity_pure(ch, u, phi)
            # the Uhlmann evaluation of the pure target is the noisy side
            assert abs(got - expected) < 1e-6

    def test_folding_the_target_preserves_values(self):
        rng = np.random.default_rng(68)
        ch = random_channel(3, 3, rng=69)
        u = _haar_unitary(rng, 3)
        lam = reduce_to_lambda(ch, u)
        phis = np.stack([_rand_state(rng, 3) for _ in range(50)])
        direct = gate_fidelity_batch(ch, u, phis)
        folded = gate_fidelity_batch(lam, None, phis)
        assert np.max(np.abs(direct - folded)) < 1e-12

    def test_choi_bilinear_identity(self):
        # F(phi) = tr[ PT(J) (phi phi^dag (x) phi phi^dag) ] with the partial
        # transpose on the second (input) factor of the Choi matrix
        rng = np.random.default_rng(70)
        ch = random_channel(3, 4, rng=71)
        j = choi_from_kraus(ch).matrix
        pt = partial_transpose(j, 3, 3, factor="second")
        for _ in range(10):
            phi = _rand_state(rng, 3)
            proj = np.outer(phi, phi.conj())
            expected = float(np.trace(pt @ tensor(proj, proj)).real)
            assert abs(gate_fidelity_pure(ch, None, phi) - expected) < 1e-10

    def test_batch_matches_loop(self):
        rng = np.random.default_rng(72)
        ch = random_channel(2, 3, rng=73)
        phis = np.stack([_rand_state(rng, 2) for _ in range(20)])
        batch = gate_fidelity_batch(ch, None, phis)
        single = [gate_fidelity_pure(ch, None, phi) for phi in phis]
        assert np.max(np.abs(batch - np.array(single))) < 1e-14

    def test_shape_guards(self):
        ch = depolarizing(0.5, 2)
        with pytest.raises(ValueError):
            gate_fidelity_pure(ch, None, np.array([1.0, 0.0, 0.0]))
        with pytest.raises(ValueError):
            gate_fidelity_pure(ch, np.eye(3), np.array([1.0, 0.0]))
        tall = channel_from_kraus((np.zeros((3, 2)),))
        with pytest.raises(ValueError):
            gate_fidelity_pure(tall, None, np.array([1.0, 0.0]))


class TestAverageGateFidelity:
    def test_unitary_is_one(self):
        rng = np.random.default_rng(74)
        u = _haar_unitary(rng, 4)
        assert abs(average_gate_fidelity(unitary_channel(u), u) - 1.0) < 1e-12

    def test_depolarizing_closed_form(self):
        for p, d in ((0.9, 2), (0.5, 3), (0.2, 4)):
            got = average_gate_fidelity(depolarizing(p, d))
            assert abs(got - (p + (1.0 - p) / d)) < 1e-12

    def test_bit_flip_value(self):
        # single Kraus X, trace 0: average is (0 + 2) / (4 + 2) = 1/3
        got = average_gate_fidelity(unitary_channel(PAULI_X))
        assert abs(got - 1.0 / 3.0) < 1e-15

    def test_agrees_with_monte_carlo(self):
        ch = random_channel(3, 2, rng=75)
        closed = average_gate_fidelity(ch)
        stats = mc_fidelity_stats(ch, None, 100_000, rng=76)
        assert abs(stats.mean - closed) <= 3.0 * stats.stderr + 1e-12

    def test_gauge_invariance(self):
        # mixing the Kraus family must not move the average
        rng = np.random.default_rng(77)
        ch = random_channel(3, 3, rng=78)
        raw = np.random.default_rng(79).standard_normal((3, 3)) + 1j * np.random.default_rng(
            80
        ).standard_normal((3, 3))
        w, _ = np.linalg.qr(raw)
        stacked = np.stack(ch.kraus)
        mixed = channel_from_kraus(tuple(np.einsum("ij,jkl->ikl", w, stacked)))
        assert abs(average_gate_fidelity(ch) - average_gate_fidelity(mixed)) < 1e-12

    def test_depolarizing_helper_validates(self):
        assert abs(depolarizing_gate_fidelity(0.9, 2) - 0.95) < 1e-15
        assert depolarizing_gate_fidelity(1.0, 7) == 1.0
        assert abs(depolarizing_gate_fidelity(0.0, 4) - 0.25) < 1e-15
        with pytest.raises(ValueError):
            depolarizing_gate_fidelity(-0.2, 2)
        with pytest.raises(ValueError):
            depolarizing_gate_fidelity(0.5, 1)


class TestVarianceBounds:
    def test_exact_value_at_d4(self):
        bounds = variance_bounds(4)
        assert abs(bounds.variance_bound_exact - 784.0 / 925.0) < 1e-15

    def test_exact_formula_small_d(self):
        got = variance_bounds(2).variance_bound_exact
        expected = (8 * 8 + 16 * 4 + 8) / ((4 + 4 + 1) * (4 + 10 + 1))
        assert abs(got - expected) < 1e-15

    def test_concentration_fifty_qubits(self):
        bounds = variance_bounds(2**50)
        assert abs(bounds.variance_bound_concentration - 1.1e-10) <= 0.1 * 1.1e-10

    def test_bounds_positive_and_exact_decreasing(self):
        dims = [2, 3, 4, 8, 64, 1024, 2**20, 2**40]
        values = [variance_bounds(d) for d in dims]
        exact = [b.variance_bound_exact for b in values]
        conc = [b.variance_bound_concentration for b in values]
        assert all(v > 0 for v in exact)
        assert all(v > 0 for v in conc)
        assert all(a > b for a, b in zip(exact, exact[1:]))
        # the capped concentration bound plateaus at 1/4 before decreasing
        assert all(a >= b for a, b in zip(conc, conc[1:]))
        assert conc[-1] < conc[0]

    def test_concentration_cap(self):
        assert variance_bounds(2).variance_bound_concentration == 0.25
        assert variance_bounds(2**30).variance_bound_concentration < 0.25

    def test_carries_constant(self):
        assert variance_bounds(8).C == CONCENTRATION_C

    def test_exact_bound_dominates_variance(self):
        # sampled variance of any channel stays below the exact bound
        for seed, d in ((81, 2), (82, 3), (83, 4)):
            ch = random_channel(d, 2, rng=seed)
            stats = mc_fidelity_stats(ch, None, 20_000, rng=seed + 100)
            limit = variance_bounds(d).variance_bound_exact
            assert stats.variance <= limit

    def test_rejects_small_dimension(self):
        with pytest.raises(ValueError):
            variance_bounds(1)


class TestDistanceHelpers:
    def test_depolarizing_distance_is_zero(self):
        ch = depolarizing(0.6, 2)
        stats = mc_fidelity_stats(ch, None, 5000, rng=84)
        assert l2_distance_to_depolarizing(ch, stats) < 1e-12

    def test_matches_sample_std(self):
        ch = unitary_channel(PAULI_X)
        stats = mc_fidelity_stats(ch, None, 5000, rng=85)
        got = l2_distance_to_depolarizing(ch, stats)
        assert abs(got - np.sqrt(stats.variance)) < 1e-15
        assert got > 0.1  # the bit flip has genuinely spread fidelity

    def test_phase_min_distance_range(self):
        rng = np.random.default_rng(86)
        phis = np.stack([_rand_state(rng, 3) for _ in range(50)])
        psis = np.stack([_rand_state(rng, 3) for _ in range(50)])
        dist = phase_min_distance(phis, psis)
        assert np.all(dist >= 0.0)
        assert np.all(dist <= np.sqrt(2.0) + 1e-12)

    def test_phase_min_distance_zero_up_to_phase(self):
        rng = np.random.default_rng(87)
        phi = _rand_state(rng, 4)
        assert phase_min_distance(phi, phi) < 1e-7
        assert phase_min_distance(phi, np.exp(0.7j) * phi) < 1e-7

    def test_phase_min_distance_orthogonal(self):
        e0 = np.array([1.0, 0.0])
        e1 = np.array([0.0, 1.0])
        assert abs(phase_min_distance(e0, e1) - np.sqrt(2.0)) < 1e-12

    def test_beats_naive_distance(self):
        rng = np.random.default_rng(88)
        phi = _rand_state(rng, 3)
        psi = _rand_state(rng, 3)
        naive = np.linalg.norm(phi - psi)
        assert phase_min_distance(phi, psi) <= naive + 1e-12

    def test_lipschitz_constant_value(self):
        assert abs(LIPSCHITZ_CONSTANT - 3.0 * np.sqrt(2.0)) < 1e-15
