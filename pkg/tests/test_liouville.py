import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ifkernels.errors import DimMismatchError, ValidationError
from ifkernels.liouville import (
    FBIndex,
    SystemSpec,
    TimeGrid,
    apply_map,
    fb_pairs,
    fb_propagator,
    liou_norm,
)

from _oracles import expm_series

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)


def random_hermitian(n, rng):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (a + a.conj().T)


def random_density(n, rng):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


class TestSystemSpec:
    def test_rejects_non_hermitian(self):
        with pytest.raises(ValidationError, match="Hermitian"):
            SystemSpec(np.array([[0, 1], [0, 0]], dtype=complex), (1.0, -1.0))

    def test_rejects_wrong_coupling_count(self):
        with pytest.raises(ValidationError):
            SystemSpec(0.5 * PAULI_X, (1.0,))

    def test_rejects_single_state(self):
        with pytest.raises(ValidationError):
            SystemSpec(np.zeros((1, 1), dtype=complex), (1.0,))


class TestTimeGrid:
    def test_rejects_bad_rmax(self):
        with pytest.raises(ValidationError):
            TimeGrid(0.1, 4, 5)
        with pytest.raises(ValidationError):
            TimeGrid(0.1, 4, 0)
        with pytest.raises(ValidationError):
            TimeGrid(-0.1, 4, 2)


@given(st.integers(2, 5), st.integers(0, 24))
def test_fb_index_round_trip(n, flat):
    flat = flat % (n * n)
    idx = FBIndex.from_flat(flat, n)
    assert idx.flat == flat
    assert FBIndex(idx.forward, idx.backward, n).flat == flat


def test_fb_pairs_order():
    pairs = fb_pairs(2)
    assert [(p.forward, p.backward) for p in pairs] == [(0, 0), (0, 1), (1, 0), (1, 1)]


class TestPropagator:
    def test_zero_time_is_identity(self, sys2):
        assert liou_norm(fb_propagator(sys2, 0.0) - np.eye(4)) < 1e-14

    def test_zero_hamiltonian_is_identity(self):
        sys0 = SystemSpec(np.zeros((2, 2), dtype=complex), (1.0, -1.0))
        assert liou_norm(fb_propagator(sys0, 0.1) - np.eye(4)) < 1e-14

    def test_pauli_x_pi_swaps_populations(self):
        # H = (1/2) pauli_x, tau = pi: |0><0| maps onto |1><1| with unit weight
        sys_ = SystemSpec(0.5 * PAULI_X, (1.0, -1.0))
        g = fb_propagator(sys_, np.pi)
        assert abs(abs(g[3, 0]) - 1.0) < 1e-12
        rho = apply_map(g, np.array([[1, 0], [0, 0]], dtype=complex))
        assert abs(rho[1, 1] - 1.0) < 1e-12
        assert abs(rho[0, 0]) < 1e-12

    def test_matches_series_oracle(self, sys2):
        u = expm_series(np.asarray(sys2.hamiltonian), 0.7)
        g = fb_propagator(sys2, 0.7)
        assert liou_norm(g - np.kron(u, u.conj())) < 1e-13

    def test_unitary(self, sys2):
        g = fb_propagator(sys2, 0.3)
        assert liou_norm(g @ g.conj().T - np.eye(4)) < 1e-12

    def test_composition(self, sys2):
        g1 = fb_propagator(sys2, 0.3)
        g2 = fb_propagator(sys2, 0.45)
        g12 = fb_propagator(sys2, 0.75)
        assert liou_norm(g1 @ g2 - g12) < 1e-12

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 10**6), st.floats(0.0, 3.0))
    def test_trace_and_hermiticity_preserved(self, seed, tau):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 4))
        sys_ = SystemSpec(random_hermitian(n, rng), tuple(rng.normal(size=n)))
        rho0 = random_density(n, rng)
        rho = apply_map(fb_propagator(sys_, tau), rho0)
        assert abs(np.trace(rho) - 1.0) < 1e-12
        assert np.max(np.abs(rho - rho.conj().T)) < 1e-12


class TestApplyMap:
    def test_identity(self, sys2):
        rho0 = np.array([[0.5, 0.2j], [-0.2j, 0.5]])
        assert liou_norm(apply_map(np.eye(4, dtype=complex), rho0) - rho0) < 1e-15

    def test_conjugation_oracle(self, sys2):
        rho0 = np.array([[0.7, 0.1 + 0.2j], [0.1 - 0.2j, 0.3]])
        u = expm_series(np.asarray(sys2.hamiltonian), 0.4)
        expected = u @ rho0 @ u.conj().T
        got = apply_map(fb_propagator(sys2, 0.4), rho0)
        assert liou_norm(got - expected) < 1e-13

    def test_zero_map(self):
        rho0 = np.array([[1, 0], [0, 0]], dtype=complex)
        assert liou_norm(apply_map(np.zeros((4, 4)), rho0)) == 0.0

    def test_dim_mismatch(self):
        with pytest.raises(DimMismatchError, match="dim_mismatch"):
            apply_map(np.eye(9), np.eye(2))


def test_liou_norm_values():
    assert liou_norm(np.zeros((4, 4))) == 0.0
    assert liou_norm(np.eye(4)) == 1.0
    m = np.zeros((4, 4), dtype=complex)
    m[2, 1] = 3 - 4j
    assert abs(liou_norm(m) - 5.0) < 1e-15
