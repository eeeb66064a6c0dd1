"""Dense spin Hamiltonian assembly and coupling topologies."""

import numpy as np
import pytest

from fluxbus.spin import (
    MAX_DENSE_QUBITS,
    DenseOperator,
    SpinHamiltonianSpec,
    build_hamiltonian,
    bus_all_to_all,
    coupling_diagonal,
    inter_pair_interaction,
    interaction_only,
    linear_chain_encoded,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
ID = np.eye(2, dtype=complex)


def kron_chain(ops):
    out = np.eye(1, dtype=complex)
    for op in ops:
        out = np.kron(out, op)
    return out


def brute_force_hamiltonian(spec: SpinHamiltonianSpec) -> np.ndarray:
    """Independent oracle: assemble every term as an explicit Kronecker product."""
    n = spec.n_qubits
    h = np.zeros((2**n, 2**n), dtype=complex)
    for q in range(n):
        ops = [ID] * n
        ops[q] = SX
        h -= 0.5 * spec.delta_ghz[q] * kron_chain(ops)
        ops[q] = SZ
        h -= 0.5 * spec.epsilon_ghz[q] * kron_chain(ops)
    for i in range(n):
        for j in range(i):
            ops = [ID] * n
            ops[i] = SZ
            ops[j] = SZ
            h += spec.coupling_mhz[i, j] * 1e-3 * kron_chain(ops)
    return h


def spec_with(n, delta=None, epsilon=None, coupling=None):
    return SpinHamiltonianSpec(
        n_qubits=n,
        delta_ghz=np.zeros(n) if delta is None else np.asarray(delta, float),
        epsilon_ghz=np.zeros(n) if epsilon is None else np.asarray(epsilon, float),
        coupling_mhz=np.zeros((n, n)) if coupling is None else np.asarray(coupling, float),
    )


class TestBuildHamiltonian:
    def test_single_qubit_tunneling(self):
        spec = spec_with(1, delta=[1.0])
        h = build_hamiltonian(spec).matrix
        evals = np.linalg.eigvalsh(h)
        assert evals == pytest.approx([-0.5, 0.5], abs=1e-14)

    def test_two_qubit_ising_pattern(self):
        # J = 25 MHz on basis order (uu, ud, du, dd): diag(+J, -J, -J, +J).
        spec = spec_with(2, coupling=[[0.0, 25.0], [25.0, 0.0]])
        h = build_hamiltonian(spec).matrix
        j = 0.025
        assert np.allclose(h, np.diag([j, -j, -j, j]), atol=1e-15)

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_matches_brute_force_kron_oracle(self, n):
        rng = np.random.default_rng(n)
        coupling = rng.normal(scale=30.0, size=(n, n))
        coupling = np.triu(coupling, 1)
        coupling = coupling + coupling.T
        spec = spec_with(n, delta=rng.normal(size=n), epsilon=rng.normal(size=n), coupling=coupling)
        h = build_hamiltonian(spec).matrix
        assert np.max(np.abs(h - brute_force_hamiltonian(spec))) < 1e-12

    def test_design_parameters_four_qubits(self):
        spec = bus_all_to_all(4, 25.0).with_overrides(
            delta_ghz=np.full(4, 2.6), epsilon_ghz=np.full(4, 2.7)
        )
        h = build_hamiltonian(spec).matrix
        oracle = brute_force_hamiltonian(spec)
        assert np.max(np.abs(h - oracle)) < 1e-12
        assert np.allclose(
            np.linalg.eigvalsh(h), np.linalg.eigvalsh(oracle), atol=1e-12
        )

    def test_hermiticity(self):
        rng = np.random.default_rng(31)
        coupling = rng.normal(scale=10.0, size=(3, 3))
        coupling = np.triu(coupling, 1)
        spec = spec_with(3, delta=rng.normal(size=3), coupling=coupling + coupling.T)
        op = build_hamiltonian(spec)
        assert op.hermitian
        assert np.max(np.abs(op.matrix - op.matrix.conj().T)) < 1e-12

    def test_size_cap(self):
        with pytest.raises(ValueError):
            spec_with(MAX_DENSE_QUBITS + 1)

    def test_invalid_coupling_rejected(self):
        with pytest.raises(ValueError):
            spec_with(2, coupling=[[0.0, 1.0], [2.0, 0.0]])
        with pytest.raises(ValueError):
            spec_with(2, coupling=[[1.0, 0.0], [0.0, 1.0]])

    def test_permutation_symmetry_of_all_to_all_spectrum(self):
        spec = bus_all_to_all(4, 25.0).with_overrides(
            delta_ghz=np.full(4, 1.3), epsilon_ghz=np.full(4, 0.7)
        )
        evals = np.linalg.eigvalsh(build_hamiltonian(spec).matrix)
        # relabeling qubits permutes the basis; the all-equal couplings keep
        # the spectrum fixed
        perm = [2, 0, 3, 1]
        spec2 = spec_with(
            4,
            delta=spec.delta_ghz[perm],
            epsilon=spec.epsilon_ghz[perm],
            coupling=spec.coupling_mhz[np.ix_(perm, perm)],
        )
        evals2 = np.linalg.eigvalsh(build_hamiltonian(spec2).matrix)
        assert np.allclose(evals, evals2, atol=1e-12)


class TestTopologies:
    def test_bus_all_to_all_is_complete_graph(self):
        spec = bus_all_to_all(4, 25.0)
        off = spec.coupling_mhz[np.triu_indices(4, 1)]
        assert off.shape == (6,)
        assert np.all(off == 25.0)
        assert spec.topology == "bus_all_to_all"

    def test_chain_of_two_pairs_structure(self):
        spec = linear_chain_encoded(2, 40.0, 25.0)
        c = spec.coupling_mhz
        assert c[0, 1] == 40.0 and c[2, 3] == 40.0  # intra-pair
        cross = [(0, 2), (0, 3), (1, 2), (1, 3)]
        assert all(c[i, j] == 25.0 for i, j in cross)
        assert np.count_nonzero(np.triu(c, 1)) == 6
        assert spec.topology == "linear_chain_encoded"

    def test_chain_of_one_pair_matches_two_qubit_bus(self):
        chain = linear_chain_encoded(1, 25.0, 0.0)
        bus = bus_all_to_all(2, 25.0)
        assert np.array_equal(chain.coupling_mhz, bus.coupling_mhz)

    def test_chain_cross_links_do_not_span_pairs(self):
        spec = linear_chain_encoded(3, 40.0, 25.0)
        assert spec.coupling_mhz[0, 4] == 0.0  # pairs 0 and 2 are not adjacent
        assert spec.coupling_mhz[1, 5] == 0.0

    def test_invalid_sizes(self):
        with pytest.raises(ValueError):
            bus_all_to_all(1, 25.0)
        with pytest.raises(ValueError):
            linear_chain_encoded(0, 25.0, 25.0)


class TestInteractionOnly:
    def test_zero_coupling_gives_zero_operator(self):
        op = interaction_only(spec_with(3))
        assert np.max(np.abs(op.matrix)) == 0.0

    def test_drops_drive_terms(self):
        spec = bus_all_to_all(3, 25.0).with_overrides(
            delta_ghz=np.full(3, 2.6), epsilon_ghz=np.full(3, 2.7)
        )
        op = interaction_only(spec).matrix
        oracle = brute_force_hamiltonian(
            spec_with(3, coupling=spec.coupling_mhz)
        )
        assert np.max(np.abs(op - oracle)) < 1e-15

    def test_inter_pair_annihilates_code_states(self):
        spec = bus_all_to_all(4, 25.0)
        pairs = ((0, 1), (2, 3))
        op = inter_pair_interaction(spec, pairs).matrix
        # code words: each pair in 01 or 10
        for pair0 in (0b01, 0b10):
            for pair1 in (0b01, 0b10):
                idx = (pair0 << 2) | pair1
                vec = np.zeros(16)
                vec[idx] = 1.0
                assert np.max(np.abs(op @ vec)) == 0.0

    def test_inter_pair_excludes_intra_terms(self):
        spec = bus_all_to_all(4, 25.0)
        pairs = ((0, 1), (2, 3))
        inter = coupling_diagonal(spec, pairs=pairs, inter_pair_only=True)
        full = coupling_diagonal(spec)
        intra = full - inter
        # intra part: two ZZ terms, J (z0 z1 + z2 z3)
        z = lambda q, idx: 1.0 - 2.0 * ((idx >> (3 - q)) & 1)
        for idx in range(16):
            expected = 0.025 * (z(0, idx) * z(1, idx) + z(2, idx) * z(3, idx))
            assert intra[idx] == pytest.approx(expected, abs=1e-15)

    def test_code_states_degenerate_under_full_coupling(self):
        # Every all-pairs-encoded state is an eigenstate with eigenvalue -P*J.
        spec = bus_all_to_all(6, 25.0)
        diag = coupling_diagonal(spec)
        for word in ((0b01, 0b01, 0b01), (0b01, 0b10, 0b01), (0b10, 0b10, 0b10)):
            idx = (word[0] << 4) | (word[1] << 2) | word[2]
            assert diag[idx] == pytest.approx(-3 * 0.025, abs=1e-15)


class TestDenseOperator:
    def test_hermitian_flag_enforced(self):
        with pytest.raises(ValueError):
            DenseOperator(np.array([[0.0, 1.0], [0.0, 0.0]]), hermitian=True)

    def test_non_hermitian_allowed_when_unflagged(self):
        op = DenseOperator(np.array([[0.0, 1.0], [0.0, 0.0]]), hermitian=False)
        assert op.dim == 2
