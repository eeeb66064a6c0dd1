"""N-qubit Pauli Hamiltonian for always-on sigma_z sigma_z coupling.

The two-level reduction of the coupled-SQUID system is

    H/h = sum_i [ -(delta_i/2) sigma_x_i - (epsilon_i/2) sigma_z_i ]
          + sum_{i>j} J_ij sigma_z_i sigma_z_j

with delta, epsilon in GHz and couplings stored in MHz.  Qubit 0 is the most
significant bit of the computational basis index, and spin-up is the |0>
state (sigma_z eigenvalue +1).  Dense operators only; the hard cap keeps the
module a desk-scale verification tool.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "MAX_DENSE_QUBITS",
    "SpinHamiltonianSpec",
    "DenseOperator",
    "build_hamiltonian",
    "bus_all_to_all",
    "linear_chain_encoded",
    "interaction_only",
    "inter_pair_interaction",
    "coupling_diagonal",
    "z_signs",
]

MAX_DENSE_QUBITS = 14

_SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


@dataclass(frozen=True)
class SpinHamiltonianSpec:
    """Per-qubit splittings plus a symmetric coupling matrix.

    ``delta_ghz`` and ``epsilon_ghz`` are per-qubit arrays (GHz);
    ``coupling_mhz`` is symmetric with zero diagonal (MHz).
    """

    n_qubits: int
    delta_ghz: np.ndarray
    epsilon_ghz: np.ndarray
    coupling_mhz: np.ndarray
    topology: str = "custom"

    def __post_init__(self):
        if self.n_qubits < 0 or self.n_qubits > MAX_DENSE_QUBITS:
            raise ValueError(f"n_qubits must lie in [0, {MAX_DENSE_QUBITS}] for dense simulation")
        object.__setattr__(self, "delta_ghz", np.asarray(self.delta_ghz, dtype=float))
        object.__setattr__(self, "epsilon_ghz", np.asarray(self.epsilon_ghz, dtype=float))
        object.__setattr__(self, "coupling_mhz", np.asarray(self.coupling_mhz, dtype=float))
        n = self.n_qubits
        if self.delta_ghz.shape != (n,) or self.epsilon_ghz.shape != (n,):
            raise ValueError("delta and epsilon must be length-N arrays")
        if self.coupling_mhz.shape != (n, n):
            raise ValueError("coupling matrix must be N x N")
        scale = max(float(np.max(np.abs(self.coupling_mhz)) if n else 0.0), 1.0)
        if n and float(np.max(np.abs(self.coupling_mhz - self.coupling_mhz.T))) > 1e-12 * scale:
            raise ValueError("coupling matrix must be symmetric")
        if n and float(np.max(np.abs(np.diag(self.coupling_mhz)))) != 0.0:
            raise ValueError("coupling matrix must have zero diagonal")
        if self.topology not in ("bus_all_to_all", "linear_chain_encoded", "custom"):
            raise ValueError(f"unknown topology tag {self.topology!r}")

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    def with_overrides(self, delta_ghz=None, epsilon_ghz=None) -> "SpinHamiltonianSpec":
        """Copy with replaced drive values; the coupling never changes."""
        return replace(
            self,
            delta_ghz=self.delta_ghz if delta_ghz is None else np.asarray(delta_ghz, dtype=float),
            epsilon_ghz=self.epsilon_ghz if epsilon_ghz is None else np.asarray(epsilon_ghz, dtype=float),
        )


@dataclass(frozen=True)
class DenseOperator:
    """Dense 2^N x 2^N operator with an optional hermiticity guarantee."""

    matrix: np.ndarray
    hermitian: bool = True

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("operator must be a square matrix")
        if self.hermitian:
            scale = max(float(np.max(np.abs(m))), 1.0)
            if float(np.max(np.abs(m - m.conj().T))) > 1e-12 * scale:
                raise ValueError("operator flagged hermitian is not")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def z_signs(n_qubits: int, qubit: int) -> np.ndarray:
    """sigma_z eigenvalues (+-1) of one qubit over the 2^N basis states."""
    idx = np.arange(2**n_qubits)
    bits = (idx >> (n_qubits - 1 - qubit)) & 1
    return 1.0 - 2.0 * bits


def coupling_diagonal(spec: SpinHamiltonianSpec, pairs=None, inter_pair_only: bool = False) -> np.ndarray:
    """Diagonal (GHz) of the sigma_z sigma_z coupling terms over the basis.

    With ``inter_pair_only`` the terms internal to each (a, b) pair of
    ``pairs`` are dropped, leaving the operator whose kernel is the code
    space.
    """
    n = spec.n_qubits
    diag = np.zeros(spec.dim)
    pair_of = {}
    if pairs is not None:
        for p, (a, b) in enumerate(pairs):
            pair_of[a] = p
            pair_of[b] = p
    z = [z_signs(n, q) for q in range(n)]
    for i in range(n):
        for j in range(i):
            j_ghz = spec.coupling_mhz[i, j] * 1e-3
            if j_ghz == 0.0:
                continue
            if inter_pair_only and pair_of.get(i, i) == pair_of.get(j, -1):
                continue
            diag += j_ghz * z[i] * z[j]
    return diag


def _sigma_x_term(n_qubits: int, qubit: int) -> np.ndarray:
    op = np.eye(1, dtype=complex)
    for q in range(n_qubits):
        op = np.kron(op, _SIGMA_X if q == qubit else np.eye(2, dtype=complex))
    return op


def build_hamiltonian(spec: SpinHamiltonianSpec) -> DenseOperator:
    """Assemble the dense Hamiltonian H/h in GHz."""
    h = np.zeros((spec.dim, spec.dim), dtype=complex)
    diag = coupling_diagonal(spec)
    for q in range(spec.n_qubits):
        diag -= 0.5 * spec.epsilon_ghz[q] * z_signs(spec.n_qubits, q)
    np.fill_diagonal(h, diag)
    for q in range(spec.n_qubits):
        if spec.delta_ghz[q] != 0.0:
            h -= 0.5 * spec.delta_ghz[q] * _sigma_x_term(spec.n_qubits, q)
    return DenseOperator(h, hermitian=True)


def bus_all_to_all(n: int, j_mhz: float) -> SpinHamiltonianSpec:
    """All-to-all coupling with one common strength: every qubit talks to the
    bus with the same mutual inductance, so every pair shares the same J."""
    if n < 2:
        raise ValueError("bus coupling needs at least 2 qubits")
    coupling = j_mhz * (np.ones((n, n)) - np.eye(n))
    return SpinHamiltonianSpec(
        n_qubits=n,
        delta_ghz=np.zeros(n),
        epsilon_ghz=np.zeros(n),
        coupling_mhz=coupling,
        topology="bus_all_to_all",
    )


def linear_chain_encoded(n_logical: int, j_q_mhz: float, j_prime_mhz: float) -> SpinHamiltonianSpec:
    """Linear chain of encoded pairs: qubits (2k, 2k+1) form logical qubit k
    with intra-pair coupling J_Q; all four cross links between adjacent pairs
    carry J'."""
    if n_logical < 1:
        raise ValueError("need at least one encoded pair")
    n = 2 * n_logical
    coupling = np.zeros((n, n))
    for k in range(n_logical):
        a, b = 2 * k, 2 * k + 1
        coupling[a, b] = coupling[b, a] = j_q_mhz
        if k + 1 < n_logical:
            for u in (a, b):
                for v in (a + 2, b + 2):
                    coupling[u, v] = coupling[v, u] = j_prime_mhz
    return SpinHamiltonianSpec(
        n_qubits=n,
        delta_ghz=np.zeros(n),
        epsilon_ghz=np.zeros(n),
        coupling_mhz=coupling,
        topology="linear_chain_encoded",
    )


def interaction_only(spec: SpinHamiltonianSpec) -> DenseOperator:
    """Coupling terms only (all drives off); diagonal in the z basis."""
    return DenseOperator(np.diag(coupling_diagonal(spec)).astype(complex), hermitian=True)


def inter_pair_interaction(spec: SpinHamiltonianSpec, pairs) -> DenseOperator:
    """Coupling terms between qubits of different pairs only.

    On the code space spanned by per-pair {up-down, down-up} states this
    operator is identically zero: each pair's collective sigma_z annihilates
    the code words, which is what makes the encoding interaction free.
    """
    return DenseOperator(
        np.diag(coupling_diagonal(spec, pairs=pairs, inter_pair_only=True)).astype(complex),
        hermitian=True,
    )
