"""Exact unitary evolution under piecewise-constant control.

Each pulse segment either holds the drive values constant for a duration
(physical mode: the propagator exp(-i 2 pi (H/h) t) is applied through a full
eigendecomposition, exact at machine precision) or applies a labeled unitary
exactly with the coupling suspended (ideal mode: the verification baseline
that separates protocol errors from always-on-coupling errors).

Ideal labels: ``("x_flip", q)``, ``("x_rot", q, angle)``, ``("z_rot", q,
angle)`` with rotations in the exp(-i angle/2 sigma) convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .spin import SpinHamiltonianSpec, build_hamiltonian

__all__ = [
    "QuantumState",
    "PulseSegment",
    "PulseSchedule",
    "ProcessFidelityResult",
    "evolve_segment",
    "run_schedule",
    "fidelity",
    "reduced_density_matrix",
    "trace_distance",
    "logical_process_fidelity",
]

_NORM_TOL = 1e-10

IDEAL_OPS = ("x_flip", "x_rot", "z_rot")


@dataclass(frozen=True)
class QuantumState:
    """Normalized 2^N complex amplitude vector; qubit 0 is the leading bit."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        object.__setattr__(self, "amplitudes", amp)
        dim = amp.shape[0]
        if amp.ndim != 1 or dim & (dim - 1):
            raise ValueError("amplitudes must be a length-2^N vector")
        if abs(np.linalg.norm(amp) - 1.0) > _NORM_TOL:
            raise ValueError(f"state norm {np.linalg.norm(amp):.12f} is not 1")

    @property
    def n_qubits(self) -> int:
        return self.amplitudes.shape[0].bit_length() - 1

    @classmethod
    def basis(cls, n_qubits: int, index) -> "QuantumState":
        """Computational basis state; ``index`` is an int or a 0/1 string."""
        if isinstance(index, str):
            index = int(index, 2) if index else 0
        amp = np.zeros(2**n_qubits, dtype=complex)
        amp[index] = 1.0
        return cls(amp)


@dataclass(frozen=True)
class PulseSegment:
    """One piecewise-constant control interval.

    Physical mode holds ``delta_ghz``/``epsilon_ghz`` (None keeps the base
    value) for ``duration_ns``.  Ideal mode instead applies ``ideal_op``
    exactly and takes no time.
    """

    duration_ns: float = 0.0
    delta_ghz: np.ndarray | None = None
    epsilon_ghz: np.ndarray | None = None
    mode: str = "physical"
    ideal_op: tuple | None = None

    def __post_init__(self):
        if self.duration_ns < 0:
            raise ValueError("duration must be non-negative")
        if self.mode not in ("physical", "ideal"):
            raise ValueError(f"unknown segment mode {self.mode!r}")
        if self.mode == "ideal":
            if self.ideal_op is None or self.ideal_op[0] not in IDEAL_OPS:
                raise ValueError("ideal segments need a labeled unitary")
            if self.duration_ns != 0.0 or self.delta_ghz is not None or self.epsilon_ghz is not None:
                raise ValueError("ideal segments are instantaneous and carry no drives")
        elif self.ideal_op is not None:
            raise ValueError("physical segments cannot carry a labeled unitary")
        for name in ("delta_ghz", "epsilon_ghz"):
            arr = getattr(self, name)
            if arr is not None:
                object.__setattr__(self, name, np.asarray(arr, dtype=float))


@dataclass(frozen=True)
class PulseSchedule:
    """Ordered control segments over a fixed coupled-qubit system."""

    segments: tuple
    base: SpinHamiltonianSpec

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        for seg in self.segments:
            for arr in (seg.delta_ghz, seg.epsilon_ghz):
                if arr is not None and arr.shape != (self.base.n_qubits,):
                    raise ValueError("segment override length must match the qubit count")

    @property
    def duration_ns(self) -> float:
        return sum(seg.duration_ns for seg in self.segments)


def evolve_segment(state: QuantumState, spec: SpinHamiltonianSpec, t_ns: float) -> QuantumState:
    """Apply exp(-i 2 pi (H/h) t) by eigendecomposition; norm-preserving."""
    h = build_hamiltonian(spec).matrix
    w, v = np.linalg.eigh(h)
    phases = np.exp(-2j * math.pi * w * t_ns)
    amp = v @ (phases * (v.conj().T @ state.amplitudes))
    return QuantumState(amp)


def _apply_ideal(state: QuantumState, op: tuple) -> QuantumState:
    n = state.n_qubits
    amp = state.amplitudes.reshape([2] * n)
    kind, q = op[0], op[1]
    if kind == "x_flip":
        amp = np.flip(amp, axis=q)
    elif kind == "x_rot":
        angle = op[2]
        c, s = math.cos(angle / 2.0), math.sin(angle / 2.0)
        lo = np.take(amp, 0, axis=q)
        hi = np.take(amp, 1, axis=q)
        amp = np.stack((c * lo - 1j * s * hi, c * hi - 1j * s * lo), axis=q)
    elif kind == "z_rot":
        angle = op[2]
        shape = [1] * n
        shape[q] = 2
        phases = np.array([np.exp(-1j * angle / 2.0), np.exp(1j * angle / 2.0)]).reshape(shape)
        amp = amp * phases
    else:  # pragma: no cover - guarded by PulseSegment validation
        raise ValueError(f"unknown ideal op {kind!r}")
    return QuantumState(amp.reshape(-1))


def run_schedule(state: QuantumState, schedule: PulseSchedule) -> QuantumState:
    """Left-fold of the schedule's segments over the state."""
    if state.n_qubits != schedule.base.n_qubits:
        raise ValueError("state size does not match the schedule's qubit count")
    for seg in schedule.segments:
        if seg.mode == "ideal":
            state = _apply_ideal(state, seg.ideal_op)
        else:
            spec = schedule.base.with_overrides(seg.delta_ghz, seg.epsilon_ghz)
            state = evolve_segment(state, spec, seg.duration_ns)
    return state


def fidelity(a: QuantumState, b: QuantumState) -> float:
    """State fidelity |<a|b>|^2 (global-phase invariant)."""
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def reduced_density_matrix(state: QuantumState, keep) -> np.ndarray:
    """Reduced density matrix over the kept qubits (in the given order)."""
    keep = list(keep)
    n = state.n_qubits
    traced = [q for q in range(n) if q not in keep]
    amp = state.amplitudes.reshape([2] * n)
    amp = np.transpose(amp, keep + traced)
    m = amp.reshape(2 ** len(keep), -1)
    return m @ m.conj().T


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """(1/2) ||rho - sigma||_1 for hermitian matrices."""
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(rho - sigma))))


_SINGLE_QUBIT_INPUTS = (
    np.array([1.0, 0.0], dtype=complex),
    np.array([0.0, 1.0], dtype=complex),
    np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0),
    np.array([1.0, 1.0j], dtype=complex) / math.sqrt(2.0),
)


@dataclass(frozen=True)
class ProcessFidelityResult:
    """Averaged logical fidelity plus the worst code-space leakage seen."""

    fidelity: float
    max_leakage: float
    method: str = "average state fidelity over 4^n logical {0,1,+,+i} product inputs"
    per_input: tuple = field(default=(), repr=False)


def logical_process_fidelity(
    schedule: PulseSchedule,
    ideal_logical_unitary: np.ndarray,
    encoding,
) -> ProcessFidelityResult:
    """Compare a schedule's action on code space against an ideal logical gate.

    ``encoding`` provides ``n_logical`` and ``isometry()`` (the 2^N_phys x
    2^n_logical code map).  The figure of merit is the state fidelity between
    the schedule output and the encoded ideal output, averaged over all
    4^n_logical products of {|0>, |1>, |+>, |+i>}; superposition inputs make
    relative-phase errors visible while a global phase cancels per input.
    Leakage out of the code space is reported, never raised.
    """
    iso = encoding.isometry()
    n_logical = encoding.n_logical
    u = np.asarray(ideal_logical_unitary, dtype=complex)
    if u.shape != (2**n_logical, 2**n_logical):
        raise ValueError("ideal unitary size does not match the encoding")

    fidelities = []
    leakages = []
    for combo in product(_SINGLE_QUBIT_INPUTS, repeat=n_logical):
        logical = np.array([1.0], dtype=complex)
        for s in combo:
            logical = np.kron(logical, s)
        physical = QuantumState(iso @ logical)
        out = run_schedule(physical, schedule)
        ideal_out = QuantumState(iso @ (u @ logical))
        fidelities.append(fidelity(ideal_out, out))
        code_component = iso.conj().T @ out.amplitudes
        leakages.append(max(0.0, 1.0 - float(np.linalg.norm(code_component) ** 2)))

    return ProcessFidelityResult(
        fidelity=float(np.mean(fidelities)),
        max_leakage=float(np.max(leakages)),
        per_input=tuple(fidelities),
    )
