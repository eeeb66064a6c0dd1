"""Single rf-SQUID flux dynamics.

Solves the one-dimensional loop Hamiltonian

    H = -(hbar^2 / 2C) d^2/dPhi^2 + (Phi - Phi_x)^2 / (2 L_eff) - E_J cos(2 pi Phi / Phi0)

on a uniform flux grid with Dirichlet boundaries and reduces the two lowest
levels to two-level qubit parameters: tunneling splitting ``delta``, bias
asymmetry ``epsilon`` and persistent current ``i_p``.

Conventions
-----------
* ``delta`` is the observable splitting (E1 - E0)/h at the symmetric bias
  point Phi_x = Phi0/2; the qubit Hamiltonian uses -(delta/2) sigma_x so the
  gap equals ``delta``.
* ``epsilon`` is the full well splitting produced by a bias offset, so the
  biased two-level gap is sqrt(delta^2 + epsilon^2).
* A pi pulse at tunneling ``delta`` takes 1/(2 delta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .constants import (
    FLUX_ENERGY_GHZ_PH,
    JOSEPHSON_GHZ_PER_UA,
    KINETIC_GHZ_FF,
    PHI0_PH_UA,
)

__all__ = [
    "SquidParams",
    "FluxGrid",
    "EigenSolution",
    "TwoLevelParams",
    "WindowTooSmallError",
    "NoDoubleWellError",
    "BracketError",
    "ConvergenceError",
    "potential",
    "solve_levels",
    "extract_two_level",
    "calibrate_critical_current",
    "beta_l",
    "default_grid",
]

# Splittings smaller than this, relative to the absolute level energies, sit
# at the double-precision noise floor of the eigensolver and are flagged.
SOLVER_FLOOR_REL = 1e-9

# Probability mass allowed in the outer 5% of the grid before the window is
# declared too small.
_EDGE_MASS_LIMIT = 1e-6


class WindowTooSmallError(RuntimeError):
    """Flux window does not contain the relevant wavefunctions."""


class NoDoubleWellError(RuntimeError):
    """Potential is monostable (beta_L <= 1); no well-localized states."""


class BracketError(ValueError):
    """Calibration target lies outside the supplied bracket."""


class ConvergenceError(RuntimeError):
    """Eigensolver failed or produced out-of-tolerance residuals."""


@dataclass(frozen=True)
class SquidParams:
    """Circuit constants of one rf-SQUID loop.

    ``l_renorm_factor`` is the dimensionless bus-loading correction
    1 + M^2/(L L_b); the effective loop inductance is L / l_renorm_factor.
    """

    l_ph: float
    c_ff: float
    ic_ua: float
    phi_x: float = 0.5
    l_renorm_factor: float = 1.0

    def __post_init__(self):
        if self.l_ph <= 0 or self.c_ff <= 0:
            raise ValueError("L and C must be positive")
        if self.ic_ua < 0:
            raise ValueError("Ic must be non-negative")
        if not 0.0 <= self.phi_x < 1.0:
            raise ValueError("phi_x must lie in [0, 1) flux quanta")
        if self.l_renorm_factor <= 0:
            raise ValueError("l_renorm_factor must be positive")

    @property
    def josephson_energy_ghz(self) -> float:
        return JOSEPHSON_GHZ_PER_UA * self.ic_ua


def beta_l(params: SquidParams) -> float:
    """Screening parameter 2 pi L Ic / Phi0; > 1 means a double well exists."""
    return 2.0 * math.pi * params.l_ph * params.ic_ua / PHI0_PH_UA


@dataclass(frozen=True)
class FluxGrid:
    """Uniform flux grid (units of Phi0) for the discretized Hamiltonian."""

    phi_min: float
    phi_max: float
    n_points: int = 4097

    def __post_init__(self):
        if not self.phi_min < self.phi_max:
            raise ValueError("phi_min must be below phi_max")
        if self.n_points < 257:
            raise ValueError("n_points must be at least 257")

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.phi_min, self.phi_max, self.n_points)

    @property
    def spacing(self) -> float:
        return (self.phi_max - self.phi_min) / (self.n_points - 1)

    @property
    def center(self) -> float:
        return 0.5 * (self.phi_min + self.phi_max)


def default_grid() -> FluxGrid:
    """Default window [-0.25, 1.25] Phi0: wide enough for both wells at the
    symmetric point, fine enough to resolve near-degenerate splittings."""
    return FluxGrid(-0.25, 1.25, 4097)


@dataclass(frozen=True)
class EigenSolution:
    """Lowest-k eigenpairs on a flux grid.

    ``energies`` ascend and are E/h in GHz; ``wavefunctions`` has one row per
    level, normalized so that sum(psi^2) * dphi = 1.
    """

    energies: np.ndarray
    wavefunctions: np.ndarray
    grid: FluxGrid

    @property
    def gap(self) -> float:
        return float(self.energies[1] - self.energies[0])


@dataclass(frozen=True)
class TwoLevelParams:
    """Two-level reduction of one rf-SQUID.

    ``at_solver_floor`` marks tunneling splittings too small relative to the
    absolute level energies to be trusted beyond a factor ~2.
    """

    delta_ghz: float
    epsilon_ghz: float
    i_p_ua: float
    at_solver_floor: bool = False


def potential(params: SquidParams, phi) -> np.ndarray | float:
    """Loop potential U(phi)/h in GHz, phi in units of Phi0.

    Inductive term uses the renormalized inductance L / l_renorm_factor.
    """
    phi = np.asarray(phi, dtype=float)
    inductive = (
        FLUX_ENERGY_GHZ_PH
        * params.l_renorm_factor
        * (phi - params.phi_x) ** 2
        / (2.0 * params.l_ph)
    )
    josephson = -params.josephson_energy_ghz * np.cos(2.0 * math.pi * phi)
    u = inductive + josephson
    return float(u) if u.ndim == 0 else u


def _parity_purify(vectors: np.ndarray) -> np.ndarray:
    """Project eigenvectors onto definite parity about the grid center.

    Valid only when the potential is mirror symmetric.  The k-th bound state
    of a symmetric 1-D potential has parity (-1)^k; near-degenerate pairs come
    out of the solver arbitrarily mixed, which this undoes.
    """
    k = vectors.shape[1]
    purified = np.empty_like(vectors)
    for j in range(k):
        sign = 1.0 if j % 2 == 0 else -1.0
        v = vectors[:, j]
        proj = 0.5 * (v + sign * v[::-1])
        if np.linalg.norm(proj) < 0.5:
            # Dominantly wrong parity: the degenerate partner carries it.
            partner = j + 1 if j + 1 < k else j - 1
            w = vectors[:, partner]
            proj = 0.5 * (w + sign * w[::-1])
        purified[:, j] = proj / np.linalg.norm(proj)
    # Restore exact orthonormality (projections of a near-degenerate pair are
    # orthogonal across parity, nearly so within).
    q, r = np.linalg.qr(purified)
    return q * np.sign(np.diag(r))


def solve_levels(params: SquidParams, grid: FluxGrid | None = None, k: int = 2) -> EigenSolution:
    """Lowest ``k`` eigenpairs of the discretized loop Hamiltonian.

    Symmetric three-point finite differences with Dirichlet boundaries; the
    resulting real symmetric tridiagonal problem is solved exactly for the
    requested levels.  For a mirror-symmetric potential the eigenvectors are
    purified to definite parity, which keeps near-degenerate doublets clean.

    Raises
    ------
    WindowTooSmallError
        if a returned wavefunction carries more than 1e-6 probability mass in
        the outer 5% of the grid, or the potential minimum sits at the edge.
    ConvergenceError
        if the eigensolver fails or residuals exceed tolerance.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if grid is None:
        grid = default_grid()

    phi = grid.points
    dphi = grid.spacing
    u = potential(params, phi)
    n = grid.n_points

    edge = max(1, int(0.05 * n))
    if np.argmin(u) < edge or np.argmin(u) >= n - edge:
        raise WindowTooSmallError("potential minimum at the grid edge; widen the window")

    kin = KINETIC_GHZ_FF / params.c_ff
    diag = u + 2.0 * kin / dphi**2
    off = np.full(n - 1, -kin / dphi**2)

    try:
        energies, vectors = eigh_tridiagonal(diag, off, select="i", select_range=(0, k - 1))
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise ConvergenceError(f"tridiagonal eigensolver failed: {exc}") from exc

    symmetric = (
        abs(params.phi_x - grid.center) < 1e-12
        and float(np.max(np.abs(u - u[::-1]))) <= 1e-9 * (float(np.max(np.abs(u))) + 1.0)
    )
    if symmetric:
        vectors = _parity_purify(vectors)

    # Sign convention: positive at the left well (fall back to the dominant
    # component for states with a node there).
    left = np.argmin(np.where(phi < params.phi_x, u, np.inf)) if np.any(phi < params.phi_x) else np.argmin(u)
    for j in range(k):
        v = vectors[:, j]
        ref = v[left] if abs(v[left]) > 1e-3 * np.max(np.abs(v)) else v[np.argmax(np.abs(v))]
        if ref < 0:
            vectors[:, j] = -v

    psi = (vectors / math.sqrt(dphi)).T  # rows, grid-normalized

    # Residual check on the discrete operator, in the grid norm.
    for j in range(k):
        v = vectors[:, j]
        hv = diag * v
        hv[:-1] += off * v[1:]
        hv[1:] += off * v[:-1]
        residual = np.linalg.norm(hv - energies[j] * v)
        if residual > 1e-8:
            raise ConvergenceError(f"eigen-residual {residual:.2e} exceeds 1e-8 for level {j}")

    # Outer-mass check: wavefunctions must not press against the walls.
    for j in range(k):
        mass = float(np.sum(psi[j, :edge] ** 2) + np.sum(psi[j, n - edge:] ** 2)) * dphi
        if mass > _EDGE_MASS_LIMIT:
            raise WindowTooSmallError(
                f"level {j} has {mass:.2e} probability mass in the outer 5% of the window"
            )

    return EigenSolution(energies=np.asarray(energies, dtype=float), wavefunctions=psi, grid=grid)


def _splitting_at(params: SquidParams, phi_x: float, grid: FluxGrid | None) -> tuple[float, bool]:
    """Gap (E1-E0) at the given bias and whether it sits at the solver floor."""
    sol = solve_levels(replace(params, phi_x=phi_x), grid=grid, k=2)
    gap = sol.gap
    scale = float(np.max(np.abs(sol.energies[:2])))
    return gap, gap < SOLVER_FLOOR_REL * max(scale, 1.0)


def extract_two_level(params: SquidParams, grid: FluxGrid | None = None) -> TwoLevelParams:
    """Reduce the SQUID to two-level parameters.

    ``delta`` is the splitting at the symmetric point Phi0/2 (same L, C, Ic);
    ``epsilon`` is recovered from the biased gap via
    epsilon = sqrt(gap^2 - delta^2), zero at the symmetric point; ``i_p`` is
    the circulating-current magnitude |<well| (Phi - Phi_x)/L_eff |well>| of
    the localized combinations (psi0 +- psi1)/sqrt(2).

    Raises ``NoDoubleWellError`` when beta_L <= 1.
    """
    if beta_l(params) <= 1.0:
        raise NoDoubleWellError(
            f"beta_L = {beta_l(params):.3f} <= 1: potential has a single well"
        )

    sym = solve_levels(replace(params, phi_x=0.5), grid=grid, k=2)
    delta = sym.gap
    scale = float(np.max(np.abs(sym.energies[:2])))
    at_floor = delta < SOLVER_FLOOR_REL * max(scale, 1.0)

    phi = sym.grid.points
    dphi = sym.grid.spacing
    psi0, psi1 = sym.wavefunctions[0], sym.wavefunctions[1]
    current_ua = (phi - 0.5) * PHI0_PH_UA * params.l_renorm_factor / params.l_ph
    ips = []
    for well in ((psi0 + psi1) / math.sqrt(2.0), (psi0 - psi1) / math.sqrt(2.0)):
        ips.append(abs(float(np.sum(well**2 * current_ua) * dphi)))
    i_p = 0.5 * (ips[0] + ips[1])

    if abs(params.phi_x - 0.5) < 1e-15:
        epsilon = 0.0
    else:
        gap_biased, _ = _splitting_at(params, params.phi_x, grid)
        epsilon = math.sqrt(max(gap_biased**2 - delta**2, 0.0))

    return TwoLevelParams(delta_ghz=delta, epsilon_ghz=epsilon, i_p_ua=i_p, at_solver_floor=at_floor)


def calibrate_critical_current(
    params: SquidParams,
    target_delta_ghz: float,
    bracket: tuple[float, float] = (1.5, 3.0),
    rel_tol: float = 1e-3,
    grid: FluxGrid | None = None,
    max_iter: int = 200,
) -> float:
    """Critical current achieving a target tunneling splitting, by bisection.

    delta(Ic) is monotone decreasing on the bistable branch, so a sign-safe
    bisection suffices.  Stops at |delta - target| <= rel_tol * target or when
    the Ic bracket narrows below 1e-6 uA (targets near the solver floor never
    satisfy the delta test; the bracket width bound keeps Ic well determined).

    Raises ``BracketError`` if the target is not enclosed by the bracket.
    """
    if target_delta_ghz <= 0:
        raise ValueError("target splitting must be positive")
    lo, hi = bracket
    if not 0 <= lo < hi:
        raise ValueError("bracket must satisfy 0 <= lo < hi")

    def delta_of(ic: float) -> float:
        gap, _ = _splitting_at(replace(params, ic_ua=ic), 0.5, grid)
        return gap

    d_lo = delta_of(lo)
    d_hi = delta_of(hi)
    if not (d_hi <= target_delta_ghz <= d_lo):
        raise BracketError(
            f"target {target_delta_ghz:.4g} GHz outside [{d_hi:.4g}, {d_lo:.4g}] GHz "
            f"reachable on Ic bracket [{lo}, {hi}] uA"
        )

    mid = 0.5 * (lo + hi)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        d_mid = delta_of(mid)
        if abs(d_mid - target_delta_ghz) <= rel_tol * target_delta_ghz:
            return mid
        if d_mid > target_delta_ghz:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-6:
            return 0.5 * (lo + hi)
    return mid
