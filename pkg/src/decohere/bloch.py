"""Two-level systems as real polarization vectors, their affine dynamics,
and the SU(n) coherence-vector generalization.

The polarization vector pi = Trace{sigma rho} fixes rho = (1 + sigma·pi)/2
completely; purity is (1 + |pi|^2)/2. Damping parameters gamma_i < 0 or a
fixed point outside the unit ball would drive |pi| past 1 and thereby break
positivity of the density matrix — such parameters are rejected with
AdmissibilityError (a probe utility exists for demonstrating the violation
on purpose).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .hilbert import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    DensityMatrix,
    Provenance,
)
from .tolerances import EPS_RT

__all__ = [
    "AdmissibilityError",
    "PolarizationVector",
    "AffineMapSpec",
    "BlochParams",
    "CoherenceVector",
    "rho_from_bloch",
    "bloch_from_rho",
    "apply_affine_map",
    "bloch_rhs",
    "bloch_integrate",
    "bloch_trajectory",
    "write_trajectory_csv",
    "probe_positivity_violation",
    "su_n_generators",
    "coherence_vector",
    "rho_from_coherence",
]

_PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)

# |pi| may exceed 1 by at most this much during integration of admissible
# parameters (accumulated integrator round-off).
BALL_TOL = 1e-8


class AdmissibilityError(ValueError):
    """Parameters that would violate density-matrix positivity."""


@dataclass(frozen=True, eq=False)
class PolarizationVector:
    """Real 3-vector with |pi| <= 1 (+EPS_RT); |pi| = 1 is a pure state."""

    pi: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.pi, dtype=float)
        if v.shape != (3,):
            raise ValueError(f"polarization vector must have shape (3,), got {v.shape}")
        if np.linalg.norm(v) > 1.0 + EPS_RT:
            raise AdmissibilityError(
                f"|pi| = {np.linalg.norm(v)} > 1: not a physical state"
            )
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "pi", v)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.pi))


def rho_from_bloch(pi: PolarizationVector | Sequence[float]) -> DensityMatrix:
    """rho = (1 + sigma·pi)/2."""
    v = pi.pi if isinstance(pi, PolarizationVector) else PolarizationVector(np.asarray(pi)).pi
    mat = 0.5 * (np.eye(2, dtype=complex) + sum(v[i] * _PAULI[i] for i in range(3)))
    return DensityMatrix(mat, Provenance.DIRECT)


def bloch_from_rho(rho: DensityMatrix) -> PolarizationVector:
    """pi_i = Trace{sigma_i rho}; exact inverse of rho_from_bloch."""
    if rho.dim != 2:
        raise ValueError("polarization vectors are defined for d = 2 only")
    v = np.array([np.real(np.trace(p @ rho.matrix)) for p in _PAULI])
    return PolarizationVector(v)


@dataclass(frozen=True, eq=False)
class AffineMapSpec:
    """Affine map pi -> A pi + pi0 on polarization vectors.

    This is the vector translation of a trace-preserving linear operator
    defined on 1 and sigma. It is idempotent iff A^2 = A and A pi0 = 0
    (for symmetric A — the hermitian, genuinely projecting case — this
    coincides with the operator-side condition pi0·A = 0). A nonzero pi0
    creates information, even out of the unit matrix.
    """

    pi0: np.ndarray
    a: np.ndarray

    def __post_init__(self):
        pi0 = np.asarray(self.pi0, dtype=float)
        a = np.asarray(self.a, dtype=float)
        if pi0.shape != (3,) or a.shape != (3, 3):
            raise ValueError("pi0 must be a 3-vector and a a 3x3 matrix")
        pi0 = pi0.copy()
        a = a.copy()
        pi0.flags.writeable = False
        a.flags.writeable = False
        object.__setattr__(self, "pi0", pi0)
        object.__setattr__(self, "a", a)

    @property
    def creates_information(self) -> bool:
        return bool(np.linalg.norm(self.pi0) > EPS_RT)

    def is_idempotent(self, atol: float = EPS_RT) -> bool:
        return bool(
            np.max(np.abs(self.a @ self.a - self.a)) <= atol
            and np.max(np.abs(self.a @ self.pi0)) <= atol
        )


def apply_affine_map(
    spec: AffineMapSpec, pi: PolarizationVector | Sequence[float]
) -> PolarizationVector:
    v = pi.pi if isinstance(pi, PolarizationVector) else np.asarray(pi, dtype=float)
    return PolarizationVector(spec.a @ v + spec.pi0)


@dataclass(frozen=True, eq=False)
class BlochParams:
    """Precession omega, anisotropic damping gamma towards pi0, in an
    orthonormal frame (rows of `basis`; canonical axes by default)."""

    omega: np.ndarray
    gamma: np.ndarray
    pi0: np.ndarray
    basis: np.ndarray = field(default_factory=lambda: np.eye(3))

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=float)
        gamma = np.asarray(self.gamma, dtype=float)
        pi0 = np.asarray(self.pi0, dtype=float)
        basis = np.asarray(self.basis, dtype=float)
        if omega.shape != (3,) or gamma.shape != (3,) or pi0.shape != (3,):
            raise ValueError("omega, gamma, pi0 must be 3-vectors")
        if basis.shape != (3, 3) or np.max(np.abs(basis @ basis.T - np.eye(3))) > EPS_RT:
            raise ValueError("basis rows must form an orthonormal 3-frame")
        if np.any(gamma < 0):
            raise AdmissibilityError(
                f"negative damping gamma = {gamma.tolist()} violates positivity"
            )
        if np.linalg.norm(pi0) > 1.0 + EPS_RT:
            raise AdmissibilityError(
                f"|pi0| = {np.linalg.norm(pi0)} > 1 violates positivity"
            )
        for name, arr in (("omega", omega), ("gamma", gamma), ("pi0", pi0), ("basis", basis)):
            arr = arr.copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def _bloch_rhs_raw(
    omega: np.ndarray, gamma: np.ndarray, pi0: np.ndarray, basis: np.ndarray, v: np.ndarray
) -> np.ndarray:
    delta = v - pi0
    out = np.cross(omega, delta)
    for i in range(3):
        out -= gamma[i] * float(basis[i] @ delta) * basis[i]
    return out


def bloch_rhs(
    params: BlochParams, pi: PolarizationVector | Sequence[float]
) -> np.ndarray:
    """dpi/dt = omega x (pi - pi0) - sum_i gamma_i ((pi - pi0)·e_i) e_i.

    Zero exactly at the fixed point pi = pi0.
    """
    v = pi.pi if isinstance(pi, PolarizationVector) else np.asarray(pi, dtype=float)
    return _bloch_rhs_raw(params.omega, params.gamma, params.pi0, params.basis, v)


def _rk4_path(
    omega: np.ndarray,
    gamma: np.ndarray,
    pi0: np.ndarray,
    basis: np.ndarray,
    start: np.ndarray,
    t: float,
    steps: int,
):
    dt = t / steps
    v = np.array(start, dtype=float)
    yield 0.0, v.copy()
    for k in range(steps):
        k1 = _bloch_rhs_raw(omega, gamma, pi0, basis, v)
        k2 = _bloch_rhs_raw(omega, gamma, pi0, basis, v + 0.5 * dt * k1)
        k3 = _bloch_rhs_raw(omega, gamma, pi0, basis, v + 0.5 * dt * k2)
        k4 = _bloch_rhs_raw(omega, gamma, pi0, basis, v + dt * k3)
        v = v + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        yield (k + 1) * dt, v.copy()


def bloch_integrate(
    params: BlochParams,
    start: PolarizationVector | Sequence[float],
    t: float,
    steps: int,
) -> PolarizationVector:
    """RK4 evolution; |pi| stays within 1 + BALL_TOL throughout for
    admissible parameters (checked every step)."""
    v0 = start.pi if isinstance(start, PolarizationVector) else np.asarray(start, dtype=float)
    PolarizationVector(v0)
    final = v0
    for time, v in _rk4_path(params.omega, params.gamma, params.pi0, params.basis, v0, t, steps):
        if np.linalg.norm(v) > 1.0 + BALL_TOL:
            raise AdmissibilityError(
                f"|pi| = {np.linalg.norm(v)} > 1 at t = {time}: positivity lost "
                "(should not happen for admissible parameters)"
            )
        final = v
    # integrator round-off may leave |pi| in (1, 1 + BALL_TOL]; pull back
    # onto the ball so the result is a valid state
    nrm = np.linalg.norm(final)
    if nrm > 1.0:
        final = final / nrm
    return PolarizationVector(final)


def probe_positivity_violation(
    omega: Sequence[float],
    gamma: Sequence[float],
    pi0: Sequence[float],
    start: Sequence[float],
    t: float,
    steps: int,
) -> float | None:
    """Testing utility: integrate with *unchecked* parameters and report the
    first time |pi| exceeds 1 + BALL_TOL, or None if it never does.

    This reproduces constructively that gamma_i < 0 or |pi0| > 1 breaks
    positivity at some t > 0.
    """
    omega = np.asarray(omega, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    pi0 = np.asarray(pi0, dtype=float)
    start = np.asarray(start, dtype=float)
    for time, v in _rk4_path(omega, gamma, pi0, np.eye(3), start, t, steps):
        if np.linalg.norm(v) > 1.0 + BALL_TOL:
            return float(time)
    return None


def bloch_trajectory(
    params: BlochParams,
    start: PolarizationVector | Sequence[float],
    t_max: float,
    n_points: int,
    steps_per_point: int = 10,
) -> tuple[np.ndarray, np.ndarray]:
    """Times and pi(t) sampled on n_points+1 equally spaced instants."""
    v0 = start.pi if isinstance(start, PolarizationVector) else np.asarray(start, dtype=float)
    times = [0.0]
    path = [np.array(v0)]
    current = PolarizationVector(v0)
    dt = t_max / n_points
    for k in range(n_points):
        current = bloch_integrate(params, current, dt, steps_per_point)
        times.append((k + 1) * dt)
        path.append(current.pi)
    return np.array(times), np.array(path)


def write_trajectory_csv(
    path: str,
    params: BlochParams,
    start: PolarizationVector | Sequence[float],
    t_max: float,
    n_points: int,
    steps_per_point: int = 10,
) -> None:
    """CSV columns: t, pi1, pi2, pi3, |pi|."""
    times, pis = bloch_trajectory(params, start, t_max, n_points, steps_per_point)
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "pi1", "pi2", "pi3", "pi_norm"])
        for t, v in zip(times, pis):
            writer.writerow([repr(float(t))] + [repr(float(x)) for x in v]
                            + [repr(float(np.linalg.norm(v)))])


# ---------------------------------------------------------------------------
# SU(n) generalization

def su_n_generators(n: int) -> list[np.ndarray]:
    """Generalized Gell-Mann matrices: n^2 - 1 hermitian traceless
    generators with Trace(G_a G_b) = 2 delta_ab.

    Ordering: symmetric pair matrices (lexicographic j < k), antisymmetric
    pair matrices, then the n - 1 mutually commuting diagonal ones. For
    n = 2 this reproduces (sigma_x, sigma_y, sigma_z) exactly.
    """
    if not 2 <= n <= 16:
        raise ValueError("n must be between 2 and 16")
    gens: list[np.ndarray] = []
    for j in range(n):
        for k in range(j + 1, n):
            g = np.zeros((n, n), dtype=complex)
            g[j, k] = g[k, j] = 1.0
            gens.append(g)
    for j in range(n):
        for k in range(j + 1, n):
            g = np.zeros((n, n), dtype=complex)
            g[j, k] = -1j
            g[k, j] = 1j
            gens.append(g)
    for l in range(1, n):
        g = np.zeros((n, n), dtype=complex)
        g[np.arange(l), np.arange(l)] = 1.0
        g[l, l] = -l
        gens.append(g * np.sqrt(2.0 / (l * (l + 1))))
    return gens


@dataclass(frozen=True, eq=False)
class CoherenceVector:
    """Expansion coefficients of rho over the SU(n) generators; the n = 2
    case is the polarization vector."""

    components: np.ndarray
    n: int

    def __post_init__(self):
        comp = np.asarray(self.components, dtype=float)
        if comp.shape != (self.n * self.n - 1,):
            raise ValueError(
                f"need {self.n ** 2 - 1} components for n = {self.n}, got {comp.shape}"
            )
        comp = comp.copy()
        comp.flags.writeable = False
        object.__setattr__(self, "components", comp)


def coherence_vector(rho: DensityMatrix) -> CoherenceVector:
    """components_a = Trace(G_a rho); real for hermitian rho."""
    gens = su_n_generators(rho.dim)
    comp = np.array([float(np.real(np.trace(g @ rho.matrix))) for g in gens])
    return CoherenceVector(comp, rho.dim)


def rho_from_coherence(cv: CoherenceVector) -> DensityMatrix:
    """rho = I/n + (1/2) sum_a components_a G_a; exact round trip."""
    gens = su_n_generators(cv.n)
    mat = np.eye(cv.n, dtype=complex) / cv.n
    for c, g in zip(cv.components, gens):
        mat += 0.5 * c * g
    return DensityMatrix(mat, Provenance.DIRECT)
