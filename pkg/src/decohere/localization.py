"""Free-particle decoherence on a position grid.

The master equation

    i d rho(x,x',t)/dt = (1/2m)(d^2/dx'^2 - d^2/dx^2) rho - i lambda (x-x')^2 rho

combines unitary dispersion with pointwise damping of spatial coherences:
populations rho(x, x) are untouched while off-diagonal elements decay as
exp(-lambda (x-x')^2 t). Natural units (hbar = 1) throughout; lambda has
units 1/(length^2 * time) and is set by the environmental scattering rate
(for everyday objects it is enormous — sugar-molecule chirality, for
instance, is monitored on nanosecond scales — but all runs here use
desk-scale natural units).

The kinetic term is evaluated spectrally on the periodic grid; the
dephasing weight uses minimum-image distances so its strength is continuous
across the boundary (finite-L artifact control; see grids module notes).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grids import (
    GridState,
    PhaseSpaceGrid,
    cat_state,
    gaussian_packet,
    maximally_mixed,
    uniform_coherent_state,
)

__all__ = [
    "LocalizationParams",
    "GridState",
    "PhaseSpaceGrid",
    "gaussian_packet",
    "cat_state",
    "uniform_coherent_state",
    "maximally_mixed",
    "master_rhs",
    "evolve",
    "coherence_length",
    "dipole_radiation_probability",
    "kinetic_hamiltonian",
]

STABILITY_LIMIT = 0.1
MIN_COHERENCE_POINTS = 4


@dataclass(frozen=True, eq=False)
class LocalizationParams:
    """Particle mass and localization rate lambda (both in natural units)."""

    mass: float
    lam: float

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError("mass must be positive")
        if self.lam < 0:
            raise ValueError("lambda must be non-negative")


def kinetic_hamiltonian(grid: PhaseSpaceGrid, mass: float) -> np.ndarray:
    """Dense spectral kinetic operator p^2/2m (hermitian, for cross-checks
    against the Lindblad form)."""
    n = grid.n_x
    f = np.fft.fft(np.eye(n), axis=0) / np.sqrt(n)
    p2 = grid.momenta_fft_order**2
    h = f.conj().T @ np.diag(p2 / (2.0 * mass)) @ f
    return 0.5 * (h + h.conj().T)


def _rhs(params: LocalizationParams, mat: np.ndarray, grid: PhaseSpaceGrid,
         d2: np.ndarray, kinetic: bool) -> np.ndarray:
    out = -params.lam * d2 * mat
    if kinetic:
        p2 = grid.momenta_fft_order**2
        lap_x = np.fft.ifft(-p2[:, None] * np.fft.fft(mat, axis=0), axis=0)
        lap_xp = np.fft.ifft(-p2[None, :] * np.fft.fft(mat, axis=1), axis=1)
        out = out - 1j / (2.0 * params.mass) * (lap_xp - lap_x)
    return out


def master_rhs(
    params: LocalizationParams, state: GridState, kinetic: bool = True
) -> np.ndarray:
    """d rho/dt on the grid.

    Spectral second derivatives for the kinetic part; pointwise
    -lambda (x_i - x_j)^2 rho_ij with minimum-image distances for the
    dephasing part. kinetic=False is the infinite-mass limit.
    """
    d2 = state.grid.min_image_sq_distances()
    return _rhs(params, np.asarray(state.rho), state.grid, d2, kinetic)


def evolve(
    params: LocalizationParams,
    state: GridState,
    t: float,
    steps: int,
    kinetic: bool = True,
) -> GridState:
    """Fixed-step RK4 for time t.

    Guard: max|rhs| * dt must stay below 0.1 (checked on the initial state);
    accuracy beyond stability is the caller's step budget. Trace is
    conserved to rounding; the output re-validates all grid-state
    invariants.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if t < 0:
        raise ValueError("t must be non-negative")
    grid = state.grid
    d2 = grid.min_image_sq_distances()
    dt = t / steps
    rho = np.array(state.rho)
    initial_rate = float(np.max(np.abs(_rhs(params, rho, grid, d2, kinetic))))
    if initial_rate * dt >= STABILITY_LIMIT:
        raise ValueError(
            f"stability guard: max|rhs|*dt = {initial_rate * dt:.3g} >= "
            f"{STABILITY_LIMIT}; increase steps"
        )
    for _ in range(steps):
        k1 = _rhs(params, rho, grid, d2, kinetic)
        k2 = _rhs(params, rho + 0.5 * dt * k1, grid, d2, kinetic)
        k3 = _rhs(params, rho + 0.5 * dt * k2, grid, d2, kinetic)
        k4 = _rhs(params, rho + dt * k3, grid, d2, kinetic)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    rho = 0.5 * (rho + rho.conj().T)
    return GridState(rho, grid)


def coherence_length(state: GridState) -> float:
    """Full width at 1/e of |rho(x0 + s/2, x0 - s/2)| versus the separation
    s, averaged over centers x0 with the position distribution as weight.

    For pure dephasing from a uniformly coherent state the profile is
    exp(-lambda t s^2), giving 2/sqrt(lambda t). Raises if the width is
    under 4 grid spacings (too narrow to resolve — reported, not guessed).
    """
    grid = state.grid
    n = grid.n_x
    dx = grid.dx
    idx = np.arange(n)
    a = idx[:, None]
    m = idx[None, :]
    # slice[a, m] = |rho(x_a + x, x_a - x)| at x = (m - n/2) dx, so s = 2x
    plus = (a + m - n // 2) % n
    minus = (a - m + n // 2) % n
    slices = np.abs(state.rho[plus, minus])
    weights = np.clip(state.diagonal, 0.0, None)
    if weights.sum() <= 0:
        raise ValueError("state has no diagonal weight")
    weights = weights / weights.sum()

    center = n // 2  # offset index of s = 0
    widths = np.zeros(n)
    valid = np.zeros(n, dtype=bool)
    for a_i in range(n):
        profile = slices[a_i]
        peak = profile[center]
        if peak <= 0:
            continue
        target = peak / np.e
        half_widths = []
        for direction in (+1, -1):
            crossing = None
            for step in range(1, n // 2):
                j = center + direction * step
                if profile[j] < target:
                    prev = profile[j - direction]
                    frac = (prev - target) / (prev - profile[j])
                    crossing = (step - 1 + frac) * 2.0 * dx  # s = 2x
                    break
            if crossing is None:
                break
            half_widths.append(crossing)
        if len(half_widths) == 2:
            widths[a_i] = half_widths[0] + half_widths[1]
            valid[a_i] = True
    if not np.any(valid & (weights > 1e-12)):
        raise ValueError("coherence profile never drops below 1/e on the grid")
    w_eff = weights * valid
    width = float(np.sum(widths * w_eff) / np.sum(w_eff))
    if width < MIN_COHERENCE_POINTS * dx:
        raise ValueError(
            f"coherence width {width:.3g} below {MIN_COHERENCE_POINTS} grid "
            f"spacings ({MIN_COHERENCE_POINTS * dx:.3g}); refine the grid"
        )
    return width


def dipole_radiation_probability(
    alpha: float, z: int, d: float, t: float, c: float
) -> float:
    """Order-of-magnitude probability alpha * Z^2 * (d/(c t))^3 that a
    transient dipole of size d living for time t radiates at least one
    resolving photon. An estimator, not an exact probability."""
    if d <= 0 or t <= 0 or c <= 0:
        raise ValueError("d, t, c must be positive")
    return float(alpha) * float(z) ** 2 * (d / (c * t)) ** 3
