"""The Wigner function as a continuous coherence vector.

W(p, q) = (1/pi) * integral e^{2ipx} rho(q+x, q-x) dx, discretized on the
periodic grid by the even-grid rotation: for each center q_a the
anti-diagonal slice rho(q_a + x_m, q_a - x_m) is read off at integer grid
offsets (indices wrap), and the x integral becomes a centered DFT. The
natural momentum axis of this transform is spaced pi/L (n_x points, same
Nyquist range as the wave-function grid but twice as fine) — see
PhaseSpaceGrid.wigner_momenta.

W is real and normalized, sum W dp dq = 1, but not a probability
distribution: superposition states produce negative patches. The
finite-interval correction subtracts the q-average at each p, giving the
traceless generalized coherence components appropriate to a finite box.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import serialize
from .grids import GridState, PhaseSpaceGrid
from .tolerances import EPS_RT

__all__ = [
    "WignerFunction",
    "wigner_transform",
    "expectation_phase_space",
    "finite_interval_correction",
    "position_marginal",
    "momentum_marginal",
    "write_wigner_csv",
    "write_wigner_binary",
]

logger = logging.getLogger(__name__)

NORMALIZATION_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class WignerFunction:
    """Real array values[i, j] = W(p_i, q_j) on grid.wigner_momenta x
    grid.positions.

    `traceless` marks a finite-interval-corrected function whose phase-space
    integral is 0 instead of 1.
    """

    values: np.ndarray
    grid: PhaseSpaceGrid
    traceless: bool = False

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        n = self.grid.n_x
        if vals.shape != (n, n):
            raise ValueError(f"values shape {vals.shape} != ({n}, {n})")
        total = float(vals.sum()) * self.dp * self.dq
        target = 0.0 if self.traceless else 1.0
        if abs(total - target) > NORMALIZATION_TOL:
            raise ValueError(
                f"phase-space integral {total} deviates from {target} "
                f"beyond {NORMALIZATION_TOL}"
            )
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def dp(self) -> float:
        return np.pi / self.grid.length

    @property
    def dq(self) -> float:
        return self.grid.dx


def wigner_transform(state: GridState) -> WignerFunction:
    """Discrete transform of a grid density matrix.

    The imaginary residue (zero for hermitian input up to rounding) is
    logged and must stay below EPS_RT relative to the largest value.
    """
    grid = state.grid
    n = grid.n_x
    dx = grid.dx
    idx = np.arange(n)
    a = idx[:, None]
    m = idx[None, :]
    # anti-diagonal slices: c[a, m] = rho(q_a + x, q_a - x) at x = (m - n/2) dx
    plus = (a + m - n // 2) % n
    minus = (a - m + n // 2) % n
    c = state.rho[plus, minus]
    # On a circle the map (q, x) -> (q+x, q-x) covers each point pair twice
    # (once at center q, once at the antipode q + L/2), which would paint a
    # ghost of every feature half a box away. Restrict offsets to
    # |x| <= L/4, with half weight on the boundary offsets, so every pair
    # counts exactly once; states should stay inside a quarter box.
    offs = np.abs(idx - n // 2)
    window = np.where(offs < n // 4, 1.0, np.where(offs == n // 4, 0.5, 0.0))
    c = c * window[None, :]
    # centered DFT over the offset index: phase[k, m] = e^{-i 2pi (k-n/2)(m-n/2)/n}.
    # The kernel sign is fixed so the q-integral marginal is the physical
    # momentum density (a boosted packet peaks at +k); the mirrored sign
    # merely reflects the p-axis.
    k = idx[:, None] - n // 2
    mm = idx[None, :] - n // 2
    phase = np.exp(-1j * (2.0 * np.pi / n) * k * mm)
    w_qa_pk = (dx / np.pi) * (c @ phase.T)
    residue = float(np.max(np.abs(w_qa_pk.imag)))
    scale = max(1.0, float(np.max(np.abs(w_qa_pk.real))))
    logger.debug("wigner_transform: imaginary residue %.3e", residue)
    if residue > EPS_RT * scale:
        raise ValueError(f"imaginary residue {residue:.3e}: input not hermitian?")
    return WignerFunction(w_qa_pk.real.T, grid)


def expectation_phase_space(
    w: WignerFunction, f: Callable[[np.ndarray, np.ndarray], np.ndarray]
) -> float:
    """Riemann sum of f(p, q) W(p, q) dp dq; f must broadcast over arrays."""
    p = w.grid.wigner_momenta[:, None]
    q = w.grid.positions[None, :]
    integrand = np.asarray(f(p, q)) * w.values
    return float(integrand.sum()) * w.dp * w.dq


def finite_interval_correction(w: WignerFunction) -> WignerFunction:
    """Subtract the q-average at each p: W -> W - (1/L) integral W dq.

    The output has exactly zero q-average at every p (the traceless
    generalized coherence vector on a finite interval); applying the
    correction twice equals applying it once.
    """
    q_avg = w.values.mean(axis=1, keepdims=True)  # (1/L) sum W dq since n*dq = L
    return WignerFunction(w.values - q_avg, w.grid, traceless=True)


def position_marginal(w: WignerFunction) -> np.ndarray:
    """integral W dp, on grid.positions; equals rho(q, q) for a transform."""
    return w.values.sum(axis=0) * w.dp


def momentum_marginal(w: WignerFunction) -> np.ndarray:
    """integral W dq, on grid.wigner_momenta; equals the momentum density."""
    return w.values.sum(axis=1) * w.dq


def write_wigner_csv(w: WignerFunction, path: str) -> None:
    """CSV rows (p, q, W), header included, row-major over (p, q)."""
    p = w.grid.wigner_momenta
    q = w.grid.positions
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["p", "q", "W"])
        for i in range(w.grid.n_x):
            for j in range(w.grid.n_x):
                writer.writerow([repr(float(p[i])), repr(float(q[j])),
                                 repr(float(w.values[i, j]))])


def write_wigner_binary(w: WignerFunction, path: str) -> None:
    """8-byte header (uint32 n_x, float32 L) + row-major float64 values."""
    serialize.write_grid_binary(path, w.grid.n_x, w.grid.length, w.values)
