"""Uniform periodic position grids and discretized density matrices.

Shared by the phase-space transform and the localization master equation.
Positions are centered, x_i = (i - n/2) dx with dx = L/n; the conjugate
wave-function momentum grid has spacing 2*pi/L. The phase-space transform
uses its own half-spaced momentum axis (see PhaseSpaceGrid.wigner_momenta).

Periodic boundary conditions are a finite-box modelling choice: distances
enter pointwise terms through the minimum image, and states with
appreciable weight outside the central quarter box can show a small
indefiniteness of the minimum-image dephasing kernel at small exposures
(a finite-L artifact: coherences between points more than half a box
apart are under-damped relative to the straight-line kernel). Keep states
inside |x| < L/4, as the phase-space transform also requires.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from . import serialize
from .tolerances import EPS_HERM, EPS_PSD

__all__ = ["PhaseSpaceGrid", "GridState", "gaussian_packet", "cat_state",
           "uniform_coherent_state", "maximally_mixed"]

GRID_TRACE_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class PhaseSpaceGrid:
    """n_x grid points (a power of two) on a periodic box of length L."""

    n_x: int
    length: float

    def __post_init__(self):
        n = int(self.n_x)
        if n < 2 or (n & (n - 1)) != 0:
            raise ValueError(f"n_x must be a power of two, got {n}")
        if self.length <= 0:
            raise ValueError("length must be positive")
        object.__setattr__(self, "n_x", n)
        object.__setattr__(self, "length", float(self.length))

    @property
    def dx(self) -> float:
        return self.length / self.n_x

    @property
    def positions(self) -> np.ndarray:
        """Centered positions x_i = (i - n/2) dx."""
        return (np.arange(self.n_x) - self.n_x // 2) * self.dx

    @property
    def momenta(self) -> np.ndarray:
        """Wave-function momentum grid, spacing 2*pi/L, centered."""
        return (np.arange(self.n_x) - self.n_x // 2) * (2.0 * np.pi / self.length)

    @property
    def momenta_fft_order(self) -> np.ndarray:
        """Same grid in numpy fft ordering (for spectral derivatives)."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n_x, self.dx)

    @property
    def wigner_momenta(self) -> np.ndarray:
        """Momentum axis of the phase-space transform, spacing pi/L.

        The e^{2ipx} kernel resolves twice as fine a momentum grid as the
        wave-function axis over the same Nyquist range.
        """
        return (np.arange(self.n_x) - self.n_x // 2) * (np.pi / self.length)

    def min_image_sq_distances(self) -> np.ndarray:
        """(x_i - x_j)^2 with the minimum-image convention."""
        i = np.arange(self.n_x)
        d = ((i[:, None] - i[None, :] + self.n_x // 2) % self.n_x - self.n_x // 2) * self.dx
        return d * d


@dataclass(frozen=True, eq=False)
class GridState:
    """rho(x_i, x_j) on a grid; hermitian, unit trace (sum of the diagonal
    times dx), and PSD with respect to the grid inner product."""

    rho: np.ndarray
    grid: PhaseSpaceGrid

    def __post_init__(self):
        mat = np.asarray(self.rho, dtype=complex)
        n = self.grid.n_x
        if mat.shape != (n, n):
            raise ValueError(f"rho shape {mat.shape} != grid size ({n}, {n})")
        defect = float(np.max(np.abs(mat - mat.conj().T)))
        if defect > EPS_HERM * max(1.0, float(np.max(np.abs(mat)))):
            raise ValueError(f"grid state is not hermitian (defect {defect:.3e})")
        tr = float(np.real(np.trace(mat))) * self.grid.dx
        if abs(tr - 1.0) > GRID_TRACE_TOL:
            raise ValueError(f"grid trace {tr} deviates from 1 beyond {GRID_TRACE_TOL}")
        smallest = float(np.linalg.eigvalsh(mat)[0]) * self.grid.dx
        if smallest < -EPS_PSD:
            raise ValueError(
                f"grid state has probability eigenvalue {smallest:.3e} < -{EPS_PSD}"
            )
        mat = mat.copy()
        mat.flags.writeable = False
        object.__setattr__(self, "rho", mat)

    @property
    def diagonal(self) -> np.ndarray:
        """Position distribution rho(x, x), real."""
        return np.real(np.diag(self.rho))

    def purity(self) -> float:
        """Trace{rho^2} under the grid inner product."""
        return float(np.real(np.trace(self.rho @ self.rho))) * self.grid.dx ** 2

    @classmethod
    def from_wavefunction(cls, psi: np.ndarray, grid: PhaseSpaceGrid) -> "GridState":
        """Pure state |psi><psi|; psi is normalized on the grid first."""
        psi = np.asarray(psi, dtype=complex)
        norm = np.linalg.norm(psi) * np.sqrt(grid.dx)
        if norm == 0:
            raise ValueError("wave function is identically zero")
        psi = psi / norm
        return cls(np.outer(psi, psi.conj()), grid)

    def to_json(self) -> dict[str, Any]:
        return serialize.grid_to_json(self.grid.n_x, self.grid.length, self.rho)

    @classmethod
    def from_json(cls, payload: dict[str, Any]) -> "GridState":
        n_x, length, rho = serialize.grid_from_json(payload)
        return cls(rho, PhaseSpaceGrid(n_x, length))


def gaussian_packet(
    grid: PhaseSpaceGrid, center: float = 0.0, sigma: float = 1.0, momentum: float = 0.0
) -> np.ndarray:
    """Normalized Gaussian wave function exp(-(x-c)^2/(2 sigma^2) + i p x)."""
    x = grid.positions
    psi = np.exp(-((x - center) ** 2) / (2.0 * sigma**2) + 1j * momentum * x)
    return psi / (np.linalg.norm(psi) * np.sqrt(grid.dx))


def cat_state(grid: PhaseSpaceGrid, separation: float, sigma: float) -> np.ndarray:
    """Symmetric superposition of two Gaussians centered at ±separation/2."""
    psi = gaussian_packet(grid, +separation / 2.0, sigma) + gaussian_packet(
        grid, -separation / 2.0, sigma
    )
    return psi / (np.linalg.norm(psi) * np.sqrt(grid.dx))


def uniform_coherent_state(grid: PhaseSpaceGrid) -> np.ndarray:
    """Fully coherent flat wave function (constant phase)."""
    psi = np.ones(grid.n_x, dtype=complex)
    return psi / (np.linalg.norm(psi) * np.sqrt(grid.dx))


def maximally_mixed(grid: PhaseSpaceGrid) -> GridState:
    return GridState(np.eye(grid.n_x, dtype=complex) / (grid.n_x * grid.dx), grid)
