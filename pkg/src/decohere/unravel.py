"""Stochastic localization hits and the ensemble-equivalence check.

A trajectory is a pure state undergoing unitary evolution interrupted by
Poisson-distributed "hits": a hit at center c multiplies the wave function
by a Gaussian exp(-(x-c)^2 / (2 w^2)) and renormalizes, with c drawn from
the Born density |psi|^2 smeared by a Gaussian of sigma = w/sqrt(2) (the
standard center rule for spontaneous-localization models; the rule is a
modelling choice of this package, made so the trajectory mean is exactly a
Gaussian-kernel dephasing map).

Averaged over trajectories these hits reproduce deterministic coherence
damping: the exact mean map multiplies rho(x, x') by
exp(-(x-x')^2/(4 w^2)) per hit, so at rate r the coherence decay matches
the position-localization master equation with

    lambda_eff = rate / (4 * width^2)

in the regime where separations are small against the hit width (the
Taylor regime; the matching constant is verified by an oracle test).
Individual trajectories are representation-dependent — unravelling a
composite and unravelling one subsystem give visibly different trajectory
ensembles whose means nevertheless agree, which is demonstrated
numerically by subsystem_inconsistency_demo.

Reproducibility: every trajectory owns an rng seeded by the counter
construction SeedSequence((base_seed, index)); identical seeds give
bitwise-identical event sequences.
"""

from __future__ import annotations

import time as _time
from dataclasses import dataclass
from typing import Any

import numpy as np

from .bipartite import BipartiteState, partial_trace
from .grids import GridState, PhaseSpaceGrid
from .hilbert import SIGMA_Z, DensityMatrix, von_neumann_entropy
from .localization import LocalizationParams, evolve

__all__ = [
    "HitProcess",
    "TrajectoryEnsembleReport",
    "SubsystemComparisonReport",
    "effective_localization_rate",
    "apply_hit",
    "run_trajectory",
    "ensemble_mean",
    "subsystem_inconsistency_demo",
]

NORM_UNDERFLOW = 1e-12


@dataclass(frozen=True, eq=False)
class HitProcess:
    """Poisson hit rate, localization width, and the base RNG seed."""

    rate: float
    width: float
    rng_seed: int

    def __post_init__(self):
        if self.rate < 0:
            raise ValueError("rate must be non-negative")
        if not self.width > 0:
            raise ValueError("width must be positive")

    def trajectory_rng(self, index: int) -> np.random.Generator:
        """Independent, reproducible stream for trajectory `index`."""
        return np.random.default_rng(np.random.SeedSequence((self.rng_seed, index)))


def effective_localization_rate(process: HitProcess) -> float:
    """lambda_eff = rate / (4 width^2): the dephasing rate whose master
    equation the trajectory mean reproduces for small separations."""
    return process.rate / (4.0 * process.width**2)


def _normalize(psi: np.ndarray, dx: float) -> np.ndarray:
    norm = np.linalg.norm(psi) * np.sqrt(dx)
    if norm < NORM_UNDERFLOW:
        raise FloatingPointError(
            f"wave-function norm underflow ({norm:.3e}); hit width too narrow "
            "for the grid"
        )
    return psi / norm


def apply_hit(
    psi: np.ndarray, grid: PhaseSpaceGrid, width: float, rng: np.random.Generator
) -> tuple[np.ndarray, float]:
    """One localization hit; returns (new psi, hit center).

    The center is sampled exactly from the smeared Born density by drawing
    a grid point with weight |psi|^2 dx and adding Gaussian noise of
    sigma = width/sqrt(2); distances wrap periodically.
    """
    dx = grid.dx
    weights = np.abs(psi) ** 2 * dx
    weights = weights / weights.sum()
    j = int(rng.choice(grid.n_x, p=weights))
    center = float(grid.positions[j] + (width / np.sqrt(2.0)) * rng.standard_normal())
    delta = grid.positions - center
    length = grid.length
    delta = (delta + 0.5 * length) % length - 0.5 * length  # min-image offset
    multiplier = np.exp(-(delta**2) / (2.0 * width**2))
    return _normalize(psi * multiplier, dx), center


def _free_propagate(
    psi: np.ndarray, grid: PhaseSpaceGrid, mass: float, tau: float
) -> np.ndarray:
    """Exact free evolution e^{-i p^2 tau / 2m} via the spectral grid."""
    if tau == 0.0:
        return psi
    p2 = grid.momenta_fft_order**2
    return np.fft.ifft(np.exp(-1j * p2 * tau / (2.0 * mass)) * np.fft.fft(psi))


def run_trajectory(
    process: HitProcess,
    psi0: np.ndarray,
    grid: PhaseSpaceGrid,
    mass: float,
    t: float,
    steps: int,
    kinetic: bool = True,
    rng: np.random.Generator | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """One stochastic trajectory, recorded at steps+1 equally spaced times.

    Between hits the state evolves unitarily (exactly, via the spectral
    free propagator); hits arrive as a Poisson process at `process.rate`.
    Returns (times, states) with states[k] the normalized wave function at
    times[k]. Fully deterministic given the rng (defaults to the
    process's stream 0).
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if rng is None:
        rng = process.trajectory_rng(0)
    dx = grid.dx
    psi = _normalize(np.asarray(psi0, dtype=complex).copy(), dx)
    dt = t / steps
    times = np.linspace(0.0, t, steps + 1)
    states = np.empty((steps + 1, grid.n_x), dtype=complex)
    states[0] = psi
    now = 0.0
    next_hit = rng.exponential(1.0 / process.rate) if process.rate > 0 else np.inf
    for k in range(steps):
        t_end = (k + 1) * dt
        while next_hit <= t_end:
            if kinetic:
                psi = _free_propagate(psi, grid, mass, next_hit - now)
            now = next_hit
            psi, _ = apply_hit(psi, grid, process.width, rng)
            next_hit = now + rng.exponential(1.0 / process.rate)
        if kinetic:
            psi = _free_propagate(psi, grid, mass, t_end - now)
        now = t_end
        psi = _normalize(psi, dx)
        states[k + 1] = psi
    return times, states


@dataclass(frozen=True, eq=False)
class TrajectoryEnsembleReport:
    """Trajectory-averaged state vs the matched master equation."""

    n_traj: int
    mean_rho: GridState
    max_deviation_from_master: float
    seed_list: tuple[tuple[int, int], ...]
    elapsed: float

    def to_json(self) -> dict[str, Any]:
        return {
            "n_traj": self.n_traj,
            "max_deviation": self.max_deviation_from_master,
            "seeds": [list(s) for s in self.seed_list],
            "elapsed": self.elapsed,
        }


def _final_state(
    process: HitProcess,
    psi0: np.ndarray,
    grid: PhaseSpaceGrid,
    mass: float,
    t: float,
    kinetic: bool,
    rng: np.random.Generator,
) -> np.ndarray:
    """Final wave function only (no recording) — the ensemble work-horse."""
    dx = grid.dx
    psi = _normalize(np.asarray(psi0, dtype=complex).copy(), dx)
    now = 0.0
    if process.rate > 0:
        next_hit = rng.exponential(1.0 / process.rate)
        while next_hit <= t:
            if kinetic:
                psi = _free_propagate(psi, grid, mass, next_hit - now)
            now = next_hit
            psi, _ = apply_hit(psi, grid, process.width, rng)
            next_hit = now + rng.exponential(1.0 / process.rate)
    if kinetic:
        psi = _free_propagate(psi, grid, mass, t - now)
    return _normalize(psi, dx)


def ensemble_mean(
    process: HitProcess,
    psi0: np.ndarray,
    grid: PhaseSpaceGrid,
    mass: float,
    t: float,
    steps: int,
    n_traj: int,
    base_seed: int | None = None,
    kinetic: bool = True,
    master_steps: int | None = None,
) -> TrajectoryEnsembleReport:
    """Mean of |psi_k(t)><psi_k(t)| over n_traj trajectories, compared
    elementwise against the deterministic master equation with
    lambda_eff = rate/(4 width^2).

    Trajectories use the counter-derived streams (base_seed, k), so the
    run parallelizes deterministically; the mean is accumulated in fixed
    trajectory order. `steps` sets the trajectory recording grid (unused
    for the mean itself); the master comparison auto-sizes its step count
    from the stability guard unless master_steps is given.
    """
    if n_traj < 100:
        raise ValueError("n_traj must be at least 100 for a meaningful mean")
    if base_seed is None:
        base_seed = process.rng_seed
    started = _time.perf_counter()
    dx = grid.dx
    psi_start = _normalize(np.asarray(psi0, dtype=complex).copy(), dx)
    acc = np.zeros((grid.n_x, grid.n_x), dtype=complex)
    seeds = []
    for k in range(n_traj):
        rng = np.random.default_rng(np.random.SeedSequence((base_seed, k)))
        psi = _final_state(process, psi_start, grid, mass, t, kinetic, rng)
        acc += np.outer(psi, psi.conj())
        seeds.append((base_seed, k))
    mean = acc / n_traj
    mean = 0.5 * (mean + mean.conj().T)
    mean_state = GridState(mean, grid)

    params = LocalizationParams(mass, effective_localization_rate(process))
    start_state = GridState(np.outer(psi_start, psi_start.conj()), grid)
    if master_steps is None:
        # size steps from the generator's spectral radii (not the initial
        # rhs, which underestimates for smooth states); the budgets keep the
        # RK4 positivity dip inside the grid-state PSD tolerance
        kin_radius = float(np.max(grid.momenta_fft_order**2)) / (2.0 * mass) if kinetic else 0.0
        deph_radius = params.lam * float(np.max(grid.min_image_sq_distances()))
        master_steps = max(
            200,
            int(np.ceil(t * kin_radius / 0.1)),
            int(np.ceil(t * deph_radius / 0.05)),
        )
    master = evolve(params, start_state, t, master_steps, kinetic)
    deviation = float(np.max(np.abs(mean_state.rho - master.rho)))
    return TrajectoryEnsembleReport(
        n_traj=n_traj,
        mean_rho=mean_state,
        max_deviation_from_master=deviation,
        seed_list=tuple(seeds),
        elapsed=_time.perf_counter() - started,
    )


# ---------------------------------------------------------------------------
# Subsystem inconsistency: trajectories are representation-dependent

_SPIN_POSITIONS = np.array([1.0, -1.0])  # sigma_z eigenvalues of |0>, |1>


def _spin_hit_vector(width: float, rng: np.random.Generator, born: np.ndarray) -> np.ndarray:
    """Hit multiplier over the sigma_z coordinate (+1, -1)."""
    born = born / born.sum()
    j = int(rng.choice(2, p=born))
    center = _SPIN_POSITIONS[j] + (width / np.sqrt(2.0)) * rng.standard_normal()
    return np.exp(-((_SPIN_POSITIONS - center) ** 2) / (2.0 * width**2))


@dataclass(frozen=True, eq=False)
class SubsystemComparisonReport:
    """Unravelling a composite vs unravelling the subsystem alone.

    Trajectory-level statistics (the variance of <sigma_z> across
    trajectories) differ between the two procedures for entangled input;
    the ensemble means still agree within Monte Carlo error.
    """

    n_traj: int
    mean_composite: DensityMatrix
    mean_subsystem: DensityMatrix
    max_mean_deviation: float
    mean_sigma_z_composite: float
    mean_sigma_z_subsystem: float
    mean_sigma_z_se: float
    var_sigma_z_composite: float
    var_sigma_z_subsystem: float
    var_se: float
    entropy_of_mean_composite: float
    mean_trajectory_entropy_composite: float

    def to_json(self) -> dict[str, Any]:
        return {
            "n_traj": self.n_traj,
            "max_mean_deviation": self.max_mean_deviation,
            "mean_sigma_z": [self.mean_sigma_z_composite, self.mean_sigma_z_subsystem],
            "mean_sigma_z_se": self.mean_sigma_z_se,
            "var_sigma_z": [self.var_sigma_z_composite, self.var_sigma_z_subsystem],
            "var_se": self.var_se,
            "entropy_of_mean": self.entropy_of_mean_composite,
            "mean_trajectory_entropy": self.mean_trajectory_entropy_composite,
        }


def subsystem_inconsistency_demo(
    state: BipartiteState,
    process: HitProcess,
    t: float,
    n_traj: int,
    base_seed: int | None = None,
) -> SubsystemComparisonReport:
    """Unravel hits acting on subsystem A of a 2x2 pure state, two ways.

    Composite procedure: trajectories live on A⊗B, hits multiply the A
    factor. Subsystem procedure: trajectories live on A alone, starting
    from the eigen-ensemble of the reduced state, same hit rule. No
    Hamiltonian (the hits alone make the point). Per-trajectory <sigma_z>
    is recorded for both; means of the reduced state are compared.
    """
    if state.dims != (2, 2):
        raise ValueError("demo is defined for 2x2 bipartite states")
    if base_seed is None:
        base_seed = process.rng_seed
    rho_a = partial_trace(state, "left")
    vals, vecs = np.linalg.eigh(rho_a.matrix)
    probs = np.clip(vals, 0.0, None)
    probs = probs / probs.sum()

    acc_comp = np.zeros((2, 2), dtype=complex)
    acc_sub = np.zeros((2, 2), dtype=complex)
    sz_comp = np.empty(n_traj)
    sz_sub = np.empty(n_traj)
    entropy_sum = 0.0
    for k in range(n_traj):
        rng = np.random.default_rng(np.random.SeedSequence((base_seed, k)))
        n_hits = rng.poisson(process.rate * t)
        # composite: psi as 2x2 coefficient matrix, hits multiply rows
        c = np.array(state.coeffs)
        for _ in range(n_hits):
            born = np.sum(np.abs(c) ** 2, axis=1)
            mult = _spin_hit_vector(process.width, rng, born)
            c = mult[:, None] * c
            norm = np.linalg.norm(c)
            if norm < NORM_UNDERFLOW:
                raise FloatingPointError("norm underflow in composite trajectory")
            c = c / norm
        red = c @ c.conj().T
        acc_comp += red
        sz_comp[k] = float(np.real(np.trace(SIGMA_Z @ red)))
        entropy_sum += von_neumann_entropy(
            DensityMatrix(0.5 * (red + red.conj().T))
        )
        # subsystem: pure 2-vector from the eigen-ensemble, same hit count
        # statistics (fresh draws from the same stream keep the procedures
        # independent but reproducible)
        phi = vecs[:, int(rng.choice(2, p=probs))].astype(complex)
        m_hits = rng.poisson(process.rate * t)
        for _ in range(m_hits):
            born = np.abs(phi) ** 2
            mult = _spin_hit_vector(process.width, rng, born)
            phi = mult * phi
            norm = np.linalg.norm(phi)
            if norm < NORM_UNDERFLOW:
                raise FloatingPointError("norm underflow in subsystem trajectory")
            phi = phi / norm
        proj = np.outer(phi, phi.conj())
        acc_sub += proj
        sz_sub[k] = float(np.real(np.trace(SIGMA_Z @ proj)))

    mean_comp = acc_comp / n_traj
    mean_sub = acc_sub / n_traj
    mean_comp = 0.5 * (mean_comp + mean_comp.conj().T)
    mean_sub = 0.5 * (mean_sub + mean_sub.conj().T)
    mean_comp_dm = DensityMatrix(mean_comp)
    mean_sub_dm = DensityMatrix(mean_sub)
    se_mean = float(
        np.sqrt(np.var(sz_comp, ddof=1) / n_traj + np.var(sz_sub, ddof=1) / n_traj)
    )
    var_comp = float(np.var(sz_comp, ddof=1))
    var_sub = float(np.var(sz_sub, ddof=1))
    # rough standard error of a sample variance
    var_se = float(np.sqrt(2.0 / (n_traj - 1)) * max(var_comp, var_sub, 1e-12))
    return SubsystemComparisonReport(
        n_traj=n_traj,
        mean_composite=mean_comp_dm,
        mean_subsystem=mean_sub_dm,
        max_mean_deviation=float(np.max(np.abs(mean_comp - mean_sub))),
        mean_sigma_z_composite=float(sz_comp.mean()),
        mean_sigma_z_subsystem=float(sz_sub.mean()),
        mean_sigma_z_se=se_mean,
        var_sigma_z_composite=var_comp,
        var_sigma_z_subsystem=var_sub,
        var_se=var_se,
        entropy_of_mean_composite=von_neumann_entropy(mean_comp_dm),
        mean_trajectory_entropy_composite=entropy_sum / n_traj,
    )
