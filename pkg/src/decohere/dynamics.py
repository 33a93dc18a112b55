"""Lindblad-form open-system dynamics.

Fixed-step RK4 integration of

    drho/dt = -i[H, rho] - 1/2 sum_k (L†_k L_k rho + rho L†_k L_k - 2 L_k rho L†_k)

with arbitrary generators L_k, propagator construction column-by-column,
complete-positivity verification through the Choi spectrum, and the
information-gain criterion (some sum of [L_k, L†_k] nonzero).

Choi convention: C = (Phi ⊗ id)(|Omega><Omega|) with the unnormalized
maximally entangled |Omega> = sum_i |ii>, i.e. C = sum_ij Phi(E_ij) ⊗ E_ij.
Conventions differ between references; this one makes C's trace equal d for
trace-preserving maps.

RK4 is fixed-step on purpose: runs are deterministic and reproducible at
the d <= 64 scale this package targets. Use step_halving_error to check
convergence of a given step count.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any

import numpy as np

from . import serialize
from .hilbert import DensityMatrix, Observable, Provenance
from .tolerances import EPS_PSD, EPS_RT
from .zwanzig import Superoperator, unvec, vec

__all__ = [
    "LindbladModel",
    "PropagatorReport",
    "lindblad_rhs",
    "integrate",
    "propagator",
    "information_gain",
    "step_halving_error",
    "choi_matrix",
    "transposition_superoperator",
    "choi_report",
]

logger = logging.getLogger(__name__)

# Per-step hermiticity corrections above this abort an integration run.
MAX_STEP_CORRECTION = 1e-6


@dataclass(frozen=True, eq=False)
class LindbladModel:
    """Hamiltonian plus a list of arbitrary (not necessarily hermitian or
    normal) generators L_k, all on one Hilbert space."""

    hamiltonian: Observable
    generators: tuple[np.ndarray, ...] = ()

    def __post_init__(self):
        gens = []
        d = self.hamiltonian.dim
        for l in self.generators:
            l = np.asarray(l, dtype=complex)
            if l.shape != (d, d):
                raise ValueError(f"generator shape {l.shape} != ({d}, {d})")
            l = l.copy()
            l.flags.writeable = False
            gens.append(l)
        object.__setattr__(self, "generators", tuple(gens))

    @property
    def dim(self) -> int:
        return self.hamiltonian.dim

    def to_json(self) -> dict[str, Any]:
        return serialize.lindblad_model_to_json(
            self.hamiltonian.matrix, list(self.generators)
        )

    @classmethod
    def from_json(cls, payload: dict[str, Any]) -> "LindbladModel":
        h, ls = serialize.lindblad_model_from_json(payload)
        return cls(Observable(h), tuple(ls))


def _rhs_matrix(model: LindbladModel, rho: np.ndarray) -> np.ndarray:
    h = model.hamiltonian.matrix
    out = -1j * (h @ rho - rho @ h)
    for l in model.generators:
        ldl = l.conj().T @ l
        out -= 0.5 * (ldl @ rho + rho @ ldl - 2.0 * l @ rho @ l.conj().T)
    return out


def lindblad_rhs(model: LindbladModel, rho: DensityMatrix | np.ndarray) -> np.ndarray:
    """drho/dt for the given model; traceless and hermiticity-consistent."""
    mat = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if mat.shape != (model.dim, model.dim):
        raise ValueError(f"state shape {mat.shape} != model dimension {model.dim}")
    return _rhs_matrix(model, mat)


def _rk4_step(model: LindbladModel, rho: np.ndarray, dt: float) -> np.ndarray:
    k1 = _rhs_matrix(model, rho)
    k2 = _rhs_matrix(model, rho + 0.5 * dt * k1)
    k3 = _rhs_matrix(model, rho + 0.5 * dt * k2)
    k4 = _rhs_matrix(model, rho + dt * k3)
    return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _evolve_raw(model: LindbladModel, mat: np.ndarray, t: float, steps: int) -> np.ndarray:
    """RK4 on an arbitrary matrix, no symmetrization (used for propagator
    columns, where inputs are not hermitian)."""
    dt = t / steps
    for _ in range(steps):
        mat = _rk4_step(model, mat, dt)
    return mat


def integrate(
    model: LindbladModel, rho0: DensityMatrix, t: float, steps: int
) -> DensityMatrix:
    """Evolve rho0 for time t with `steps` fixed RK4 steps.

    The state is re-symmetrized each step, rho <- (rho + rho†)/2, with the
    largest correction logged; a correction above MAX_STEP_CORRECTION or a
    spectrum dipping below -10*EPS_PSD aborts (step too large or model
    invalid).
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if t < 0:
        raise ValueError("t must be non-negative")
    dt = t / steps
    rho = np.array(rho0.matrix)
    max_correction = 0.0
    for _ in range(steps):
        rho = _rk4_step(model, rho, dt)
        sym = 0.5 * (rho + rho.conj().T)
        correction = float(np.max(np.abs(rho - sym)))
        if correction > MAX_STEP_CORRECTION:
            raise RuntimeError(
                f"hermiticity correction {correction:.3e} exceeds "
                f"{MAX_STEP_CORRECTION}; reduce dt"
            )
        max_correction = max(max_correction, correction)
        rho = sym
    logger.debug("integrate: max per-step hermiticity correction %.3e", max_correction)
    smallest = float(np.linalg.eigvalsh(rho)[0])
    if smallest < -10.0 * EPS_PSD:
        raise RuntimeError(
            f"positivity breach: eigenvalue {smallest:.3e} below {-10 * EPS_PSD}; "
            "step too large or model invalid"
        )
    return DensityMatrix(rho, rho0.provenance)


def choi_matrix(superop: np.ndarray, dim: int) -> np.ndarray:
    """C = sum_ij Phi(E_ij) ⊗ E_ij from the superoperator matrix."""
    c = np.zeros((dim * dim, dim * dim), dtype=complex)
    for i in range(dim):
        for j in range(dim):
            e = np.zeros((dim, dim), dtype=complex)
            e[i, j] = 1.0
            phi_e = unvec(superop @ vec(e))
            c += np.kron(phi_e, e)
    return c


def choi_report(superop: np.ndarray, dim: int) -> tuple[float, float]:
    """(smallest Choi eigenvalue, trace defect on I/d) for a superoperator."""
    c = choi_matrix(superop, dim)
    c = 0.5 * (c + c.conj().T)
    min_eig = float(np.linalg.eigvalsh(c)[0])
    out = unvec(superop @ vec(np.eye(dim) / dim))
    trace_defect = abs(complex(out.trace()) - 1.0)
    return min_eig, trace_defect


@dataclass(frozen=True, eq=False)
class PropagatorReport:
    """A finite-time quantum dynamical map plus its verification data.

    choi_min_eigenvalue >= -1e-8 certifies complete positivity at desk
    scale; trace_defect measures the action on the maximally mixed state.
    """

    superoperator: Superoperator
    choi_min_eigenvalue: float
    trace_defect: float
    is_information_creating: bool

    def __post_init__(self):
        if self.trace_defect > EPS_RT:
            raise ValueError(
                f"Lindblad propagator has trace defect {self.trace_defect:.3e}"
            )


def propagator(model: LindbladModel, t: float, steps: int = 200) -> PropagatorReport:
    """Build the finite-time map column-by-column and verify it.

    Every Lindblad model must give a PSD Choi matrix (complete positivity);
    maps built some other way (e.g. transposition) will be flagged by a
    negative eigenvalue.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    d = model.dim
    mat = np.zeros((d * d, d * d), dtype=complex)
    if t == 0:
        mat = np.eye(d * d, dtype=complex)
    else:
        for k in range(d * d):
            e = np.zeros(d * d, dtype=complex)
            e[k] = 1.0
            mat[:, k] = vec(_evolve_raw(model, unvec(e), t, steps))
    min_eig, trace_defect = choi_report(mat, d)
    return PropagatorReport(
        superoperator=Superoperator(mat, f"lindblad(t={t})", trace_preserving=True),
        choi_min_eigenvalue=min_eig,
        trace_defect=trace_defect,
        is_information_creating=information_gain(model),
    )


def transposition_superoperator(dim: int) -> Superoperator:
    """The transposition map — positive but famously not completely
    positive; its Choi matrix has negative eigenvalues."""
    mat = np.zeros((dim * dim, dim * dim), dtype=complex)
    for k in range(dim * dim):
        e = np.zeros(dim * dim, dtype=complex)
        e[k] = 1.0
        mat[:, k] = vec(unvec(e).T)
    return Superoperator(mat, "transpose", trace_preserving=True)


def information_gain(model: LindbladModel) -> bool:
    """True iff the non-Hamiltonian terms can create information.

    Two equivalent criteria are evaluated and cross-checked: the dissipator
    applied to the unit matrix is nonzero, and sum_k [L_k, L†_k] != 0.
    Hermitian (more generally normal) generators give False: they only
    destroy phase relations.
    """
    d = model.dim
    eye = np.eye(d, dtype=complex)
    unital_defect = np.zeros((d, d), dtype=complex)
    commutator_sum = np.zeros((d, d), dtype=complex)
    for l in model.generators:
        ld = l.conj().T
        unital_defect -= 0.5 * (ld @ l @ eye + eye @ ld @ l - 2.0 * l @ eye @ ld)
        commutator_sum += l @ ld - ld @ l
    if not np.allclose(unital_defect, commutator_sum, atol=EPS_RT * max(1.0, float(np.max(np.abs(commutator_sum))))):
        raise AssertionError("unit-matrix and commutator criteria disagree")
    return bool(np.max(np.abs(commutator_sum)) > EPS_RT) if model.generators else False


def step_halving_error(
    model: LindbladModel, rho0: DensityMatrix, t: float, steps: int
) -> float:
    """Max-abs difference between runs at `steps` and 2*steps — a cheap
    convergence check for the fixed-step integrator."""
    coarse = integrate(model, rho0, t, steps)
    fine = integrate(model, rho0, t, 2 * steps)
    return float(np.max(np.abs(coarse.matrix - fine.matrix)))
