"""Core state/operator algebra.

State vectors, hermitian observables, ensembles of weighted states, density
matrices with validated invariants, von Neumann entropy, and exact unitary
evolution steps. All types are immutable values; every operation is a pure
function, so instances can be shared freely between threads.

Entropy is reported in nats (k = 1); divide by ln 2 for bits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from .tolerances import EPS_HERM, EPS_NORM, EPS_PSD, EPS_RT, ZERO_CUTOFF

__all__ = [
    "Provenance",
    "StateVector",
    "Observable",
    "Ensemble",
    "DensityMatrix",
    "density_from_ensemble",
    "ensemble_expectation",
    "von_neumann_entropy",
    "purity",
    "eigen_ensemble",
    "von_neumann_step",
    "unitary_from_hamiltonian",
    "fix_phase",
    "basis_state",
    "random_state_vector",
    "random_density_matrix",
    "random_unitary",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "SIGMA_PLUS",
    "SIGMA_MINUS",
]

# Spectral matrix exponentials are exact for hermitian H; above this size
# fall back to scipy's scaling-and-squaring.
_SPECTRAL_EXPM_MAX_DIM = 64


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.flags.writeable = False
    return a


SIGMA_X = _readonly(np.array([[0, 1], [1, 0]], dtype=complex))
SIGMA_Y = _readonly(np.array([[0, -1j], [1j, 0]], dtype=complex))
SIGMA_Z = _readonly(np.array([[1, 0], [0, -1]], dtype=complex))
# qubit ladder convention: |1> is the excited level, SIGMA_MINUS de-excites
SIGMA_PLUS = _readonly(np.array([[0, 0], [1, 0]], dtype=complex))   # |1><0|
SIGMA_MINUS = _readonly(np.array([[0, 1], [0, 0]], dtype=complex))  # |0><1|


class Provenance(Enum):
    """How a density matrix came about.

    Metadata only: a matrix built from a genuine ensemble and one obtained by
    reducing an entangled whole are operationally identical, and nothing in
    this package branches on the tag.
    """

    FROM_ENSEMBLE = "from_ensemble"
    REDUCED = "reduced"
    DIRECT = "direct"


def _as_complex_array(data, name: str, ndim: int) -> np.ndarray:
    arr = np.asarray(data, dtype=complex)
    if arr.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    return arr


def hermiticity_defect(matrix: np.ndarray) -> float:
    """Max-abs deviation of M from its own adjoint."""
    return float(np.max(np.abs(matrix - matrix.conj().T))) if matrix.size else 0.0


@dataclass(frozen=True, eq=False)
class StateVector:
    """A normalized pure state; ``amplitudes`` has unit 2-norm."""

    amplitudes: np.ndarray
    atol: float = field(default=EPS_NORM, repr=False, compare=False)

    def __post_init__(self):
        amp = _as_complex_array(self.amplitudes, "amplitudes", 1)
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > self.atol:
            raise ValueError(f"state vector norm {norm} deviates from 1 by more than {self.atol}")
        object.__setattr__(self, "amplitudes", _readonly(amp))

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True, eq=False)
class Observable:
    """A hermitian operator; optionally carries its spectral form."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = _as_complex_array(self.matrix, "matrix", 2)
        if mat.shape[0] != mat.shape[1]:
            raise ValueError(f"observable must be square, got {mat.shape}")
        defect = hermiticity_defect(mat)
        if defect > EPS_HERM:
            raise ValueError(f"observable is not hermitian (defect {defect:.3e})")
        object.__setattr__(self, "matrix", _readonly(mat))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def spectral(self) -> tuple[np.ndarray, list[np.ndarray]]:
        """Eigenvalues (ascending) and rank-1 projectors onto eigenvectors."""
        vals, vecs = np.linalg.eigh(self.matrix)
        projs = [np.outer(vecs[:, k], vecs[:, k].conj()) for k in range(self.dim)]
        return vals, projs


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Weighted states (psi_a, p_a); members need not be orthogonal and may
    form an overcomplete set, so the ensemble is not recoverable from its
    density matrix."""

    members: tuple[tuple[StateVector, float], ...]

    def __post_init__(self):
        members = tuple((sv, float(p)) for sv, p in self.members)
        if not members:
            raise ValueError("ensemble needs at least one member")
        dims = {sv.dim for sv, _ in members}
        if len(dims) != 1:
            raise ValueError(f"ensemble members have mixed dimensions {sorted(dims)}")
        probs = np.array([p for _, p in members])
        if np.any(probs < 0):
            raise ValueError("ensemble probabilities must be non-negative")
        if abs(probs.sum() - 1.0) > EPS_NORM:
            raise ValueError(f"ensemble probabilities sum to {probs.sum()}, not 1")
        object.__setattr__(self, "members", members)

    @property
    def dim(self) -> int:
        return self.members[0][0].dim

    def probabilities(self) -> np.ndarray:
        return np.array([p for _, p in self.members])


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite operator.

    Invariants are checked on construction: hermiticity within EPS_HERM,
    trace within EPS_NORM of 1, smallest eigenvalue >= -EPS_PSD.
    """

    matrix: np.ndarray
    provenance: Provenance = Provenance.DIRECT

    def __post_init__(self):
        mat = _as_complex_array(self.matrix, "matrix", 2)
        if mat.shape[0] != mat.shape[1]:
            raise ValueError(f"density matrix must be square, got {mat.shape}")
        defect = hermiticity_defect(mat)
        if defect > EPS_HERM:
            raise ValueError(f"density matrix is not hermitian (defect {defect:.3e})")
        tr = mat.trace()
        if abs(tr - 1.0) > EPS_NORM:
            raise ValueError(f"density matrix trace {tr} deviates from 1")
        smallest = float(np.linalg.eigvalsh(mat)[0])
        if smallest < -EPS_PSD:
            raise ValueError(f"density matrix has negative eigenvalue {smallest:.3e}")
        object.__setattr__(self, "matrix", _readonly(mat))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        """Real spectrum, ascending."""
        return np.linalg.eigvalsh(self.matrix)


def basis_state(dim: int, index: int) -> StateVector:
    amp = np.zeros(dim, dtype=complex)
    amp[index] = 1.0
    return StateVector(amp)


def fix_phase(vector: np.ndarray, atol: float = EPS_NORM) -> np.ndarray:
    """Multiply by a global phase so the first component with |v_i| > atol
    is real and positive. Deterministic convention used by every
    decomposition in the package."""
    vector = np.asarray(vector, dtype=complex)
    for v in vector:
        if abs(v) > atol:
            phase = v / abs(v)
            return vector / phase
    return vector.copy()


def density_from_ensemble(ensemble: Ensemble) -> DensityMatrix:
    """rho = sum_a p_a |psi_a><psi_a| — the mean of member projectors."""
    dim = ensemble.dim
    rho = np.zeros((dim, dim), dtype=complex)
    for sv, p in ensemble.members:
        rho += p * sv.projector()
    return DensityMatrix(rho, Provenance.FROM_ENSEMBLE)


def ensemble_expectation(rho: DensityMatrix, a: Observable) -> float:
    """Trace{A rho}: the twofold mean over ensemble weights and outcome
    probabilities. The imaginary residue must vanish for hermitian A."""
    if rho.dim != a.dim:
        raise ValueError(f"dimension mismatch: rho is {rho.dim}, observable is {a.dim}")
    value = complex(np.trace(a.matrix @ rho.matrix))
    if abs(value.imag) > EPS_HERM:
        raise ValueError(f"expectation has imaginary part {value.imag:.3e}")
    return value.real


def _clamped_spectrum(rho: DensityMatrix) -> np.ndarray:
    vals = rho.eigenvalues()
    if vals[0] < -EPS_PSD:
        raise ValueError(f"eigenvalue {vals[0]:.3e} below -{EPS_PSD}; not a state")
    return np.clip(vals, 0.0, 1.0)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """S = -Trace{rho ln rho} in nats, with the 0 ln 0 = 0 convention.

    Eigenvalues within EPS_PSD of [0, 1] are clamped onto the interval
    before the logarithm; anything below -EPS_PSD is an error.
    """
    vals = _clamped_spectrum(rho)
    positive = vals[vals > 0.0]
    return float(-np.sum(positive * np.log(positive)))


def purity(rho: DensityMatrix) -> float:
    """Trace{rho^2}, in [1/d, 1]."""
    return float(np.real(np.trace(rho.matrix @ rho.matrix)))


def _lex_key(vector: np.ndarray) -> tuple:
    return tuple(np.stack([vector.real, vector.imag], axis=1).reshape(-1))


def eigen_ensemble(rho: DensityMatrix) -> Ensemble:
    """The spectral ensemble of rho: orthonormal eigenstates with their
    eigenvalues as weights.

    Eigenvalues sorted descending; zero-probability members (below machine
    cutoff) are dropped and the survivors renormalized. Ties are broken by
    descending lexicographic order of the phase-fixed eigenvectors, so the
    decomposition is deterministic even for degenerate spectra.
    """
    vals, vecs = np.linalg.eigh(rho.matrix)
    entries = []
    for k in range(rho.dim):
        p = float(vals[k])
        if p < -EPS_PSD:
            raise ValueError(f"eigenvalue {p:.3e} below -{EPS_PSD}; not a state")
        if p <= ZERO_CUTOFF:
            continue
        entries.append((min(p, 1.0), fix_phase(vecs[:, k])))
    # descending by eigenvalue, ties by descending vector key
    entries.sort(key=lambda e: (-e[0], tuple(-x for x in _lex_key(e[1]))))
    total = sum(p for p, _ in entries)
    members = tuple((StateVector(v), p / total) for p, v in entries)
    return Ensemble(members)


def unitary_from_hamiltonian(h: Observable | np.ndarray, dt: float) -> np.ndarray:
    """U = exp(-i H dt), exact.

    Via spectral decomposition for hermitian H up to dimension 64, via
    scaling-and-squaring above.
    """
    mat = h.matrix if isinstance(h, Observable) else np.asarray(h, dtype=complex)
    if mat.shape[0] <= _SPECTRAL_EXPM_MAX_DIM:
        vals, vecs = np.linalg.eigh(mat)
        return (vecs * np.exp(-1j * vals * dt)) @ vecs.conj().T
    return scipy.linalg.expm(-1j * mat * dt)


def von_neumann_step(rho: DensityMatrix, h: Observable, dt: float) -> DensityMatrix:
    """One exact unitary step rho -> U rho U† with U = exp(-i H dt).

    Preserves trace, entropy, purity and the whole spectrum.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if rho.dim != h.dim:
        raise ValueError(f"dimension mismatch: rho is {rho.dim}, H is {h.dim}")
    u = unitary_from_hamiltonian(h, dt)
    return DensityMatrix(u @ rho.matrix @ u.conj().T, rho.provenance)


# ---------------------------------------------------------------------------
# Random sampling (used by property tests and by Superoperator verification)

def random_state_vector(dim: int, rng: np.random.Generator) -> StateVector:
    amp = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return StateVector(amp / np.linalg.norm(amp))


def random_density_matrix(dim: int, rng: np.random.Generator) -> DensityMatrix:
    """Ginibre construction: G G† normalized to unit trace."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return DensityMatrix(rho / rho.trace())


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR with phase fixing."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))
