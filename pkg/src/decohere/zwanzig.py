"""Zwanzig projections on density matrices and the coarse-grained
master-equation generator.

Superoperators are stored dense, acting on column-stacked ("vec'd")
density matrices: vec(A B C) = (C^T ⊗ A) vec(B). Dimensions up to
d^2 = 4096 are supported.

Of the projector family, only the interference-dropping block projection
and the normalized subsystem projection are linear maps (representable as
superoperator matrices); the correlation-dropping product projection and
the classical-correlation projection depend on the input state and are
provided as functions with the same idempotence guarantee.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

from .bipartite import partial_trace
from .hilbert import (
    DensityMatrix,
    Observable,
    Provenance,
    hermiticity_defect,
    random_density_matrix,
    von_neumann_entropy,
)
from .tolerances import EPS_RT

__all__ = [
    "Superoperator",
    "SemidiagSpec",
    "vec",
    "unvec",
    "superoperator_from_action",
    "identity_superoperator",
    "liouvillian",
    "project_sep",
    "project_semidiag",
    "project_sub",
    "semidiag_superoperator",
    "sub_superoperator",
    "coarse_grained_generator",
    "coarse_graining_convergence",
    "entropy_change",
    "project_local",
]


def vec(matrix: np.ndarray) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return np.asarray(matrix, dtype=complex).reshape(-1, order="F")


def unvec(vector: np.ndarray) -> np.ndarray:
    """Inverse of vec for square matrices."""
    vector = np.asarray(vector, dtype=complex)
    d = int(round(np.sqrt(vector.size)))
    if d * d != vector.size:
        raise ValueError(f"vector of size {vector.size} is not a vec'd square matrix")
    return vector.reshape(d, d, order="F")


@dataclass(frozen=True, eq=False)
class Superoperator:
    """Dense linear map on vec'd density matrices.

    If trace_preserving is set True, the claim is verified on 10 random
    density matrices at construction time.
    """

    matrix: np.ndarray
    label: str = ""
    trace_preserving: bool | None = None

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"superoperator matrix must be square, got {mat.shape}")
        d = int(round(np.sqrt(mat.shape[0])))
        if d * d != mat.shape[0]:
            raise ValueError(f"superoperator size {mat.shape[0]} is not a perfect square")
        if self.trace_preserving:
            rng = np.random.default_rng(1234)
            for _ in range(10):
                rho = random_density_matrix(d, rng)
                out = unvec(mat @ vec(rho.matrix))
                if abs(out.trace() - 1.0) > EPS_RT:
                    raise ValueError(
                        f"superoperator {self.label!r} claims trace preservation "
                        f"but maps a state to trace {out.trace()}"
                    )
        mat = mat.copy()
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        """Hilbert-space dimension d (matrix acts on d^2 components)."""
        return int(round(np.sqrt(self.matrix.shape[0])))

    def apply(self, rho: DensityMatrix | np.ndarray) -> np.ndarray:
        mat = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
        return unvec(self.matrix @ vec(mat))

    def compose(self, other: "Superoperator") -> "Superoperator":
        """self after other."""
        return Superoperator(self.matrix @ other.matrix, f"{self.label}∘{other.label}")

    def is_idempotent(self, atol: float = EPS_RT) -> bool:
        return bool(np.max(np.abs(self.matrix @ self.matrix - self.matrix)) <= atol)

    def is_hs_hermitian(self, atol: float = EPS_RT) -> bool:
        """Self-adjointness w.r.t. the Hilbert-Schmidt inner product.

        In the vec representation the HS adjoint is the conjugate
        transpose, so this is plain matrix hermiticity.
        """
        return hermiticity_defect(self.matrix) <= atol


def superoperator_from_action(
    action: Callable[[np.ndarray], np.ndarray], dim: int, label: str = ""
) -> Superoperator:
    """Build the dense matrix of a linear map by applying it to the matrix
    units (columns are deterministic, so this may be parallelized)."""
    mat = np.zeros((dim * dim, dim * dim), dtype=complex)
    for k in range(dim * dim):
        e = np.zeros(dim * dim, dtype=complex)
        e[k] = 1.0
        mat[:, k] = vec(action(unvec(e)))
    return Superoperator(mat, label)


def identity_superoperator(dim: int) -> Superoperator:
    return Superoperator(np.eye(dim * dim, dtype=complex), "id", trace_preserving=True)


def liouvillian(h: Observable | np.ndarray) -> Superoperator:
    """L with L rho = [H, rho]; the von Neumann flow is exp(-i L t)."""
    mat = h.matrix if isinstance(h, Observable) else np.asarray(h, dtype=complex)
    d = mat.shape[0]
    eye = np.eye(d)
    return Superoperator(np.kron(eye, mat) - np.kron(mat.T, eye), "liouvillian")


@dataclass(frozen=True, eq=False)
class SemidiagSpec:
    """A complete set of mutually orthogonal hermitian projectors P_n."""

    projectors: tuple[np.ndarray, ...]

    def __post_init__(self):
        projs = tuple(np.asarray(p, dtype=complex) for p in self.projectors)
        if not projs:
            raise ValueError("need at least one projector")
        d = projs[0].shape[0]
        for p in projs:
            if p.shape != (d, d):
                raise ValueError("projectors must share one square shape")
            if hermiticity_defect(p) > EPS_RT:
                raise ValueError("projectors must be hermitian")
            if np.max(np.abs(p @ p - p)) > EPS_RT:
                raise ValueError("projectors must be idempotent")
        for i, p in enumerate(projs):
            for q in projs[i + 1:]:
                if np.max(np.abs(p @ q)) > EPS_RT:
                    raise ValueError("projectors must be mutually orthogonal")
        total = sum(projs)
        if np.max(np.abs(total - np.eye(d))) > EPS_RT:
            raise ValueError("projector set is incomplete (sum != identity)")
        frozen = []
        for p in projs:
            p = p.copy()
            p.flags.writeable = False
            frozen.append(p)
        object.__setattr__(self, "projectors", tuple(frozen))

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    @classmethod
    def computational(cls, dim: int) -> "SemidiagSpec":
        eye = np.eye(dim, dtype=complex)
        return cls(tuple(np.outer(eye[:, k], eye[:, k]) for k in range(dim)))


def project_sep(rho: DensityMatrix, dims: tuple[int, int]) -> DensityMatrix:
    """Drop all correlations: rho -> rho_left ⊗ rho_right.

    Idempotent as a function; not linear (the factors depend on the input),
    so it has no superoperator matrix. Raises the entropy to the sum of the
    marginal entropies.
    """
    left = partial_trace(rho, "left", dims)
    right = partial_trace(rho, "right", dims)
    return DensityMatrix(np.kron(left.matrix, right.matrix), Provenance.DIRECT)


def project_semidiag(rho: DensityMatrix, spec: SemidiagSpec) -> DensityMatrix:
    """Drop interference between the subspaces of `spec`: sum_n P_n rho P_n.

    Linear, hermitian (a genuine projection), trace preserving, and
    entropy non-decreasing.
    """
    if spec.dim != rho.dim:
        raise ValueError(f"projector dimension {spec.dim} != state dimension {rho.dim}")
    out = np.zeros_like(rho.matrix)
    for p in spec.projectors:
        out = out + p @ rho.matrix @ p
    return DensityMatrix(out, Provenance.DIRECT)


def project_sub(
    rho: DensityMatrix, dims: tuple[int, int], normalize: bool = True
) -> DensityMatrix | np.ndarray:
    """Subsystem projection rho -> rho_left ⊗ 1_right.

    With normalize=True (default) the right factor is I/n so the output is
    a valid density matrix and the map is an idempotent linear
    superoperator. With normalize=False the literal unnormalized form is
    returned as a raw array with trace = n (it violates unit trace by
    exactly that factor, and satisfies P^2 = n P rather than P^2 = P).
    """
    m, n = dims
    left = partial_trace(rho, "left", dims)
    if normalize:
        return DensityMatrix(np.kron(left.matrix, np.eye(n) / n), Provenance.DIRECT)
    return np.kron(left.matrix, np.eye(n, dtype=complex))


def project_local(rho: DensityMatrix, factor_dims: Sequence[int]) -> DensityMatrix:
    """N-fold product projection over a declared factorization list, the
    composition of pairwise correlation-dropping projections: the output
    factorizes over every listed factor."""
    dims = list(factor_dims)
    if int(np.prod(dims)) != rho.dim:
        raise ValueError(f"factors {dims} do not multiply to dimension {rho.dim}")
    current = rho
    remaining = rho.dim
    out = np.array([[1.0 + 0j]])
    for d in dims[:-1]:
        remaining //= d
        head = partial_trace(current, "left", (d, remaining))
        tail = partial_trace(current, "right", (d, remaining))
        out = np.kron(out, head.matrix)
        current = tail
    out = np.kron(out, current.matrix)
    return DensityMatrix(out, Provenance.DIRECT)


def semidiag_superoperator(spec: SemidiagSpec) -> Superoperator:
    """Matrix form of sum_n P_n · P_n (column stacking: sum_n P_n^T ⊗ P_n)."""
    mat = sum(np.kron(p.T, p) for p in spec.projectors)
    return Superoperator(mat, "semidiag", trace_preserving=True)


def sub_superoperator(dims: tuple[int, int]) -> Superoperator:
    """Matrix form of the normalized subsystem projection rho -> rho_left ⊗ I/n."""
    m, n = dims

    def action(x: np.ndarray) -> np.ndarray:
        reduced = np.einsum("injn->ij", x.reshape(m, n, m, n))
        return np.kron(reduced, np.eye(n) / n)

    out = superoperator_from_action(action, m * n, "sub")
    return Superoperator(out.matrix, out.label, trace_preserving=True)


def coarse_grained_generator(
    liouville: Superoperator, projector: Superoperator, dt: float
) -> Superoperator:
    """The coarse-grained master-equation generator over a time step dt:

        rho_rel -> (P exp(-i L dt) rho_rel - rho_rel) / dt

    as an explicit superoperator matrix. As dt -> 0 with P = id this
    approaches -i L; the choice of dt is the user's (see
    coarse_graining_convergence).
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    prop = scipy.linalg.expm(-1j * liouville.matrix * dt)
    gen = (projector.matrix @ prop - np.eye(prop.shape[0])) / dt
    return Superoperator(gen, f"coarse({liouville.label},{projector.label},dt={dt})")


def coarse_graining_convergence(
    liouville: Superoperator, projector: Superoperator, dts: Sequence[float]
) -> list[float]:
    """Max-abs differences between generators at successive dt values; a
    plateau indicates a dynamically irrelevant further refinement."""
    gens = [coarse_grained_generator(liouville, projector, dt).matrix for dt in dts]
    return [float(np.max(np.abs(a - b))) for a, b in zip(gens, gens[1:])]


def entropy_change(rho: DensityMatrix, projected: DensityMatrix) -> float:
    """S(P rho) - S(rho); non-negative for genuine projections."""
    return von_neumann_entropy(projected) - von_neumann_entropy(rho)
