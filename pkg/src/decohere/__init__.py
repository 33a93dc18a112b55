"""Density-matrix toolkit and scenario runner for decoherence studies.

Subpackages cover state/operator algebra (hilbert), composite systems
(bipartite), projection superoperators (zwanzig), Lindblad dynamics
(dynamics), two-level coherence vectors (bloch), phase-space transforms
(wigner), position-grid localization (localization), stochastic
unravelling (unravel), and the command-line scenario runner (cli).
"""

from .hilbert import (
    DensityMatrix,
    Ensemble,
    Observable,
    Provenance,
    StateVector,
    density_from_ensemble,
    eigen_ensemble,
    ensemble_expectation,
    purity,
    von_neumann_entropy,
    von_neumann_step,
)
from .bipartite import (
    BipartiteState,
    SchmidtDecomposition,
    classical_projection,
    is_entangled_ppt,
    partial_trace,
    premeasure,
    schmidt_decompose,
)
from .zwanzig import (
    SemidiagSpec,
    Superoperator,
    coarse_grained_generator,
    entropy_change,
    project_semidiag,
    project_sep,
    project_sub,
)
from .dynamics import (
    LindbladModel,
    PropagatorReport,
    information_gain,
    integrate,
    lindblad_rhs,
    propagator,
)
from .bloch import (
    AffineMapSpec,
    AdmissibilityError,
    BlochParams,
    CoherenceVector,
    PolarizationVector,
    apply_affine_map,
    bloch_from_rho,
    bloch_integrate,
    bloch_rhs,
    coherence_vector,
    rho_from_bloch,
    rho_from_coherence,
    su_n_generators,
)
from .grids import GridState, PhaseSpaceGrid
from .wigner import (
    WignerFunction,
    expectation_phase_space,
    finite_interval_correction,
    wigner_transform,
)
from .localization import (
    LocalizationParams,
    coherence_length,
    dipole_radiation_probability,
    master_rhs,
    evolve,
)
from .unravel import (
    HitProcess,
    TrajectoryEnsembleReport,
    ensemble_mean,
    run_trajectory,
    subsystem_inconsistency_demo,
)

__version__ = "0.1.0"
