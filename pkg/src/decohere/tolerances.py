"""Shared numerical tolerances.

All defaults are module-level constants so callers can reference a single
source of truth in assertions and tests.
"""

# Unit-norm / unit-trace checks (state vectors, ensembles, density matrices).
EPS_NORM = 1e-12

# Hermiticity checks, max-abs deviation of M - M^dagger.
EPS_HERM = 1e-10

# Positive-semidefiniteness: smallest eigenvalue must be >= -EPS_PSD.
# Eigenvalues within EPS_PSD of 0 or 1 are clamped before logarithms.
EPS_PSD = 1e-10

# Round-trip / algebraic-identity checks (reconstructions, idempotence).
EPS_RT = 1e-10

# Eigenvalues and probabilities below this are treated as exact zeros when
# pruning decompositions (machine-precision scale, well below EPS_PSD).
ZERO_CUTOFF = 1e-14
