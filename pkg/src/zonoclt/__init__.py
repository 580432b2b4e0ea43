"""Exact zonotope volumes, Gaussian moment constants, U-statistics and a
Monte Carlo harness for central limit theorems of random cube projections."""

__version__ = "0.1.0"

from .errors import BudgetExceededError, InvalidInputError, RankDeficiencyError
from .geometry import (
    SplittingTriple,
    Zonotope,
    cube_projection_volume,
    minkowski_oracle,
    mixed_volume_segments,
    sample_splitting_triple,
    zonotope_volume,
)
from .linalg import (
    OrthonormalBasis,
    det,
    det_via_projections,
    gram_det_sqrt,
    orthonormalize_rows,
    project_complement,
)
from .randomness import (
    GrassmannSample,
    SeededStream,
    sample_chi,
    sample_gaussian_matrix,
    sample_grassmannian,
    sample_ynfactor,
)

__all__ = [
    "BudgetExceededError",
    "GrassmannSample",
    "InvalidInputError",
    "OrthonormalBasis",
    "RankDeficiencyError",
    "SeededStream",
    "SplittingTriple",
    "Zonotope",
    "cube_projection_volume",
    "det",
    "det_via_projections",
    "gram_det_sqrt",
    "minkowski_oracle",
    "mixed_volume_segments",
    "orthonormalize_rows",
    "project_complement",
    "sample_chi",
    "sample_gaussian_matrix",
    "sample_grassmannian",
    "sample_splitting_triple",
    "sample_ynfactor",
    "zonotope_volume",
]
