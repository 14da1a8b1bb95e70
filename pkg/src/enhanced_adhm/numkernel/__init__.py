"""Field-generic dense linear algebra over exact Gaussian rationals and floats."""

from .eigen import EigenStructure, IrrationalSpectrumError, charpoly, eigen_structure
from .linalg import (
    FLOAT_RANK_RTOL,
    InconsistentSystemError,
    SingularMatrixError,
    in_column_space,
    inverse,
    mat_vec,
    nullspace,
    rank,
    rref,
    solve,
)
from .matrix import Matrix, MixedRealizationError
from .scalar import EXACT, FLOAT, GaussQ

__all__ = [
    "EXACT",
    "FLOAT",
    "FLOAT_RANK_RTOL",
    "EigenStructure",
    "GaussQ",
    "InconsistentSystemError",
    "SingularMatrixError",
    "inverse",
    "IrrationalSpectrumError",
    "Matrix",
    "MixedRealizationError",
    "charpoly",
    "eigen_structure",
    "in_column_space",
    "mat_vec",
    "nullspace",
    "rank",
    "rref",
    "solve",
]
