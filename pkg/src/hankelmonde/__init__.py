"""hankelmonde: exact-arithmetic toolkit for block-Hankel confluent
Vandermonde matrix polynomials.

The library builds the matrix families generated by u(z) = (1, ..., z^(q-1))^T
and w(z) = (1, ..., z^(r-1)) and their derivative blocks, verifies their
factorization identities symbolically, computes closed-form ranks and
determinants, parametrizes kernels, and constructs right inverses - all over
exact rational arithmetic, with an independent elimination oracle for
cross-checking.
"""

from .errors import (
    CaseViolation,
    IndexOutOfRange,
    NonSquare,
    ShapeMismatch,
    UnknownFamily,
)
from .generators import Params
from .scalarpoly import (
    Poly,
    PolyMatrix,
    Rational,
    eval_matrix,
    factorial_diag,
    kron,
    mat_mul,
    poly_derivative,
    shift_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "Params",
    "Poly",
    "PolyMatrix",
    "Rational",
    "poly_derivative",
    "mat_mul",
    "kron",
    "shift_matrix",
    "factorial_diag",
    "eval_matrix",
    "ShapeMismatch",
    "NonSquare",
    "IndexOutOfRange",
    "CaseViolation",
    "UnknownFamily",
    "__version__",
]
