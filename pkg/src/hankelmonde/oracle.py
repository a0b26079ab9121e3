"""Independent brute-force verification.

Rank, nullspace and determinant of evaluated matrices are computed by exact
elimination over the rationals, with no reference to any closed-form result
they are used to certify.  Sample points come from a seeded generator so runs
are reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import NonSquare, ShapeMismatch
from .scalarpoly import Poly, PolyMatrix, eval_matrix, hstack


def sample_points(
    count: int, seed: int, max_num: int = 100, max_den: int = 10
) -> list[Fraction]:
    """Deterministic distinct rational sample points with small numerators."""
    if count < 0:
        raise ValueError("count must be >= 0")
    rng = random.Random(seed)
    pts: list[Fraction] = []
    seen = set()
    while len(pts) < count:
        z = Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den))
        if z not in seen:
            seen.add(z)
            pts.append(z)
    return pts


def _fraction_grid(m: PolyMatrix, z0=None) -> list[list[Fraction]]:
    """Evaluate (when z0 is given) and return a mutable grid of Fractions."""
    if z0 is not None:
        m = eval_matrix(m, z0)
    grid = []
    for i in range(m.rows):
        row = []
        for e in m.entries[i * m.cols : (i + 1) * m.cols]:
            if e.degree > 0:
                raise ValueError("matrix has non-constant entries; evaluate first")
            row.append(Fraction(e.coeffs[0]) if e.coeffs else Fraction(0))
        grid.append(row)
    return grid


def _bareiss(grid: list[list[Fraction]]):
    """Fraction-free forward elimination (Bareiss).

    Returns (rank, pivot_columns, sign, last_pivot); for a square full-rank
    input sign * last_pivot is the determinant.
    """
    n = len(grid)
    m = len(grid[0]) if n else 0
    prev = Fraction(1)
    sign = 1
    piv_cols: list[int] = []
    row = 0
    last_piv = Fraction(1)
    for col in range(m):
        if row >= n:
            break
        piv = next((i for i in range(row, n) if grid[i][col]), None)
        if piv is None:
            continue
        if piv != row:
            grid[row], grid[piv] = grid[piv], grid[row]
            sign = -sign
        p = grid[row][col]
        for i in range(row + 1, n):
            gi = grid[i]
            gr = grid[row]
            f = gi[col]
            for j in range(col + 1, m):
                gi[j] = (p * gi[j] - f * gr[j]) / prev
            gi[col] = Fraction(0)
        prev = p
        last_piv = p
        piv_cols.append(col)
        row += 1
    return row, piv_cols, sign, last_piv


def rank_at(m: PolyMatrix, z0) -> int:
    """Exact rank of the matrix evaluated at z0."""
    grid = _fraction_grid(m, z0)
    if not grid or not grid[0]:
        return 0
    rank, _, _, _ = _bareiss(grid)
    return rank


def det_fraction_free(m: PolyMatrix) -> Fraction:
    """Exact determinant of a constant square matrix by Bareiss elimination."""
    if m.rows != m.cols:
        raise NonSquare(f"determinant of a {m.rows}x{m.cols} matrix")
    if m.rows == 0:
        return Fraction(1)
    grid = _fraction_grid(m)
    rank, _, sign, last = _bareiss(grid)
    if rank < m.rows:
        return Fraction(0)
    return sign * last


def _rref(grid: list[list[Fraction]]):
    """Reduced row echelon form in place; returns pivot column indices."""
    n = len(grid)
    m = len(grid[0]) if n else 0
    piv_cols: list[int] = []
    row = 0
    for col in range(m):
        if row >= n:
            break
        piv = next((i for i in range(row, n) if grid[i][col]), None)
        if piv is None:
            continue
        grid[row], grid[piv] = grid[piv], grid[row]
        p = grid[row][col]
        grid[row] = [x / p for x in grid[row]]
        for i in range(n):
            if i != row and grid[i][col]:
                f = grid[i][col]
                grid[i] = [a - f * b for a, b in zip(grid[i], grid[row])]
        piv_cols.append(col)
        row += 1
    return piv_cols


def nullspace_at(m: PolyMatrix, z0) -> PolyMatrix:
    """Constant matrix whose columns are a basis of the right nullspace at z0."""
    grid = _fraction_grid(m, z0)
    cols = m.cols
    if cols == 0:
        return PolyMatrix.zeros(0, 0)
    if not grid:
        return PolyMatrix.identity(cols)
    piv_cols = _rref(grid)
    free_cols = [j for j in range(cols) if j not in piv_cols]
    basis_entries = [Poly() for _ in range(cols * len(free_cols))]
    one = Poly((1,))
    for c, f in enumerate(free_cols):
        basis_entries[f * len(free_cols) + c] = one
        for row, pc in enumerate(piv_cols):
            v = grid[row][f]
            if v:
                basis_entries[pc * len(free_cols) + c] = Poly.constant(-v)
    return PolyMatrix(cols, len(free_cols), basis_entries)


def is_zero_poly_matrix(m: PolyMatrix) -> bool:
    """True iff every entry is the zero polynomial.

    The direct coefficient test is cross-checked against evaluation at
    max_degree + 1 distinct rational points; the two must agree.
    """
    direct = m.is_zero()
    npts = max(m.max_degree(), 0) + 1
    pts = sample_points(npts, seed=20_000 + npts)
    sampled = all(eval_matrix(m, z).is_zero() for z in pts)
    if sampled != direct:
        raise AssertionError("zero-test self-check failed")
    return direct


def spans_equal_at(a: PolyMatrix, b: PolyMatrix, z0) -> bool:
    """True iff the column spans of the evaluations at z0 coincide."""
    if a.rows != b.rows:
        raise ShapeMismatch(f"spans_equal_at {a.shape} vs {b.shape}")
    ra = rank_at(a, z0)
    rb = rank_at(b, z0)
    if ra != rb:
        return False
    rab = rank_at(hstack([a, b]), z0)
    return rab == ra


@dataclass
class RankCertificate:
    """Sampled ranks of a matrix polynomial at several points."""

    sample_points: list[Fraction]
    ranks: list[int]
    agreed_rank: Optional[int]


def rank_certificate(m: PolyMatrix, points: Sequence[Fraction]) -> RankCertificate:
    pts = list(points)
    ranks = [rank_at(m, z) for z in pts]
    agreed = ranks[0] if ranks and all(rk == ranks[0] for rk in ranks) else None
    return RankCertificate(pts, ranks, agreed)


__all__ = [
    "RankCertificate",
    "sample_points",
    "rank_at",
    "nullspace_at",
    "is_zero_poly_matrix",
    "spans_equal_at",
    "det_fraction_free",
    "rank_certificate",
]
