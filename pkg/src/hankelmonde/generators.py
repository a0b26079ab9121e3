"""Constructors for the matrix-polynomial families.

Everything is built from the row/column moment vectors

    u(z) = (1, z, ..., z^(q-1))^T        (q x 1)
    w(z) = (1, z, ..., z^(r-1))          (1 x r)

and the rank-one product M(z) = u(z) w(z).  The block families are indexed by
the parameter quadruple (q, r, mu, nu); 0-based indices throughout, block
(i, j) of a mu x nu block grid has i < mu and j < nu.

Families:

    calM(z)     blocks M^(i+j)(z)                        (block Hankel)
    calN(z)     blocks M^(i+j)(z) / (i! j!)
    calA(z)     blocks A^(i+j)(z), A^k per make_Ak       (block Hankel)
    calAbar     constant, blocks e_j f_i^T (zero-extended basis vectors)
    calAhat     constant, block (i,j) carries C(i+j, i) on its antidiagonal
    calAtilde   constant, block (i,j) carries (i+j)! on its antidiagonal
    U_q, W_r    confluent Vandermonde square factors (columns/rows are
                derivatives of u / w); U~ and W~ are their 1/j!-normalised
                versions, with U~(z)^-1 = U~(-z)
    L_{m,k}(z)  block lower triangular with blocks C(i,j) * J_k(z)^(i-j),
                J_k(z) = z I_k + S_k^T
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .scalarpoly import (
    Poly,
    PolyMatrix,
    factorial_diag,
    factorial_diag_inv,
    from_blocks,
    kron,
    mat_mul,
    shift_matrix,
)


@dataclass(frozen=True)
class Params:
    """The quadruple (q, r, mu, nu) of strictly positive integers."""

    q: int
    r: int
    mu: int
    nu: int

    def __post_init__(self):
        for name in ("q", "r", "mu", "nu"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")


def make_u(q: int) -> PolyMatrix:
    """Column (1, z, ..., z^(q-1))^T."""
    return PolyMatrix._trusted(q, 1, [Poly.monomial(i) for i in range(q)])


def make_w(r: int) -> PolyMatrix:
    """Row (1, z, ..., z^(r-1))."""
    return PolyMatrix._trusted(1, r, [Poly.monomial(j) for j in range(r)])


def make_M(q: int, r: int) -> PolyMatrix:
    """M(z) = u(z) w(z), the q x r rank-one moment matrix with M_ij = z^(i+j)."""
    return mat_mul(make_u(q), make_w(r))


def make_M_deriv(p: Params, k: int) -> PolyMatrix:
    """k-th derivative of M(z); identically zero once k > q + r - 2."""
    if k < 0:
        raise ValueError("derivative order must be >= 0")
    return make_M(p.q, p.r).map(lambda e: e.derivative(k))


def make_calM(p: Params) -> PolyMatrix:
    """mu*q x nu*r block-Hankel matrix with block (i, j) = M^(i+j)(z)."""
    M = make_M(p.q, p.r)
    derivs = [M]
    for _ in range(p.mu + p.nu - 2):
        derivs.append(derivs[-1].map(lambda e: e.derivative()))
    return from_blocks([[derivs[i + j] for j in range(p.nu)] for i in range(p.mu)])


def make_calN(p: Params) -> PolyMatrix:
    """mu*q x nu*r block matrix with block (i, j) = M^(i+j)(z) / (i! j!)."""
    M = make_M(p.q, p.r)
    derivs = [M]
    for _ in range(p.mu + p.nu - 2):
        derivs.append(derivs[-1].map(lambda e: e.derivative()))
    grid = [
        [derivs[i + j] * (inv_factorial(i) * inv_factorial(j)) for j in range(p.nu)]
        for i in range(p.mu)
    ]
    return from_blocks(grid)


@lru_cache(maxsize=None)
def inv_factorial(n: int) -> Fraction:
    """1/n! as an exact scalar."""
    return Fraction(1, factorial(n))


def make_U(q: int) -> PolyMatrix:
    """U_q(z) = (u(z), u'(z), ..., u^(q-1)(z)); invertible for every z."""
    u = make_u(q)
    cols = [u]
    for _ in range(q - 1):
        cols.append(cols[-1].map(lambda e: e.derivative()))
    return PolyMatrix._trusted(
        q, q, [cols[j].entries[i] for i in range(q) for j in range(q)]
    )


def make_W(r: int) -> PolyMatrix:
    """W_r(z), whose row i is w^(i)(z)."""
    w = make_w(r)
    rows = [w]
    for _ in range(r - 1):
        rows.append(rows[-1].map(lambda e: e.derivative()))
    return PolyMatrix._trusted(
        r, r, [rows[i].entries[j] for i in range(r) for j in range(r)]
    )


def make_U_tilde(q: int) -> PolyMatrix:
    """Normalised version with entries C(i, j) z^(i-j); unit lower triangular."""
    es = [Poly() for _ in range(q * q)]
    for i in range(q):
        for j in range(i + 1):
            es[i * q + j] = Poly.monomial(i - j, comb(i, j))
    return PolyMatrix._trusted(q, q, es)


def make_W_tilde(r: int) -> PolyMatrix:
    """Normalised version with entries C(j, i) z^(j-i); unit upper triangular."""
    es = [Poly() for _ in range(r * r)]
    for i in range(r):
        for j in range(i, r):
            es[i * r + j] = Poly.monomial(j - i, comb(j, i))
    return PolyMatrix._trusted(r, r, es)


def make_J(k: int) -> PolyMatrix:
    """J_k(z) = z I_k + S_k^T (a lower bidiagonal Jordan-type block)."""
    m = shift_matrix(k).transpose()
    z = Poly.monomial(1)
    es = list(m.entries)
    for i in range(k):
        es[i * k + i] = es[i * k + i] + z
    return PolyMatrix._trusted(k, k, es)


def make_Ak(q: int, r: int, k: int) -> PolyMatrix:
    """The q x r quasi-symmetric matrix with entries

        A^k_ij(z) = (k; i, j) z^(k-i-j)   for i + j <= k,   0 otherwise,

    where (k; i, j) = k! / (i! j! (k-i-j)!); equivalently the (i+j)-th
    derivative of z^k divided by i! j!.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    es = [Poly() for _ in range(q * r)]
    for i in range(q):
        if i > k:
            break
        for j in range(min(r, k - i + 1)):
            es[i * r + j] = Poly.monomial(k - i - j, comb(k, i) * comb(k - i, j))
    return PolyMatrix._trusted(q, r, es)


def make_calA(p: Params) -> PolyMatrix:
    """mu*q x nu*r block-Hankel matrix with block (i, j) = A^(i+j)(z)."""
    aks = [make_Ak(p.q, p.r, k) for k in range(p.mu + p.nu - 1)]
    return from_blocks([[aks[i + j] for j in range(p.nu)] for i in range(p.mu)])


def unit_column(i: int, n: int) -> PolyMatrix:
    """Standard basis column e_i of R^n, zero-extended: the zero column for i >= n."""
    es = [Poly() for _ in range(n)]
    if 0 <= i < n:
        es[i] = Poly((1,))
    return PolyMatrix._trusted(n, 1, es)


def make_calAbar(p: Params) -> PolyMatrix:
    """Constant mu*q x nu*r block matrix with block (i, j) = e_j f_i^T.

    e_j is the j-th basis column of R^q and f_i the i-th basis column of R^r,
    both taken as zero once the index reaches the dimension; so block (i, j)
    has a single 1 at position (j, i) when j < q and i < r, and is the zero
    block otherwise.
    """
    q, r = p.q, p.r
    R, C = p.mu * q, p.nu * r
    es = [Poly() for _ in range(R * C)]
    one = Poly((1,))
    for i in range(min(p.mu, r)):
        for j in range(min(p.nu, q)):
            es[(i * q + j) * C + (j * r + i)] = one
    return PolyMatrix._trusted(R, C, es)


def make_calAhat(p: Params) -> PolyMatrix:
    """Constant block matrix; block (i, j) has C(i+j, i) on its k+l = i+j antidiagonal."""
    q, r = p.q, p.r
    R, C = p.mu * q, p.nu * r
    es = [Poly() for _ in range(R * C)]
    for i in range(p.mu):
        for j in range(p.nu):
            c = Poly((comb(i + j, i),))
            for k in range(q):
                l = i + j - k
                if 0 <= l < r:
                    es[(i * q + k) * C + (j * r + l)] = c
    return PolyMatrix._trusted(R, C, es)


def make_calAtilde(p: Params) -> PolyMatrix:
    """Constant block matrix; block (i, j) has (i+j)! on its k+l = i+j antidiagonal.

    Equals D_q A^(i+j)(0) D_r blockwise.
    """
    q, r = p.q, p.r
    R, C = p.mu * q, p.nu * r
    es = [Poly() for _ in range(R * C)]
    for i in range(p.mu):
        for j in range(p.nu):
            c = Poly((factorial(i + j),))
            for k in range(q):
                l = i + j - k
                if 0 <= l < r:
                    es[(i * q + k) * C + (j * r + l)] = c
    return PolyMatrix._trusted(R, C, es)


def _L_blocks(m: int, k: int, signed: bool) -> PolyMatrix:
    J = make_J(k)
    powers = [PolyMatrix.identity(k)]
    for _ in range(m - 1):
        powers.append(mat_mul(powers[-1], J))
    zero = PolyMatrix.zeros(k, k)
    grid = []
    for i in range(m):
        row = []
        for j in range(m):
            if j > i:
                row.append(zero)
            else:
                c = comb(i, j) * ((-1) ** (i - j) if signed else 1)
                row.append(powers[i - j] * c)
        grid.append(row)
    return from_blocks(grid)


def make_L(m: int, k: int) -> PolyMatrix:
    """Block lower triangular m*k x m*k matrix with blocks C(i, j) J_k(z)^(i-j)."""
    if m < 1 or k < 1:
        raise ValueError("block count and block size must be >= 1")
    return _L_blocks(m, k, signed=False)


def make_L_inverse(m: int, k: int) -> PolyMatrix:
    """Exact inverse of make_L(m, k): blocks C(i, j) J_k(z)^(i-j) (-1)^(i-j)."""
    if m < 1 or k < 1:
        raise ValueError("block count and block size must be >= 1")
    return _L_blocks(m, k, signed=True)


__all__ = [
    "Params",
    "make_u",
    "make_w",
    "make_M",
    "make_M_deriv",
    "make_calM",
    "make_calN",
    "make_U",
    "make_W",
    "make_U_tilde",
    "make_W_tilde",
    "make_J",
    "make_Ak",
    "make_calA",
    "make_calAbar",
    "make_calAhat",
    "make_calAtilde",
    "make_L",
    "make_L_inverse",
    "unit_column",
    "factorial_diag",
    "factorial_diag_inv",
]
