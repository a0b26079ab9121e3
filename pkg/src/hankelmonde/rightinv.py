"""Right inverses of M0(z) and M(z), and the machinery behind them.

The combinatorial core is the constant matrix B0 stacking the blocks

    B^k_ij = (-1)^i C(q, k+1)   if i + j = k   (i < r, j < q),

which is a right inverse of the first block row A0 = (A^0(0), ..., A^(nu-1)(0)).
Conjugating B^k by the normalised Vandermonde factors gives H_k(z); H_k is
constant exactly when k >= q or k <= r - 1, and that constancy is what makes a
z-free right inverse of M0(z) possible when r >= q and nu >= q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, perm

from . import generators as G_mod
from .errors import CaseViolation
from .generators import Params
from .scalarpoly import (
    Poly,
    PolyMatrix,
    eval_matrix,
    factorial_diag_inv,
    from_blocks,
    hstack,
    kron,
    mat_mul,
    shift_matrix,
    vstack,
)


@dataclass
class RightInverseResult:
    """A particular right inverse plus the dimension of the affine family."""

    inverse: PolyMatrix
    is_constant: bool
    affine_freedom_dim: int


def make_Bk(q: int, r: int, k: int) -> PolyMatrix:
    """The r x q block with (-1)^i C(q, k+1) on the antidiagonal i + j = k.

    Identically zero for k >= q since C(q, k+1) = 0 then.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    es = [Poly() for _ in range(r * q)]
    c = comb(q, k + 1)
    if c:
        for i in range(r):
            j = k - i
            if 0 <= j < q:
                es[i * q + j] = Poly((c if i % 2 == 0 else -c,))
    return PolyMatrix._trusted(r, q, es)


def make_B0(q: int, r: int, nu: int) -> PolyMatrix:
    """The nu*r x q constant stack of B^0, ..., B^(nu-1)."""
    return vstack([make_Bk(q, r, k) for k in range(nu)])


def make_A0(q: int, r: int, nu: int) -> PolyMatrix:
    """The q x nu*r constant row (A^0(0), ..., A^(nu-1)(0))."""
    return hstack([eval_matrix(G_mod.make_Ak(q, r, k), 0) for k in range(nu)])


def beta_sum(q: int, i: int) -> int:
    """sum_k C(k, i) (-1)^(k-i) C(q, k+1), which telescopes to 1 for 0 <= i < q.

    This is the diagonal of A0 B0 computed as a bare integer sum, independent
    of any matrix arithmetic.
    """
    return sum(comb(k, i) * (-1) ** (k - i) * comb(q, k + 1) for k in range(q))


def verify_a0b(q: int, r: int, nu: int) -> bool:
    """Check A0 B0 = I_q exactly, plus the scalar antidiagonal sums.

    The two confirmations are independent: one is the exact matrix product,
    the other the integer identity beta_sum(q, i) = 1 for every i.
    """
    if nu < q:
        raise CaseViolation(f"the right-inverse property requires nu >= q, got nu={nu}, q={q}")
    prod_ok = mat_mul(make_A0(q, r, nu), make_B0(q, r, nu)) == PolyMatrix.identity(q)
    sums_ok = all(beta_sum(q, i) == 1 for i in range(q))
    return prod_ok and sums_ok


def make_Xk(q: int, r: int, k: int) -> PolyMatrix:
    """X^k = B^k S_q^T + S_r B^k.

    Zero exactly when k >= q or k <= r - 1; otherwise only the last row is
    nonzero, equal to (-1)^(r-1) C(q, k+1) e_(k-r)^T.
    """
    Bk = make_Bk(q, r, k)
    return mat_mul(Bk, shift_matrix(q).transpose()) + mat_mul(shift_matrix(r), Bk)


def hat_shift(k: int) -> PolyMatrix:
    """D_k^(-1) S_k D_k, the factorial-conjugated shift (entry (i, i+1) is i+1)."""
    es = [Poly() for _ in range(k * k)]
    for i in range(k - 1):
        es[i * k + i + 1] = Poly((i + 1,))
    return PolyMatrix._trusted(k, k, es)


def nilpotent_exp(m: PolyMatrix) -> PolyMatrix:
    """exp of a nilpotent square matrix as the finite sum of powers."""
    if m.rows != m.cols:
        raise ValueError("exp of a non-square matrix")
    n = m.rows
    acc = PolyMatrix.identity(n)
    term = PolyMatrix.identity(n)
    for k in range(1, n + 1):
        term = mat_mul(term, m) * Fraction(1, k)
        if term.is_zero():
            return acc
        acc = acc + term
    if not mat_mul(term, m).is_zero():
        raise ValueError("matrix is not nilpotent")
    return acc


def make_Hk(q: int, r: int, k: int) -> PolyMatrix:
    """H_k(z) = W~_r(z) D_r^(-1) B^k D_q^(-1) U~_q(z), an r x q matrix polynomial.

    Constant (equal to D_r^(-1) B^k D_q^(-1)) precisely when k >= q or
    k <= r - 1; it always solves H' = S^_r H + H S^_q^T with S^ = hat_shift.
    """
    core = mat_mul(
        mat_mul(factorial_diag_inv(r), make_Bk(q, r, k)), factorial_diag_inv(q)
    )
    return mat_mul(mat_mul(G_mod.make_W_tilde(r), core), G_mod.make_U_tilde(q))


def make_C_constant(q: int, r: int, nu: int) -> RightInverseResult:
    """The z-free right inverse C = (I_nu o D_r^(-1)) B0 D_q^(-1) of M0(z).

    Requires r >= q and nu >= q; outside that region no constant right
    inverse exists.  The affine family of constant solutions has dimension
    (nu - q) r q, so C is unique iff nu = q.
    """
    if r < q or nu < q:
        raise CaseViolation(
            f"a constant right inverse requires r >= q and nu >= q, got q={q}, r={r}, nu={nu}"
        )
    C = mat_mul(
        mat_mul(kron(PolyMatrix.identity(nu), factorial_diag_inv(r)), make_B0(q, r, nu)),
        factorial_diag_inv(q),
    )
    m0 = G_mod.make_calM(Params(q, r, 1, nu))
    if mat_mul(m0, C) != PolyMatrix.identity(q):
        raise AssertionError("constructed C is not a right inverse of M0(z)")
    return RightInverseResult(
        inverse=C, is_constant=True, affine_freedom_dim=(nu - q) * r * q
    )


def constant_kernel_basis(q: int, r: int, nu: int) -> PolyMatrix:
    """Constant basis of the z-independent part of ker M0(z).

    That subspace has dimension (nu - q)^+ r and equals the kernel of the full
    stack M(z) for every mu >= r (all of whose rows are derivatives of the
    M0 rows).  A constant x = (x_0, ..., x_(nu-1)) lies in it iff

        sum_j (s+j)!/s! * C(j+k, k) * x_(k+j, s+j) = 0

    for every k < q and s < r (expand M0(z) x blockwise over the independent
    rows w^(j) and match powers of z).  The j = 0 coefficient is 1, so the
    leading blocks x_0, ..., x_(q-1) are determined from the free tail by
    back substitution.  For q = 1 the single constraint row is instead solved
    by the bidiagonal stack built from T = S_r diag(0, ..., r-1), which is
    the constant form appearing in the worked three-by-three example.
    """
    if nu <= q:
        return PolyMatrix.zeros(nu * r, 0)
    nb = nu - q
    if q == 1:
        delta = PolyMatrix.diag(list(range(r)))
        T = mat_mul(shift_matrix(r), delta)
        zero = PolyMatrix.zeros(r, r)
        rows = []
        for m in range(nb + 1):
            row = []
            for c in range(nb):
                if m == c:
                    row.append(-T)
                elif m == c + 1:
                    row.append(PolyMatrix.identity(r))
                else:
                    row.append(zero)
            rows.append(row)
        return from_blocks(rows)

    cols = []
    for n0 in range(q, nu):
        for t0 in range(r):
            x = [[Fraction(0)] * r for _ in range(nu)]
            x[n0][t0] = Fraction(1)
            for k in range(q - 1, -1, -1):
                for s in range(r):
                    acc = Fraction(0)
                    for j in range(1, min(r - s, nu - k)):
                        c = x[k + j][s + j]
                        if c:
                            acc += perm(s + j, j) * comb(j + k, k) * c
                    x[k][s] = -acc
            cols.append([v for blk in x for v in blk])
    entries = [Poly.constant(cols[c][i]) for i in range(nu * r) for c in range(len(cols))]
    return PolyMatrix(nu * r, len(cols), entries)


def make_M_right_inverse(p: Params) -> RightInverseResult:
    """A right inverse of the full stack M(z), which exists iff nu >= q and mu <= r:

        M(z)^+ = (I_nu o W_r(z)^-1) L_{nu,r}(0)^-T Abar^T L_{mu,q}(0)^-1 (I_mu o U_q(z)^-1).

    Under those conditions Abar Abar^T = I, so the sandwich telescopes against
    M(z) = (I_mu o U_q) L_{mu,q}(0) Abar L_{nu,r}(0)^T (I_nu o W_r).  The
    affine space of all right inverses has dimension (nu r - mu q) mu q.
    """
    q, r, mu, nu = p.q, p.r, p.mu, p.nu
    if nu < q or mu > r:
        raise CaseViolation(
            f"a right inverse of the block stack requires nu >= q and mu <= r, "
            f"got q={q}, r={r}, mu={mu}, nu={nu}"
        )
    w_inv = mat_mul(G_mod.make_W_tilde(r).subs_neg(), factorial_diag_inv(r))
    u_inv = mat_mul(factorial_diag_inv(q), G_mod.make_U_tilde(q).subs_neg())
    mid = mat_mul(
        mat_mul(
            eval_matrix(G_mod.make_L_inverse(nu, r), 0).transpose(),
            G_mod.make_calAbar(p).transpose(),
        ),
        eval_matrix(G_mod.make_L_inverse(mu, q), 0),
    )
    inv = mat_mul(
        mat_mul(kron(PolyMatrix.identity(nu), w_inv), mid),
        kron(PolyMatrix.identity(mu), u_inv),
    )
    if mat_mul(G_mod.make_calM(p), inv) != PolyMatrix.identity(mu * q):
        raise AssertionError("constructed matrix is not a right inverse of M(z)")
    return RightInverseResult(
        inverse=inv,
        is_constant=inv.is_constant(),
        affine_freedom_dim=(nu * r - mu * q) * mu * q,
    )


def make_simple_M0_right_inverse(q: int, r: int, nu: int) -> PolyMatrix:
    """The sparse z-dependent right inverse (U_q(z)^-1 stacked over 0) o f_0.

    Rests on the identity M0(z) (I_nu o f_0) = (U_q(z)  0): picking only the
    leading column of each block reduces M0 to the invertible Vandermonde
    factor.  Requires nu >= q.
    """
    if nu < q:
        raise CaseViolation(f"a right inverse of M0(z) requires nu >= q, got nu={nu}, q={q}")
    u_inv = mat_mul(factorial_diag_inv(q), G_mod.make_U_tilde(q).subs_neg())
    stacked = vstack([u_inv, PolyMatrix.zeros(nu - q, q)])
    f0 = G_mod.unit_column(0, r)
    out = kron(stacked, f0)
    m0 = G_mod.make_calM(Params(q, r, 1, nu))
    if mat_mul(m0, out) != PolyMatrix.identity(q):
        raise AssertionError("constructed matrix is not a right inverse of M0(z)")
    return out


__all__ = [
    "RightInverseResult",
    "make_Bk",
    "make_B0",
    "make_A0",
    "beta_sum",
    "verify_a0b",
    "make_Xk",
    "hat_shift",
    "nilpotent_exp",
    "make_Hk",
    "make_C_constant",
    "constant_kernel_basis",
    "make_M_right_inverse",
    "make_simple_M0_right_inverse",
]
