"""Closed-form kernel bases for the single-block-row matrix N0(z) and the full
block matrix N(z).

Both kernels split into the same three regimes of nu relative to q:

    NU_LE_Q             nu <= q
    Q_LT_NU_LT_QPR      q < nu < q + r
    NU_GE_QPR           nu >= q + r

In the first regime the basis is built from the bidiagonal first-order blocks
F_k(z) (-z on the diagonal, 1 below); in the second a strictly upper
triangular geometric block G(z) couples the two halves; the third regime pads
the nu = q + r - 1 instance with an identity block, because every derivative
of M(z) beyond order q + r - 2 vanishes.

Returned bases are exactly the structured matrices, unreduced; column
clean-up is available separately through ``reparametrize``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import factorial

from . import generators as G_mod
from . import oracle
from .errors import CaseViolation, IndexOutOfRange, ShapeMismatch
from .generators import Params, inv_factorial
from .scalarpoly import (
    Poly,
    PolyMatrix,
    block_diag,
    eval_matrix,
    from_blocks,
    hstack,
    kron,
    mat_mul,
    shift_matrix,
)


class CaseTag(Enum):
    NU_LE_Q = "NU_LE_Q"
    Q_LT_NU_LT_QPR = "Q_LT_NU_LT_QPR"
    NU_GE_QPR = "NU_GE_QPR"


def case_for(q: int, r: int, nu: int) -> CaseTag:
    if nu <= q:
        return CaseTag.NU_LE_Q
    if nu < q + r:
        return CaseTag.Q_LT_NU_LT_QPR
    return CaseTag.NU_GE_QPR


@dataclass
class KernelBasis:
    """Columns of ``basis`` span the kernel of the matrix named by ``target``."""

    basis: PolyMatrix
    case_tag: CaseTag
    claimed_dim: int
    target: str


def make_Fk(r: int, k: int) -> PolyMatrix:
    """(r-k) x (r-1-k) bidiagonal block: -z on the diagonal, 1 below.

    Empty once k >= r - 1.  The columns of F_0(z) span the nullspace of the
    row w(z) = (1, z, ..., z^(r-1)).
    """
    if r < 1 or k < 0:
        raise ValueError("need r >= 1 and k >= 0")
    rows = max(r - k, 0)
    cols = max(r - 1 - k, 0)
    es = [Poly() for _ in range(rows * cols)]
    mz = Poly((0, -1))
    one = Poly((1,))
    for j in range(cols):
        es[j * cols + j] = mz
        es[(j + 1) * cols + j] = one
    return PolyMatrix._trusted(rows, cols, es)


def make_F(r: int) -> PolyMatrix:
    """F(z) = F_0(z), the r x (r-1) annihilator of the row w(z)."""
    return make_Fk(r, 0)


def make_K(nu: int, r: int) -> PolyMatrix:
    """K(z) = I_nu o F + S_nu o F', block bidiagonal of size nu*r x nu*(r-1)."""
    return make_Kk(nu, r, 0)


def make_Kk(nu: int, r: int, k: int) -> PolyMatrix:
    """Same block-bidiagonal layout as K(z) but built from F_k(z)."""
    if nu < 1:
        raise ValueError("nu must be >= 1")
    F = make_Fk(r, k)
    Fp = F.map(lambda e: e.derivative())
    I = PolyMatrix.identity(nu)
    return kron(I, F) + kron(shift_matrix(nu), Fp)


def make_G(r: int) -> PolyMatrix:
    """Strictly upper triangular r x r matrix with entries z^(j-i-1) for j > i.

    Equals S (I - zS)^(-1) for the r x r shift matrix S; both forms are
    exercised by the tests.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    es = [Poly() for _ in range(r * r)]
    for i in range(r):
        for j in range(i + 1, r):
            es[i * r + j] = Poly.monomial(j - i - 1)
    return PolyMatrix._trusted(r, r, es)


def make_Gkj(r: int, k: int, j: int) -> PolyMatrix:
    """Upper-left (r-k) x (r-j) block of G(z)."""
    if not (0 <= k <= r - 1) or not (0 <= j <= r - 1):
        raise IndexOutOfRange(f"block indices k={k}, j={j} must lie in [0, {r - 1}]")
    return make_G(r).block(0, r - k, 0, r - j)


def make_calGi(r: int, i: int) -> PolyMatrix:
    """The (r-i) x r product G_{i,i-1}(z) ... G_{10}(z); the identity for i = 0.

    Computed from the product definition and cross-checked against the closed
    form G_{i0}(z) G(z)^(i-1).
    """
    if not (0 <= i <= r - 1):
        raise IndexOutOfRange(f"i={i} must lie in [0, {r - 1}]")
    if i == 0:
        return PolyMatrix.identity(r)
    out = make_Gkj(r, 1, 0)
    for t in range(2, i + 1):
        out = mat_mul(make_Gkj(r, t, t - 1), out)
    G = make_G(r)
    closed = make_Gkj(r, i, 0)
    for _ in range(i - 1):
        closed = mat_mul(closed, G)
    if out != closed:
        raise AssertionError("product and closed form for calG_i disagree")
    return out


def _coupling_grid(q: int, nu: int) -> PolyMatrix:
    # q x (nu - q) scalar grid with a single 1 at (q-1, 0): l_q f^T
    es = [Poly() for _ in range(q * (nu - q))]
    es[(q - 1) * (nu - q)] = Poly((1,))
    return PolyMatrix._trusted(q, nu - q, es)


def _lower_right(q: int, r: int, nu: int) -> PolyMatrix:
    # I_(nu-q) o I_r - S_(nu-q) o G
    I = PolyMatrix.identity((nu - q) * r)
    return I - kron(shift_matrix(nu - q), make_G(r))


def make_Kbar(q: int, r: int, nu: int) -> PolyMatrix:
    """The nu*r x (nu*r - q) kernel basis of N0(z) in the middle regime.

    Layout:  [ I_q o F + S_q o F'    -(l_q f^T) o G          ]
             [ 0                      I_(nu-q) o I_r - S_(nu-q) o G ]

    with l_q the last basis vector of R^q and f the first of R^(nu-q).
    Defined for q < nu < q + r (which forces r >= 2).
    """
    if not (q + 1 <= nu <= q + r - 1):
        raise CaseViolation(
            f"coupled kernel basis requires q < nu < q + r, got q={q}, r={r}, nu={nu}"
        )
    F = make_F(r)
    Fp = F.map(lambda e: e.derivative())
    tl = kron(PolyMatrix.identity(q), F) + kron(shift_matrix(q), Fp)
    tr = -kron(_coupling_grid(q, nu), make_G(r))
    bl = PolyMatrix.zeros((nu - q) * r, q * (r - 1))
    br = _lower_right(q, r, nu)
    return from_blocks([[tl, tr], [bl, br]])


def make_Kbar_j(q: int, r: int, nu: int, j: int) -> PolyMatrix:
    """The j-th factor of the kernel-basis product for N(z) when nu > q.

    For j <= r - 2 the diagonal carries q copies of F_j then nu - q copies of
    I_r, with the coupling block -(1/j!) G_{j0}^(j)(z); for j = r - 1 the F
    part degenerates to a q-row zero strip; for j >= r the factor is the
    square matrix I_(nu-q) o I_r - S_(nu-q) o G.
    """
    if nu <= q:
        raise CaseViolation(
            f"the coupled kernel factors require nu > q, got q={q}, nu={nu}"
        )
    if j < 0:
        raise ValueError("j must be >= 0")
    br = _lower_right(q, r, nu)
    if j >= r:
        return br
    if j == r - 1:
        return from_blocks([[PolyMatrix.zeros(q, (nu - q) * r)], [br]])
    Fj = make_Fk(r, j)
    Fjp = Fj.map(lambda e: e.derivative())
    tl = kron(PolyMatrix.identity(q), Fj) + kron(shift_matrix(q), Fjp)
    gj0_j = make_Gkj(r, j, 0).map(lambda e: e.derivative(j)) * inv_factorial(j)
    tr = -kron(_coupling_grid(q, nu), gj0_j)
    bl = PolyMatrix.zeros((nu - q) * r, q * (r - 1 - j))
    return from_blocks([[tl, tr], [bl, br]])


def kernel_dim(p: Params, target: str) -> int:
    """Dimension of the kernel of N0(z) or N(z)."""
    q, r, mu, nu = p.q, p.r, p.mu, p.nu
    if target == "N0":
        return nu * r - min(nu, q)
    if target in ("N", "M"):
        if nu <= q:
            return nu * max(r - mu, 0)
        return nu * r - q * min(mu, r)
    raise ValueError(f"unknown kernel target {target!r}")


def kernel_basis_N0(q: int, r: int, nu: int) -> KernelBasis:
    """Basis of the kernel of N0(z) = (M/0!, M'/1!, ..., M^(nu-1)/(nu-1)!).

    nu <= q: the degree-1 block bidiagonal K(z).
    q < nu < q + r: the coupled basis Kbar(z).
    nu >= q + r: the nu = q + r - 1 instance padded with an identity block of
    order r*(nu - q - r + 1), covering the columns that multiply vanished
    derivatives.
    """
    case = case_for(q, r, nu)
    if case is CaseTag.NU_LE_Q:
        basis = make_K(nu, r)
    elif case is CaseTag.Q_LT_NU_LT_QPR:
        basis = make_Kbar(q, r, nu)
    else:
        star = kernel_basis_N0(q, r, q + r - 1).basis
        pad = r * (nu - (q + r - 1))
        basis = block_diag([star, PolyMatrix.identity(pad)])
    dim = kernel_dim(Params(q, r, 1, nu), "N0")
    return KernelBasis(basis=basis, case_tag=case, claimed_dim=dim, target="N0")


def kernel_basis_N(p: Params) -> KernelBasis:
    """Basis of the kernel of N(z) (blocks M^(i+j)(z) / (i! j!)).

    nu <= q: the product K_0(z) ... K_{mu-1}(z) of bidiagonal factors, empty
    once mu >= r (N(z) then has full column rank).
    q < nu < q + r: the product Kbar_0(z) ... Kbar_{mu-1}(z); factors with
    index >= r are square and full rank, so the span stops shrinking there.
    nu >= q + r: identity-padded nu = q + r - 1 instance.
    """
    q, r, mu, nu = p.q, p.r, p.mu, p.nu
    case = case_for(q, r, nu)
    if case is CaseTag.NU_LE_Q:
        if mu >= r:
            basis = PolyMatrix.zeros(nu * r, 0)
        else:
            basis = make_Kk(nu, r, 0)
            for k in range(1, mu):
                basis = mat_mul(basis, make_Kk(nu, r, k))
    elif case is CaseTag.Q_LT_NU_LT_QPR:
        basis = make_Kbar_j(q, r, nu, 0)
        for j in range(1, mu):
            basis = mat_mul(basis, make_Kbar_j(q, r, nu, j))
    else:
        star = kernel_basis_N(Params(q, r, mu, q + r - 1)).basis
        pad = r * (nu - (q + r - 1))
        basis = block_diag([star, PolyMatrix.identity(pad)])
    dim = kernel_dim(p, "N")
    return KernelBasis(basis=basis, case_tag=case, claimed_dim=dim, target="N")


def kernel_basis_M(p: Params) -> KernelBasis:
    """Kernel of M(z), obtained from the N(z) basis by the diagonal rescaling
    M(z) = (D_mu o I_q) N(z) (D_nu o I_r)."""
    kb = kernel_basis_N(p)
    scale = kron(G_mod.factorial_diag_inv(p.nu), PolyMatrix.identity(p.r))
    return KernelBasis(
        basis=mat_mul(scale, kb.basis),
        case_tag=kb.case_tag,
        claimed_dim=kb.claimed_dim,
        target="M",
    )


def is_unimodular(t: PolyMatrix) -> bool:
    """True iff t is square with constant nonzero determinant.

    det(t) has degree at most rows * max_degree, so equality of the sampled
    determinant at that many + 1 distinct points pins it down exactly.
    """
    if t.rows != t.cols:
        return False
    if t.rows == 0:
        return True
    npts = t.rows * max(t.max_degree(), 0) + 1
    pts = oracle.sample_points(npts, seed=30_000 + npts)
    dets = [oracle.det_fraction_free(eval_matrix(t, z)) for z in pts]
    return dets[0] != 0 and all(d == dets[0] for d in dets)


def reparametrize(kb: KernelBasis, transform: PolyMatrix) -> KernelBasis:
    """Post-multiply a kernel basis by a square unimodular column transform."""
    if transform.rows != transform.cols:
        raise ShapeMismatch("column transform must be square")
    if transform.rows != kb.basis.cols:
        raise ShapeMismatch(
            f"transform order {transform.rows} != basis column count {kb.basis.cols}"
        )
    if not is_unimodular(transform):
        raise ValueError("column transform is not unimodular")
    return KernelBasis(
        basis=mat_mul(kb.basis, transform),
        case_tag=kb.case_tag,
        claimed_dim=kb.claimed_dim,
        target=kb.target,
    )


# -- helpers for the truncated families (used heavily by the test suite) -----


def w_sub(r: int, j: int) -> PolyMatrix:
    """w_j(z) = (1, z, ..., z^(r-1-j)), the first r - j entries of w(z)."""
    if not (0 <= j <= r):
        raise IndexOutOfRange(f"j={j} must lie in [0, {r}]")
    return PolyMatrix._trusted(1, r - j, [Poly.monomial(t) for t in range(r - j)])


def M_sub(q: int, r: int, j: int) -> PolyMatrix:
    """M_j(z) = u(z) w_j(z), a q x (r-j) truncation of M(z)."""
    return mat_mul(G_mod.make_u(q), w_sub(r, j))


def n_block_row(q: int, r: int, nu: int, k: int) -> PolyMatrix:
    """(1/k!) (M^(k)/0!, M^(k+1)/1!, ..., M^(k+nu-1)/(nu-1)!), a q x nu*r row."""
    M = G_mod.make_M(q, r)
    blocks = []
    for j in range(nu):
        blocks.append(M.map(lambda e: e.derivative(k + j)) * inv_factorial(j))
    return hstack(blocks) * inv_factorial(k)


def n_block_row_sub(q: int, r: int, nu: int, j: int, i: int) -> PolyMatrix:
    """(1/i!) (M_j^(i)/0!, ..., M_j^(i+nu-1)/(nu-1)!), a q x nu*(r-j) row."""
    Mj = M_sub(q, r, j)
    blocks = []
    for t in range(nu):
        blocks.append(Mj.map(lambda e: e.derivative(i + t)) * inv_factorial(t))
    return hstack(blocks) * inv_factorial(i)


__all__ = [
    "CaseTag",
    "KernelBasis",
    "case_for",
    "make_F",
    "make_Fk",
    "make_K",
    "make_Kk",
    "make_G",
    "make_Gkj",
    "make_calGi",
    "make_Kbar",
    "make_Kbar_j",
    "kernel_basis_N0",
    "kernel_basis_N",
    "kernel_basis_M",
    "kernel_dim",
    "reparametrize",
    "is_unimodular",
    "w_sub",
    "M_sub",
    "n_block_row",
    "n_block_row_sub",
]
