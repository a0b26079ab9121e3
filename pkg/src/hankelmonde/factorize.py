"""Symbolic verification of the factorization identities, plus closed-form
ranks and determinants.

Each identity check builds both sides as matrix polynomials and subtracts;
"holds" means every entry of the difference is the zero polynomial.  Sampling
never enters here - the oracle module owns sampled checks.

Identity labels (used by the CLI and the report files):

    lal1    A(z) = L_{mu,q}(z) Abar L_{nu,r}(z)^T
    aa0     the z = 0 specialisation of lal1
    m       M(z) = (I_mu o U_q(z)) A(0) (I_nu o W_r(z))
    mm      M(z) = (I_mu o U~_q(z)) Atilde (I_nu o W~_r(z))
    mt      N(z) = (I_mu o U~_q(z)) Ahat (I_nu o W~_r(z))
    aahat   (D_mu o I_q) Ahat (D_nu o I_r) = (I_mu o D_q) A(0) (I_nu o D_r)
    aa1     Atilde = (D_mu o I_q) Ahat (D_nu o I_r)
    aa2     Atilde = (I_mu o D_q) A(0) (I_nu o D_r)
    mdnd    M(z) = (D_mu o I_q) N(z) (D_nu o I_r)
    aza0    A(z) = (U~_mu(z) o I_q) A(0) (W~_nu(z) o I_r)
    mzm0    M(z) = (I_mu o U~_q(z)) M(0) (I_nu o W~_r(z))
    mzaz    M(z) = (U~_mu(-z) o U_q(z)) A(z) (W~_nu(-z) o W_r(z))
    nzaz    N(z) = (U_mu(z)^-1 o U_q(z)) A(z) (W_nu(z)^-1 o W_r(z))
    nzn0    N(z) = (I_mu o U~_q(z)) N(0) (I_nu o W~_r(z))
    pmuq    L_{m,k}(z) L_{m,k}(0)^-1 = U~_m(z) o I_k, for (mu,q) and (nu,r)

("o" is the Kronecker product, D_k = diag(0!, ..., (k-1)!).)
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Optional

from . import generators as G
from .generators import Params
from .scalarpoly import (
    PolyMatrix,
    block_diag,
    eval_matrix,
    factorial_diag,
    factorial_diag_inv,
    kron,
    mat_mul,
)


@dataclass
class FactorizationReport:
    identity_name: str
    params: Params
    holds: bool
    lhs_minus_rhs_max_degree: int
    elapsed: float


def _I(n: int) -> PolyMatrix:
    return PolyMatrix.identity(n)


def _sides_lal1(p: Params):
    lhs = G.make_calA(p)
    rhs = mat_mul(
        mat_mul(G.make_L(p.mu, p.q), G.make_calAbar(p)),
        G.make_L(p.nu, p.r).transpose(),
    )
    return lhs, rhs


def _sides_aa0(p: Params):
    lhs = eval_matrix(G.make_calA(p), 0)
    rhs = mat_mul(
        mat_mul(eval_matrix(G.make_L(p.mu, p.q), 0), G.make_calAbar(p)),
        eval_matrix(G.make_L(p.nu, p.r), 0).transpose(),
    )
    return lhs, rhs


def _sides_m(p: Params):
    lhs = G.make_calM(p)
    a0 = eval_matrix(G.make_calA(p), 0)
    rhs = mat_mul(
        mat_mul(kron(_I(p.mu), G.make_U(p.q)), a0), kron(_I(p.nu), G.make_W(p.r))
    )
    return lhs, rhs


def _sides_mm(p: Params):
    lhs = G.make_calM(p)
    rhs = mat_mul(
        mat_mul(kron(_I(p.mu), G.make_U_tilde(p.q)), G.make_calAtilde(p)),
        kron(_I(p.nu), G.make_W_tilde(p.r)),
    )
    return lhs, rhs


def _sides_mt(p: Params):
    lhs = G.make_calN(p)
    rhs = mat_mul(
        mat_mul(kron(_I(p.mu), G.make_U_tilde(p.q)), G.make_calAhat(p)),
        kron(_I(p.nu), G.make_W_tilde(p.r)),
    )
    return lhs, rhs


def _sides_aahat(p: Params):
    lhs = mat_mul(
        mat_mul(kron(factorial_diag(p.mu), _I(p.q)), G.make_calAhat(p)),
        kron(factorial_diag(p.nu), _I(p.r)),
    )
    a0 = eval_matrix(G.make_calA(p), 0)
    rhs = mat_mul(
        mat_mul(kron(_I(p.mu), factorial_diag(p.q)), a0),
        kron(_I(p.nu), factorial_diag(p.r)),
    )
    return lhs, rhs


def _sides_aa1(p: Params):
    lhs = G.make_calAtilde(p)
    rhs = mat_mul(
        mat_mul(kron(factorial_diag(p.mu), _I(p.q)), G.make_calAhat(p)),
        kron(factorial_diag(p.nu), _I(p.r)),
    )
    return lhs, rhs


def _sides_aa2(p: Params):
    lhs = G.make_calAtilde(p)
    a0 = eval_matrix(G.make_calA(p), 0)
    rhs = mat_mul(
        mat_mul(kron(_I(p.mu), factorial_diag(p.q)), a0),
        kron(_I(p.nu), factorial_diag(p.r)),
    )
    return lhs, rhs


def _sides_mdnd(p: Params):
    lhs = G.make_calM(p)
    rhs = mat_mul(
        mat_mul(kron(factorial_diag(p.mu), _I(p.q)), G.make_calN(p)),
        kron(factorial_diag(p.nu), _I(p.r)),
    )
    return lhs, rhs


def _sides_aza0(p: Params):
    lhs = G.make_calA(p)
    a0 = eval_matrix(lhs, 0)
    rhs = mat_mul(
        mat_mul(kron(G.make_U_tilde(p.mu), _I(p.q)), a0),
        kron(G.make_W_tilde(p.nu), _I(p.r)),
    )
    return lhs, rhs


def _sides_mzm0(p: Params):
    lhs = G.make_calM(p)
    m0 = eval_matrix(lhs, 0)
    rhs = mat_mul(
        mat_mul(kron(_I(p.mu), G.make_U_tilde(p.q)), m0),
        kron(_I(p.nu), G.make_W_tilde(p.r)),
    )
    return lhs, rhs


def _sides_mzaz(p: Params):
    lhs = G.make_calM(p)
    rhs = mat_mul(
        mat_mul(kron(G.make_U_tilde(p.mu).subs_neg(), G.make_U(p.q)), G.make_calA(p)),
        kron(G.make_W_tilde(p.nu).subs_neg(), G.make_W(p.r)),
    )
    return lhs, rhs


def _sides_nzaz(p: Params):
    lhs = G.make_calN(p)
    u_mu_inv = mat_mul(factorial_diag_inv(p.mu), G.make_U_tilde(p.mu).subs_neg())
    w_nu_inv = mat_mul(G.make_W_tilde(p.nu).subs_neg(), factorial_diag_inv(p.nu))
    rhs = mat_mul(
        mat_mul(kron(u_mu_inv, G.make_U(p.q)), G.make_calA(p)),
        kron(w_nu_inv, G.make_W(p.r)),
    )
    return lhs, rhs


def _sides_nzn0(p: Params):
    lhs = G.make_calN(p)
    n0 = eval_matrix(lhs, 0)
    rhs = mat_mul(
        mat_mul(kron(_I(p.mu), G.make_U_tilde(p.q)), n0),
        kron(_I(p.nu), G.make_W_tilde(p.r)),
    )
    return lhs, rhs


def _sides_pmuq(p: Params):
    def one(m, k):
        lhs = mat_mul(G.make_L(m, k), eval_matrix(G.make_L_inverse(m, k), 0))
        rhs = kron(G.make_U_tilde(m), _I(k))
        return lhs, rhs

    l1, r1 = one(p.mu, p.q)
    l2, r2 = one(p.nu, p.r)
    return block_diag([l1, l2]), block_diag([r1, r2])


IDENTITY_SIDES = {
    "lal1": _sides_lal1,
    "aa0": _sides_aa0,
    "m": _sides_m,
    "mm": _sides_mm,
    "mt": _sides_mt,
    "aahat": _sides_aahat,
    "aa1": _sides_aa1,
    "aa2": _sides_aa2,
    "mdnd": _sides_mdnd,
    "aza0": _sides_aza0,
    "mzm0": _sides_mzm0,
    "mzaz": _sides_mzaz,
    "nzaz": _sides_nzaz,
    "nzn0": _sides_nzn0,
    "pmuq": _sides_pmuq,
}

IDENTITY_NAMES = tuple(IDENTITY_SIDES)


def check_identity(name: str, p: Params) -> FactorizationReport:
    """Build both sides of the named identity and compare them exactly."""
    try:
        sides = IDENTITY_SIDES[name]
    except KeyError:
        raise KeyError(f"unknown identity {name!r}; known: {', '.join(IDENTITY_NAMES)}")
    t0 = time.perf_counter()
    lhs, rhs = sides(p)
    diff = lhs - rhs
    holds = diff.is_zero()
    return FactorizationReport(
        identity_name=name,
        params=p,
        holds=holds,
        lhs_minus_rhs_max_degree=0 if holds else diff.max_degree(),
        elapsed=time.perf_counter() - t0,
    )


def _combine(name: str, reports: list[FactorizationReport]) -> FactorizationReport:
    return FactorizationReport(
        identity_name=name,
        params=reports[0].params,
        holds=all(r.holds for r in reports),
        lhs_minus_rhs_max_degree=max(r.lhs_minus_rhs_max_degree for r in reports),
        elapsed=sum(r.elapsed for r in reports),
    )


def verify_lal1(p: Params) -> FactorizationReport:
    """The triangular factorization of A(z), including its z = 0 specialisation."""
    return _combine("lal1", [check_identity("lal1", p), check_identity("aa0", p)])


def verify_m_factorization(p: Params) -> FactorizationReport:
    """Both factorizations of M(z) through the constant core matrices."""
    return _combine("m", [check_identity("m", p), check_identity("mm", p)])


def verify_n_factorization(p: Params) -> FactorizationReport:
    """The factorization of N(z) plus the relations tying the three cores together."""
    return _combine(
        "mt",
        [
            check_identity("mt", p),
            check_identity("aahat", p),
            check_identity("aa1", p),
            check_identity("aa2", p),
        ],
    )


def verify_further_factorizations(p: Params) -> list[FactorizationReport]:
    """One report per identity among aza0, mzm0, mzaz, nzaz, nzn0."""
    return [check_identity(n, p) for n in ("aza0", "mzm0", "mzaz", "nzaz", "nzn0")]


def rank_formula(p: Params) -> int:
    """min(mu, r) * min(nu, q): the rank of A(z), M(z) and N(z) for every z."""
    return min(p.mu, p.r) * min(p.nu, p.q)


def abar_sign_exponent(q: int, r: int) -> int:
    """q r (q-1) (r-1) / 4, always an integer."""
    return q * r * (q - 1) * (r - 1) // 4


def abar_inversion_count(q: int, r: int) -> int:
    """Number of inversions of the column permutation underlying square Abar.

    Counted literally: in the square case (mu = r, nu = q) every column of
    Abar is a distinct standard basis vector of R^(qr); an inversion is a
    column pair (c1, c2) with c1 < c2 whose one-positions are in the opposite
    order.
    """
    abar = G.make_calAbar(Params(q, r, r, q))
    n = q * r
    perm = []
    for c in range(n):
        rows = [i for i in range(n) if abar.entries[i * n + c]]
        if len(rows) != 1:
            raise AssertionError("square Abar must have exactly one 1 per column")
        perm.append(rows[0])
    return sum(
        1 for c1 in range(n) for c2 in range(c1 + 1, n) if perm[c1] > perm[c2]
    )


@dataclass
class DetClosedForms:
    """Exact determinant values in the square invertible case, else None."""

    detAbar: Optional[Fraction]
    detA: Optional[Fraction]
    detM: Optional[Fraction]
    detN: Optional[Fraction]


def superfactorial(n: int) -> int:
    """prod_{i<n} i!"""
    out = 1
    for i in range(n):
        out *= factorial(i)
    return out


def det_closed_forms(p: Params) -> DetClosedForms:
    """Closed-form determinants of Abar, A(z), M(z), N(z).

    Defined when the matrices are square and invertible, i.e. mu = r and
    nu = q; all fields are None otherwise (including square-but-singular
    shapes), so grid sweeps need not branch.

    detAbar = detA = (-1)^(q r (q-1) (r-1) / 4) and
    detM = (prod_{i<q} i!)^mu (prod_{j<r} j!)^nu detA.  For N the factorial
    rescaling M = (D_mu o I_q) N (D_nu o I_r) contributes
    (prod_{i<mu} i!)^q (prod_{j<nu} j!)^r, which with mu = r and nu = q
    cancels detM's factorials exactly, so detN = detA.
    """
    if p.mu != p.r or p.nu != p.q:
        return DetClosedForms(None, None, None, None)
    q, r = p.q, p.r
    sign = Fraction((-1) ** abar_sign_exponent(q, r))
    det_m = Fraction(superfactorial(q)) ** p.mu * Fraction(superfactorial(r)) ** p.nu * sign
    return DetClosedForms(detAbar=sign, detA=sign, detM=det_m, detN=sign)


__all__ = [
    "FactorizationReport",
    "IDENTITY_NAMES",
    "check_identity",
    "verify_lal1",
    "verify_m_factorization",
    "verify_n_factorization",
    "verify_further_factorizations",
    "rank_formula",
    "det_closed_forms",
    "DetClosedForms",
    "abar_inversion_count",
    "abar_sign_exponent",
    "superfactorial",
]
