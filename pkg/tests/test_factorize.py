from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hankelmonde import factorize as F
from hankelmonde import generators as G
from hankelmonde import oracle as O
from hankelmonde.generators import Params
from hankelmonde.scalarpoly import Poly, PolyMatrix, eval_matrix, mat_mul

SMALL_GRID = [Params(*t) for t in product(range(1, 4), repeat=4)]


def cofactor_det(m: PolyMatrix) -> Fraction:
    """Independent determinant oracle: recursive expansion along the first row."""
    n = m.rows
    assert n == m.cols
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(m[0, 0].coeffs[0]) if m[0, 0].coeffs else Fraction(0)
    total = Fraction(0)
    for j in range(n):
        e = m[0, j]
        if not e:
            continue
        rows = [
            [m[i, c] for c in range(n) if c != j]
            for i in range(1, n)
        ]
        minor = PolyMatrix.from_rows(rows)
        total += (-1) ** j * Fraction(e.coeffs[0]) * cofactor_det(minor)
    return total


class TestVerifyOps:
    @pytest.mark.parametrize("tup", [(2, 2, 2, 2), (1, 1, 1, 1), (3, 2, 2, 3)])
    def test_lal1(self, tup):
        rep = F.verify_lal1(Params(*tup))
        assert rep.holds and rep.lhs_minus_rhs_max_degree == 0

    @pytest.mark.parametrize("tup", [(2, 2, 1, 2), (1, 1, 3, 2), (3, 2, 2, 2)])
    def test_m_factorization(self, tup):
        assert F.verify_m_factorization(Params(*tup)).holds

    def test_m_factorization_reproduces_block_row_display(self):
        p = Params(2, 2, 1, 2)
        u = G.make_U(2)
        a0 = eval_matrix(G.make_calA(p), 0)
        from hankelmonde.scalarpoly import kron

        rhs = mat_mul(mat_mul(kron(PolyMatrix.identity(1), u), a0),
                      kron(PolyMatrix.identity(2), G.make_W(2)))
        Z = Poly((0, 1))
        assert rhs == PolyMatrix.from_rows([[1, Z, 0, 1], [Z, Z * Z, 1, Poly((0, 2))]])

    @pytest.mark.parametrize("tup", [(2, 2, 2, 2), (1, 1, 1, 1), (2, 3, 3, 2)])
    def test_n_factorization(self, tup):
        assert F.verify_n_factorization(Params(*tup)).holds

    @pytest.mark.parametrize("tup", [(2, 2, 2, 2), (1, 1, 2, 2), (1, 1, 1, 1), (3, 2, 1, 4)])
    def test_further_factorizations(self, tup):
        reports = F.verify_further_factorizations(Params(*tup))
        assert [r.identity_name for r in reports] == ["aza0", "mzm0", "mzaz", "nzaz", "nzn0"]
        assert all(r.holds for r in reports)

    def test_unknown_identity_raises(self):
        with pytest.raises(KeyError):
            F.check_identity("nope", Params(1, 1, 1, 1))


class TestRankFormula:
    def test_examples(self):
        assert F.rank_formula(Params(2, 2, 2, 2)) == 4
        assert F.rank_formula(Params(3, 2, 1, 2)) == 2
        assert F.rank_formula(Params(1, 1, 1, 1)) == 1

    def test_cross_check_at_one(self):
        p = Params(3, 2, 1, 2)
        assert O.rank_at(G.make_calM(p), 1) == F.rank_formula(p)

    @pytest.mark.parametrize("p", SMALL_GRID, ids=str)
    def test_rank_stable_across_points(self, p):
        pts = O.sample_points(3, seed=7)
        want = F.rank_formula(p)
        for m in (G.make_calM(p), G.make_calN(p), G.make_calA(p)):
            cert = O.rank_certificate(m, pts)
            assert cert.agreed_rank == want


class TestDets:
    def test_2222_display_and_value(self):
        p = Params(2, 2, 2, 2)
        a = eval_matrix(G.make_calA(p), 0)
        assert a == PolyMatrix.from_rows(
            [[1, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 2]]
        )
        cf = F.det_closed_forms(p)
        assert cf.detAbar == -1
        assert O.det_fraction_free(a) == -1
        assert cofactor_det(a) == -1

    @pytest.mark.parametrize("q", range(1, 6))
    def test_equal_sizes_sign(self, q):
        assert F.abar_sign_exponent(q, q) % 2 == (q * (q - 1) // 2) % 2

    def test_2222_detM(self):
        p = Params(2, 2, 2, 2)
        cf = F.det_closed_forms(p)
        assert cf.detM == -1
        for z0 in (0, 3):
            assert O.det_fraction_free(eval_matrix(G.make_calM(p), z0)) == -1

    def test_none_fields_off_the_invertible_region(self):
        assert F.det_closed_forms(Params(2, 2, 1, 4)) == F.DetClosedForms(None, None, None, None)
        assert F.det_closed_forms(Params(2, 2, 2, 3)).detM is None

    @pytest.mark.parametrize("q,r", list(product(range(1, 4), range(1, 4))))
    def test_unimodularity(self, q, r):
        p = Params(q, r, r, q)
        cf = F.det_closed_forms(p)
        pts = O.sample_points(5, seed=3)
        for z0 in pts:
            assert O.det_fraction_free(eval_matrix(G.make_calM(p), z0)) == cf.detM
            assert O.det_fraction_free(eval_matrix(G.make_calN(p), z0)) == cf.detN
        assert O.det_fraction_free(G.make_calAbar(p)) == cf.detAbar
        assert O.det_fraction_free(G.make_calAhat(p)) == cf.detN

    @pytest.mark.parametrize("q,r", list(product(range(1, 4), range(1, 4))))
    def test_det_of_A_is_z_free(self, q, r):
        # det A(z) = det Abar for every z: degree-bounded sampling pins the polynomial
        p = Params(q, r, r, q)
        a = G.make_calA(p)
        npts = a.rows * max(a.max_degree(), 0) + 1
        want = O.det_fraction_free(G.make_calAbar(p))
        for z0 in O.sample_points(npts, seed=11):
            assert O.det_fraction_free(eval_matrix(a, z0)) == want

    @pytest.mark.parametrize("q,r", list(product(range(1, 6), range(1, 6))))
    def test_inversion_count(self, q, r):
        assert F.abar_inversion_count(q, r) == F.abar_sign_exponent(q, r)


@given(
    st.lists(
        st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=7), min_size=3, max_size=3),
        min_size=2,
        max_size=2,
    )
)
@settings(max_examples=40)
def test_square_abar_is_the_vec_transposition(rows):
    # Abar maps the stacked rows of a q x r input X to the stacked rows of X^T
    # (its nu = q input blocks have length r, so each block is a row of X)
    q, r = 2, 3
    x = PolyMatrix.from_rows(rows)  # q x r
    abar = G.make_calAbar(Params(q, r, r, q))
    vec_rows_x = PolyMatrix.from_rows([[x[i, j]] for i in range(q) for j in range(r)])
    vec_rows_xt = PolyMatrix.from_rows([[x[i, j]] for j in range(r) for i in range(q)])
    assert mat_mul(abar, vec_rows_x) == vec_rows_xt


def test_report_carries_diff_degree_on_failure(monkeypatch):
    # corrupting the constant core must surface as holds=False with a degree
    p = Params(2, 2, 2, 2)
    real = G.make_calAbar

    def corrupted(pp):
        m = real(pp)
        es = list(m.entries)
        es[0] = es[0] + Poly((1,))
        return PolyMatrix(m.rows, m.cols, es)

    monkeypatch.setattr(G, "make_calAbar", corrupted)
    rep = F.check_identity("lal1", p)
    assert not rep.holds and rep.lhs_minus_rhs_max_degree >= 0
