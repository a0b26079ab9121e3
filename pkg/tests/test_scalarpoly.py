from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hankelmonde.errors import ShapeMismatch
from hankelmonde.scalarpoly import (
    Poly,
    PolyMatrix,
    eval_matrix,
    factorial_diag,
    hstack,
    kron,
    mat_mul,
    poly_derivative,
    shift_matrix,
    vstack,
)

Z = Poly((0, 1))


def naive_derivative(p, k):
    # term-by-term differentiation, repeated k times
    cs = list(p.coeffs)
    for _ in range(k):
        cs = [i * c for i, c in enumerate(cs)][1:]
    return Poly(cs)


class TestPoly:
    def test_zero_is_empty_tuple(self):
        assert Poly((0, 0)).coeffs == ()
        assert Poly().is_zero()
        assert not Poly((0, 1)).is_zero()

    def test_trailing_zeros_trimmed(self):
        assert Poly((1, 2, 0, 0)).coeffs == (1, 2)
        assert Poly((Fraction(1, 2), Fraction(0))).coeffs == (Fraction(1, 2),)

    def test_derivative_power_rule(self):
        assert poly_derivative(Z * Z, 1) == Poly((0, 2))

    def test_derivative_past_degree_is_zero(self):
        assert poly_derivative(Z * Z, 3).is_zero()

    def test_derivative_matches_naive(self):
        p = Poly((1, 1, 0, 1))  # 1 + z + z^3
        expected = naive_derivative(p, 2)
        assert expected == Poly((0, 6))
        assert poly_derivative(p, 2) == expected

    def test_eval_horner(self):
        p = Poly((1, -2, 3))
        z0 = Fraction(5, 7)
        assert p(z0) == 1 - 2 * z0 + 3 * z0 * z0

    def test_subs_neg(self):
        p = Poly((1, 2, 3, 4))
        assert p.subs_neg() == Poly((1, -2, 3, -4))

    def test_rejects_floats(self):
        with pytest.raises(TypeError):
            Poly((0.5,))


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
polys = st.lists(rationals, max_size=6).map(Poly)


@given(polys, st.integers(0, 4), st.integers(0, 4))
def test_derivative_composes(p, k1, k2):
    assert poly_derivative(poly_derivative(p, k1), k2) == poly_derivative(p, k1 + k2)


@given(polys, polys, rationals)
def test_eval_is_multiplicative(p, q, z0):
    assert (p * q)(z0) == p(z0) * q(z0)


class TestMatMul:
    def test_identity(self):
        x = PolyMatrix.from_rows([[Z, 1, Poly((2, 3))], [0, Z * Z, 5]])
        assert mat_mul(PolyMatrix.identity(2), x) == x

    def test_empty_inner_dimension_gives_zero(self):
        a = PolyMatrix.zeros(2, 0)
        b = PolyMatrix.zeros(0, 3)
        assert mat_mul(a, b) == PolyMatrix.zeros(2, 3)

    def test_gram_of_first_order_column(self):
        f = PolyMatrix.from_rows([[-Z], [1]])
        assert mat_mul(f.T, f) == PolyMatrix.from_rows([[Poly((1, 0, 1))]])

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            mat_mul(PolyMatrix.zeros(2, 3), PolyMatrix.zeros(2, 3))

    def test_associative_on_corpus(self):
        mats = [
            PolyMatrix.from_rows([[Z, 1], [0, Z]]),
            PolyMatrix.from_rows([[1, Z], [Z * Z, 2]]),
            PolyMatrix.from_rows([[Poly((1, 1)), 0], [3, Z]]),
        ]
        a, b, c = mats
        assert mat_mul(mat_mul(a, b), c) == mat_mul(a, mat_mul(b, c))


class TestKron:
    def test_identity_times_scalar(self):
        assert kron(PolyMatrix.identity(2), PolyMatrix.from_rows([[5]])) == PolyMatrix.diag([5, 5])

    def test_shift_times_trivial(self):
        assert kron(shift_matrix(2), PolyMatrix.identity(1)) == shift_matrix(2)

    def test_factorial_diag_two(self):
        assert kron(factorial_diag(2), PolyMatrix.identity(2)) == PolyMatrix.identity(4)

    def test_mixed_product_property(self):
        a = PolyMatrix.from_rows([[Z, 1], [0, 2]])
        b = PolyMatrix.from_rows([[1, Z]])
        c = PolyMatrix.from_rows([[Z], [1]])
        d = PolyMatrix.from_rows([[Z, 0], [1, 1]])
        lhs = mat_mul(kron(a, b), kron(c, d))
        rhs = kron(mat_mul(a, c), mat_mul(b, d))
        assert lhs == rhs


class TestShiftAndDiag:
    def test_shift_one(self):
        assert shift_matrix(1) == PolyMatrix.zeros(1, 1)

    def test_shift_two(self):
        assert shift_matrix(2) == PolyMatrix.from_rows([[0, 1], [0, 0]])

    @pytest.mark.parametrize("k", range(1, 7))
    def test_shift_nilpotent(self, k):
        s = shift_matrix(k)
        acc = PolyMatrix.identity(k)
        for _ in range(k):
            acc = mat_mul(acc, s)
        assert acc.is_zero()

    def test_cube_of_shift_three(self):
        s = shift_matrix(3)
        assert mat_mul(mat_mul(s, s), s).is_zero()

    def test_factorial_diag(self):
        assert factorial_diag(1) == PolyMatrix.from_rows([[1]])
        assert factorial_diag(3) == PolyMatrix.diag([1, 1, 2])
        assert factorial_diag(5) == PolyMatrix.diag([1, 1, 2, 6, 24])


class TestEvalMatrix:
    def test_constant_fixed_point(self):
        m = PolyMatrix.from_rows([[1, Fraction(2, 3)], [0, -4]])
        assert eval_matrix(m, Fraction(9)) == m

    def test_entrywise(self):
        m = PolyMatrix.from_rows([[Z, Z * Z]])
        assert eval_matrix(m, 2) == PolyMatrix.from_rows([[2, 4]])

    def test_commutes_with_mat_mul(self):
        a = PolyMatrix.from_rows([[Z, 1], [2, Z * Z]])
        b = PolyMatrix.from_rows([[1, Z], [Z, 3]])
        for z0 in (0, 1, Fraction(-7, 3)):
            assert eval_matrix(mat_mul(a, b), z0) == mat_mul(
                eval_matrix(a, z0), eval_matrix(b, z0)
            )


@given(
    st.lists(st.lists(rationals, min_size=2, max_size=2), min_size=2, max_size=2),
    st.lists(st.lists(rationals, min_size=2, max_size=2), min_size=2, max_size=2),
    rationals,
)
@settings(max_examples=50)
def test_eval_commutes_with_mat_mul_random(ra, rb, z0):
    a = PolyMatrix.from_rows([[Poly((x, y)) for x, y in zip(row, row)] for row in ra])
    b = PolyMatrix.from_rows([[Poly((x,)) for x in row] for row in rb])
    assert eval_matrix(mat_mul(a, b), z0) == mat_mul(eval_matrix(a, z0), eval_matrix(b, z0))


def test_stack_round_trip():
    a = PolyMatrix.from_rows([[1, Z]])
    b = PolyMatrix.from_rows([[Z * Z, 0]])
    v = vstack([a, b])
    assert v.rows == 2 and v.block(0, 1, 0, 2) == a and v.block(1, 2, 0, 2) == b
    h = hstack([a, b])
    assert h.cols == 4 and h.block(0, 1, 0, 2) == a and h.block(0, 1, 2, 4) == b


def test_empty_matrices_are_first_class():
    e = PolyMatrix.zeros(0, 3)
    assert e.T.shape == (3, 0)
    assert mat_mul(PolyMatrix.zeros(4, 0), PolyMatrix.zeros(0, 3)).shape == (4, 3)
    assert kron(e, PolyMatrix.identity(2)).shape == (0, 6)
