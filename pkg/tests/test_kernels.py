from fractions import Fraction
from itertools import product

import pytest

from hankelmonde import generators as G
from hankelmonde import kernels as K
from hankelmonde import oracle as O
from hankelmonde.errors import CaseViolation, IndexOutOfRange, ShapeMismatch
from hankelmonde.generators import Params
from hankelmonde.scalarpoly import (
    Poly,
    PolyMatrix,
    block_diag,
    eval_matrix,
    from_blocks,
    kron,
    mat_mul,
    shift_matrix,
)

Z = Poly((0, 1))


def n0(q, r, nu):
    return G.make_calN(Params(q, r, 1, nu))


class TestF:
    def test_r2_annihilates_w(self):
        f = K.make_F(2)
        assert f == PolyMatrix.from_rows([[-Z], [1]])
        assert mat_mul(G.make_w(2), f).is_zero()

    def test_r1_is_empty(self):
        assert K.make_F(1).shape == (1, 0)

    def test_truncated(self):
        assert K.make_Fk(3, 1) == PolyMatrix.from_rows([[-Z], [1]])

    @pytest.mark.parametrize("r", range(2, 6))
    def test_columns_span_nullspace_of_w(self, r):
        f = K.make_F(r)
        assert mat_mul(G.make_w(r), f).is_zero()
        assert O.rank_at(f, Fraction(4, 3)) == r - 1


class TestK:
    def test_display_2_2(self):
        k = K.make_K(2, 2)
        assert k == PolyMatrix.from_rows([[-Z, -1], [1, 0], [0, -Z], [0, 1]])
        assert mat_mul(n0(2, 2, 2), k).is_zero()

    def test_r1_spans_zero_space(self):
        assert K.make_K(3, 1).shape == (3, 0)

    def test_single_block(self):
        assert K.make_K(1, 3) == K.make_F(3)


class TestG:
    def test_r2(self):
        assert K.make_G(2) == PolyMatrix.from_rows([[0, 1], [0, 0]])

    def test_r3(self):
        assert K.make_G(3) == PolyMatrix.from_rows([[0, 1, Z], [0, 0, 1], [0, 0, 0]])

    @pytest.mark.parametrize("r", range(1, 6))
    def test_resolvent_form(self, r):
        # G = S (I - zS)^(-1) with the inverse expanded as the finite geometric sum
        s = shift_matrix(r)
        geom = PolyMatrix.identity(r)
        spow = s
        for k in range(1, r):
            geom = geom + spow * Poly.monomial(k)
            spow = mat_mul(spow, s)
        assert K.make_G(r) == mat_mul(s, geom)

    @pytest.mark.parametrize("j", [1, 2, 3])
    def test_derivatives_are_powers(self, j):
        g = K.make_G(4)
        lhs = g.map(lambda e: e.derivative(j)) * Fraction(1, __import__("math").factorial(j))
        rhs = g
        for _ in range(j):
            rhs = mat_mul(rhs, g)
        assert lhs == rhs


class TestGBlocks:
    def test_calG_zero_is_identity(self):
        assert K.make_calGi(4, 0) == PolyMatrix.identity(4)

    def test_calG_one_is_top_block(self):
        assert K.make_calGi(3, 1) == K.make_G(3).block(0, 2, 0, 3)

    def test_Gkj_is_submatrix(self):
        g = K.make_G(4)
        assert K.make_Gkj(4, 1, 2) == g.block(0, 3, 0, 2)

    def test_index_errors(self):
        with pytest.raises(IndexOutOfRange):
            K.make_Gkj(3, 3, 0)
        with pytest.raises(IndexOutOfRange):
            K.make_calGi(3, 3)

    @pytest.mark.parametrize("i", [1, 2, 3])
    def test_commutation_through_blocks(self, i):
        # G_ii calG_i = calG_i G
        r = 4
        lhs = mat_mul(K.make_Gkj(r, i, i), K.make_calGi(r, i))
        rhs = mat_mul(K.make_calGi(r, i), K.make_G(r))
        assert lhs == rhs


# frozen displays for q=1, r=3, nu=3
KBAR0_133 = PolyMatrix.from_rows(
    [
        [-Z, 0, 0, -1, -Z, 0, 0, 0],
        [1, -Z, 0, 0, -1, 0, 0, 0],
        [0, 1, 0, 0, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0, -1, -Z],
        [0, 0, 0, 1, 0, 0, 0, -1],
        [0, 0, 0, 0, 1, 0, 0, 0],
        [0, 0, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 0, 0, 1],
    ]
)
KBAR1_133 = PolyMatrix.from_rows(
    [
        [-Z, 0, 0, -1, 0, 0, 0],
        [1, 0, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, -1, -Z],
        [0, 0, 1, 0, 0, 0, -1],
        [0, 0, 0, 1, 0, 0, 0],
        [0, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 0, 1],
    ]
)
KBAR2_133 = PolyMatrix.from_rows(
    [
        [0, 0, 0, 0, 0, 0],
        [1, 0, 0, 0, -1, -Z],
        [0, 1, 0, 0, 0, -1],
        [0, 0, 1, 0, 0, 0],
        [0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 1],
    ]
)
KHAT_133 = PolyMatrix.from_rows(
    [
        [0, -1, 0, 0, 0, 0],
        [0, 0, -2, 0, 0, 0],
        [0, 0, 0, 0, 0, 0],
        [1, 0, 0, 0, -1, 0],
        [0, 1, 0, 0, 0, -2],
        [0, 0, 1, 0, 0, 0],
        [0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 1],
    ]
)


class TestKbar:
    def test_annihilates_132(self):
        kb = K.make_Kbar(1, 3, 2)
        assert mat_mul(n0(1, 3, 2), kb).is_zero()

    def test_matches_first_factor_display(self):
        assert K.make_Kbar(1, 3, 3) == KBAR0_133

    def test_column_count_is_kernel_dimension(self):
        for (q, r, nu) in [(1, 3, 2), (2, 3, 4), (2, 4, 3), (3, 2, 4)]:
            assert K.make_Kbar(q, r, nu).cols == nu * r - q

    def test_case_violation(self):
        with pytest.raises(CaseViolation):
            K.make_Kbar(2, 3, 2)
        with pytest.raises(CaseViolation):
            K.make_Kbar(2, 3, 5)


class TestKbarJ:
    def test_displays_133(self):
        assert K.make_Kbar_j(1, 3, 3, 0) == KBAR0_133
        assert K.make_Kbar_j(1, 3, 3, 1) == KBAR1_133
        assert K.make_Kbar_j(1, 3, 3, 2) == KBAR2_133

    def test_j_at_least_r_is_square(self):
        out = K.make_Kbar_j(2, 3, 3, 3)
        assert out == PolyMatrix.identity(3) - kron(shift_matrix(1), K.make_G(3))
        assert out == PolyMatrix.identity(3)  # nu - q = 1, so the shift term is absent

    def test_case_violation(self):
        with pytest.raises(CaseViolation):
            K.make_Kbar_j(3, 3, 2, 0)


class TestKernelBasisN0:
    def test_2_2_2(self):
        kb = K.kernel_basis_N0(2, 2, 2)
        assert kb.case_tag is K.CaseTag.NU_LE_Q
        assert kb.claimed_dim == 2
        assert kb.basis == K.make_K(2, 2)
        assert mat_mul(n0(2, 2, 2), kb.basis).is_zero()

    def test_r1_injective_branch(self):
        kb = K.kernel_basis_N0(2, 1, 2)
        assert kb.claimed_dim == 0 and kb.basis.shape == (2, 0)

    def test_high_nu_dimension(self):
        kb = K.kernel_basis_N0(1, 2, 4)
        assert kb.case_tag is K.CaseTag.NU_GE_QPR
        assert kb.claimed_dim == 7
        n = n0(1, 2, 4)
        assert O.nullspace_at(n, 1).cols == 7
        assert mat_mul(n, kb.basis).is_zero()

    @pytest.mark.parametrize(
        "q,r,nu", [(q, r, nu) for q, r in product(range(1, 4), range(1, 4)) for nu in range(1, q + r + 3)]
    )
    def test_all_cases(self, q, r, nu):
        kb = K.kernel_basis_N0(q, r, nu)
        n = n0(q, r, nu)
        assert kb.basis.cols == kb.claimed_dim == K.kernel_dim(Params(q, r, 1, nu), "N0")
        assert mat_mul(n, kb.basis).is_zero()
        z0 = Fraction(3, 2)
        if kb.claimed_dim:
            assert O.rank_at(kb.basis, z0) == kb.claimed_dim
        assert O.spans_equal_at(kb.basis, O.nullspace_at(n, z0), z0)


class TestKernelBasisN:
    def test_worked_example_1333(self):
        p = Params(1, 3, 3, 3)
        kb = K.kernel_basis_N(p)
        assert kb.claimed_dim == 6
        assert kb.basis == mat_mul(mat_mul(KBAR0_133, KBAR1_133), KBAR2_133)
        # the constant form spans the rescaled kernel (the kernel of M(z))
        kbm = K.kernel_basis_M(p)
        for z0 in (Fraction(2), Fraction(-1, 3)):
            assert O.spans_equal_at(kbm.basis, KHAT_133, z0)

    def test_full_column_rank_branch(self):
        kb = K.kernel_basis_N(Params(3, 2, 2, 2))
        assert kb.claimed_dim == 0 and kb.basis.cols == 0

    def test_2322(self):
        p = Params(2, 3, 2, 2)
        kb = K.kernel_basis_N(p)
        assert kb.claimed_dim == 2 * (3 - 2)
        n = G.make_calN(p)
        for z0 in (0, 5):
            assert O.nullspace_at(n, z0).cols >= 2
        assert O.rank_at(kb.basis, Fraction(1, 7)) == 2

    def test_dim_examples(self):
        assert K.kernel_dim(Params(2, 2, 1, 2), "N0") == 2
        assert K.kernel_dim(Params(2, 2, 2, 2), "N") == 0
        assert K.kernel_dim(Params(1, 3, 3, 3), "N") == 6

    def test_kernel_of_M_via_rescaling(self):
        p = Params(1, 3, 3, 3)
        kb = K.kernel_basis_M(p)
        m = G.make_calM(p)
        assert mat_mul(m, kb.basis).is_zero()
        assert kb.target == "M"


class TestUpperTriangularRemark:
    def test_blocks_are_scaled_derivatives_of_F_product(self):
        q, r, mu, nu = 3, 4, 2, 3
        kb = K.kernel_basis_N(Params(q, r, mu, nu)).basis
        fprod = K.make_Fk(r, 0)
        for k in range(1, mu):
            fprod = mat_mul(fprod, K.make_Fk(r, k))
        for i in range(nu):
            for j in range(nu):
                blk = kb.block(i * r, (i + 1) * r, j * (r - mu), (j + 1) * (r - mu))
                if j < i:
                    assert blk.is_zero()
                else:
                    scale = Fraction(1, __import__("math").factorial(j - i))
                    assert blk == fprod.map(lambda e: e.derivative(j - i)) * scale


class TestAlternativeBasisByPostMultiplication:
    def test_geometric_cleanup(self):
        # multiplying the coupled basis by the unit upper triangular matrix of
        # G powers empties the (I, -G) strip and spreads -G, -G^2, ... along
        # the coupling row; the span is unchanged
        q, r, nu = 2, 3, 4
        kbar = K.make_Kbar(q, r, nu)
        g = K.make_G(r)
        nb = nu - q
        eye_r = PolyMatrix.identity(r)
        gpowers = [eye_r]
        for _ in range(nb - 1):
            gpowers.append(mat_mul(gpowers[-1], g))
        grid = []
        for i in range(nb):
            grid.append(
                [gpowers[j - i] if j >= i else PolyMatrix.zeros(r, r) for j in range(nb)]
            )
        transform = block_diag(
            [PolyMatrix.identity(q * (r - 1)), from_blocks(grid)]
        )
        result = mat_mul(kbar, transform)
        # expected: F/F' strip unchanged, coupling row -G, ..., -G^(nu-q), identity tail
        f = K.make_F(r)
        fp = f.map(lambda e: e.derivative())
        tl = kron(PolyMatrix.identity(q), f) + kron(shift_matrix(q), fp)
        minus_gpows = []
        acc = eye_r
        for _ in range(nb):
            acc = mat_mul(acc, g)
            minus_gpows.append(-acc)
        coupling = PolyMatrix.zeros(q * r, nb * r)
        grid2 = [[PolyMatrix.zeros(r, r)] * nb for _ in range(q)]
        grid2[q - 1] = minus_gpows
        coupling = from_blocks(grid2)
        expected = from_blocks(
            [
                [tl, coupling],
                [PolyMatrix.zeros(nb * r, q * (r - 1)), PolyMatrix.identity(nb * r)],
            ]
        )
        assert result == expected
        z0 = Fraction(5, 4)
        assert O.spans_equal_at(result, kbar, z0)


class TestReparametrize:
    def test_worked_reparametrization_reaches_constant_form(self):
        p = Params(1, 3, 3, 3)
        kb = K.kernel_basis_M(p)
        R = PolyMatrix.from_rows(
            [
                [1, 0, 0, 0, 5, Poly((0, 6))],
                [0, 1, 0, 0, 0, 4],
                [0, 0, 1, 0, 0, 0],
                [0, 0, 0, 2, 0, 0],
                [0, 0, 0, 0, 2, 0],
                [0, 0, 0, 0, 0, 2],
            ]
        )
        out = K.reparametrize(kb, R)
        assert out.basis == KHAT_133
        assert out.claimed_dim == kb.claimed_dim

    def test_rejects_non_square(self):
        kb = K.kernel_basis_N0(2, 2, 2)
        with pytest.raises(ShapeMismatch):
            K.reparametrize(kb, PolyMatrix.zeros(2, 3))

    def test_rejects_non_unimodular(self):
        kb = K.kernel_basis_N0(2, 2, 2)
        bad = PolyMatrix.from_rows([[Z, 0], [0, 1]])
        with pytest.raises(ValueError):
            K.reparametrize(kb, bad)


def test_case_tags():
    assert K.case_for(3, 2, 2) is K.CaseTag.NU_LE_Q
    assert K.case_for(2, 3, 4) is K.CaseTag.Q_LT_NU_LT_QPR
    assert K.case_for(2, 3, 5) is K.CaseTag.NU_GE_QPR
