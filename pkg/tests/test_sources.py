import math
from fractions import Fraction

import pytest

from eisenmodes.divisors import sigma
from eisenmodes.numerics import NumericEnv, bessel_k, eval_expr
from eisenmodes.scalars import Constant, zeta_odd
from eisenmodes.sources import (
    Classification,
    Normalization,
    Params,
    classify_params,
    eisenstein_coeff,
    eisenstein_zero_coeff,
    source_term,
)

ENV = NumericEnv()
F = Fraction


def test_classification_examples():
    assert classify_params(F(3, 2), F(5, 2), 20) == Classification("solvable", 4)
    assert classify_params(F(3, 2), F(3, 2), 10).kind == "lambda_not_triangular"
    assert classify_params(2, F(3, 2), 12).kind == "not_half_integer"
    assert classify_params(F(3, 2), F(5, 2), 30).kind == "outside_conjectured_set"
    # the Appendix families classify as solvable (obstructions appear later)
    for a, b, lam in ((F(3, 2), F(3, 2), 2), (F(3, 2), F(5, 2), 6), (F(5, 2), F(5, 2), 12)):
        assert classify_params(a, b, lam).kind == "solvable"


def test_params_validation():
    with pytest.raises(ValueError):
        Params(F(1, 2), F(3, 2), 12)  # not > 1
    with pytest.raises(ValueError):
        Params(2, F(3, 2), 12)  # not a half-integer
    p = Params(F(3, 2), F(5, 2), 20)
    assert p.r == 4
    assert Params(F(3, 2), F(3, 2), 10).r is None


def test_normalization_constants():
    pc = Params(F(3, 2), F(5, 2), 20, Normalization.PUBLISHED)
    assert pc.c_eff() == -6
    assert pc.with_normalization(Normalization.CORRELATOR).c_eff() == -4
    # converting published to correlator multiplies by 2/3 for this pair
    assert pc.with_normalization(Normalization.CORRELATOR).c_eff() / pc.c_eff() == F(2, 3)
    # swapped-order lookup works
    assert Params(F(5, 2), F(3, 2), 20).c_eff() == -6
    with pytest.raises(ValueError):
        Params(F(5, 2), F(7, 2), 30).c_eff()
    assert Params(F(5, 2), F(7, 2), 30, Normalization.UNIT).c_eff() == 1


def test_eisenstein_zero_coefficient():
    pairs = eisenstein_zero_coeff(F(3, 2))
    assert pairs[0] == (F(3, 2), Constant.one())
    power, coeff = pairs[1]
    assert power == F(-1, 2)
    assert coeff == Constant.pi_power(2, F(1, 3)) / zeta_odd(3)  # 2 zeta(2)/zeta(3)
    with pytest.raises(ValueError):
        eisenstein_zero_coeff(F(1, 2))


def test_eisenstein_nonzero_coefficient():
    pref, twice = eisenstein_coeff(F(3, 2), 2)
    assert twice == 2  # K_1
    assert pref == Constant.pi_power(1, 10) / zeta_odd(3)  # 4 pi/z3 * 2 * sigma_{-2}(2)
    # sigma_{-4}(2) = 17/16 enters the 5/2 coefficient
    pref5, twice5 = eisenstein_coeff(F(5, 2), 2)
    assert twice5 == 4
    assert sigma(-4, 2) == F(17, 16)
    # numeric check of a_{n,s} against its definition
    y = 0.6
    val = pref.evaluate(ENV) * math.sqrt(y) * bessel_k(1, 4 * math.pi * y)
    z3 = 1.2020569031595943
    direct = (
        2 * math.pi**1.5 / (math.gamma(1.5) * z3) * 2 ** 1 * float(sigma(-2, 2))
        * math.sqrt(y) * bessel_k(1, 4 * math.pi * y)
    )
    assert abs(val - direct) / abs(direct) < 1e-13


def test_generic_source_prefactor_and_core():
    p = Params(F(3, 2), F(3, 2), 30)
    st = source_term(p, 1, 2)
    assert st.case_tag == "generic"
    # -64 pi^2 sigma_2(1) sigma_2(2) / |1*2| = -160 pi^2
    assert st.prefactor.combined() == Constant.pi_power(2, -160)
    from eisenmodes.laurent import YLaurent

    assert st.core.table == {(1, 1): YLaurent.monomial(1)}
    assert source_term(p, 2, -2).case_tag == "anti_diagonal"


def test_zero_mode_source():
    p = Params(F(3, 2), F(3, 2), 30)
    st = source_term(p, 0, 0)
    z3 = zeta_odd(3)
    poly = st.core.poly
    assert poly.coeff(3) == Constant.from_rational(-4) * z3 * z3
    assert poly.coeff(1) == Constant.pi_power(2, F(-8, 3)) * z3
    assert poly.coeff(-1) == Constant.pi_power(4, F(-4, 9))
    # the y^{2 - alpha - beta} term is present (case-1 contract)
    assert not poly.coeff(-1).is_zero()


def test_single_source_dispatch():
    p = Params(F(3, 2), F(3, 2), 30)
    st = source_term(p, 0, 3)
    assert st.case_tag == "left_zero"
    assert st.core.n == 3
    # two K_{beta-1/2} terms at powers alpha+1/2 and 3/2-alpha
    assert st.core.table[1].support() == (0, 2)
    st = source_term(p, 3, 0)
    assert st.case_tag == "right_zero"


def test_numeric_faithfulness_of_product():
    # direct c zeta(2a) zeta(2b) a_{n1,a} a_{n2,b} at y = 0.8
    p = Params(F(3, 2), F(3, 2), 30)
    st = source_term(p, 1, 2)
    y = 0.8
    z3 = 1.2020569031595943
    a1 = 4 * math.pi / z3 * 1 * math.sqrt(y) * bessel_k(1, 2 * math.pi * y)
    a2 = 4 * math.pi / z3 * 2 * 1.25 * math.sqrt(y) * bessel_k(1, 4 * math.pi * y)
    direct = -4 * z3 * z3 * a1 * a2
    ours = eval_expr(st.full(), y, ENV)
    assert abs(ours - direct) / abs(direct) < 1e-10


def test_symmetry_under_weight_swap():
    p1 = Params(F(3, 2), F(7, 2), 30)
    p2 = Params(F(7, 2), F(3, 2), 30)
    s1 = source_term(p1, 2, 3)
    s2 = source_term(p2, 3, 2)
    assert s1.prefactor.combined() == s2.prefactor.combined()
    for (i, j), q in s1.core.table.items():
        assert s2.core.table[(j, i)] == q


def test_no_residual_sqrt_pi():
    # every prefactor lands on integer pi powers
    for a, b, lam in ((F(3, 2), F(3, 2), 30), (F(3, 2), F(5, 2), 20),
                      (F(5, 2), F(5, 2), 30), (F(3, 2), F(7, 2), 30)):
        p = Params(a, b, lam)
        for n1, n2 in ((0, 0), (0, 2), (2, 0), (1, 2), (1, -1)):
            st = source_term(p, n1, n2)
            for mono in st.prefactor.combined().terms():
                for sym, _ in mono.items():
                    assert sym[0] in ("pi",)
