import math
from fractions import Fraction

import pytest

from eisenmodes.bessel import DoubleBessel, HomBasis, Pure, SingleBessel
from eisenmodes.laurent import YLaurent
from eisenmodes.numerics import NumericEnv, bessel_k, eval_expr, eval_hom_normalized
from eisenmodes.scalars import Constant
from eisenmodes.series import (
    AsymptoticSeries,
    hom_norm_leading,
    hom_norm_series,
    k_log_series,
    small_y_series,
)

ENV = NumericEnv()


def test_k_series_numeric_agreement():
    for j in (0, 1):
        for n in (1, 2, 3):
            s = k_log_series(j, n, 6)
            approx = s.evaluate(ENV, 1e-3)
            direct = bessel_k(j, 2 * math.pi * n * 1e-3)
            assert abs(approx - direct) / direct < 1e-12


def test_hom_leading_coefficients_match_tables():
    # sqrt(y) K_{11/2}(2 pi y): leading 945/(64 pi^5) y^-5; normalized basis doubles it
    assert hom_norm_leading(5, 1) == Constant.pi_power(-5, Fraction(945, 32))
    assert hom_norm_series(5, 1, -3).coeff(-5) == Constant.pi_power(-5, Fraction(945, 32))
    # r = 7 analogue: 135135/(256 pi^7)
    assert hom_norm_leading(7, 1) == Constant.pi_power(-7, Fraction(135135, 128))


def test_hom_series_numeric():
    y = 1e-3
    for r, n in ((5, 1), (7, 2), (3, 3)):
        s = hom_norm_series(r, n, 4)
        direct = eval_hom_normalized(HomBasis("K", r, n), y)
        assert abs(s.evaluate(ENV, y) - direct) / abs(direct) < 1e-10


def test_k0_squared_series_has_log_squared():
    e = DoubleBessel(1, 1, {(0, 0): YLaurent.one()})
    s = small_y_series(e, 1)
    assert not s.coeff(0, 2).is_zero()
    s4 = small_y_series(e, 4)
    val = s4.terms.evaluate(ENV, 1e-3)
    direct = eval_expr(e, 1e-3, ENV)
    assert abs(val - direct) / abs(direct) < 1e-6


def test_series_number_consistency_order3():
    # fixture-style expressions at order 3 agree to 1e-5 at y = 1e-3
    exprs = [
        DoubleBessel(1, 2, {(1, 1): YLaurent.monomial(1), (0, 1): YLaurent.monomial(-1)}),
        SingleBessel(2, {0: YLaurent.monomial(2), 1: YLaurent.monomial(0, Constant.pi_power(-1, 3))}),
        Pure(YLaurent.monomial(-1, 5) + YLaurent.monomial(2, 1, log_exp=1)),
    ]
    for e in exprs:
        s = small_y_series(e, 3)
        val = s.terms.evaluate(ENV, 1e-3)
        direct = eval_expr(e, 1e-3, ENV)
        assert abs(val - direct) / abs(direct) < 1e-5


def test_power_basis_series():
    s = small_y_series(HomBasis("power_neg", 4), 0)
    assert s.coeff(-4) == Constant.one()
    s = small_y_series(HomBasis("power_pos", 4), 6)
    assert s.coeff(5) == Constant.one()
    with pytest.raises(ValueError):
        small_y_series(HomBasis("I", 4, 1), 0)


def test_asymptotic_series_truncation_arithmetic():
    a = AsymptoticSeries(YLaurent.monomial(-2) + YLaurent.monomial(5), 3)
    assert a.coeff(-2) == Constant.one()
    with pytest.raises(ValueError):
        a.coeff(5)
    b = AsymptoticSeries(YLaurent.monomial(0), 2)
    assert (a + b).order == 2


def test_series_number_consistency_on_solved_modes():
    # order-3 series of real solved particular parts agree with direct
    # evaluation at y = 1e-3 to 1e-5 relative
    from eisenmodes.fixtures import list_families
    from eisenmodes.homogeneous import solve_mode
    from eisenmodes.sources import Params

    for key in list_families():
        a, b, lam = key.split(",")
        p = Params(Fraction(a), Fraction(b), int(lam))
        mode = solve_mode(p, 1, 2)
        s = small_y_series(mode.particular, 3)
        approx = s.terms.evaluate(ENV, 1e-3)
        direct = eval_expr(mode.particular, 1e-3, ENV)
        assert abs(approx - direct) / abs(direct) < 1e-5, key
