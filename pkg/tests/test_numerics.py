import math
import random
from fractions import Fraction

import mpmath as mp
import pytest

from eisenmodes.bessel import DoubleBessel, HomBasis, Pure, SingleBessel, differentiate
from eisenmodes.homogeneous import solve_mode
from eisenmodes.laurent import YLaurent
from eisenmodes.numerics import (
    NumericEnv,
    bessel_i,
    bessel_k,
    eval_expr,
    fd_second_derivative,
    homogeneous_residual,
    residual,
    series_crosscheck,
    zeta_num,
    zeta_prime_num,
)
from eisenmodes.scalars import Constant
from eisenmodes.sources import Params

ENV = NumericEnv()
F = Fraction

mp.mp.dps = 35


def test_bessel_k_against_high_precision_oracle():
    assert abs(bessel_k(0, 1.0) - 0.42102443824070834) < 1e-14
    for nu in (0, 1, 2, 5):
        for x in (1e-3, 0.3, 0.7, 2.0, 10.0, 50.0):
            ref = float(mp.besselk(nu, x))
            assert abs(bessel_k(nu, x) - ref) / ref < 1e-12, (nu, x)


def test_bessel_k_half_integer_closed_form():
    assert abs(bessel_k(0.5, 1.0) - math.sqrt(math.pi / 2) * math.exp(-1)) < 1e-15
    for nu in (1.5, 5.5, 7.5):
        for x in (0.5, 2.0, 10.0):
            ref = float(mp.besselk(nu, x))
            assert abs(bessel_k(nu, x) - ref) / ref < 1e-13


def test_bessel_k_recurrence_identity():
    for x in (0.5, 2.0, 10.0):
        lhs = bessel_k(2, x)
        rhs = bessel_k(0, x) + 2 * bessel_k(1, x) / x
        assert abs(lhs - rhs) / lhs < 1e-13


def test_bessel_k_domain():
    with pytest.raises(ValueError):
        bessel_k(0, -1.0)
    with pytest.raises(ValueError):
        bessel_k(0.3, 1.0)


def test_bessel_i_series():
    for nu in (0.5, 2.0, 5.5):
        for x in (0.5, 2.0, 10.0):
            ref = float(mp.besseli(nu, x))
            assert abs(bessel_i(nu, x) - ref) / ref < 1e-12


def test_wronskian():
    for nu in (0.5, 5.5):
        for x in (0.5, 2.0, 10.0):
            kd = -0.5 * (bessel_k(abs(nu - 1), x) + bessel_k(nu + 1, x))
            idd = 0.5 * (bessel_i(nu - 1, x) + bessel_i(nu + 1, x))
            w = bessel_i(nu, x) * kd - idd * bessel_k(nu, x)
            assert abs(w + 1 / x) * x < 1e-11


def test_zeta_numerics():
    for s in (2, 3, 5, 8, 12):
        assert abs(zeta_num(s) - float(mp.zeta(s))) < 1e-14
        assert abs(zeta_prime_num(s) - float(mp.zeta(s, derivative=1))) < 5e-14


def test_env_defaults_and_overrides():
    assert abs(ENV(("zeta_prime", 0)) + 0.5 * math.log(2 * math.pi)) < 1e-14
    env = NumericEnv(overrides={("zeta", 3): 1.0})
    assert env(("zeta", 3)) == 1.0
    with pytest.raises(ValueError):
        ENV(("unknown", None))


def _random_fixture_expr(rng):
    kind = rng.choice(("double", "single"))
    terms = lambda: YLaurent(
        {
            (rng.randint(-3, 2), 0): Constant.pi_power(
                rng.randint(-2, 2), F(rng.randint(-5, 5) or 1, rng.randint(1, 3))
            )
            for _ in range(rng.randint(1, 3))
        }
    )
    if kind == "double":
        return DoubleBessel(rng.choice((1, 2)), rng.choice((1, 2, 3)), {(0, 1): terms(), (1, 1): terms()})
    return SingleBessel(rng.choice((1, 2, 3)), {0: terms(), 1: terms()})


def test_derivative_rules_vs_finite_differences():
    rng = random.Random(31)
    checked = 0
    while checked < 20:
        expr = _random_fixture_expr(rng)
        if expr.is_zero():
            continue
        y = rng.uniform(0.5, 1.5)
        d2 = differentiate(differentiate(expr))
        sym = eval_expr(d2, y, ENV)

        def f(t):
            return eval_expr(expr, t, ENV)

        fd = fd_second_derivative(f, y, h=1e-5)
        if abs(fd) < 1e-12:
            continue
        assert abs(sym - fd) / abs(fd) < 1e-6
        checked += 1


def test_residual_fixture_and_homogeneous():
    p = Params(F(3, 2), F(3, 2), 30)
    m = solve_mode(p, 1, 2)
    for y in (0.5, 1.0, 2.0):
        assert residual(m, y, ENV) <= 1e-9
    # homogeneous-only: operator annihilates the basis element
    assert homogeneous_residual(HomBasis("K", 5, 3), 30, 3, 1.0) <= 1e-10


def test_residual_detects_corruption():
    p = Params(F(3, 2), F(3, 2), 30)
    m = solve_mode(p, 1, 2)
    table = dict(m.particular.table)
    table[(0, 0)] = table[(0, 0)] + YLaurent.monomial(0, 1)
    m.particular = DoubleBessel(1, 2, table)
    assert residual(m, 1.0, ENV) >= 1e-3


def test_series_crosscheck_reports():
    e = DoubleBessel(1, 2, {(1, 1): YLaurent.monomial(1)})
    report = series_crosscheck(e, order=3)
    assert report["status"] == "ok"
    assert report["relative_error"] <= 1e-5
    s = SingleBessel(1, {1: YLaurent.monomial(-1, Constant.pi_power(-1, 2))})
    report = series_crosscheck(s, order=2, y_small=1e-3)
    assert report["relative_error"] <= 1e-6
    # radius heuristic: 2 pi n y >= 0.5 is inconclusive
    report = series_crosscheck(e, order=3, y_small=0.2)
    assert report["status"] == "inconclusive"
    # pure polynomial series is exact
    report = series_crosscheck(Pure(YLaurent.monomial(2, 3)), order=5)
    assert report["relative_error"] < 1e-15
