import math
import random
from fractions import Fraction

import pytest

from eisenmodes.scalars import (
    GAMMA,
    LN_PI,
    PI,
    Constant,
    NotMonomialResult,
    RatPi,
    SymbolMonomial,
    bernoulli,
    factorize,
    gamma_half_integer,
    ln_prime,
    log_normalize,
    ratpi_extract,
    ratpi_solve_embed,
    zeta_even,
    zeta_odd,
    zeta_prime,
    zeta_value,
)
from eisenmodes.numerics import NumericEnv

ENV = NumericEnv()


def rand_constant(rng, size=3):
    symbols = [PI, GAMMA, LN_PI, ln_prime(2), ln_prime(3), zeta_odd(3), zeta_odd(5)]
    total = Constant.zero()
    for _ in range(rng.randint(1, size)):
        term = Constant.from_rational(Fraction(rng.randint(-9, 9), rng.randint(1, 7)))
        for _ in range(rng.randint(0, 2)):
            term = term * rng.choice(symbols)
        total = total + term
    return total


def test_zeta_even_values():
    assert zeta_even(2) == Constant.pi_power(2, Fraction(1, 6))
    assert zeta_even(4) == Constant.pi_power(4, Fraction(1, 90))
    assert zeta_even(6) == Constant.pi_power(6, Fraction(1, 945))
    assert zeta_even(8) == Constant.pi_power(8, Fraction(1, 9450))
    assert zeta_even(12) == Constant.pi_power(12, Fraction(691, 638512875))
    with pytest.raises(ValueError):
        zeta_even(3)
    with pytest.raises(ValueError):
        zeta_even(0)


def test_zeta_even_numeric_series():
    # brute-force tail check as an independent oracle
    direct = sum(1.0 / k**2 for k in range(1, 200000))
    assert abs(zeta_even(2).evaluate(ENV) - direct) < 1e-5
    assert abs(zeta_even(2).evaluate(ENV) - math.pi**2 / 6) < 1e-10


def test_zeta_value_continuation():
    assert zeta_value(0) == Constant.from_rational(Fraction(-1, 2))
    assert zeta_value(-1) == Constant.from_rational(Fraction(-1, 12))
    assert zeta_value(-2).is_zero()
    with pytest.raises(ValueError):
        zeta_value(1)


def test_log_normalize():
    assert log_normalize(1).is_zero()
    assert log_normalize(12) == ln_prime(2) * 2 + ln_prime(3)
    assert log_normalize(7) == ln_prime(7)
    with pytest.raises(ValueError):
        log_normalize(0)


def test_log_normalize_additivity():
    rng = random.Random(7)
    for _ in range(40):
        a = rng.randint(1, 10**4)
        b = rng.randint(1, 10**4)
        assert log_normalize(a * b) == log_normalize(a) + log_normalize(b)


def test_ring_axioms_random():
    rng = random.Random(11)
    for _ in range(30):
        a, b, c = (rand_constant(rng) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        assert (a - a).is_zero()


def test_numeric_faithfulness():
    rng = random.Random(13)
    for _ in range(25):
        a, b = rand_constant(rng), rand_constant(rng)
        lhs = (a * b).evaluate(ENV)
        rhs = a.evaluate(ENV) * b.evaluate(ENV)
        scale = max(abs(lhs), abs(rhs), 1.0)
        assert abs(lhs - rhs) / scale < 1e-12
        lhs = (a + b).evaluate(ENV)
        rhs = a.evaluate(ENV) + b.evaluate(ENV)
        assert abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1.0) < 1e-12


def test_constant_division_and_powers():
    x = Constant.pi_power(3, 7)
    assert x / Constant.pi_power(2) == Constant.pi_power(1, 7)
    assert (zeta_odd(3) ** 2) / zeta_odd(3) == zeta_odd(3)
    with pytest.raises(ValueError):
        (PI + GAMMA).single_term()


def test_monomial_ordering_deterministic():
    m = SymbolMonomial({("zeta", 5): 1, ("pi", None): -2, ("ln_prime", 3): 1, ("gamma", None): 1})
    assert repr(m) == "pi^-2*gamma*ln_prime(3)*zeta(5)"


def test_json_round_trip():
    rng = random.Random(17)
    for _ in range(10):
        c = rand_constant(rng)
        assert Constant.from_json_obj(c.to_json_obj()) == c


def test_latex_output():
    c = Constant.pi_power(-4, Fraction(8, 55))
    assert c.latex() == r"\frac{8}{55} \, \frac{1}{\pi^{4}}"
    assert Constant.zero().latex() == "0"


def test_ratpi_field_axioms():
    rng = random.Random(19)
    for _ in range(30):
        num = tuple(Fraction(rng.randint(-5, 5)) for _ in range(rng.randint(1, 4)))
        den = tuple(Fraction(rng.randint(-5, 5)) for _ in range(rng.randint(1, 3)))
        if not any(num) or not any(den):
            continue
        a = RatPi(num, den)
        if a.is_zero():
            continue
        assert a * (RatPi.one() / a) == RatPi.one()
    with pytest.raises(ZeroDivisionError):
        RatPi.one() / RatPi.zero()


def test_ratpi_embed_extract_round_trip():
    c = Constant.pi_power(3, 7) + Constant.pi_power(-2, Fraction(3, 5))
    assert ratpi_extract(ratpi_solve_embed(c)) == c
    assert ratpi_solve_embed(Constant.zero()).is_zero()
    with pytest.raises(NotMonomialResult):
        ratpi_extract(RatPi((Fraction(1),), (Fraction(1), Fraction(1))))  # 1/(1+pi)
    with pytest.raises(ValueError):
        ratpi_solve_embed(GAMMA)


def test_gamma_half_integer():
    assert gamma_half_integer(2) == (Fraction(1), 0)  # Gamma(1)
    assert gamma_half_integer(3) == (Fraction(1, 2), 1)  # Gamma(3/2) = sqrt(pi)/2
    assert gamma_half_integer(5) == (Fraction(3, 4), 1)  # Gamma(5/2)
    assert gamma_half_integer(7) == (Fraction(15, 8), 1)  # Gamma(7/2)


def test_bernoulli_and_factorize():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(12) == Fraction(-691, 2730)
    assert factorize(360) == ((2, 3), (3, 2), (5, 1))


def test_zeta_prime_symbolic():
    c = zeta_prime(8)
    v = c.evaluate(ENV)
    assert v < 0  # zeta is decreasing at 8
