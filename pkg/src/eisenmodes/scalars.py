"""Exact scalar arithmetic for the symbolic constants of the mode solver.

Every closed-form coefficient produced by this package lives in the ring of
finite rational combinations of monomials over the symbol set

    pi, gamma (Euler-Mascheroni), log(pi), log(p) for primes p,
    zeta(odd k >= 3), zeta'(m).

``Constant`` is that ring.  ``RatPi`` is the field of rational functions in
pi with rational coefficients; it is used only as the coefficient field of
the exact linear solves, whose solutions always embed back into ``Constant``
as Laurent monomials in pi.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, Mapping, Tuple

__all__ = [
    "Symbol",
    "SymbolMonomial",
    "Constant",
    "RatPi",
    "NotMonomialResult",
    "PI",
    "GAMMA",
    "LN_PI",
    "ln_prime",
    "zeta_odd",
    "zeta_prime",
    "zeta_even",
    "zeta_value",
    "log_normalize",
    "gamma_half_integer",
    "factorize",
    "bernoulli",
    "ratpi_solve_embed",
    "ratpi_extract",
]

# A symbol is a (kind, arg) pair; arg is None except for parametric kinds.
Symbol = Tuple[str, object]

_KIND_ORDER = {"pi": 0, "gamma": 1, "ln_pi": 2, "ln_prime": 3, "zeta": 4, "zeta_prime": 5}

SYM_PI: Symbol = ("pi", None)
SYM_GAMMA: Symbol = ("gamma", None)
SYM_LN_PI: Symbol = ("ln_pi", None)


def sym_ln_prime(p: int) -> Symbol:
    return ("ln_prime", p)


def sym_zeta(k: int) -> Symbol:
    if k < 3 or k % 2 == 0:
        raise ValueError(f"symbolic zeta is reserved for odd arguments >= 3, got {k}")
    return ("zeta", k)


def sym_zeta_prime(m: int) -> Symbol:
    return ("zeta_prime", m)


def _symbol_key(sym: Symbol):
    kind, arg = sym
    return (_KIND_ORDER[kind], arg if arg is not None else -1)


def _symbol_str(sym: Symbol) -> str:
    kind, arg = sym
    return kind if arg is None else f"{kind}({arg})"


def _symbol_from_str(text: str) -> Symbol:
    if "(" in text:
        kind, arg = text[:-1].split("(")
        return (kind, int(arg))
    return (text, None)


class NotMonomialResult(ValueError):
    """A RatPi value did not reduce to a Laurent polynomial in pi."""


class SymbolMonomial:
    """Product of symbol powers, e.g. pi^-4 * zeta(3)^2 * ln_prime(2).

    Exponents are nonzero integers; pi and zeta exponents may be negative
    (negative zeta powers arise from Eisenstein zeroth coefficients and
    Ramanujan denominators).  Keys are stored in the fixed canonical order
    pi < gamma < ln_pi < ln_prime(p asc) < zeta(asc) < zeta_prime(asc).
    """

    __slots__ = ("_items",)

    def __init__(self, exponents: Mapping[Symbol, int] | Iterable[Tuple[Symbol, int]] = ()):
        items = dict(exponents)
        self._items = tuple(
            sorted(((s, e) for s, e in items.items() if e != 0), key=lambda kv: _symbol_key(kv[0]))
        )

    @property
    def exponents(self) -> Dict[Symbol, int]:
        return dict(self._items)

    def items(self):
        return self._items

    def is_one(self) -> bool:
        return not self._items

    def is_pi_power(self) -> bool:
        return all(sym == SYM_PI for sym, _ in self._items)

    def pi_exponent(self) -> int:
        for sym, e in self._items:
            if sym == SYM_PI:
                return e
        return 0

    def __mul__(self, other: "SymbolMonomial") -> "SymbolMonomial":
        exps = dict(self._items)
        for sym, e in other._items:
            exps[sym] = exps.get(sym, 0) + e
        return SymbolMonomial(exps)

    def __pow__(self, k: int) -> "SymbolMonomial":
        return SymbolMonomial({s: e * k for s, e in self._items})

    def inverse(self) -> "SymbolMonomial":
        return self ** -1

    def __eq__(self, other) -> bool:
        return isinstance(other, SymbolMonomial) and self._items == other._items

    def __hash__(self) -> int:
        return hash(self._items)

    def __repr__(self) -> str:
        if not self._items:
            return "1"
        return "*".join(
            _symbol_str(s) + (f"^{e}" if e != 1 else "") for s, e in self._items
        )

    def sort_key(self):
        return tuple((_symbol_key(s), e) for s, e in self._items)


_ONE_MONOMIAL = SymbolMonomial()


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected int or Fraction, got {type(value).__name__}")


class Constant:
    """Finite rational-linear combination of :class:`SymbolMonomial` terms."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[SymbolMonomial, Fraction] | None = None):
        cleaned: Dict[SymbolMonomial, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                c = _as_fraction(coeff)
                if c:
                    cleaned[mono] = cleaned.get(mono, Fraction(0)) + c
        self._terms = {m: c for m, c in cleaned.items() if c}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "Constant":
        return cls()

    @classmethod
    def one(cls) -> "Constant":
        return cls.from_rational(1)

    @classmethod
    def from_rational(cls, value) -> "Constant":
        return cls({_ONE_MONOMIAL: _as_fraction(value)})

    @classmethod
    def monomial(cls, sym: Symbol, exponent: int = 1, coeff=1) -> "Constant":
        return cls({SymbolMonomial({sym: exponent}): _as_fraction(coeff)})

    @classmethod
    def pi_power(cls, exponent: int, coeff=1) -> "Constant":
        return cls.monomial(SYM_PI, exponent, coeff)

    # -- inspection --------------------------------------------------------

    def terms(self) -> Dict[SymbolMonomial, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return all(m.is_one() for m in self._terms)

    def as_fraction(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        if not self.is_rational():
            raise ValueError(f"not a pure rational: {self!r}")
        return next(iter(self._terms.values()))

    def is_pi_laurent(self) -> bool:
        return all(m.is_pi_power() for m in self._terms)

    def coeff(self, mono: SymbolMonomial) -> Fraction:
        return self._terms.get(mono, Fraction(0))

    def single_term(self) -> Tuple[SymbolMonomial, Fraction]:
        if len(self._terms) != 1:
            raise ValueError(f"not a single-term constant: {self!r}")
        return next(iter(self._terms.items()))

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "Constant":
        other = _coerce_constant(other)
        terms = dict(self._terms)
        for m, c in other._terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return Constant(terms)

    __radd__ = __add__

    def __neg__(self) -> "Constant":
        return Constant({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Constant":
        return self + (-_coerce_constant(other))

    def __rsub__(self, other) -> "Constant":
        return _coerce_constant(other) + (-self)

    def __mul__(self, other) -> "Constant":
        other = _coerce_constant(other)
        out: Dict[SymbolMonomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = m1 * m2
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return Constant(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Constant":
        if isinstance(other, (int, Fraction)):
            inv = Fraction(1, 1) / _as_fraction(other)
            return Constant({m: c * inv for m, c in self._terms.items()})
        other = _coerce_constant(other)
        mono, coeff = other.single_term()
        inv_mono = mono.inverse()
        return Constant({m * inv_mono: c / coeff for m, c in self._terms.items()})

    def __rtruediv__(self, other) -> "Constant":
        return _coerce_constant(other) / self

    def __pow__(self, k: int) -> "Constant":
        if k < 0:
            mono, coeff = self.single_term()
            return Constant({mono ** k: coeff ** k})
        out = Constant.one()
        base = self
        n = k
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        try:
            other = _coerce_constant(other)
        except TypeError:
            return NotImplemented
        return self._terms == other._terms

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in sorted(self._terms.items(), key=lambda kv: kv[0].sort_key()):
            if m.is_one():
                parts.append(str(c))
            elif c == 1:
                parts.append(repr(m))
            else:
                parts.append(f"{c}*{m!r}")
        return " + ".join(parts)

    # -- evaluation / emission ----------------------------------------------

    def evaluate(self, value_of: Callable[[Symbol], float]) -> float:
        parts = []
        for mono, coeff in self._terms.items():
            v = float(coeff)
            for sym, e in mono.items():
                v *= value_of(sym) ** e
            parts.append(v)
        return math.fsum(parts)

    def latex(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono, coeff in sorted(self._terms.items(), key=lambda kv: kv[0].sort_key()):
            body = _monomial_latex(mono)
            piece = _coeff_latex(coeff, body)
            if parts and not piece.startswith("-"):
                parts.append("+" + piece)
            else:
                parts.append(piece)
        return "".join(parts)

    def to_json_obj(self) -> list:
        out = []
        for mono, coeff in sorted(self._terms.items(), key=lambda kv: kv[0].sort_key()):
            out.append(
                {
                    "monomial": {_symbol_str(s): e for s, e in mono.items()},
                    "coeff": f"{coeff.numerator}/{coeff.denominator}",
                }
            )
        return out

    @classmethod
    def from_json_obj(cls, obj: list) -> "Constant":
        terms: Dict[SymbolMonomial, Fraction] = {}
        for entry in obj:
            mono = SymbolMonomial({_symbol_from_str(k): e for k, e in entry["monomial"].items()})
            num, den = entry["coeff"].split("/")
            terms[mono] = terms.get(mono, Fraction(0)) + Fraction(int(num), int(den))
        return cls(terms)

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())


def _coerce_constant(value) -> Constant:
    if isinstance(value, Constant):
        return value
    if isinstance(value, (int, Fraction)):
        return Constant.from_rational(value)
    raise TypeError(f"cannot coerce {type(value).__name__} to Constant")


def _frac_latex(f: Fraction) -> str:
    if f.denominator == 1:
        return str(f.numerator)
    sign = "-" if f < 0 else ""
    return rf"{sign}\frac{{{abs(f.numerator)}}}{{{f.denominator}}}"


def _symbol_latex(sym: Symbol) -> str:
    kind, arg = sym
    if kind == "pi":
        return r"\pi"
    if kind == "gamma":
        return r"\gamma"
    if kind == "ln_pi":
        return r"\log \pi"
    if kind == "ln_prime":
        return rf"\log {arg}"
    if kind == "zeta":
        return rf"\zeta({arg})"
    if kind == "zeta_prime":
        return rf"\zeta'({arg})"
    raise ValueError(f"unknown symbol kind {kind}")


def _monomial_latex(mono: SymbolMonomial) -> str:
    num, den = [], []
    for sym, e in mono.items():
        base = _symbol_latex(sym)
        tgt = num if e > 0 else den
        k = abs(e)
        tgt.append(base if k == 1 else rf"{base}^{{{k}}}")
    if den:
        return rf"\frac{{{' '.join(num) if num else '1'}}}{{{' '.join(den)}}}"
    return " ".join(num)


def _coeff_latex(coeff: Fraction, body: str) -> str:
    if not body:
        return _frac_latex(coeff)
    if coeff == 1:
        return body
    if coeff == -1:
        return "-" + body
    return _frac_latex(coeff) + r" \, " + body


PI = Constant.pi_power(1)
GAMMA = Constant.monomial(SYM_GAMMA)
LN_PI = Constant.monomial(SYM_LN_PI)


def ln_prime(p: int) -> Constant:
    if p < 2 or any(p % q == 0 for q in range(2, int(math.isqrt(p)) + 1)):
        raise ValueError(f"{p} is not prime")
    return Constant.monomial(sym_ln_prime(p))


def zeta_odd(k: int) -> Constant:
    return Constant.monomial(sym_zeta(k))


def zeta_prime(m: int) -> Constant:
    return Constant.monomial(sym_zeta_prime(m))


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n (B_1 = -1/2 convention)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return Fraction(1)
    # sum_{k=0}^{n} C(n+1, k) B_k = 0
    total = Fraction(0)
    for k in range(n):
        total += math.comb(n + 1, k) * bernoulli(k)
    return -total / (n + 1)


def zeta_even(k: int) -> Constant:
    """zeta(k) for even k >= 2, normalized to rational * pi^k."""
    if k < 2 or k % 2 != 0:
        raise ValueError(f"zeta_even requires an even argument >= 2, got {k}")
    m = k // 2
    rat = Fraction((-1) ** (m + 1)) * bernoulli(k) * Fraction(2 ** (k - 1)) / math.factorial(k)
    return Constant.pi_power(k, rat)


def zeta_value(k: int) -> Constant:
    """Exact/symbolic zeta at integer k != 1.

    Even k >= 2 normalize to pi powers, odd k >= 3 stay symbolic,
    nonpositive integers use the Bernoulli continuation values.
    """
    if k == 1:
        raise ValueError("zeta has a pole at 1")
    if k >= 2:
        return zeta_even(k) if k % 2 == 0 else zeta_odd(k)
    if k == 0:
        return Constant.from_rational(Fraction(-1, 2))
    n = 1 - k  # k = 1 - n, n >= 2
    return Constant.from_rational(-bernoulli(n) / n)


@lru_cache(maxsize=None)
def factorize(n: int) -> Tuple[Tuple[int, int], ...]:
    """Prime factorization of n >= 1 by trial division."""
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return tuple(out)


def log_normalize(m: int) -> Constant:
    """log(m) expressed over prime logarithms, for m >= 1."""
    if m < 1:
        raise ValueError("log_normalize requires m >= 1")
    out = Constant.zero()
    for p, e in factorize(m):
        out = out + Constant.monomial(sym_ln_prime(p), coeff=e)
    return out


def gamma_half_integer(two_s: int) -> Tuple[Fraction, int]:
    """Gamma(two_s / 2) as (rational, sqrt_pi_power) with power in {0, 1}.

    Integer arguments give factorials; half-integers use
    Gamma(m + 1/2) = (2m)! / (4^m m!) * sqrt(pi).  Requires two_s >= 1.
    """
    if two_s < 1:
        raise ValueError("argument must be >= 1/2")
    if two_s % 2 == 0:
        return Fraction(math.factorial(two_s // 2 - 1)), 0
    m = (two_s - 1) // 2
    return Fraction(math.factorial(2 * m), 4**m * math.factorial(m)), 1


# ---------------------------------------------------------------------------
# RatPi: rational functions in pi over Q (the elimination field)
# ---------------------------------------------------------------------------

Poly = Tuple[Fraction, ...]  # dense, low degree first; () is the zero polynomial


def _poly_trim(c: list) -> Poly:
    while c and not c[-1]:
        c.pop()
    return tuple(c)


def _poly_add(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return _poly_trim([ (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n) ])


def _poly_neg(a: Poly) -> Poly:
    return tuple(-x for x in a)


def _poly_mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] += x * y
    return _poly_trim(out)


def _poly_divmod(a: Poly, b: Poly) -> Tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    quo = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    for i in range(len(a) - len(b), -1, -1):
        coeff = rem[i + len(b) - 1] * inv_lead
        if coeff:
            quo[i] = coeff
            for j, y in enumerate(b):
                rem[i + j] -= coeff * y
    return _poly_trim(quo), _poly_trim(rem)


def _poly_gcd(a: Poly, b: Poly) -> Poly:
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    if not a:
        return ()
    inv = 1 / a[-1]
    return tuple(x * inv for x in a)  # monic


class RatPi:
    """Element of Q(pi): a reduced quotient of polynomials in pi.

    Normalization: gcd(num, den) = 1 and the denominator is monic.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly = (Fraction(1),)):
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = (), (Fraction(1),)
            return
        g = _poly_gcd(num, den)
        if len(g) > 1:
            num, _ = _poly_divmod(num, g)
            den, _ = _poly_divmod(den, g)
        lead = den[-1]
        if lead != 1:
            inv = 1 / lead
            num = tuple(x * inv for x in num)
            den = tuple(x * inv for x in den)
        self.num, self.den = num, den

    @classmethod
    def zero(cls) -> "RatPi":
        return cls(())

    @classmethod
    def one(cls) -> "RatPi":
        return cls((Fraction(1),))

    @classmethod
    def from_rational(cls, value) -> "RatPi":
        v = _as_fraction(value)
        return cls((v,) if v else ())

    @classmethod
    def pi_power(cls, k: int, coeff=1) -> "RatPi":
        c = _as_fraction(coeff)
        if not c:
            return cls.zero()
        if k >= 0:
            return cls(tuple([Fraction(0)] * k + [c]))
        return cls((c,), tuple([Fraction(0)] * (-k) + [Fraction(1)]))

    def is_zero(self) -> bool:
        return not self.num

    def __add__(self, other: "RatPi") -> "RatPi":
        return RatPi(
            _poly_add(_poly_mul(self.num, other.den), _poly_mul(other.num, self.den)),
            _poly_mul(self.den, other.den),
        )

    def __neg__(self) -> "RatPi":
        return RatPi(_poly_neg(self.num), self.den)

    def __sub__(self, other: "RatPi") -> "RatPi":
        return self + (-other)

    def __mul__(self, other: "RatPi") -> "RatPi":
        return RatPi(_poly_mul(self.num, other.num), _poly_mul(self.den, other.den))

    def __truediv__(self, other: "RatPi") -> "RatPi":
        if other.is_zero():
            raise ZeroDivisionError("RatPi division by zero")
        return RatPi(_poly_mul(self.num, other.den), _poly_mul(self.den, other.num))

    def __eq__(self, other) -> bool:
        return isinstance(other, RatPi) and self.num == other.num and self.den == other.den

    def __repr__(self) -> str:
        def fmt(p: Poly) -> str:
            if not p:
                return "0"
            return " + ".join(f"{c}*pi^{i}" if i else str(c) for i, c in enumerate(p) if c)

        return fmt(self.num) if self.den == (Fraction(1),) else f"({fmt(self.num)})/({fmt(self.den)})"

    def evaluate(self, pi_value: float = math.pi) -> float:
        def ev(p: Poly) -> float:
            total = 0.0
            for c in reversed(p):
                total = total * pi_value + float(c)
            return total

        return ev(self.num) / ev(self.den)


def ratpi_solve_embed(c: Constant) -> RatPi:
    """Embed a pi-Laurent Constant into the elimination field."""
    if not c.is_pi_laurent():
        raise ValueError(f"constant is not a Laurent polynomial in pi: {c!r}")
    out = RatPi.zero()
    for mono, coeff in c.terms().items():
        out = out + RatPi.pi_power(mono.pi_exponent(), coeff)
    return out


def ratpi_extract(r: RatPi) -> Constant:
    """Convert back to a Constant; raises NotMonomialResult off the Laurent locus."""
    nonzero = [(i, c) for i, c in enumerate(r.den) if c]
    if len(nonzero) != 1:
        raise NotMonomialResult(f"denominator is not a pi monomial: {r!r}")
    shift, dcoeff = nonzero[0]
    out = Constant.zero()
    for i, c in enumerate(r.num):
        if c:
            out = out + Constant.pi_power(i - shift, c / dcoeff)
    return out
