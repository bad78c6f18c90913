"""Bessel-product ansatz expressions and the exact differential operators.

The three expression kinds mirror the shapes appearing in the mode equations:

* ``DoubleBessel``: sum of q^{i,j}(y) K_i(2 pi |n1| y) K_j(2 pi |n2| y),
* ``SingleBessel``: sum of p^j(y) K_j(2 pi |n| y),
* ``Pure``: a plain Laurent-with-log polynomial in y.

Operators are built from the factor-wise derivative rules

    d/dy K_0(c y) = -c K_1(c y),
    d/dy K_1(c y) = -c K_0(c y) - K_1(c y) / y,

rather than transcribed recurrence tables, so degree bookkeeping and sign
conventions follow mechanically (and are cross-checked against finite
differences in the test suite).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Tuple

from .laurent import DEFAULT_LOG_CAP, YLaurent
from .scalars import Constant

__all__ = [
    "DoubleBessel",
    "SingleBessel",
    "Pure",
    "HomBasis",
    "reduce_k_index",
    "apply_P",
    "apply_L",
    "apply_euler",
    "differentiate",
]

Cell = Tuple[int, int]


def _clean_table(table):
    return {key: poly for key, poly in table.items() if not poly.is_zero()}


@dataclass(frozen=True)
class DoubleBessel:
    """Bilinear Bessel expression with fixed nonzero integer frequencies.

    When |n1| == |n2| the two Bessel arguments coincide and K0K1 = K1K0;
    tables are then kept in merged form with cells (0,0), (0,1), (1,1) only.
    """

    n1: int
    n2: int
    table: Dict[Cell, YLaurent] = field(default_factory=dict)

    def __post_init__(self):
        if self.n1 == 0 or self.n2 == 0:
            raise ValueError("DoubleBessel requires n1, n2 != 0")
        table = _clean_table(self.table)
        if self.merged:
            merged: Dict[Cell, YLaurent] = {}
            for (i, j), poly in table.items():
                key = (min(i, j), max(i, j))
                merged[key] = merged[key] + poly if key in merged else poly
            table = _clean_table(merged)
        object.__setattr__(self, "table", table)

    @property
    def merged(self) -> bool:
        return abs(self.n1) == abs(self.n2)

    @property
    def sign_product(self) -> int:
        return 1 if self.n1 * self.n2 > 0 else -1

    def cells(self):
        return sorted(self.table)

    def is_zero(self) -> bool:
        return not self.table

    def map_cells(self, fn) -> "DoubleBessel":
        return DoubleBessel(self.n1, self.n2, {c: fn(p) for c, p in self.table.items()})

    def __add__(self, other: "DoubleBessel") -> "DoubleBessel":
        if (self.n1, self.n2) != (other.n1, other.n2):
            raise ValueError("frequency mismatch")
        table = dict(self.table)
        for c, p in other.table.items():
            table[c] = table[c] + p if c in table else p
        return DoubleBessel(self.n1, self.n2, table)

    def __sub__(self, other: "DoubleBessel") -> "DoubleBessel":
        return self + other.scale(-1)

    def scale(self, factor) -> "DoubleBessel":
        return self.map_cells(lambda p: p.scale(factor))

    def mul_poly(self, poly: YLaurent) -> "DoubleBessel":
        return self.map_cells(lambda p: p * poly)

    def degree_window(self) -> Tuple[int, int]:
        lo = min(p.min_degree() for p in self.table.values())
        hi = max(p.max_degree() for p in self.table.values())
        return lo, hi

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DoubleBessel)
            and (self.n1, self.n2) == (other.n1, other.n2)
            and self.table == other.table
        )


@dataclass(frozen=True)
class SingleBessel:
    """Single-argument Bessel expression p^0(y) K_0 + p^1(y) K_1."""

    n: int
    table: Dict[int, YLaurent] = field(default_factory=dict)

    def __post_init__(self):
        if self.n == 0:
            raise ValueError("SingleBessel requires n != 0")
        object.__setattr__(self, "table", _clean_table(self.table))

    def cells(self):
        return sorted(self.table)

    def is_zero(self) -> bool:
        return not self.table

    def map_cells(self, fn) -> "SingleBessel":
        return SingleBessel(self.n, {c: fn(p) for c, p in self.table.items()})

    def __add__(self, other: "SingleBessel") -> "SingleBessel":
        if self.n != other.n:
            raise ValueError("frequency mismatch")
        table = dict(self.table)
        for c, p in other.table.items():
            table[c] = table[c] + p if c in table else p
        return SingleBessel(self.n, table)

    def __sub__(self, other: "SingleBessel") -> "SingleBessel":
        return self + other.scale(-1)

    def scale(self, factor) -> "SingleBessel":
        return self.map_cells(lambda p: p.scale(factor))

    def mul_poly(self, poly: YLaurent) -> "SingleBessel":
        return self.map_cells(lambda p: p * poly)

    def degree_window(self) -> Tuple[int, int]:
        lo = min(p.min_degree() for p in self.table.values())
        hi = max(p.max_degree() for p in self.table.values())
        return lo, hi

    def __eq__(self, other) -> bool:
        return isinstance(other, SingleBessel) and self.n == other.n and self.table == other.table


@dataclass(frozen=True)
class Pure:
    """Bessel-free expression: a Laurent-with-log polynomial."""

    poly: YLaurent

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __add__(self, other: "Pure") -> "Pure":
        return Pure(self.poly + other.poly)

    def __sub__(self, other: "Pure") -> "Pure":
        return Pure(self.poly - other.poly)

    def scale(self, factor) -> "Pure":
        return Pure(self.poly.scale(factor))

    def __eq__(self, other) -> bool:
        return isinstance(other, Pure) and self.poly == other.poly


@dataclass(frozen=True)
class HomBasis:
    """Homogeneous-solution basis element for a mode.

    kind "K"        : sqrt(y) K_{r+1/2}(2 pi |n| y)        (decaying branch)
    kind "I"        : sqrt(y) I_{r+1/2}(2 pi |n| y)        (growing, excluded)
    kind "power_neg": y^{-r}                               (anti-diagonal / zero mode)
    kind "power_pos": y^{r+1}                              (growing, excluded)

    ``excluded`` marks the branches ruled out by the o(e^y) / o(y^{r+1})
    growth contract; their coefficients are identically zero by fiat.
    """

    kind: str
    r: int
    n: int = 0
    excluded: bool = False

    def __post_init__(self):
        if self.kind not in ("K", "I", "power_neg", "power_pos"):
            raise ValueError(f"unknown basis kind {self.kind!r}")
        if self.r < 1:
            raise ValueError("r must be >= 1")
        if self.kind in ("K", "I") and self.n == 0:
            raise ValueError("Bessel basis requires n != 0")

    def describe(self) -> str:
        if self.kind == "K":
            return f"sqrt(y)*K_{{{self.r}+1/2}}(2*pi*{abs(self.n)}*y)"
        if self.kind == "I":
            return f"sqrt(y)*I_{{{self.r}+1/2}}(2*pi*{abs(self.n)}*y)"
        if self.kind == "power_neg":
            return f"y^-{self.r}"
        return f"y^{self.r + 1}"


# ---------------------------------------------------------------------------
# Index reduction
# ---------------------------------------------------------------------------


def reduce_k_index(m: int, n: int, log_cap: int = DEFAULT_LOG_CAP) -> Tuple[YLaurent, YLaurent]:
    """Write K_m(2 pi |n| y) = c0(y) K_0 + c1(y) K_1 exactly.

    Uses the upward recurrence K_{j+1}(z) = K_{j-1}(z) + (2j/z) K_j(z) with
    z = 2 pi |n| y; the coefficients are Laurent polynomials with nonpositive
    powers of y and no logs.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    if n == 0:
        raise ValueError("n must be nonzero")
    c_prev = (YLaurent.one(log_cap), YLaurent.zero(log_cap))  # K_0
    if m == 0:
        return c_prev
    c_cur = (YLaurent.zero(log_cap), YLaurent.one(log_cap))  # K_1
    inv_z = YLaurent.monomial(-1, Constant.pi_power(-1, Fraction(1, 2 * abs(n))), log_cap=log_cap)
    for j in range(1, m):
        factor = inv_z.scale(2 * j)
        c_next = (c_prev[0] + factor * c_cur[0], c_prev[1] + factor * c_cur[1])
        c_prev, c_cur = c_cur, c_next
    return c_cur


# ---------------------------------------------------------------------------
# Differentiation and the mode operators
# ---------------------------------------------------------------------------


def _bessel_factor_derivative(index: int, c_abs_n: int, log_cap: int):
    """Derivative contributions of K_index(2 pi c_abs_n y) as (new_index, multiplier)."""
    c = Constant.pi_power(1, 2 * c_abs_n)
    if index == 0:
        return [(1, YLaurent.monomial(0, -c, log_cap=log_cap))]
    return [
        (0, YLaurent.monomial(0, -c, log_cap=log_cap)),
        (1, YLaurent.monomial(-1, -1, log_cap=log_cap)),
    ]


def differentiate(expr):
    """Exact d/dy on any expression kind."""
    if isinstance(expr, Pure):
        return Pure(expr.poly.diff())

    if isinstance(expr, SingleBessel):
        table: Dict[int, YLaurent] = {}

        def add(idx, poly):
            if idx in table:
                table[idx] = table[idx] + poly
            else:
                table[idx] = poly

        for j, q in expr.table.items():
            add(j, q.diff())
            for jj, mult in _bessel_factor_derivative(j, abs(expr.n), q.log_cap):
                add(jj, q * mult)
        return SingleBessel(expr.n, table)

    if isinstance(expr, DoubleBessel):
        table: Dict[Cell, YLaurent] = {}

        def add2(cell, poly):
            if cell in table:
                table[cell] = table[cell] + poly
            else:
                table[cell] = poly

        for (i, j), q in expr.table.items():
            add2((i, j), q.diff())
            for ii, mult in _bessel_factor_derivative(i, abs(expr.n1), q.log_cap):
                add2((ii, j), q * mult)
            for jj, mult in _bessel_factor_derivative(j, abs(expr.n2), q.log_cap):
                add2((i, jj), q * mult)
        return DoubleBessel(expr.n1, expr.n2, table)

    raise TypeError(f"cannot differentiate {type(expr).__name__}")


def _check_log_cap(expr):
    polys = [expr.poly] if isinstance(expr, Pure) else list(expr.table.values())
    for p in polys:
        if p.max_log() >= p.log_cap and p.has_logs():
            from .laurent import LogCapExceeded

            raise LogCapExceeded(
                f"operator input carries log(y)^{p.max_log()} at cap {p.log_cap}"
            )


def apply_P(lam: int, expr: DoubleBessel) -> DoubleBessel:
    """P_lam = -4 pi^2 y^2 (|n1| + sgn(n1 n2) |n2|)^2 + y^2 d^2/dy^2 - lam."""
    _check_log_cap(expr)
    mass = abs(expr.n1) + expr.sign_product * abs(expr.n2)
    mass_poly = YLaurent.monomial(2, Constant.pi_power(2, -4 * mass * mass))
    d2 = differentiate(differentiate(expr))
    out = d2.mul_poly(YLaurent.monomial(2, 1))
    out = out + expr.mul_poly(mass_poly)
    out = out + expr.scale(-lam)
    return out


def apply_L(lam: int, expr: SingleBessel) -> SingleBessel:
    """L_lam = -4 pi^2 n^2 y^2 + y^2 d^2/dy^2 - lam on single-Bessel expressions."""
    _check_log_cap(expr)
    mass_poly = YLaurent.monomial(2, Constant.pi_power(2, -4 * expr.n * expr.n))
    d2 = differentiate(differentiate(expr))
    out = d2.mul_poly(YLaurent.monomial(2, 1))
    out = out + expr.mul_poly(mass_poly)
    out = out + expr.scale(-lam)
    return out


def apply_euler(lam: int, expr: Pure) -> Pure:
    """(y^2 d^2/dy^2 - lam) on Bessel-free expressions, logs included."""
    _check_log_cap(expr)
    d2 = expr.poly.diff().diff()
    return Pure(d2.shift(2) + expr.poly.scale(-lam))


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------


def expr_latex(expr) -> str:
    """LaTeX form grouped by Bessel factors, descending y powers."""
    if isinstance(expr, Pure):
        return expr.poly.latex()
    if isinstance(expr, SingleBessel):
        n = abs(expr.n)
        bits = []
        for j in expr.cells():
            bits.append(rf"\left[{expr.table[j].latex()}\right] K_{{{j}}}(2\pi {n} y)")
        return " + ".join(bits) if bits else "0"
    if isinstance(expr, DoubleBessel):
        n1, n2 = abs(expr.n1), abs(expr.n2)
        bits = []
        for i, j in expr.cells():
            bits.append(
                rf"\left[{expr.table[(i, j)].latex()}\right]"
                rf" K_{{{i}}}(2\pi {n1} y) K_{{{j}}}(2\pi {n2} y)"
            )
        return " + ".join(bits) if bits else "0"
    raise TypeError(f"cannot emit {type(expr).__name__}")


def expr_to_json_obj(expr) -> dict:
    if isinstance(expr, Pure):
        return {"kind": "pure", "poly": expr.poly.to_json_obj()}
    if isinstance(expr, SingleBessel):
        return {
            "kind": "single",
            "n": expr.n,
            "table": {str(j): p.to_json_obj() for j, p in sorted(expr.table.items())},
        }
    if isinstance(expr, DoubleBessel):
        return {
            "kind": "double",
            "n1": expr.n1,
            "n2": expr.n2,
            "table": {f"{i}{j}": p.to_json_obj() for (i, j), p in sorted(expr.table.items())},
        }
    raise TypeError(f"cannot serialize {type(expr).__name__}")


def expr_from_json_obj(obj: dict):
    kind = obj["kind"]
    if kind == "pure":
        return Pure(YLaurent.from_json_obj(obj["poly"]))
    if kind == "single":
        return SingleBessel(
            obj["n"], {int(j): YLaurent.from_json_obj(p) for j, p in obj["table"].items()}
        )
    if kind == "double":
        return DoubleBessel(
            obj["n1"],
            obj["n2"],
            {(int(c[0]), int(c[1])): YLaurent.from_json_obj(p) for c, p in obj["table"].items()},
        )
    raise ValueError(f"unknown expression kind {kind!r}")
