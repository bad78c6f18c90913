"""Embedded worked-solution tables and their comparison machinery.

The published tables are transcribed verbatim (symbolic in n1, n2 with sign
markers) into ``data/worked_tables.json`` as restricted expression strings and
evaluated at concrete integers at comparison time, so any typo in a source
table stays a data-level erratum rather than code.

Grammar: integers, + - * / ** and parentheses; names

    n1 n2 n y ly pi z2..z8 sg sg1 sg2

(ly is log(y); z-even are exact pi powers, z-odd symbolic) and the calls
abs(.), sgn(.), sigma(k, .), logn(.) = log|.| over prime logarithms.
"""

from __future__ import annotations

import ast
import json
from fractions import Fraction
from importlib import resources
from typing import Dict, List, Optional, Tuple

from .bessel import DoubleBessel, Pure, SingleBessel
from .divisors import sigma
from .laurent import YLaurent
from .scalars import Constant, log_normalize, zeta_value

__all__ = [
    "FixtureError",
    "eval_table_expr",
    "load_tables",
    "family_key",
    "fixture_particular",
    "errata_entry",
    "fixture_zero_mode",
    "fixture_modes",
    "compare_expressions",
    "list_families",
]


class FixtureError(ValueError):
    pass


_ALLOWED_BINOPS = {ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow}


def _promote_pair(a, b):
    """Promote int/Fraction/Constant/YLaurent operands to a common level."""
    def level(x):
        if isinstance(x, YLaurent):
            return 3
        if isinstance(x, Constant):
            return 2
        return 1

    la, lb = level(a), level(b)
    hi = max(la, lb)
    def up(x, lv):
        if lv == level(x):
            return x
        if isinstance(x, (int, Fraction)):
            x = Constant.from_rational(x)
        if lv == 3 and isinstance(x, Constant):
            x = YLaurent({(0, 0): x})
        return x

    return up(a, hi), up(b, hi), hi


def _apply_binop(op, a, b):
    if isinstance(op, ast.Pow):
        if not isinstance(b, int):
            raise FixtureError("exponent must be an integer literal")
        if isinstance(a, YLaurent):
            items = a.terms()
            if len(items) == 1:
                (k, j), c = next(iter(items.items()))
                if j == 0:
                    return YLaurent({(k * b, 0): c ** b})
            if b < 0:
                raise FixtureError("negative power of a polynomial")
            out = YLaurent.one()
            for _ in range(b):
                out = out * a
            return out
        if isinstance(a, (int, Fraction)):
            return Fraction(a) ** b if b < 0 else a ** b
        return a ** b
    a, b, lv = _promote_pair(a, b)
    if isinstance(op, ast.Add):
        return a + b
    if isinstance(op, ast.Sub):
        return a - b
    if isinstance(op, ast.Mult):
        if lv == 3:
            return a * b
        return a * b
    if isinstance(op, ast.Div):
        if lv < 3:
            if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
                return Fraction(a) / Fraction(b)
            return a / b
        # YLaurent division: divisor must be a y-monomial scalar
        if isinstance(b, YLaurent):
            items = b.terms()
            if len(items) != 1:
                raise FixtureError("division by a non-monomial Laurent polynomial")
            (k, j), c = next(iter(items.items()))
            if j != 0:
                raise FixtureError("division by log terms")
            return a.shift(-k).scale(Constant.one() / c)
        return a.scale(Constant.one() / b)
    raise FixtureError(f"operator {op} not allowed")


def eval_table_expr(text: str, names: Dict) -> object:
    """Evaluate a restricted arithmetic expression over the scalar ring."""
    tree = ast.parse(text, mode="eval")

    def run(node):
        if isinstance(node, ast.Expression):
            return run(node.body)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, int):
                return node.value
            raise FixtureError(f"literal {node.value!r} not allowed")
        if isinstance(node, ast.Name):
            if node.id in names:
                return names[node.id]
            raise FixtureError(f"unknown name {node.id!r}")
        if isinstance(node, ast.UnaryOp):
            v = run(node.operand)
            if isinstance(node.op, ast.USub):
                return _apply_binop(ast.Sub(), 0, v)
            if isinstance(node.op, ast.UAdd):
                return v
            raise FixtureError("unary operator not allowed")
        if isinstance(node, ast.BinOp):
            if type(node.op) not in _ALLOWED_BINOPS:
                raise FixtureError("operator not allowed")
            return _apply_binop(node.op, run(node.left), run(node.right))
        if isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name):
                raise FixtureError("only simple calls allowed")
            fname = node.func.id
            args = [run(a) for a in node.args]
            if fname == "abs" and len(args) == 1:
                return abs(args[0])
            if fname == "sgn" and len(args) == 1:
                return 1 if args[0] > 0 else (-1 if args[0] < 0 else 0)
            if fname == "sigma" and len(args) == 2:
                return sigma(int(args[0]), abs(int(args[1])))
            if fname == "logn" and len(args) == 1:
                return log_normalize(abs(int(args[0])))
            raise FixtureError(f"call {fname!r} not allowed")
        raise FixtureError(f"syntax {type(node).__name__} not allowed")

    return run(tree)


def _base_names() -> Dict:
    names: Dict = {
        "pi": Constant.pi_power(1),
        "y": YLaurent.monomial(1),
        "ly": YLaurent.monomial(0, 1, log_exp=1),
    }
    for k in range(2, 9):
        names[f"z{k}"] = zeta_value(k)
    return names


def _mode_names(n1: Optional[int] = None, n2: Optional[int] = None,
                n: Optional[int] = None) -> Dict:
    names = _base_names()
    if n1 is not None:
        names.update(n1=n1, sg1=1 if n1 > 0 else -1)
    if n2 is not None:
        names.update(n2=n2, sg2=1 if n2 > 0 else -1)
    if n is not None:
        names.update(n=n, sg=1 if n > 0 else -1)
    return names


def _as_ylaurent(value) -> YLaurent:
    if isinstance(value, YLaurent):
        return value
    if isinstance(value, (int, Fraction)):
        value = Constant.from_rational(value)
    if isinstance(value, Constant):
        return YLaurent({(0, 0): value})
    raise FixtureError(f"cannot interpret {type(value).__name__} as a polynomial")


def _as_constant(value) -> Constant:
    if isinstance(value, Constant):
        return value
    if isinstance(value, (int, Fraction)):
        return Constant.from_rational(value)
    raise FixtureError("expected a scalar value")


_TABLES = None


def load_tables() -> dict:
    global _TABLES
    if _TABLES is None:
        with resources.files("eisenmodes.data").joinpath("worked_tables.json").open() as fh:
            _TABLES = json.load(fh)
    return _TABLES


def family_key(alpha, beta, lam: int) -> str:
    return f"{alpha},{beta},{lam}"


def list_families() -> List[str]:
    return sorted(load_tables()["families"])


def _family(alpha, beta, lam) -> dict:
    key = family_key(alpha, beta, lam)
    fams = load_tables()["families"]
    if key not in fams:
        raise FixtureError(f"no fixture family {key}")
    return fams[key]


def fixture_zero_mode(alpha, beta, lam: int) -> Pure:
    fam = _family(alpha, beta, lam)
    if "zero_mode" not in fam:
        raise FixtureError("family has no zero-mode fixture")
    poly = _as_ylaurent(eval_table_expr(fam["zero_mode"], _base_names()))
    return Pure(poly)


def errata_entry(alpha, beta, lam: int, case: str, cell: str) -> Optional[dict]:
    key = f"{family_key(alpha, beta, lam)}|{case}|{cell}"
    return load_tables().get("errata", {}).get(key)


def _cell_expr(alpha, beta, lam, case, cell, expr, apply_errata, used):
    entry = errata_entry(alpha, beta, lam, case, cell)
    if entry is not None and apply_errata:
        used.append((case, cell, entry["reason"]))
        return entry["expr"]
    return expr


def fixture_particular(alpha, beta, lam: int, n1: int, n2: int,
                       apply_errata: bool = True,
                       errata_used: Optional[list] = None):
    """The printed particular solution evaluated at concrete (n1, n2).

    With apply_errata (the default) the handful of documented table typos
    are replaced by their corrected entries; the list of applied errata is
    appended to errata_used when given.
    """
    fam = _family(alpha, beta, lam)
    used = errata_used if errata_used is not None else []
    if n1 == 0 and n2 == 0:
        return fixture_zero_mode(alpha, beta, lam)
    if n1 == 0 or n2 == 0:
        case = "left" if n1 == 0 else "right"
        section = fam[case]
        n = n2 if n1 == 0 else n1
        names = _mode_names(n=n)
        pref = _as_constant(eval_table_expr(section["prefactor"], names))
        table = {
            int(j): _as_ylaurent(
                eval_table_expr(
                    _cell_expr(alpha, beta, lam, case, j, expr, apply_errata, used), names
                )
            ).scale(pref)
            for j, expr in section["cells"].items()
        }
        return SingleBessel(n, table)
    case = "anti_diagonal" if n1 + n2 == 0 else "generic"
    section = fam[case]
    names = _mode_names(n1=n1, n2=n2)
    if n1 + n2 == 0:
        # the printed anti-diagonal tables are written in terms of n2
        names = _mode_names(n1=n1, n2=n2, n=n2)
    pref = _as_constant(eval_table_expr(section["prefactor"], names))
    table = {
        (int(c[0]), int(c[1])): _as_ylaurent(
            eval_table_expr(
                _cell_expr(alpha, beta, lam, case, c, expr, apply_errata, used), names
            )
        ).scale(pref)
        for c, expr in section["cells"].items()
    }
    return DoubleBessel(n1, n2, table)


def fixture_modes(alpha, beta, lam: int) -> Dict[str, List[Tuple[int, int]]]:
    """Which (n1, n2) pairs each table of a family is compared at."""
    fam = _family(alpha, beta, lam)
    out: Dict[str, List[Tuple[int, int]]] = {}
    if "zero_mode" in fam:
        out["zero_mode"] = [(0, 0)]
    if "left" in fam:
        out["left"] = [(0, n) for n in (1, 2, 3)]
    if "right" in fam:
        out["right"] = [(n, 0) for n in (1, 2, 3)]
    if "generic" in fam:
        out["generic"] = [(1, 1), (1, 2), (2, 1), (2, 3), (1, -3), (3, -1)]
    if "anti_diagonal" in fam:
        out["anti_diagonal"] = [(-1, 1), (-2, 2), (-3, 3), (1, -1)]
    return out


def compare_expressions(computed, printed) -> List[str]:
    """Cell-by-cell exact comparison; returns human-readable differences."""
    diffs: List[str] = []
    if isinstance(computed, Pure) and isinstance(printed, Pure):
        delta = computed.poly - printed.poly
        for (k, j), c in delta.items_sorted():
            diffs.append(f"y^{k} log^{j}: difference {c!r}")
        return diffs
    if type(computed) is not type(printed):
        return [f"kind mismatch: {type(computed).__name__} vs {type(printed).__name__}"]
    keys = set(computed.table) | set(printed.table)
    zero = YLaurent.zero()
    for cell in sorted(keys):
        delta = computed.table.get(cell, zero) - printed.table.get(cell, zero)
        for (k, j), c in delta.items_sorted():
            diffs.append(f"cell {cell} y^{k} log^{j}: difference {c!r}")
    return diffs
