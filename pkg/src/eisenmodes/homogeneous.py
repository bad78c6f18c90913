"""Boundary matching, full mode solutions, divisor sums and combinations.

A mode solution is particular + alpha * (decaying homogeneous element); alpha
is fixed uniquely by requiring o(y^{-r}) behavior as y -> 0.  For Bessel-type
homogeneous elements alpha is stored against the *normalized* element

    2 sqrt|n| sqrt(y) K_{r+1/2}(2 pi |n| y)
      = exp(-2 pi |n| y) sum_{k<=r} (r+k)!/(k!(r-k)!) (4 pi |n| y)^{-k},

whose small-y coefficients stay inside the exact scalar ring; the
conventional coefficient of sqrt(y) K_{r+1/2} itself is alpha * 2 sqrt|n|.  Modes whose particular part carries a
log(y) (or a worse power) at y^{-r} cannot be repaired by any alpha and are
reported as obstructed, with the offending leading terms attached.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .bessel import HomBasis, expr_from_json_obj, expr_to_json_obj
from .divisors import (
    ramanujan_convolution,
    ramanujan_log_convolution,
    sigma,
    sigma_float_table,
)
from .numerics import DEFAULT_ENV, NumericEnv
from .scalars import Constant, log_normalize, sym_ln_prime
from .series import hom_norm_leading, hom_norm_scale_description, small_y_series
from .solver import (
    DEFAULT_WIDEN_CAP,
    SolveReport,
    solve_particular_double,
    solve_particular_single,
    solve_zero_mode,
)
from .sources import Normalization, Params, SourceTerm, source_term

__all__ = [
    "Obstruction",
    "ModeSolution",
    "Combination",
    "ModeAssembly",
    "ZeroModeSumResult",
    "choose_alpha",
    "solve_mode",
    "assemble_mode",
    "alpha_decay_scan",
    "evaluate_high_precision",
    "zero_mode_alpha_sum",
    "combine",
    "T_MINUS_2_WEIGHTS",
]


@dataclass(frozen=True)
class Obstruction:
    """Singular small-y terms that no homogeneous coefficient can cancel."""

    leading: Tuple[Tuple[int, int, Constant], ...]  # (y_exp, log_exp, coeff)
    secondary_alpha: Optional[Constant]  # still cancels the log-free y^{-r} piece
    message: str


@dataclass
class ModeSolution:
    params: Params
    n1: int
    n2: int
    source: SourceTerm
    particular: object  # prefactor-folded BesselExpr / Pure
    hom_basis: Optional[HomBasis]
    alpha: Optional[Constant]
    obstruction: Optional[Obstruction]
    alpha_normalization: str
    report: Optional[SolveReport]
    alpha_free: bool = False  # zero mode: alpha is a free constant (policy-chosen)

    @property
    def boundary_order_achieved(self) -> bool:
        return self.obstruction is None

    @property
    def case(self) -> str:
        return self.source.case_tag

    def alpha_convention(self) -> str:
        """The conventional coefficient of sqrt(y) K_{r+1/2} is alpha * 2 sqrt|n|."""
        if self.hom_basis is None or self.hom_basis.kind != "K":
            return "alpha multiplies the basis element directly"
        return f"conventional coefficient = alpha * 2*sqrt({abs(self.hom_basis.n)})"

    def to_json_obj(self) -> dict:
        return {
            "schema": "eisenmodes/mode-solution/1",
            "params": {
                "alpha": str(self.params.alpha),
                "beta": str(self.params.beta),
                "lambda": self.params.lam,
                "normalization": self.params.normalization.value,
            },
            "n1": self.n1,
            "n2": self.n2,
            "case": self.case,
            "particular": expr_to_json_obj(self.particular),
            "source_full": expr_to_json_obj(self.source.full()),
            "hom_basis": None
            if self.hom_basis is None
            else {
                "kind": self.hom_basis.kind,
                "r": self.hom_basis.r,
                "n": self.hom_basis.n,
                "description": self.hom_basis.describe(),
            },
            "alpha": None if self.alpha is None else self.alpha.to_json_obj(),
            "alpha_free": self.alpha_free,
            "alpha_normalization": self.alpha_normalization,
            "obstruction": None
            if self.obstruction is None
            else {
                "message": self.obstruction.message,
                "leading": [
                    {"y": k, "log": j, "coeff": c.to_json_obj()}
                    for k, j, c in self.obstruction.leading
                ],
            },
            "report": None if self.report is None else self.report.to_json_obj(),
        }


def mode_solution_from_json_obj(obj: dict) -> ModeSolution:
    p = Params(
        Fraction(obj["params"]["alpha"]),
        Fraction(obj["params"]["beta"]),
        obj["params"]["lambda"],
        Normalization(obj["params"]["normalization"]),
    )
    src = source_term(p, obj["n1"], obj["n2"])
    hom = None
    if obj["hom_basis"] is not None:
        hb = obj["hom_basis"]
        hom = HomBasis(hb["kind"], hb["r"], hb["n"])
    alpha = None if obj["alpha"] is None else Constant.from_json_obj(obj["alpha"])
    obstruction = None
    if obj["obstruction"] is not None:
        obstruction = Obstruction(
            tuple(
                (e["y"], e["log"], Constant.from_json_obj(e["coeff"]))
                for e in obj["obstruction"]["leading"]
            ),
            None,
            obj["obstruction"]["message"],
        )
    return ModeSolution(
        p,
        obj["n1"],
        obj["n2"],
        src,
        expr_from_json_obj(obj["particular"]),
        hom,
        alpha,
        obstruction,
        obj.get("alpha_normalization", ""),
        None,
        obj.get("alpha_free", False),
    )


# ---------------------------------------------------------------------------
# Boundary matching
# ---------------------------------------------------------------------------


def choose_alpha(particular, r: int, n1: int, n2: int):
    """Unique alpha cancelling the y^{-r} (log-free) coefficient.

    Returns (alpha, basis, None) on success or (None, basis, Obstruction) when
    the small-y series carries y^{-k} with k > r, or log(y)-bearing y^{-r}
    terms; in that case the log-free y^{-r} piece is still cancelled and the
    corresponding coefficient is attached as secondary_alpha.
    """
    nsum = n1 + n2
    basis = HomBasis("K", r, nsum) if nsum != 0 else HomBasis("power_neg", r)
    series = small_y_series(particular, -r + 1)
    bad = []
    for (k, j), coeff in series.terms.items_sorted():
        if k < -r or (k == -r and j >= 1):
            bad.append((k, j, coeff))
    target = series.coeff(-r, 0)
    if nsum != 0:
        alpha_value = Constant.zero() - target / hom_norm_leading(r, nsum)
    else:
        alpha_value = Constant.zero() - target
    if bad:
        bad.sort(key=lambda t: (t[0], -t[1]))
        obs = Obstruction(
            tuple(bad),
            alpha_value,
            f"cannot reach o(y^-{r}): offending terms at "
            + ", ".join(f"y^{k} log^{j}" for k, j, _ in bad),
        )
        return None, basis, obs
    return alpha_value, basis, None


# ---------------------------------------------------------------------------
# Full mode solve
# ---------------------------------------------------------------------------


def solve_mode(
    params: Params,
    n1: int,
    n2: int,
    window_override: Optional[Dict] = None,
    widen_cap: int = DEFAULT_WIDEN_CAP,
) -> ModeSolution:
    """Solve one (n1, n2) sub-mode: particular part plus boundary matching."""
    src = source_term(params, n1, n2)
    r = params.r

    if n1 == 0 and n2 == 0:
        zm = solve_zero_mode(params, src.core)
        hom = zm.free_basis[0]
        return ModeSolution(
            params, 0, 0, src, zm.particular, hom, None, None,
            "alpha_0,0 is a free constant; zero_mode_alpha_sum chooses it",
            None, alpha_free=True,
        )

    if n1 == 0 or n2 == 0:
        core_sol, report = solve_particular_single(
            params, src.core, window_override, widen_cap, case=src.case_tag
        )
    else:
        core_sol, report = solve_particular_double(
            params, src.core, window_override, widen_cap, case=src.case_tag
        )
    particular = core_sol.scale(src.prefactor.combined())

    alpha = basis = obstruction = None
    note = ""
    if r is not None:
        alpha, basis, obstruction = choose_alpha(particular, r, n1, n2)
        note = (
            hom_norm_scale_description(r, n1 + n2)
            if n1 + n2 != 0
            else f"alpha multiplies y^-{r}"
        )
    return ModeSolution(
        params, n1, n2, src, particular, basis, alpha, obstruction, note, report
    )


# ---------------------------------------------------------------------------
# Mode assembly and convergence diagnostics
# ---------------------------------------------------------------------------


@dataclass
class DecayReport:
    exponent: Optional[float]
    status: str  # convergent | divergent | inconclusive
    scan_range: Tuple[int, int]
    samples: int

    def to_json_obj(self) -> dict:
        return {
            "exponent": self.exponent,
            "status": self.status,
            "scan_range": list(self.scan_range),
            "samples": self.samples,
        }


@dataclass
class ModeAssembly:
    params: Params
    n: int
    modes: List[ModeSolution]
    alpha_partial_sums: List[Constant]
    obstructed: bool
    decay: Optional[DecayReport]
    exact_alpha_sum: Optional["ZeroModeSumResult"] = None

    def to_json_obj(self) -> dict:
        return {
            "schema": "eisenmodes/mode-assembly/1",
            "n": self.n,
            "modes": [m.to_json_obj() for m in self.modes],
            "alpha_partial_sums": [c.to_json_obj() for c in self.alpha_partial_sums],
            "obstructed": self.obstructed,
            "decay": None if self.decay is None else self.decay.to_json_obj(),
            "exact_alpha_sum": None
            if self.exact_alpha_sum is None
            else self.exact_alpha_sum.to_json_obj(),
        }


def _solve_mode_task(args):
    params, n1, n2 = args
    return solve_mode(params, n1, n2)


def assemble_mode(
    params: Params,
    n: int,
    cutoff: int,
    scan_range: Tuple[int, int] = (10, 200),
    decay: bool = True,
    workers: int = 1,
    env: NumericEnv = DEFAULT_ENV,
) -> ModeAssembly:
    """All (n1, n - n1) sub-modes with |n1| <= cutoff, plus convergence data.

    Exact solves run per sub-mode (optionally across a process pool); the
    decay exponent of alpha_{n1, n-n1} is fitted from the fast numeric path
    over the scan range and classified divergent when the log-log slope
    exceeds -1 + 0.1.
    """
    if cutoff < abs(n) + 1:
        raise ValueError("cutoff must be at least |n| + 1")
    pairs = [(n1, n - n1) for n1 in range(-cutoff, cutoff + 1)]
    tasks = [(params, a, b) for a, b in pairs]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            modes = list(pool.map(_solve_mode_task, tasks))
    else:
        modes = [_solve_mode_task(t) for t in tasks]
    modes.sort(key=lambda m: m.n1)

    partial = Constant.zero()
    partials = []
    obstructed = False
    for m in modes:
        if m.obstruction is not None:
            obstructed = True
        a = m.alpha if m.alpha is not None else (
            m.obstruction.secondary_alpha if m.obstruction else None
        )
        if a is not None and not m.alpha_free:
            partial = partial + a
        partials.append(partial)

    decay_report = None
    if decay:
        decay_report = _fit_decay(params, n, scan_range, env)
    exact_sum = None
    if n == 0 and decay and params.r is not None:
        exact_sum = zero_mode_alpha_sum(params, "RamanujanExact", probe=min(8, cutoff))
    return ModeAssembly(params, n, modes, partials, obstructed, decay_report, exact_sum)


def alpha_decay_scan(params: Params, n: int, scan_range=(10, 200), samples: int = 24,
                     env: NumericEnv = DEFAULT_ENV) -> DecayReport:
    """Fit the decay exponent of alpha_{n1, n-n1} over |n1| in scan_range."""
    return _fit_decay(params, n, scan_range, env, samples)


def _log_spaced(lo: int, hi: int, count: int) -> List[int]:
    raw = np.unique(np.round(np.exp(np.linspace(math.log(lo), math.log(hi), count)))).astype(int)
    return [int(v) for v in raw if lo <= v <= hi]


def _fit_decay(params: Params, n: int, scan_range, env: NumericEnv,
               samples: int = 24) -> DecayReport:
    """Least-squares slope of log|alpha| against log|n1|.

    Near the anti-diagonal the closed forms cancel over tens of digits, so
    each sampled mode is solved exactly and its alpha evaluated in high
    precision; the sample grid is log-spaced across the scan range.
    """
    lo, hi = scan_range
    values = []
    for n1 in _log_spaced(lo, hi, samples):
        for m1 in (n1, -n1):
            n2 = n - m1
            if m1 == 0 or n2 == 0 or m1 + n2 == 0:
                continue
            mode = solve_mode(params, m1, n2)
            a = mode.alpha if mode.alpha is not None else (
                mode.obstruction.secondary_alpha if mode.obstruction else None
            )
            if a is None:
                continue
            val = abs(evaluate_high_precision(a))
            if val > 0:
                values.append((abs(m1), val))
    if len(values) < 8:
        return DecayReport(None, "inconclusive", scan_range, len(values))
    values.sort()
    top = values[len(values) // 2:]
    xs = np.log([v[0] for v in top])
    ys = np.log([v[1] for v in top])
    slope = float(np.polyfit(xs, ys, 1)[0])
    if slope >= -1 + 0.1:
        status = "divergent"
    elif slope <= -1.1:
        status = "convergent"
    else:
        status = "inconclusive"
    return DecayReport(-slope, status, scan_range, len(values))


def evaluate_high_precision(c: Constant, dps: int = 60) -> float:
    """Evaluate a Constant with mpmath at `dps` digits, returning a float.

    Double precision is not enough here: near-anti-diagonal alphas are tiny
    differences of huge terms (the closed forms cancel over ~20 digits
    before the O(|n1|^-k) tail emerges).
    """
    import mpmath as mp

    with mp.workdps(dps):
        def value(sym):
            kind, arg = sym
            if kind == "pi":
                return mp.pi
            if kind == "gamma":
                return mp.euler
            if kind == "ln_pi":
                return mp.log(mp.pi)
            if kind == "ln_prime":
                return mp.log(arg)
            if kind == "zeta":
                return mp.zeta(arg)
            if kind == "zeta_prime":
                return mp.zeta(arg, derivative=1)
            raise ValueError(f"unassigned symbol {sym}")

        total = mp.mpf(0)
        for mono, coeff in c.terms().items():
            v = mp.mpf(coeff.numerator) / coeff.denominator
            for sym, e in mono.items():
                v *= value(sym) ** e
            total += v
        return float(total)


# ---------------------------------------------------------------------------
# Zero-mode alpha sums (Ramanujan route)
# ---------------------------------------------------------------------------


@dataclass
class ZeroModeSumResult:
    method: str
    status: str  # exact | formal | divergent | unrecognized
    shape: Optional[dict]
    value: Optional[Constant]
    numeric: Optional[float]
    partial_sums: Dict[int, float]
    alpha00_choice: Optional[Constant]

    def to_json_obj(self) -> dict:
        return {
            "method": self.method,
            "status": self.status,
            "shape": None if self.shape is None else {
                "a": self.shape["a"], "b": self.shape["b"], "s": self.shape["s"],
                "coefficient": self.shape["A"].to_json_obj(),
                "log_coefficient": None if self.shape["B"] is None else self.shape["B"].to_json_obj(),
            },
            "value": None if self.value is None else self.value.to_json_obj(),
            "numeric": self.numeric,
            "partial_sums": self.partial_sums,
            "alpha00_choice": None if self.alpha00_choice is None else self.alpha00_choice.to_json_obj(),
        }


def _recognize_alpha_shape(params: Params, probe: int = 12):
    """Recognize alpha_{-n,n} = sigma_a sigma_b / n^s * (A + B log n) exactly.

    a = 2 alpha - 1 and b = 2 beta - 1; s is found by exact constancy over the
    probe range, and the whole decomposition is re-verified on every probe
    value.  Returns (a, b, s, A, B, alphas) or None.
    """
    a = int(2 * params.alpha - 1)
    b = int(2 * params.beta - 1)
    alphas = {}
    for n in range(1, probe + 1):
        mode = solve_mode(params, -n, n)
        val = mode.alpha if mode.alpha is not None else (
            mode.obstruction.secondary_alpha if mode.obstruction else None
        )
        if val is None:
            return None
        alphas[n] = val
    for s in range(0, 41):
        d = {
            n: alphas[n] * Fraction(n) ** s / (sigma(a, n) * sigma(b, n))
            for n in alphas
        }
        A = d[1]
        try:
            diff2 = d[2] - A
            B = Constant.zero() if diff2.is_zero() else diff2 / Constant.monomial(
                sym_ln_prime(2)
            )
        except ValueError:
            continue
        ok = all(d[n] == A + B * log_normalize(n) for n in alphas)
        if ok:
            return {"a": a, "b": b, "s": s, "A": A, "B": B, "alphas": alphas}
    return None


def zero_mode_alpha_sum(
    params: Params,
    method: str = "RamanujanExact",
    probe: int = 12,
    partial_limits: Sequence[int] = (100, 1000, 10000),
    env: NumericEnv = DEFAULT_ENV,
) -> ZeroModeSumResult:
    """Total of alpha_{-n,n} over n != 0 via the divisor convolution identities.

    method: RamanujanExact (requires convergence), FormalRamanujan (analytic
    continuation, clearly labeled), NumericPartial (partial sums of the
    recognized shape).  alpha00_choice is the negative of the total, making
    the homogeneous contributions sum to zero.
    """
    shape = _recognize_alpha_shape(params, probe)
    if shape is None:
        return ZeroModeSumResult(method, "unrecognized", None, None, None, {}, None)
    a, b, s, A, B = shape["a"], shape["b"], shape["s"], shape["A"], shape["B"]
    has_log = not B.is_zero()

    base = ramanujan_convolution(a, b, s, env)
    convergent = base.status == "convergent"
    partial_sums: Dict[int, float] = {}
    A_num, B_num = A.evaluate(env), B.evaluate(env)
    for limit in partial_limits:
        ta = sigma_float_table(a, limit)
        tb = ta if a == b else sigma_float_table(b, limit)
        total = 0.0
        for n in range(1, limit + 1):
            w = A_num + (B_num * math.log(n) if has_log else 0.0)
            total += 2.0 * ta[n] * tb[n] * w / float(n) ** s
        partial_sums[limit] = total

    if method == "NumericPartial":
        return ZeroModeSumResult(
            method, "exact" if convergent else "divergent", shape_doc(shape),
            None, partial_sums[max(partial_limits)], partial_sums, None,
        )

    if not convergent and method != "FormalRamanujan":
        return ZeroModeSumResult(
            method, "divergent", shape_doc(shape), None, None, partial_sums, None
        )

    value = A * base.value if base.closed_form is not None else None
    numeric = A_num * base.numeric if base.closed_form is not None else None
    if has_log:
        logpart = ramanujan_log_convolution(a, b, s, env)
        if logpart.closed_form is None or value is None:
            return ZeroModeSumResult(
                method, "formal", shape_doc(shape), None, None, partial_sums, None
            )
        value = value + B * logpart.value
        numeric = numeric + B_num * logpart.numeric
    status = "exact" if convergent else "formal"
    alpha00 = None if value is None else Constant.zero() - value
    return ZeroModeSumResult(method, status, shape_doc(shape), value, numeric,
                             partial_sums, alpha00)


def shape_doc(shape: dict) -> dict:
    return {k: shape[k] for k in ("a", "b", "s", "A", "B")}


# ---------------------------------------------------------------------------
# Linear combinations (integrated-correlator style)
# ---------------------------------------------------------------------------

# 1/N^2 contribution: C_1 + 14175/(704 pi^4) E(6, 5/2, 3/2) - 1215/(88 pi^4) E(4, 5/2, 3/2)
T_MINUS_2_WEIGHTS: List[Tuple[Constant, Params]] = [
    (
        Constant.pi_power(-4, Fraction(14175, 704)),
        Params(Fraction(5, 2), Fraction(3, 2), 42, Normalization.CORRELATOR),
    ),
    (
        Constant.pi_power(-4, Fraction(-1215, 88)),
        Params(Fraction(5, 2), Fraction(3, 2), 20, Normalization.CORRELATOR),
    ),
]


@dataclass
class Combination:
    entries: List[Tuple[Constant, Params]]
    n1: int
    n2: int
    table: object  # combined BesselExpr
    hom_parts: List[Tuple[Constant, HomBasis]]
    free_constants: List[str]
    modes: List[ModeSolution]

    def to_json_obj(self) -> dict:
        return {
            "schema": "eisenmodes/combination/1",
            "n1": self.n1,
            "n2": self.n2,
            "entries": [
                {"coeff": c.to_json_obj(), "params": p.describe()} for c, p in self.entries
            ],
            "table": expr_to_json_obj(self.table),
            "hom_parts": [
                {"coeff": c.to_json_obj(), "basis": b.describe()} for c, b in self.hom_parts
            ],
            "free_constants": self.free_constants,
        }


def combine(
    entries: Sequence[Tuple[Constant, Params]],
    n1: int,
    n2: int,
    free_constants: Sequence[str] = (),
) -> Combination:
    """Weighted sum of mode solutions sharing (n1, n2).

    All entries must use the correlator normalization; homogeneous parts with
    distinct Bessel indices r + 1/2 are kept separate per entry.
    """
    if any(p.normalization is not Normalization.CORRELATOR for _, p in entries):
        raise ValueError("combinations require the correlator normalization")
    modes = [solve_mode(p, n1, n2) for _, p in entries]
    table = None
    hom_parts = []
    for (coeff, p), mode in zip(entries, modes):
        if mode.obstruction is not None:
            raise ValueError(f"entry {p.describe()} is obstructed at ({n1}, {n2})")
        piece = mode.particular.scale(coeff)
        table = piece if table is None else table + piece
        if mode.alpha is not None and mode.hom_basis is not None:
            hom_parts.append((coeff * mode.alpha, mode.hom_basis))
    return Combination(list(entries), n1, n2, table, hom_parts, list(free_constants), modes)
