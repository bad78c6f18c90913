"""Independent floating-point oracle for the exact solver.

Everything here is double precision and self-contained: modified Bessel
functions, zeta values via Euler-Maclaurin, expression evaluation, and the
operator-residual check used to validate solved modes numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict

from .bessel import DoubleBessel, HomBasis, Pure, SingleBessel, differentiate
from .scalars import Symbol

__all__ = [
    "NumericEnv",
    "DEFAULT_ENV",
    "zeta_num",
    "zeta_prime_num",
    "bessel_k",
    "bessel_i",
    "eval_expr",
    "eval_hom",
    "eval_hom_normalized",
    "residual",
    "homogeneous_residual",
    "series_crosscheck",
    "fd_second_derivative",
]

EULER_GAMMA = 0.5772156649015328606


# ---------------------------------------------------------------------------
# zeta and zeta' by Euler-Maclaurin
# ---------------------------------------------------------------------------

_BERNOULLI_2K = [
    1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510,
]


def zeta_num(s: float, cutoff: int = 24) -> float:
    """Riemann zeta for real s > 1, accurate to ~1e-15."""
    if s <= 1:
        raise ValueError("zeta_num requires s > 1")
    n = cutoff
    total = sum(k ** (-s) for k in range(1, n))
    total += 0.5 * n ** (-s) + n ** (1 - s) / (s - 1)
    # correction terms B_{2k}/(2k)! * (s)(s+1)...(s+2k-2) * n^{-s-2k+1}
    rising = 1.0
    fact = 1.0
    for k, b2k in enumerate(_BERNOULLI_2K, start=1):
        rising *= (s + 2 * k - 3) * (s + 2 * k - 2) if k > 1 else s
        fact *= (2 * k) * (2 * k - 1)
        total += b2k / fact * rising * n ** (-s - 2 * k + 1)
    return total


def zeta_prime_num(s: float, cutoff: int = 24) -> float:
    """d/ds zeta(s) for real s > 1 (term-wise Euler-Maclaurin derivative)."""
    if s <= 1:
        raise ValueError("zeta_prime_num requires s > 1")
    n = cutoff
    ln_n = math.log(n)
    total = -sum(math.log(k) * k ** (-s) for k in range(2, n))
    total += -0.5 * ln_n * n ** (-s)
    total += n ** (1 - s) * (-ln_n / (s - 1) - 1 / (s - 1) ** 2)
    rising = 1.0
    dlog = 0.0  # derivative of log(rising)
    fact = 1.0
    for k, b2k in enumerate(_BERNOULLI_2K, start=1):
        if k == 1:
            rising = s
            dlog = 1 / s
        else:
            for j in (s + 2 * k - 3, s + 2 * k - 2):
                rising *= j
                dlog += 1 / j
        fact *= (2 * k) * (2 * k - 1)
        total += b2k / fact * rising * (dlog - ln_n) * n ** (-s - 2 * k + 1)
    return total


@dataclass
class NumericEnv:
    """Assignments for every scalar symbol, with high-accuracy defaults."""

    overrides: Dict[Symbol, float] = field(default_factory=dict)
    _cache: Dict[Symbol, float] = field(default_factory=dict, repr=False)

    def value(self, sym: Symbol) -> float:
        if sym in self.overrides:
            return self.overrides[sym]
        if sym not in self._cache:
            self._cache[sym] = self._compute(sym)
        return self._cache[sym]

    __call__ = value

    @staticmethod
    def _compute(sym: Symbol) -> float:
        kind, arg = sym
        if kind == "pi":
            return math.pi
        if kind == "gamma":
            return EULER_GAMMA
        if kind == "ln_pi":
            return math.log(math.pi)
        if kind == "ln_prime":
            return math.log(arg)
        if kind == "zeta":
            return zeta_num(arg)
        if kind == "zeta_prime":
            if arg == 0:
                return -0.5 * math.log(2 * math.pi)
            if arg <= 1:
                raise ValueError(f"no numeric default for zeta'({arg})")
            return zeta_prime_num(arg)
        raise ValueError(f"unassigned symbol {sym}")


DEFAULT_ENV = NumericEnv()


# ---------------------------------------------------------------------------
# Modified Bessel functions
# ---------------------------------------------------------------------------


def _k01_series(x: float):
    """Power-series K_0, K_1 for small x (used below x = 0.5; no cancellation there)."""
    u = x * x / 4
    lg = math.log(x / 2) + EULER_GAMMA
    i0 = term = 1.0
    k0 = 0.0
    h = 0.0
    m = 1
    while True:
        term *= u / (m * m)
        h += 1 / m
        i0 += term
        k0 += term * h
        if term < 1e-19 * i0:
            break
        m += 1
    k0 += -lg * i0

    # K_1 = 1/x + (log(x/2)+gamma) I_1 - (x/4) sum (H_m + H_{m+1}) u^m / (m!(m+1)!)
    i1 = x / 2
    term = x / 2
    corr = 1.0  # (H_0 + H_1) = 1 at m=0
    h_m, h_m1 = 0.0, 1.0
    cterm = 1.0
    m = 1
    while True:
        term *= u / (m * (m + 1))
        cterm *= u / (m * (m + 1))
        h_m += 1 / m
        h_m1 += 1 / (m + 1)
        i1 += term
        corr += cterm * (h_m + h_m1)
        if term < 1e-19 * i1:
            break
        m += 1
    k1 = 1 / x + lg * i1 - (x / 4) * corr
    return k0, k1


def _k01_quadrature(x: float):
    """K_nu(x) = integral_0^inf exp(-x cosh t) cosh(nu t) dt via trapezoid.

    The integrand extends to an even, super-exponentially decaying function of
    t, so the trapezoid rule converges spectrally; h = 1/16 gives ~1e-15.
    """
    h = 1.0 / 16
    t_max = math.acosh(max(800.0 / x, 2.0))
    n_steps = int(t_max / h) + 2
    k0 = 0.5 * math.exp(-x)
    k1 = 0.5 * math.exp(-x)
    for k in range(1, n_steps + 1):
        t = k * h
        w = math.exp(-x * math.cosh(t))
        if w == 0.0:
            break
        k0 += w
        k1 += w * math.cosh(t)
    return k0 * h, k1 * h


def _k01(x: float):
    if x <= 0:
        raise ValueError("argument must be positive")
    return _k01_series(x) if x < 0.5 else _k01_quadrature(x)


def bessel_k(nu, x: float) -> float:
    """Modified Bessel K_nu(x) for integer or half-integer nu >= 0, x > 0.

    Integer orders use upward recurrence from K_0, K_1; half-integer orders
    use the finite closed form sqrt(pi/2x) e^{-x} * polynomial(1/x).
    """
    if x <= 0:
        raise ValueError("argument must be positive")
    two_nu = round(2 * float(nu))
    if abs(2 * float(nu) - two_nu) > 1e-12 or two_nu < 0:
        raise ValueError(f"order must be a nonnegative integer or half-integer, got {nu}")
    if two_nu % 2 == 0:
        order = two_nu // 2
        k0, k1 = _k01(x)
        if order == 0:
            return k0
        prev, cur = k0, k1
        for j in range(1, order):
            prev, cur = cur, prev + (2 * j / x) * cur
        return cur
    m = (two_nu - 1) // 2
    total = 0.0
    for k in range(m + 1):
        total += (
            math.factorial(m + k)
            / (math.factorial(k) * math.factorial(m - k))
            * (2 * x) ** (-k)
        )
    return math.sqrt(math.pi / (2 * x)) * math.exp(-x) * total


def bessel_i(nu, x: float) -> float:
    """Modified Bessel I_nu(x) by its ascending series (adequate for x <= ~60)."""
    if x <= 0:
        raise ValueError("argument must be positive")
    nu = float(nu)
    term = (x / 2) ** nu / math.gamma(nu + 1)
    total = term
    k = 0
    while True:
        k += 1
        term *= (x * x / 4) / (k * (k + nu))
        total += term
        if term < 1e-18 * total:
            return total
        if k > 500:
            raise RuntimeError("I_nu series did not converge")


# ---------------------------------------------------------------------------
# Expression evaluation
# ---------------------------------------------------------------------------


def eval_expr(expr, y: float, env: NumericEnv = DEFAULT_ENV) -> float:
    """Numeric value of a Bessel expression at y > 0."""
    if isinstance(expr, Pure):
        return expr.poly.evaluate(env, y)
    if isinstance(expr, SingleBessel):
        n = abs(expr.n)
        return math.fsum(
            q.evaluate(env, y) * bessel_k(j, 2 * math.pi * n * y)
            for j, q in expr.table.items()
        )
    if isinstance(expr, DoubleBessel):
        n1, n2 = abs(expr.n1), abs(expr.n2)
        return math.fsum(
            q.evaluate(env, y)
            * bessel_k(i, 2 * math.pi * n1 * y)
            * bessel_k(j, 2 * math.pi * n2 * y)
            for (i, j), q in expr.table.items()
        )
    raise TypeError(f"cannot evaluate {type(expr).__name__}")


def eval_hom(basis: HomBasis, y: float) -> float:
    """Numeric value of a homogeneous basis element (conventional, unscaled form)."""
    if basis.kind == "power_neg":
        return y ** (-basis.r)
    if basis.kind == "power_pos":
        return y ** (basis.r + 1)
    z = 2 * math.pi * abs(basis.n) * y
    fn = bessel_k if basis.kind == "K" else bessel_i
    return math.sqrt(y) * fn(basis.r + 0.5, z)


def eval_hom_normalized(basis: HomBasis, y: float) -> float:
    """The scaled decaying element 2 sqrt|n| sqrt(y) K_{r+1/2}; power kinds unscaled."""
    if basis.kind == "K":
        return 2 * math.sqrt(abs(basis.n)) * eval_hom(basis, y)
    return eval_hom(basis, y)


def _second_derivative_value(expr, y: float, env: NumericEnv) -> float:
    return eval_expr(differentiate(differentiate(expr)), y, env)


def _expr_terms_exact(expr, y: float, env: NumericEnv):
    """Cell contributions of expr(y) as exact Fractions of double inputs.

    Bessel values, scalar constants and powers are evaluated in double
    precision (the inputs of the check); all products and sums combining
    them are carried exactly so the deep cross-cell cancellations of the
    operator identity do not amplify arithmetic noise.
    """
    from fractions import Fraction as _F

    y_f = _F(y)
    ln_f = _F(math.log(y))

    def poly_terms(q):
        return [
            _F(c.evaluate(env)) * y_f**k * ln_f**j for (k, j), c in q.terms().items()
        ]

    if isinstance(expr, Pure):
        return poly_terms(expr.poly)
    out = []
    if isinstance(expr, SingleBessel):
        n = abs(expr.n)
        for j, q in expr.table.items():
            kf = _F(bessel_k(j, 2 * math.pi * n * y))
            out.extend(t * kf for t in poly_terms(q))
        return out
    if isinstance(expr, DoubleBessel):
        n1, n2 = abs(expr.n1), abs(expr.n2)
        for (i, j), q in expr.table.items():
            kf = _F(bessel_k(i, 2 * math.pi * n1 * y)) * _F(bessel_k(j, 2 * math.pi * n2 * y))
            out.extend(t * kf for t in poly_terms(q))
        return out
    raise TypeError(f"cannot evaluate {type(expr).__name__}")


def _hom_operator_value(basis: HomBasis, lam: int, nsum: int, y: float) -> float:
    """(y^2 d^2 - lam - 4 pi^2 nsum^2 y^2) applied to the scaled basis element.

    Uses K_nu'(z) = -(K_{nu-1} + K_{nu+1})/2 on the half-integer closed forms;
    the result should vanish to rounding for a true homogeneous solution.
    """
    if basis.kind in ("power_neg", "power_pos"):
        k = -basis.r if basis.kind == "power_neg" else basis.r + 1
        return (k * (k - 1) - lam) * y**k - 4 * math.pi**2 * nsum**2 * y ** (k + 2)
    c = 2 * math.pi * abs(basis.n)
    nu = basis.r + 0.5
    fn = bessel_k if basis.kind == "K" else bessel_i
    sgn = -1.0 if basis.kind == "K" else 1.0
    f = fn(nu, c * y)
    fm = fn(nu - 1, c * y)
    fp = fn(nu + 1, c * y)
    d1 = sgn * 0.5 * (fm + fp)  # d/dz of K (resp. I)
    # second z-derivative from the recurrence applied twice; K_{-nu} = K_{nu}
    fmm = fn(abs(nu - 2), c * y) if basis.kind == "K" else fn(nu - 2, c * y)
    fpp = fn(nu + 2, c * y)
    d2 = 0.25 * (fmm + 2 * f + fpp)
    g = math.sqrt(y) * f
    g1 = 0.5 / math.sqrt(y) * f + math.sqrt(y) * c * d1
    g2 = -0.25 * y ** (-1.5) * f + c * d1 / math.sqrt(y) + math.sqrt(y) * c * c * d2
    scale = 2 * math.sqrt(abs(basis.n))
    return scale * (y * y * g2 - lam * g - 4 * math.pi**2 * nsum**2 * y * y * g)


def residual(mode, y: float, env: NumericEnv = DEFAULT_ENV, scale: float | None = None) -> float:
    """Relative operator residual |LHS - RHS| / max(|RHS at 1|, tiny) for a mode.

    ``mode`` is a ModeSolution-like object exposing params (with lam), n1, n2,
    particular, source (BesselExpr/Pure), hom basis and alpha.  The second
    derivative is applied through the exact factor-derivative rules and then
    evaluated numerically.
    """
    from fractions import Fraction as _F

    lam = mode.params.lam
    nsum = mode.n1 + mode.n2
    part = mode.particular
    y_f = _F(y)
    mass = _F(4) * _F(math.pi) ** 2 * nsum * nsum * y_f * y_f
    terms = [t * y_f * y_f for t in _expr_terms_exact(
        differentiate(differentiate(part)), y, env)]
    terms.extend(t * (-lam - mass) for t in _expr_terms_exact(part, y, env))
    if mode.alpha is not None and mode.hom_basis is not None:
        alpha_num = mode.alpha.evaluate(env)
        terms.append(_F(alpha_num) * _F(_hom_operator_value(mode.hom_basis, lam, nsum, y)))
    source = mode.source.full() if hasattr(mode.source, "full") else mode.source
    rhs_terms = _expr_terms_exact(source, y, env)
    rhs = float(sum(rhs_terms))
    if scale is None:
        # |RHS(y)| with the |RHS(1)| floor guarding zeros of the source
        scale = max(abs(rhs), abs(eval_expr(source, 1.0, env)), 1e-300)
    diff = sum(terms) - sum(rhs_terms)
    return abs(float(diff)) / scale


def homogeneous_residual(basis: HomBasis, lam: int, nsum: int, y: float) -> float:
    """|operator applied to the basis element| relative to its magnitude."""
    val = _hom_operator_value(basis, lam, nsum, y)
    ref = abs(eval_hom_normalized(basis, y)) * max(lam, 1)
    return abs(val) / max(ref, 1e-300)


def series_crosscheck(expr, order: int, y_small: float = 1e-3,
                      env: NumericEnv = DEFAULT_ENV) -> dict:
    """Compare the exact small-y series against direct evaluation at y_small."""
    from .series import small_y_series

    freqs = []
    if isinstance(expr, SingleBessel):
        freqs = [abs(expr.n)]
    elif isinstance(expr, DoubleBessel):
        freqs = [abs(expr.n1), abs(expr.n2)]
    radius_ok = all(2 * math.pi * n * y_small < 0.5 for n in freqs)
    if not radius_ok:
        return {"status": "inconclusive", "reason": "outside series radius heuristic"}
    s = small_y_series(expr, order)
    approx = s.terms.evaluate(env, y_small)
    direct = eval_expr(expr, y_small, env)
    denom = max(abs(direct), 1e-300)
    return {
        "status": "ok",
        "series": approx,
        "direct": direct,
        "relative_error": abs(approx - direct) / denom,
    }


def fd_second_derivative(f: Callable[[float], float], y: float, h: float = 1e-4) -> float:
    """Central second difference (5-point, O(h^4) stencil).

    The default step balances truncation against rounding noise amplified by
    h^-2; for exponentially small integrands h = 1e-5 is already
    rounding-dominated in double precision.
    """
    return (
        -f(y + 2 * h) + 16 * f(y + h) - 30 * f(y) + 16 * f(y - h) - f(y - 2 * h)
    ) / (12 * h * h)
