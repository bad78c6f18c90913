"""How the homogeneous coefficient is pinned by small-y behavior.

The particular solution behaves like c * y^{-r} as y -> 0; adding
alpha * sqrt(y) K_{r+1/2}(2 pi |n| y) with exactly one alpha removes that
growth.  We show the exact series cancellation, the numeric effect, and an
obstructed case (lambda = 2) where a log(y) term blocks the matching.
"""

import math
from fractions import Fraction

from eisenmodes import NumericEnv, Params, small_y_series, solve_mode
from eisenmodes.numerics import eval_expr, eval_hom_normalized
from eisenmodes.series import hom_norm_series

env = NumericEnv()

params = Params(Fraction(3, 2), Fraction(3, 2), 30)
mode = solve_mode(params, 1, 2)
r = 5

series = small_y_series(mode.particular, -r + 2)
print("y^-5 coefficient of the particular part:", series.coeff(-r, 0))
print("alpha chosen:", mode.alpha)

total = small_y_series(mode.particular, 1).terms + hom_norm_series(r, 3, 1).scale(mode.alpha)
print("\nafter adding alpha * basis, surviving series terms:")
for (k, j), c in total.items_sorted():
    print(f"  y^{k} log^{j}:", c)

print("\nnumeric check of o(y^-5):")
for y in (1e-2, 1e-3, 1e-4):
    val = eval_expr(mode.particular, y, env) + mode.alpha.evaluate(env) * eval_hom_normalized(
        mode.hom_basis, y
    )
    print(f"  y = {y:g}: f(y) * y^5 = {val * y**r:+.6e}")

print("\n--- an obstructed mode: lambda = 2, (n1, n2) = (1, -1) ---")
p2 = Params(Fraction(3, 2), Fraction(3, 2), 2)
m2 = solve_mode(p2, 1, -1)
print("obstruction:", m2.obstruction.message)
for k, j, c in m2.obstruction.leading:
    print(f"  blocking term y^{k} log^{j} with coefficient", c)
print("log-free part still cancelled by:", m2.obstruction.secondary_alpha)
