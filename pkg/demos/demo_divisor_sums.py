"""Divisor convolution identities and the zero-mode coefficient totals.

The homogeneous coefficients along the anti-diagonal reduce to
sigma_a(n) sigma_b(n) / n^s sequences, so their two-sided totals follow from

    sum_{n != 0} sigma_a sigma_b / |n|^s
        = 2 zeta(s) zeta(s-a) zeta(s-b) zeta(s-a-b) / zeta(2s-a-b),

together with its s-derivative for log-weighted variants.
"""

from fractions import Fraction

from eisenmodes import Params, ramanujan_convolution, zero_mode_alpha_sum
from eisenmodes.divisors import convolution_partial_sum, ramanujan_log_convolution

r = ramanujan_convolution(2, 2, 8)
print("sum sigma_2(n)^2/|n|^8 =", r.value, f"= {r.numeric:.15g}")
print("partial sum to N=1e5   =", f"{convolution_partial_sum(2, 2, 8, 100000):.15g}")

rl = ramanujan_log_convolution(2, 2, 8)
print("\nlog-weighted variant   =", f"{rl.numeric:.15g}")
print("closed form:", rl.value)

print("\n--- anti-diagonal alpha totals ---")
params = Params(Fraction(3, 2), Fraction(3, 2), 30)
res = zero_mode_alpha_sum(params, "RamanujanExact")
print("recognized shape: sigma_%d sigma_%d / n^%d with coefficient %r" % (
    res.shape["a"], res.shape["b"], res.shape["s"], res.shape["A"]))
print("exact total:", res.value)
print("partial sums:", {k: f"{v:.12g}" for k, v in res.partial_sums.items()})
print("alpha_{0,0} choice (vanishing total):", res.alpha00_choice)

print("\n--- a divergent case handled formally (lambda = 2) ---")
p2 = Params(Fraction(3, 2), Fraction(3, 2), 2)
res2 = zero_mode_alpha_sum(p2, "RamanujanExact", probe=6, partial_limits=(100, 1000))
print("status:", res2.status, "(the series genuinely diverges)")
formal = zero_mode_alpha_sum(p2, "FormalRamanujan", probe=6, partial_limits=(100,))
print("formal continuation value:", formal.value)
print("formal numeric:", f"{formal.numeric:.12g}")
