"""
Lower and upper bounds side by side
===================================

The lower-bound formulas drop their hidden constants, so only the growth
rates are meaningful. The greedy cost is exact.
"""

from nihcoll.bounds import greedy_upper_bound, lower_bound_estimate

print(f"{'n':>10} {'k':>2} {'t_lb':>12} {'size exp':>10} {'corollary':>10} {'greedy':>7}")
for log_n in (8, 12, 16, 24):
    n = 2**log_n
    for k in (2, 3, 4):
        est = lower_bound_estimate(n, k)
        upper = greedy_upper_bound(n, k)
        print(f"{n:>10} {k:>2} {est.t_lb:12.2f} {est.size_exponent:10.4f} "
              f"{est.corollary_exponent:10.4f} {upper if upper is not None else '-':>7}")
