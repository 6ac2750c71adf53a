"""Closed-form bound calculators.

Lower bounds are reported as raw formula values with the constants hidden by
Omega-notation dropped; they are orders of growth, not exact costs.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .collision import subset_cost


@dataclass(frozen=True)
class BoundEstimate:
    n: int
    k: int
    t_lb: float
    size_exponent: float
    corollary_exponent: float

    def as_dict(self) -> dict:
        return asdict(self)


def lower_bound_estimate(n: int, k: int) -> BoundEstimate:
    """Communication and tree-like proof-size lower bounds for BPHP^n with k players.

    t_lb               = n^(1-1/k) * log2(k) / 2^k
    size_exponent      = t_lb / (k * log2(k) * log2(n))     (size >= 2^this)
    corollary_exponent = 1 - 2/sqrt(log2 n) - 1.5 log2(log2 n) / log2 n
    """
    if n < 4 or k < 2:
        raise ValueError("need n >= 4 and k >= 2")
    log_n = math.log2(n)
    t_lb = 2.0 ** (log_n * (1 - 1 / k)) * math.log2(k) / 2**k
    size_exponent = t_lb / (k * math.log2(k) * log_n)
    corollary_exponent = 1 - 2 / math.sqrt(log_n) - 1.5 * math.log2(log_n) / log_n
    return BoundEstimate(n, k, t_lb, size_exponent, corollary_exponent)


def integer_root(n: int, k: int) -> int | None:
    r = round(n ** (1 / k))
    for cand in (r - 1, r, r + 1):
        if cand >= 1 and cand**k == n:
            return cand
    return None


def greedy_upper_bound(n: int, k: int, m: int | None = None) -> int | None:
    """Exact bit cost of the round-by-round protocol on COLL^k_{m, n^(1/k)}.

    Defaults to m = n + 1. Returns None when n is not a perfect k-th power.
    """
    ell = integer_root(n, k)
    if ell is None:
        return None
    size = n + 1 if m is None else m
    if size <= n:
        raise ValueError("m must exceed n for a collision to be guaranteed")
    bits = 0
    for _ in range(k):
        nxt = -(-size // ell)
        bits += subset_cost(size, nxt)
        size = nxt
    return bits


def regime_upper_m(n: int, k: int) -> float:
    """Largest m covered by the lower bound: n + 2^(k-2) n^(1/k)."""
    return n + 2 ** (k - 2) * n ** (1 / k)
