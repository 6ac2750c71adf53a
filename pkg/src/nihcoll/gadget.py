"""Gadget matrices that turn a per-coordinate AND into row distinctness.

``m1 = B_k F1_k`` has every row value exactly twice, while any mixture that
takes at least one column from ``m0 = B_k F0_k`` has pairwise distinct rows.
Columns are 0-indexed throughout this module.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .gf2 import Gf2Matrix, enumeration_matrix, mul, rank

MAX_GADGET_K = 16
MAX_VERIFY_K = 12


@dataclass(frozen=True)
class GadgetPair:
    k: int
    m0: Gf2Matrix
    m1: Gf2Matrix
    f0: Gf2Matrix
    f1: Gf2Matrix


@dataclass(frozen=True)
class GadgetReport:
    k: int
    property1_ok: bool
    property2_ok: bool
    pair_count: int
    failing_b: tuple[int, ...] | None = None

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "property1_ok": self.property1_ok,
            "property2_ok": self.property2_ok,
            "pair_count": self.pair_count,
            "failing_b": list(self.failing_b) if self.failing_b is not None else None,
        }


def f1_matrix(k: int) -> Gf2Matrix:
    # columns e_1..e_{k-1}, then their sum
    if k < 1:
        raise ValueError("k must be positive")
    columns = []
    for i in range(k - 1):
        columns.append([1 if r == i else 0 for r in range(k)])
    columns.append([1 if r < k - 1 else 0 for r in range(k)])
    return Gf2Matrix.from_columns(columns, rows=k)


def f0_matrix(k: int) -> Gf2Matrix:
    """Lower triangular all-ones matrix: entry (i, j) is 1 iff i >= j."""
    if k < 1:
        raise ValueError("k must be positive")
    return Gf2Matrix.from_rows([[1 if i >= j else 0 for j in range(k)] for i in range(k)])


@lru_cache(maxsize=None)
def gadget_matrices(k: int) -> GadgetPair:
    if not 1 <= k <= MAX_GADGET_K:
        raise ValueError(f"k must lie in [1, {MAX_GADGET_K}], got {k}")
    b = enumeration_matrix(k)
    f0, f1 = f0_matrix(k), f1_matrix(k)
    return GadgetPair(k=k, m0=mul(b, f0), m1=mul(b, f1), f0=f0, f1=f1)


def _check_bits(b: Sequence[int], k: int) -> tuple[int, ...]:
    b = tuple(int(v) for v in b)
    if len(b) != k:
        raise ValueError(f"expected {k} bits, got {len(b)}")
    if any(v not in (0, 1) for v in b):
        raise ValueError("b must be a 0/1 vector")
    return b


def mix(pair: GadgetPair, b: Sequence[int]) -> Gf2Matrix:
    """Column i comes from m0 when b[i] == 0 and from m1 when b[i] == 1."""
    b = _check_bits(b, pair.k)
    # mask of columns drawn from m1, MSB = column 0
    mask = 0
    for bit in b:
        mask = (mask << 1) | bit
    words = tuple((w1 & mask) | (w0 & ~mask) for w0, w1 in zip(pair.m0.data, pair.m1.data))
    return Gf2Matrix(pair.m0.rows, pair.k, words)


def replacement_matrix(k: int, s: Iterable[int]) -> Gf2Matrix:
    """F1_k with the columns listed in ``s`` swapped for those of F0_k."""
    s = set(s)
    if any(not 0 <= i < k for i in s):
        raise ValueError(f"column indices must lie in [0, {k})")
    f0, f1 = f0_matrix(k), f1_matrix(k)
    columns = [f0.column(i) if i in s else f1.column(i) for i in range(k)]
    return Gf2Matrix.from_columns(columns, rows=k)


def column_replacement_rank(k: int, s: Iterable[int]) -> int:
    return rank(replacement_matrix(k, s))


def verify_gadget(k: int) -> GadgetReport:
    """Exhaustively check both gadget properties for one k."""
    if not 1 <= k <= MAX_VERIFY_K:
        raise ValueError(f"exhaustive verification is capped at k <= {MAX_VERIFY_K}")
    pair = gadget_matrices(k)
    counts = Counter(pair.m1.data)
    pair_count = sum(c * (c - 1) // 2 for c in counts.values())
    property1_ok = all(c == 2 for c in counts.values()) and pair_count == 1 << (k - 1)

    failing = None
    ones = (1,) * k
    for b in product((0, 1), repeat=k):
        if b == ones:
            continue
        if len(set(mix(pair, b).data)) != 1 << k:
            failing = b
            break
    return GadgetReport(
        k=k,
        property1_ok=property1_ok,
        property2_ok=failing is None,
        pair_count=pair_count,
        failing_b=failing,
    )
