"""Collision-finding instances and the round-by-round deterministic protocol.

In COLL^k_{m,ell} player p holds a row ``inputs[p]`` of m symbols in
``range(ell)``; the players must find coordinates i != j whose symbols agree
for every player. A collision is guaranteed once m > ell**k.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .rng import make_rng
from .transcript import Transcript


class NoMonochromaticSubset(RuntimeError):
    """A player could not find a large enough equal-valued subset."""


@dataclass(frozen=True, eq=False)
class CollInstance:
    k: int
    m: int
    ell: int
    inputs: np.ndarray  # shape (k, m)

    def __post_init__(self):
        arr = np.asarray(self.inputs, dtype=np.int64)
        if arr.ndim != 2 or arr.shape != (self.k, self.m):
            raise ValueError(f"inputs must have shape ({self.k}, {self.m}), got {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() >= self.ell):
            raise ValueError(f"symbols must lie in [0, {self.ell})")
        arr.setflags(write=False)
        object.__setattr__(self, "inputs", arr)

    def __eq__(self, other):
        if not isinstance(other, CollInstance):
            return NotImplemented
        return (self.k, self.m, self.ell) == (other.k, other.m, other.ell) and np.array_equal(
            self.inputs, other.inputs
        )

    def column(self, i: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.inputs[:, i])

    def collides(self, i: int, j: int) -> bool:
        return i != j and 0 <= i < self.m and 0 <= j < self.m and bool(
            np.all(self.inputs[:, i] == self.inputs[:, j])
        )

    def to_json(self) -> str:
        return json.dumps({"k": self.k, "m": self.m, "ell": self.ell, "inputs": self.inputs.tolist()})

    @classmethod
    def from_json(cls, text: str) -> CollInstance:
        d = json.loads(text)
        return cls(d["k"], d["m"], d["ell"], np.array(d["inputs"], dtype=np.int64).reshape(d["k"], d["m"]))


@dataclass(frozen=True)
class GreedyRun:
    pair: tuple[int, int]
    transcript: Transcript
    sizes: tuple[int, ...]  # live-set size before round 1, after each round


def random_instance(k: int, m: int, ell: int, seed) -> CollInstance:
    if min(k, m, ell) < 1:
        raise ValueError("k, m and ell must be positive")
    rng = make_rng(seed)
    return CollInstance(k, m, ell, rng.integers(0, ell, size=(k, m), dtype=np.int64))


def find_collision_oracle(inst: CollInstance) -> tuple[int, int] | None:
    """Lexicographically smallest colliding pair, by exhaustive pair scan."""
    cols = [inst.column(i) for i in range(inst.m)]
    for i in range(inst.m):
        for j in range(i + 1, inst.m):
            if cols[i] == cols[j]:
                return (i, j)
    return None


def is_guaranteed(inst: CollInstance) -> bool:
    return inst.m > inst.ell**inst.k


def subset_cost(size: int, chosen: int) -> int:
    """Bits to name a ``chosen``-subset of a ``size``-set: ceil(log2 C(size, chosen))."""
    return (math.comb(size, chosen) - 1).bit_length()


def greedy_protocol(inst: CollInstance) -> GreedyRun:
    """Each player in turn announces an equal-valued subset of the live coordinates.

    Player p keeps ceil(|T| / ell) coordinates of the live set T on which its
    own symbols agree. After all k rounds every surviving pair collides.
    """
    if not is_guaranteed(inst):
        raise NoMonochromaticSubset(
            f"m={inst.m} does not exceed ell**k={inst.ell ** inst.k}; no collision is guaranteed"
        )
    transcript = Transcript(inst.k)
    live = list(range(inst.m))
    sizes = [len(live)]
    for p in range(inst.k):
        target = -(-len(live) // inst.ell)
        groups: dict[int, list[int]] = {}
        for i in live:
            groups.setdefault(int(inst.inputs[p, i]), []).append(i)
        candidates = [g[:target] for g in groups.values() if len(g) >= target]
        if not candidates:
            raise NoMonochromaticSubset(f"player {p} has no equal-valued subset of size {target}")
        chosen = min(candidates)
        transcript.send(p, subset_cost(len(live), target), f"round{p + 1}:subset")
        live = chosen
        sizes.append(len(live))
    if len(live) < 2:
        raise NoMonochromaticSubset("fewer than two coordinates survived")
    pair = (live[0], live[1])
    if not inst.collides(*pair):
        raise AssertionError(f"greedy output {pair} is not a collision")
    transcript.output = pair
    return GreedyRun(pair=pair, transcript=transcript, sizes=tuple(sizes))


def search_bphp_to_coll(assignment, k: int) -> CollInstance:
    """Split each row of an m x log2(n) bit matrix into k symbols.

    Block p of a row (MSB-first) becomes player p's symbol, so two rows are
    equal exactly when the corresponding coordinates collide.
    """
    bits = np.asarray(assignment, dtype=np.int64)
    if bits.ndim != 2:
        raise ValueError("assignment must be an m x log n bit matrix")
    m, log_n = bits.shape
    if log_n == 0 or log_n % k:
        raise ValueError(f"k={k} must divide log n={log_n}")
    if bits.size and not np.isin(bits, (0, 1)).all():
        raise ValueError("assignment entries must be bits")
    width = log_n // k
    weights = 1 << np.arange(width - 1, -1, -1, dtype=np.int64)
    blocks = bits.reshape(m, k, width)
    symbols = (blocks * weights).sum(axis=2).T
    return CollInstance(k, m, 1 << width, symbols)
