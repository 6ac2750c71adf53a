"""Threshold decision trees, tree-like refutations, and NIH protocols built from them.

A tree-like semantic cutting-planes refutation is converted into a threshold
decision tree of logarithmic depth by repeatedly querying a proof line that
splits the remaining axiom leaves roughly in thirds. The decision tree is then
run as a k-party number-in-hand protocol in which every query is settled by a
pluggable greater-than subprotocol over the players' partial sums.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from .bphp import LinearSystem, all_assignments
from .rng import make_rng
from .transcript import Transcript

MAX_CHECKED_VARS = 16


class UnsoundProof(ValueError):
    """A proof line is not implied by its premises over 0/1 assignments."""


# -- decision trees -------------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    axiom: int


@dataclass(frozen=True)
class Query:
    coeffs: tuple[int, ...]
    bound: int
    if_true: "DTNode"
    if_false: "DTNode"

    def holds(self, assignment) -> bool:
        return sum(a * int(x) for a, x in zip(self.coeffs, assignment)) <= self.bound


DTNode = Union[Leaf, Query]


def _node_depth(node: DTNode) -> int:
    if isinstance(node, Leaf):
        return 0
    return 1 + max(_node_depth(node.if_true), _node_depth(node.if_false))


def _node_to_dict(node: DTNode) -> dict:
    if isinstance(node, Leaf):
        return {"axiom": node.axiom}
    return {
        "a": list(node.coeffs),
        "b": node.bound,
        "true": _node_to_dict(node.if_true),
        "false": _node_to_dict(node.if_false),
    }


def _node_from_dict(d: dict) -> DTNode:
    if "axiom" in d:
        return Leaf(int(d["axiom"]))
    return Query(tuple(int(v) for v in d["a"]), int(d["b"]), _node_from_dict(d["true"]), _node_from_dict(d["false"]))


@dataclass(frozen=True)
class ThresholdDecisionTree:
    num_vars: int
    root: DTNode

    @property
    def depth(self) -> int:
        return _node_depth(self.root)

    def nodes(self):
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            if isinstance(node, Query):
                stack.extend((node.if_false, node.if_true))

    def to_dict(self) -> dict:
        return {"num_vars": self.num_vars, "root": _node_to_dict(self.root)}

    @classmethod
    def from_dict(cls, d: dict) -> ThresholdDecisionTree:
        dt = cls(int(d["num_vars"]), _node_from_dict(d["root"]))
        for node in dt.nodes():
            if isinstance(node, Query) and len(node.coeffs) != dt.num_vars:
                raise ValueError("query coefficient vector has the wrong length")
        return dt

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> ThresholdDecisionTree:
        return cls.from_dict(json.loads(text))


def eval_dt(dt: ThresholdDecisionTree, system: LinearSystem, assignment) -> int:
    """Follow the tree from the root and return the axiom index at the leaf reached."""
    if len(assignment) != dt.num_vars:
        raise ValueError(f"assignment has {len(assignment)} values, tree expects {dt.num_vars}")
    node = dt.root
    while isinstance(node, Query):
        node = node.if_true if node.holds(assignment) else node.if_false
    if not 0 <= node.axiom < len(system):
        raise ValueError(f"leaf names axiom {node.axiom}, system has {len(system)}")
    return node.axiom


def trivial_dt(system: LinearSystem) -> ThresholdDecisionTree:
    """Query the axioms one after another; the first false one is the answer."""
    if len(system) == 0:
        raise ValueError("an empty system has no violated axiom")
    last = len(system) - 1
    node: DTNode = Leaf(last)
    for i in range(last, -1, -1):
        a, b = system.rows[i]
        node = Query(a, b, if_true=node, if_false=Leaf(i))
    return ThresholdDecisionTree(system.num_vars, node)


def finds_violated_axioms(dt: ThresholdDecisionTree, system: LinearSystem) -> bool:
    """Exhaustive check that every assignment lands on an axiom it violates."""
    return all(system.violated(eval_dt(dt, system, x), x) for x in all_assignments(system.num_vars))


# -- proofs ---------------------------------------------------------------


@dataclass(frozen=True)
class ProofNode:
    coeffs: tuple[int, ...]
    bound: int
    children: tuple["ProofNode", ...] = ()
    axiom: int | None = None

    @property
    def is_leaf(self) -> bool:
        return self.axiom is not None


def axiom_leaf(system: LinearSystem, index: int) -> ProofNode:
    a, b = system.rows[index]
    return ProofNode(a, b, axiom=index)


def derive(coeffs: Sequence[int], bound: int, *children: ProofNode) -> ProofNode:
    if not 1 <= len(children) <= 2:
        raise ValueError("an inference has one or two premises")
    return ProofNode(tuple(int(v) for v in coeffs), int(bound), tuple(children))


@dataclass(frozen=True)
class _Flat:
    coeffs: list
    bound: list
    children: list
    axiom: list
    depth: list


@dataclass(frozen=True, eq=False)
class ProofTree:
    system: LinearSystem
    root: ProofNode

    def __post_init__(self):
        for node in self.preorder():
            if len(node.coeffs) != self.system.num_vars:
                raise ValueError("proof line has the wrong number of coefficients")
            if node.is_leaf:
                if node.children:
                    raise ValueError("axiom leaves cannot have premises")
                if not 0 <= node.axiom < len(self.system):
                    raise ValueError(f"leaf names unknown axiom {node.axiom}")
                a, b = self.system.rows[node.axiom]
                if (tuple(node.coeffs), node.bound) != (a, b):
                    raise ValueError(f"leaf for axiom {node.axiom} does not match the system row")
            elif not 1 <= len(node.children) <= 2:
                raise ValueError("derived lines need one or two premises")

    def preorder(self):
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    @property
    def size(self) -> int:
        """Number of axiom leaves."""
        return sum(1 for node in self.preorder() if node.is_leaf)

    def _flatten(self) -> _Flat:
        flat = _Flat([], [], [], [], [])
        stack = [(self.root, 0, None)]
        while stack:
            node, depth, parent = stack.pop()
            idx = len(flat.coeffs)
            flat.coeffs.append(node.coeffs)
            flat.bound.append(node.bound)
            flat.children.append([])
            flat.axiom.append(node.axiom)
            flat.depth.append(depth)
            if parent is not None:
                flat.children[parent].append(idx)
            for child in reversed(node.children):
                stack.append((child, depth + 1, idx))
        return flat

    def check_sound(self) -> None:
        """Raise UnsoundProof unless every line follows from its premises and the root is unsatisfiable."""
        n = self.system.num_vars
        if n > MAX_CHECKED_VARS:
            raise ValueError(f"enumeration over {n} variables is too large; pass trust=True to skip")
        X = all_assignments(n)
        cache: dict[tuple, np.ndarray] = {}

        def sat(node: ProofNode) -> np.ndarray:
            key = (node.coeffs, node.bound)
            if key not in cache:
                cache[key] = X @ np.array(node.coeffs, dtype=np.int64).reshape(n) <= node.bound
            return cache[key]

        if sat(self.root).any():
            raise UnsoundProof("the root line is satisfiable, so this is not a refutation")
        for node in self.preorder():
            if node.is_leaf:
                continue
            premises = np.logical_and.reduce([sat(c) for c in node.children])
            if (premises & ~sat(node)).any():
                raise UnsoundProof(f"line {node.coeffs} <= {node.bound} does not follow from its premises")

    def to_dict(self) -> dict:
        def enc(node: ProofNode) -> dict:
            if node.is_leaf:
                return {"axiom": node.axiom}
            return {"a": list(node.coeffs), "b": node.bound, "children": [enc(c) for c in node.children]}

        return {"system": self.system.to_dict(), "root": enc(self.root)}

    @classmethod
    def from_dict(cls, d: dict) -> ProofTree:
        system = LinearSystem.from_dict(d["system"])

        def dec(nd: dict) -> ProofNode:
            if "axiom" in nd:
                return axiom_leaf(system, int(nd["axiom"]))
            return derive(nd["a"], nd["b"], *(dec(c) for c in nd["children"]))

        return cls(system, dec(d["root"]))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> ProofTree:
        return cls.from_dict(json.loads(text))


def depth_bound(size: int) -> int:
    """ceil(log_{3/2} size) + 1, in exact integer arithmetic."""
    d = 0
    while 3**d < size * 2**d:
        d += 1
    return d + 1


def proof_to_dt(proof: ProofTree, trust: bool = False) -> ThresholdDecisionTree:
    """Balanced-split conversion of a tree-like refutation into a threshold decision tree.

    State: a proof node r whose line is known false, and a set C of nodes
    below r whose lines are known true. Among the axiom leaves under r that are
    not hidden by C, pick a node u (u != r) holding between 1/3 and 2/3 of them
    (deepest such node, first in preorder on ties) and query its line:

    * false -> continue with (u, C)
    * true  -> continue with (r, C + {u}); u's subtree no longer counts

    Both branches keep at most 2/3 of the leaves. With one leaf left it must be
    false, since a false line always has a false premise and lines in C are
    true; that leaf's axiom is the answer.
    """
    if not trust:
        proof.check_sound()
    flat = proof._flatten()
    num_vars = proof.system.num_vars

    def live_subtree(root: int, contracted: frozenset) -> tuple[list[int], dict[int, int]]:
        order = []
        stack = [root]
        while stack:
            v = stack.pop()
            if v in contracted:
                continue
            order.append(v)
            stack.extend(reversed(flat.children[v]))
        weight: dict[int, int] = {}
        for v in reversed(order):
            if flat.axiom[v] is not None:
                weight[v] = 1
            else:
                weight[v] = sum(weight.get(c, 0) for c in flat.children[v])
        return order, weight

    def build(root: int, contracted: frozenset) -> DTNode:
        order, weight = live_subtree(root, contracted)
        total = weight[root]
        if total == 0:
            raise UnsoundProof("a false line has no live axiom below it")
        if total == 1:
            return Leaf(next(flat.axiom[v] for v in order if flat.axiom[v] is not None))
        best = None
        for pos, v in enumerate(order):
            if v == root or not (total <= 3 * weight[v] <= 2 * total):
                continue
            key = (flat.depth[v], -pos)
            if best is None or key > best[0]:
                best = (key, v)
        if best is None:
            raise AssertionError("no balanced node; the weight argument guarantees one")
        u = best[1]
        return Query(
            tuple(flat.coeffs[u]),
            flat.bound[u],
            if_true=build(root, contracted | {u}),
            if_false=build(u, contracted),
        )

    return ThresholdDecisionTree(num_vars, build(0, frozenset()))


def random_refutation(num_vars: int, num_leaves: int, rng, shape: str = "random", max_coeff: int = 12) -> ProofTree:
    """A sound tree-like refutation grown top-down from the line 0 <= -1.

    Binary steps split a line into two summands (addition rule). Unary steps
    invert division with rounding, weakening, or adding x_i <= 1 / -x_i <= 0.
    ``shape`` picks which open leaf to grow: "random", "balanced"
    (breadth-first) or "chain" (always the newest right premise).
    The system is the set of distinct leaf lines.
    """
    if num_leaves < 1:
        raise ValueError("need at least one leaf")
    if shape not in ("random", "balanced", "chain"):
        raise ValueError(f"unknown shape {shape!r}")
    rng = make_rng(rng)

    # mutable skeleton: [coeffs(list), bound, children(list)]
    root = [[0] * num_vars, -1, []]
    open_leaves = [root]

    def unary(node):
        a, b = node[0], node[1]
        rule = rng.integers(4)
        if rule == 0 and max((abs(v) for v in a), default=0) * 3 <= max_coeff:
            c = int(rng.integers(2, 4))
            child = [[c * v for v in a], c * b + int(rng.integers(c)), []]
        elif rule == 1:
            child = [list(a), b - int(rng.integers(1, 3)), []]
        elif rule == 2 and num_vars:
            i = int(rng.integers(num_vars))
            a2 = list(a)
            a2[i] -= 1
            child = [a2, b - 1, []]
        elif num_vars:
            i = int(rng.integers(num_vars))
            a2 = list(a)
            a2[i] += 1
            child = [a2, b, []]
        else:
            child = [list(a), b - 1, []]
        node[2].append(child)
        return child

    def split(node):
        a, b = node[0], node[1]
        a1 = [int(v) if rng.random() < 0.6 else 0 for v in rng.integers(-2, 3, size=num_vars)]
        a2 = [x - y for x, y in zip(a, a1)]
        b1 = int(rng.integers(-2, 3))
        left, right = [a1, b1, []], [a2, b - b1, []]
        node[2].extend((left, right))
        return left, right

    leaves = 1
    while leaves < num_leaves:
        if shape == "random":
            node = open_leaves.pop(int(rng.integers(len(open_leaves))))
        elif shape == "balanced":
            node = open_leaves.pop(0)
        else:
            node = open_leaves.pop()
        if rng.random() < 0.3:
            node = unary(node)
        left, right = split(node)
        open_leaves.extend((left, right))
        leaves += 1

    for node in open_leaves:
        if rng.random() < 0.3:
            unary(node)

    axioms: dict[tuple, int] = {}
    stack = [root]
    while stack:
        node = stack.pop()
        if not node[2]:
            axioms.setdefault((tuple(node[0]), node[1]), len(axioms))
        stack.extend(node[2])
    keys = list(axioms)
    A = np.array([k[0] for k in keys], dtype=np.int64).reshape(len(keys), num_vars)
    system = LinearSystem(A, np.array([k[1] for k in keys], dtype=np.int64))

    def freeze(node) -> ProofNode:
        if not node[2]:
            return axiom_leaf(system, axioms[(tuple(node[0]), node[1])])
        return derive(node[0], node[1], *(freeze(c) for c in node[2]))

    return ProofTree(system, freeze(root))


# -- protocols ------------------------------------------------------------


@dataclass(frozen=True)
class VariablePartition:
    owner: tuple[int, ...]
    k: int

    def __post_init__(self):
        if any(not 0 <= p < self.k for p in self.owner):
            raise ValueError("owner entries must lie in [0, k)")

    @classmethod
    def even(cls, num_vars: int, k: int) -> VariablePartition:
        """Contiguous blocks whose sizes differ by at most one."""
        if k < 1:
            raise ValueError("k must be positive")
        return cls(tuple(i * k // num_vars for i in range(num_vars)) if num_vars else (), k)

    @classmethod
    def parse(cls, spec: str, num_vars: int) -> VariablePartition:
        kind, _, arg = spec.partition(":")
        if kind != "even" or not arg.isdigit():
            raise ValueError(f"unsupported partition {spec!r}; expected even:<k>")
        return cls.even(num_vars, int(arg))

    @property
    def num_vars(self) -> int:
        return len(self.owner)

    def owned(self, p: int) -> list[int]:
        return [i for i, q in enumerate(self.owner) if q == p]


GtSubprotocol = Callable[[Sequence[int], int, int, int], "tuple[bool, int]"]


def _ceil_log2(x: int) -> int:
    return (x - 1).bit_length() if x > 1 else 0


def exact_gt(partials: Sequence[int], bound: int, w: int, t: int) -> tuple[bool, int]:
    """Decide sum(partials) <= bound by having every player broadcast its partial sum.

    Each partial is sent as a signed (w + t + ceil(log2 k))-bit integer, so the
    charge is k * (w + t + ceil(log2 k) + 1) bits.
    """
    k = len(partials)
    width = w + t + _ceil_log2(k)
    limit = 1 << width
    for s in partials:
        if abs(s) >= limit:
            raise OverflowError(f"partial sum {s} does not fit in {width} magnitude bits")
    return sum(partials) <= bound, k * (width + 1)


@dataclass
class ProtocolRun:
    axiom: int
    transcript: Transcript
    queries: int = 0


@dataclass
class ThresholdProtocol:
    """A decision tree executed by k players who each see only their own variables."""

    dt: ThresholdDecisionTree
    system: LinearSystem
    partition: VariablePartition
    gt: GtSubprotocol = exact_gt
    _owned: list = field(init=False, repr=False)

    def __post_init__(self):
        if not self.dt.num_vars == self.system.num_vars == self.partition.num_vars:
            raise ValueError("tree, system and partition disagree on the number of variables")
        self._owned = [self.partition.owned(p) for p in range(self.partition.k)]
        n = self.dt.num_vars
        cap = (n + 1) ** (n + 1)
        for node in self.dt.nodes():
            if isinstance(node, Query) and max((abs(a) for a in node.coeffs), default=0) > cap:
                raise ValueError("query weights exceed the (n+1)^(n+1) bound; reduce them first")

    def run(self, assignment) -> ProtocolRun:
        x = [int(v) for v in assignment]
        k = self.partition.k
        t = max((len(o) for o in self._owned), default=0).bit_length()
        transcript = Transcript(k)
        node = self.dt.root
        queries = 0
        while isinstance(node, Query):
            partials = [sum(node.coeffs[i] * x[i] for i in owned) for owned in self._owned]
            w = max((abs(a) for a in node.coeffs), default=0).bit_length()
            answer, bits = self.gt(partials, node.bound, w, t)
            base, extra = divmod(bits, k)
            for p in range(k):
                transcript.send(p, base + (1 if p < extra else 0), f"query{queries}:gt")
            node = node.if_true if answer else node.if_false
            queries += 1
        return ProtocolRun(axiom=node.axiom, transcript=transcript, queries=queries)


def dt_to_protocol(
    dt: ThresholdDecisionTree,
    system: LinearSystem,
    partition: VariablePartition,
    gt: GtSubprotocol = exact_gt,
) -> ThresholdProtocol:
    return ThresholdProtocol(dt, system, partition, gt)
