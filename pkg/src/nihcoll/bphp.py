"""Bit pigeonhole formulas, their inequality form, and the Search problem.

Variable x_{i,j} (row i, bit j, both 0-based) has index ``i * log2(n) + j``;
bit 0 is the most significant bit of row i. Clauses are ordered by row pair
(i, j) lexicographically and then by the forbidden value alpha ascending.
Literals are stored DIMACS-style: ``+(v + 1)`` for x_v, ``-(v + 1)`` for not x_v.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product

import numpy as np


class SatisfyingAssignment(ValueError):
    """The assignment falsifies no clause."""


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for idx, clause in enumerate(self.clauses):
            seen = set()
            for lit in clause:
                v = abs(lit) - 1
                if lit == 0 or v >= self.num_vars:
                    raise ValueError(f"clause {idx} has out-of-range literal {lit}")
                if v in seen:
                    raise ValueError(f"clause {idx} mentions variable {v} twice")
                seen.add(v)

    def falsified(self, assignment, index: int) -> bool:
        return all(_literal_false(lit, assignment) for lit in self.clauses[index])

    def is_satisfied_by(self, assignment) -> bool:
        return not any(self.falsified(assignment, i) for i in range(len(self.clauses)))


@dataclass(frozen=True, eq=False)
class LinearSystem:
    """Rows ``A[r] . x <= b[r]`` over 0/1 vectors x."""

    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.A, dtype=np.int64)
        b = np.asarray(self.b, dtype=np.int64).reshape(-1)
        if A.ndim != 2 or A.shape[0] != b.shape[0]:
            raise ValueError("A must be 2-d with one bound per row")
        A.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def num_vars(self) -> int:
        return self.A.shape[1]

    def __len__(self) -> int:
        return self.A.shape[0]

    @property
    def rows(self) -> list[tuple[tuple[int, ...], int]]:
        return [(tuple(int(v) for v in a), int(b)) for a, b in zip(self.A, self.b)]

    def satisfied(self, assignment) -> np.ndarray:
        return self.A @ np.asarray(assignment, dtype=np.int64) <= self.b

    def violated(self, index: int, assignment) -> bool:
        return int(self.A[index] @ np.asarray(assignment, dtype=np.int64)) > int(self.b[index])

    def __eq__(self, other):
        if not isinstance(other, LinearSystem):
            return NotImplemented
        return np.array_equal(self.A, other.A) and np.array_equal(self.b, other.b)

    def to_dict(self) -> dict:
        return {
            "num_vars": self.num_vars,
            "rows": [{"a": list(a), "b": b} for a, b in self.rows],
        }

    @classmethod
    def from_dict(cls, d: dict) -> LinearSystem:
        n = d["num_vars"]
        rows = d["rows"]
        A = np.array([r["a"] for r in rows], dtype=np.int64).reshape(len(rows), n)
        return cls(A, np.array([r["b"] for r in rows], dtype=np.int64))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> LinearSystem:
        return cls.from_dict(json.loads(text))


def _literal_false(lit: int, assignment) -> bool:
    value = int(assignment[abs(lit) - 1])
    return value == 0 if lit > 0 else value == 1


def _log2_exact(n: int) -> int:
    if n < 2 or n & (n - 1):
        raise ValueError(f"n must be a power of two >= 2, got {n}")
    return n.bit_length() - 1


def var_index(i: int, j: int, n: int) -> int:
    return i * _log2_exact(n) + j


def generate_bphp(n: int, m: int) -> CnfFormula:
    """BPHP^n_m: for every pair of rows i < j and every value alpha, not both rows equal alpha."""
    if m < 2:
        raise ValueError("need at least two pigeons")
    log_n = _log2_exact(n)
    clauses = []
    for i in range(m):
        for j in range(i + 1, m):
            for alpha in range(n):
                bits = [(alpha >> (log_n - 1 - t)) & 1 for t in range(log_n)]
                clause = []
                for row in (i, j):
                    for t, bit in enumerate(bits):
                        v = row * log_n + t + 1
                        clause.append(-v if bit else v)
                clauses.append(tuple(clause))
    return CnfFormula(m * log_n, tuple(clauses))


def to_dimacs(f: CnfFormula) -> str:
    lines = [f"p cnf {f.num_vars} {len(f.clauses)}"]
    lines.extend(" ".join(str(lit) for lit in clause) + " 0" if clause else "0" for clause in f.clauses)
    return "\n".join(lines) + "\n"


def from_dimacs(text: str) -> CnfFormula:
    num_vars = 0
    clauses = []
    current: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            num_vars = int(line.split()[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    return CnfFormula(num_vars, tuple(clauses))


def cnf_to_inequalities(f: CnfFormula) -> LinearSystem:
    """Clause with N negated literals becomes -(sum of positives) + (sum of negatives) <= N - 1."""
    A = np.zeros((len(f.clauses), f.num_vars), dtype=np.int64)
    b = np.zeros(len(f.clauses), dtype=np.int64)
    for r, clause in enumerate(f.clauses):
        negatives = 0
        for lit in clause:
            if lit > 0:
                A[r, lit - 1] = -1
            else:
                A[r, -lit - 1] = 1
                negatives += 1
        b[r] = negatives - 1
    return LinearSystem(A, b)


def search_violated_clause(f: CnfFormula, assignment) -> int:
    """Smallest index of a clause the assignment falsifies."""
    assignment = [int(v) for v in assignment]
    if len(assignment) != f.num_vars:
        raise ValueError(f"assignment has {len(assignment)} values, formula has {f.num_vars} variables")
    for idx in range(len(f.clauses)):
        if f.falsified(assignment, idx):
            return idx
    raise SatisfyingAssignment("assignment satisfies every clause")


def pair_index(i: int, j: int, m: int) -> int:
    """Position of the row pair (i, j), i < j, in lexicographic order."""
    if not 0 <= i < j < m:
        raise ValueError(f"need 0 <= i < j < m, got ({i}, {j})")
    return i * (2 * m - i - 1) // 2 + (j - i - 1)


def clause_index(i: int, j: int, alpha: int, n: int, m: int) -> int:
    return pair_index(i, j, m) * n + alpha


def row_value(assignment, i: int, n: int) -> int:
    log_n = _log2_exact(n)
    value = 0
    for t in range(log_n):
        value = (value << 1) | int(assignment[i * log_n + t])
    return value


def collision_to_clause(n: int, m: int, assignment, pair: tuple[int, int]) -> int:
    """Clause index for two equal rows: (i, j, alpha) with alpha their shared value."""
    i, j = sorted(pair)
    if i == j:
        raise ValueError("pair must name two distinct rows")
    a, b = row_value(assignment, i, n), row_value(assignment, j, n)
    if a != b:
        raise ValueError(f"rows {i} and {j} differ ({a} != {b})")
    return clause_index(i, j, a, n, m)


def clause_pair(index: int, n: int, m: int) -> tuple[int, int, int]:
    """Inverse of ``clause_index``: (i, j, alpha)."""
    p, alpha = divmod(index, n)
    for i in range(m):
        span = m - 1 - i
        if p < span:
            return i, i + 1 + p, alpha
        p -= span
    raise ValueError(f"clause index {index} out of range")


def all_assignments(num_vars: int) -> np.ndarray:
    """Every 0/1 vector of length num_vars, in numeric order (MSB = variable 0)."""
    if num_vars == 0:
        return np.zeros((1, 0), dtype=np.int64)
    codes = np.arange(1 << num_vars, dtype=np.int64)[:, None]
    return (codes >> np.arange(num_vars - 1, -1, -1, dtype=np.int64)) & 1


def is_unsatisfiable(f: CnfFormula) -> bool:
    """Brute force over every assignment; desk scale only."""
    return not any(f.is_satisfied_by(a) for a in product((0, 1), repeat=f.num_vars))
