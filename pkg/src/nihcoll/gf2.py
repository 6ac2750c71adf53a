"""Small bit-packed matrices over GF(2).

Each row is stored as a Python int. Column 0 is the most significant bit of
the row word, so ``int(row_string, 2)`` is the packed form of a row string.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_ENUM_K = 20


@dataclass(frozen=True)
class Gf2Matrix:
    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        if len(self.data) != self.rows:
            raise ValueError(f"expected {self.rows} row words, got {len(self.data)}")
        limit = 1 << self.cols
        for word in self.data:
            if word < 0 or word >= limit:
                raise ValueError("row word has bits outside the column range")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Gf2Matrix:
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> Gf2Matrix:
        return cls(n, n, tuple(1 << (n - 1 - i) for i in range(n)))

    @classmethod
    def from_rows(cls, rows: Sequence, cols: int | None = None) -> Gf2Matrix:
        """Build from 0/1 sequences or '0101' strings, one per row."""
        if cols is None:
            cols = len(rows[0]) if rows else 0
        words = []
        for row in rows:
            bits = [int(ch) for ch in row] if isinstance(row, str) else [int(v) for v in row]
            if len(bits) != cols:
                raise ValueError("ragged rows")
            word = 0
            for bit in bits:
                if bit not in (0, 1):
                    raise ValueError(f"entry {bit!r} is not a bit")
                word = (word << 1) | bit
            words.append(word)
        return cls(len(words), cols, tuple(words))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int | None = None) -> Gf2Matrix:
        if rows is None:
            rows = len(columns[0]) if columns else 0
        return cls.from_rows([[col[r] for col in columns] for r in range(rows)], cols=len(columns))

    @classmethod
    def from_array(cls, array) -> Gf2Matrix:
        array = np.asarray(array)
        if array.ndim != 2:
            raise ValueError("expected a 2-d array")
        return cls.from_rows(array.tolist(), cols=array.shape[1])

    def __getitem__(self, index: tuple[int, int]) -> int:
        r, c = index
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError(index)
        return (self.data[r] >> (self.cols - 1 - c)) & 1

    def row_bits(self, r: int) -> tuple[int, ...]:
        return tuple((self.data[r] >> (self.cols - 1 - c)) & 1 for c in range(self.cols))

    def column(self, c: int) -> tuple[int, ...]:
        shift = self.cols - 1 - c
        return tuple((word >> shift) & 1 for word in self.data)

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for r in range(self.rows):
            out[r] = self.row_bits(r)
        return out

    def transpose(self) -> Gf2Matrix:
        return Gf2Matrix.from_columns([self.row_bits(r) for r in range(self.rows)], rows=self.cols)

    def row_strings(self) -> list[str]:
        return [format(word, f"0{self.cols}b") if self.cols else "" for word in self.data]

    def dumps(self) -> str:
        return "\n".join([f"{self.rows} {self.cols}", *self.row_strings()]) + "\n"

    @classmethod
    def loads(cls, text: str) -> Gf2Matrix:
        lines = [line.strip() for line in text.strip().splitlines()]
        rows, cols = (int(v) for v in lines[0].split())
        body = lines[1:]
        if cols == 0:
            body = [""] * rows
        if len(body) != rows:
            raise ValueError(f"header says {rows} rows, found {len(body)}")
        return cls.from_rows(body, cols=cols)


def mul(a: Gf2Matrix, b: Gf2Matrix) -> Gf2Matrix:
    """Matrix product over GF(2)."""
    if a.cols != b.rows:
        raise ValueError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    out = []
    for word in a.data:
        acc = 0
        for c in range(a.cols):
            if (word >> (a.cols - 1 - c)) & 1:
                acc ^= b.data[c]
        out.append(acc)
    return Gf2Matrix(a.rows, b.cols, tuple(out))


def rank(a: Gf2Matrix) -> int:
    # xor-basis keyed by leading bit
    basis: dict[int, int] = {}
    for word in a.data:
        while word:
            lead = word.bit_length() - 1
            if lead not in basis:
                basis[lead] = word
                break
            word ^= basis[lead]
    return len(basis)


def enumeration_matrix(k: int) -> Gf2Matrix:
    """The 2^k x k matrix whose row j is the k-bit binary expansion of j."""
    if not 1 <= k <= MAX_ENUM_K:
        raise ValueError(f"k must lie in [1, {MAX_ENUM_K}], got {k}")
    return Gf2Matrix(1 << k, k, tuple(range(1 << k)))


def distinct_rows(a: Gf2Matrix) -> bool:
    return len(set(a.data)) == a.rows


def hstack(blocks: Iterable[Gf2Matrix]) -> Gf2Matrix:
    blocks = list(blocks)
    rows = blocks[0].rows
    words = [0] * rows
    cols = 0
    for block in blocks:
        if block.rows != rows:
            raise ValueError("row counts differ")
        words = [(w << block.cols) | v for w, v in zip(words, block.data)]
        cols += block.cols
    return Gf2Matrix(rows, cols, tuple(words))
