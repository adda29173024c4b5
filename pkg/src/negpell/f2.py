"""Dense matrices over F2.

Rows are Python ints used as bitsets (bit j = column j), so a row operation is
one XOR regardless of width.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

MASK64 = (1 << 64) - 1


class XorShift64Star:
    """xorshift64* generator (Vigna 2014); bit-reproducible on every platform."""

    def __init__(self, seed: int):
        # splitmix64 scramble so that small seeds give unrelated streams
        z = (seed + 0x9E3779B97F4A7C15) & MASK64
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        z ^= z >> 31
        self.state = z or 0x2545F4914F6CDD1D

    def next64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & MASK64

    def bits(self, k: int) -> int:
        """k uniform random bits as an int."""
        out, have = 0, 0
        while have < k:
            out |= self.next64() << have
            have += 64
        return out & ((1 << k) - 1)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection."""
        if n <= 0:
            raise ValueError("n must be positive")
        k = max(1, (n - 1).bit_length())
        while True:
            r = self.bits(k)
            if r < n:
                return r

    def choice(self, seq: Sequence):
        return seq[self.below(len(seq))]


@dataclass(frozen=True)
class F2Matrix:
    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self):
        if len(self.data) != self.rows:
            raise ValueError("row count mismatch")
        limit = 1 << self.cols
        for r in self.data:
            if r < 0 or r >= limit:
                raise ValueError("bits set beyond the last column")

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]], cols: int | None = None) -> "F2Matrix":
        if cols is None:
            cols = len(entries[0]) if entries else 0
        data = []
        for row in entries:
            if len(row) != cols:
                raise ValueError("ragged matrix")
            data.append(sum(1 << j for j, x in enumerate(row) if x & 1))
        return cls(len(entries), cols, tuple(data))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "F2Matrix":
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return (self.data[i] >> j) & 1

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.cols)] for r in self.data]

    def transpose(self) -> "F2Matrix":
        out = [0] * self.cols
        for i, r in enumerate(self.data):
            j = 0
            while r:
                if r & 1:
                    out[j] |= 1 << i
                r >>= 1
                j += 1
        return F2Matrix(self.cols, self.rows, tuple(out))

    def mul_vec(self, v: int) -> int:
        """M v, with v and the result as bitsets."""
        out = 0
        for i, r in enumerate(self.data):
            if (r & v).bit_count() & 1:
                out |= 1 << i
        return out

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and self.transpose() == self


def _echelon(rows: Iterable[int]) -> list[int]:
    """Reduced basis of the row space, one pivot per row (pivot = lowest set bit)."""
    basis: list[int] = []
    for r in rows:
        for b in basis:
            if r & (b & -b):
                r ^= b
        if r:
            low = r & -r
            basis = [b ^ r if b & low else b for b in basis]
            basis.append(r)
    return basis


def rank(M: F2Matrix) -> int:
    return len(_echelon(M.data))


def corank(M: F2Matrix) -> int:
    """n - rank for a square matrix."""
    if M.rows != M.cols:
        raise ValueError("corank is defined for square matrices")
    return M.cols - rank(M)


def kernel_basis(M: F2Matrix) -> list[int]:
    """Basis of {v : M v = 0} as column bitsets; size is cols - rank."""
    basis = _echelon(M.data)
    pivots = {}
    for b in basis:
        pivots[(b & -b).bit_length() - 1] = b
    out = []
    for free in range(M.cols):
        if free in pivots:
            continue
        v = 1 << free
        for p, b in pivots.items():
            if (b >> free) & 1:
                v |= 1 << p
        out.append(v)
    return out


def left_kernel_basis(M: F2Matrix) -> list[int]:
    return kernel_basis(M.transpose())


def random_symmetric(n: int, seed: int) -> F2Matrix:
    """Uniform random symmetric n x n matrix from a seeded xorshift64* stream."""
    return random_symmetric_from(n, XorShift64Star(seed))


def random_symmetric_from(n: int, rng: XorShift64Star) -> F2Matrix:
    rows = [0] * n
    for i in range(n):
        upper = rng.bits(n - i)  # entries (i, i..n-1)
        for k in range(n - i):
            if (upper >> k) & 1:
                j = i + k
                rows[i] |= 1 << j
                if j != i:
                    rows[j] |= 1 << i
    return F2Matrix(n, n, tuple(rows))


def random_matrix(rows: int, cols: int, rng: XorShift64Star) -> F2Matrix:
    return F2Matrix(rows, cols, tuple(rng.bits(cols) for _ in range(rows)))
