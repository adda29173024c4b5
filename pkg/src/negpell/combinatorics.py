"""The mixing operator d on F2-valued functions of a product set, and epsilon-bad counts.

A function F: X -> F2 is an int bitset over the mixed-radix index of X; a
function g: X x X -> F2 is a bitset over index(x1) * |X| + index(x2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .f2 import _echelon

ENUMERATION_CAP = 18


@dataclass(frozen=True)
class ProductSpace:
    factor_sizes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "factor_sizes", tuple(int(s) for s in self.factor_sizes))
        if not self.factor_sizes or any(s < 1 for s in self.factor_sizes):
            raise ValueError("need at least one factor, each non-empty")

    @property
    def size(self) -> int:
        return math.prod(self.factor_sizes)

    @property
    def m(self) -> int:
        return len(self.factor_sizes)

    def index(self, x: Sequence[int]) -> int:
        i = 0
        for xi, s in zip(x, self.factor_sizes):
            i = i * s + xi
        return i

    def element(self, i: int) -> tuple[int, ...]:
        out = []
        for s in reversed(self.factor_sizes):
            i, r = divmod(i, s)
            out.append(r)
        return tuple(reversed(out))

    def mix(self, v: Sequence[int], x1: Sequence[int], x2: Sequence[int]) -> tuple[int, ...]:
        """Coordinate j from x1 if v[j] == 1, from x2 if v[j] == 2."""
        return tuple(a if c == 1 else b for c, a, b in zip(v, x1, x2))

    def check_enumerable(self) -> None:
        if self.size > ENUMERATION_CAP:
            raise ValueError(f"|X| = {self.size} exceeds the enumeration cap {ENUMERATION_CAP}")

    @cached_property
    def basis_images(self) -> tuple[int, ...]:
        """d applied to the indicator of each point, as pair bitsets.

        The indicator of y picks up v(x1, x2) = y from an odd number of v iff
        every coordinate of y matches exactly one of x1, x2.
        """
        N = self.size
        elems = [self.element(i) for i in range(N)]
        out = []
        for y in elems:
            g = 0
            for i1, x1 in enumerate(elems):
                for i2, x2 in enumerate(elems):
                    if all((a == c) != (b == c) for a, b, c in zip(x1, x2, y)):
                        g |= 1 << (i1 * N + i2)
            out.append(g)
        return tuple(out)


@dataclass(frozen=True)
class BoolFunction:
    """Values of F on X (pairs=False) or of g on X x X (pairs=True) as a bitset."""

    space: ProductSpace
    bits: int
    pairs: bool = False

    def __call__(self, *points) -> int:
        N = self.space.size
        if self.pairs:
            x1, x2 = points
            return (self.bits >> (self.space.index(x1) * N + self.space.index(x2))) & 1
        (x,) = points
        return (self.bits >> self.space.index(x)) & 1

    @classmethod
    def from_callable(cls, space: ProductSpace, f) -> "BoolFunction":
        bits = sum((f(space.element(i)) & 1) << i for i in range(space.size))
        return cls(space, bits)


def d_operator(F: BoolFunction) -> BoolFunction:
    """dF(x1, x2) = sum over v in {1,2}^m of F(v(x1, x2))."""
    if F.pairs:
        raise ValueError("d takes a function on X")
    g, bits, i = 0, F.bits, 0
    images = F.space.basis_images
    while bits:
        if bits & 1:
            g ^= images[i]
        bits >>= 1
        i += 1
    return BoolFunction(F.space, g, pairs=True)


def d_operator_direct(F: BoolFunction) -> BoolFunction:
    """Literal evaluation of the 2^m-term sum; slow, used as a cross-check."""
    S = F.space
    N = S.size
    g = 0
    for i1 in range(N):
        x1 = S.element(i1)
        for i2 in range(N):
            x2 = S.element(i2)
            total = 0
            for v in np.ndindex(*(2,) * S.m):
                total ^= F(S.mix([c + 1 for c in v], x1, x2))
            g |= total << (i1 * N + i2)
    return BoolFunction(S, g, pairs=True)


def image_dimension_formula(space: ProductSpace) -> int:
    return math.prod(s - 1 for s in space.factor_sizes)


def image_dimension(space: ProductSpace, mode: str = "brute") -> int:
    """dim of the image of d: rank of d on the point indicators, or the product formula."""
    if mode == "formula":
        return image_dimension_formula(space)
    if mode != "brute":
        raise ValueError(f"unknown mode {mode!r}")
    space.check_enumerable()
    return len(_echelon(space.basis_images))


def kernel_dimension(space: ProductSpace) -> int:
    return space.size - image_dimension(space)


def _image_keys(space: ProductSpace) -> tuple[np.ndarray, np.ndarray, int]:
    """For every F in V (by bitset value): popcount of F and a key identifying dF.

    The key is dF read at the pivot coordinates of an echelon basis of the
    image, which determines dF uniquely.
    """
    space.check_enumerable()
    N = space.size
    basis = _echelon(space.basis_images)
    pivots = [(b & -b).bit_length() - 1 for b in basis]
    small = []
    for g in space.basis_images:
        k = 0
        for t, p in enumerate(pivots):
            if g >> p & 1:
                k |= 1 << t
        small.append(k)
    keys = np.zeros(1 << N, dtype=np.int64)
    ones = np.zeros(1 << N, dtype=np.int16)
    for x in range(N):
        half = 1 << x
        keys[half:2 * half] = keys[:half] ^ small[x]
        ones[half:2 * half] = ones[:half] + 1
    return keys, ones, len(basis)


def _bad_mask(ones: np.ndarray, N: int, eps) -> np.ndarray:
    # |#zeros - N/2| >= eps N  <=>  |2 #zeros - N| >= 2 eps N, compared exactly
    e = Fraction(eps).limit_denominator(10 ** 9)
    dev = np.abs(2 * (N - ones.astype(np.int64)) - N)
    return dev * e.denominator >= 2 * e.numerator * N


def hoeffding_fraction(space: ProductSpace, eps) -> float:
    """Share of all F: X -> F2 that are eps-bad."""
    space.check_enumerable()
    N = space.size
    ones = np.zeros(1 << N, dtype=np.int16)
    for x in range(N):
        ones[1 << x:2 << x] = ones[:1 << x] + 1
    return float(np.count_nonzero(_bad_mask(ones, N, eps))) / (1 << N)


def hoeffding_bound(space: ProductSpace, eps) -> float:
    return 2 * math.exp(-2 * float(eps) ** 2 * space.size)


def bad_g_bound(space: ProductSpace, eps) -> float:
    """Bound on the share of eps-bad g in the image."""
    a = space.size - image_dimension_formula(space)
    return 2.0 ** (1 + a) * math.exp(-2 * float(eps) ** 2 * space.size)


def count_eps_bad(space: ProductSpace, eps) -> tuple[int, float]:
    """(number of eps-bad g in the image, bound on that number)."""
    keys, ones, dim = _image_keys(space)
    bad = np.unique(keys[_bad_mask(ones, space.size, eps)]).size
    return int(bad), bad_g_bound(space, eps) * 2.0 ** dim


def size_tuples(cap: int = ENUMERATION_CAP, max_factors: int = 3) -> list[tuple[int, ...]]:
    """Non-decreasing factor-size tuples with product <= cap and 1..max_factors entries."""
    out = []

    def extend(prefix, lo, prod):
        if prefix:
            out.append(tuple(prefix))
        if len(prefix) == max_factors:
            return
        for s in range(lo, cap // prod + 1):
            extend(prefix + [s], s, prod * s)

    extend([], 1, 1)
    return out
