"""Constants, limiting densities, the corank Markov chain and the empirical sweep."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional

from .f2 import F2Matrix, corank, rank

LADDER = (10 ** 4, 10 ** 5, 10 ** 6, 10 ** 7)


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------

def _alpha_decimal(digits: int = 40) -> Decimal:
    # the product over odd j <= J is an upper bound; the tail factor is at least
    # 1 - sum_{j > J} 2^-j = 1 - 2^-J, so J = 4 * digits is far beyond need
    with localcontext() as ctx:
        ctx.prec = digits + 10
        out = Decimal(1)
        two = Decimal(2)
        for j in range(1, 4 * digits, 2):
            out *= 1 - two ** -j
        return +out


def alpha(precision: float = 1e-15) -> float:
    """prod over odd j of (1 - 2^-j).

    Terms are taken until the tail bound 2^-J drops below ``precision``.
    """
    if precision <= 0:
        raise ValueError("precision must be positive")
    J = max(1, math.ceil(-math.log2(precision)) + 1)
    with localcontext() as ctx:
        ctx.prec = 40
        out = Decimal(1)
        for j in range(1, J + 1, 2):
            out *= 1 - Decimal(2) ** -j
    return float(out)


def alpha_product_plus() -> float:
    """prod_{j >= 1} (1 + 2^-j)^-1, the second form of the same constant."""
    with localcontext() as ctx:
        ctx.prec = 40
        out = Decimal(1)
        for j in range(1, 160):
            out /= 1 + Decimal(2) ** -j
    return float(out)


def beta() -> float:
    """sum_{n >= 0} 2^{-n(n+3)/2}; terms beyond n = 10 are below 2^-65."""
    return float(sum(Fraction(1, 2 ** (n * (n + 3) // 2)) for n in range(12)))


ALPHA = float(_alpha_decimal())


@dataclass(frozen=True)
class AlphaMultiple:
    """An exact rational multiple of alpha."""

    coeff: Fraction

    def __float__(self) -> float:
        return float(self.coeff) * ALPHA

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlphaMultiple(self.coeff * other)
        return NotImplemented

    __rmul__ = __mul__

    def __add__(self, other):
        if isinstance(other, AlphaMultiple):
            return AlphaMultiple(self.coeff + other.coeff)
        return NotImplemented

    def __le__(self, other):
        return self.coeff <= other.coeff

    def __lt__(self, other):
        return self.coeff < other.coeff

    def __str__(self):
        return f"{self.coeff} * alpha"


# ---------------------------------------------------------------------------
# limiting densities
# ---------------------------------------------------------------------------

def theorem2_coefficient(n: int, m: int) -> Fraction:
    if not 0 <= m <= n:
        raise ValueError(f"need n >= m >= 0, got n={n}, m={m}")
    num = math.prod(2 ** n - 2 ** (n - j) for j in range(m + 1, n + 1))
    den = math.prod(2 ** k - 1 for k in range(1, m + 1)) * math.prod(2 ** l - 1 for l in range(1, n - m + 1))
    return Fraction(num, den * 2 ** (n * (n + 1)))


def theorem2_density(n: int, m: int) -> AlphaMultiple:
    """Limiting share of D with both 4-ranks equal to n and narrow 8-rank m."""
    return AlphaMultiple(theorem2_coefficient(n, m))


def markov_stationary(n_top: int) -> list[AlphaMultiple]:
    """pi_0 .. pi_{n_top} with pi_j = alpha / prod_{i <= j} (2^i - 1)."""
    if n_top < 1:
        raise ValueError("n_top must be >= 1")
    out, den = [], 1
    for j in range(n_top + 1):
        if j:
            den *= 2 ** j - 1
        out.append(AlphaMultiple(Fraction(1, den)))
    return out


@dataclass(frozen=True)
class MarkovModel:
    """Corank of a random symmetric matrix grown by one row and column per step."""

    n_top: int

    @staticmethod
    def p(i: int, j: int) -> Fraction:
        if i < 0 or j < 0:
            return Fraction(0)
        if j in (i, i + 1):
            return Fraction(1, 2 ** (i + 1))
        if j == i - 1:
            return 1 - Fraction(1, 2 ** i)
        return Fraction(0)

    def matrix(self) -> list[list[Fraction]]:
        """Rows for states 0 .. n_top - 1 over columns 0 .. n_top; every row sums to 1."""
        return [[self.p(i, j) for j in range(self.n_top + 1)] for i in range(self.n_top)]

    def step(self, dist: dict[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for i, w in dist.items():
            for j in (i - 1, i, i + 1):
                q = self.p(i, j)
                if q:
                    out[j] = out.get(j, Fraction(0)) + w * q
        return out

    def apply_to_alpha(self, pi: list[AlphaMultiple]) -> list[AlphaMultiple]:
        """(pi P)_j for j < len(pi) - 1, the entries not touched by truncation."""
        out = []
        for j in range(len(pi) - 1):
            c = sum((pi[i].coeff * self.p(i, j) for i in (j - 1, j, j + 1) if 0 <= i < len(pi)), Fraction(0))
            out.append(AlphaMultiple(c))
        return out


def corank_dist_chain(n: int) -> dict[int, Fraction]:
    model = MarkovModel(n + 1)
    dist = {0: Fraction(1)}
    for _ in range(n):
        dist = model.step(dist)
    return {k: v for k, v in sorted(dist.items()) if v}


@lru_cache(maxsize=None)
def _corank_census(n: int) -> tuple[tuple[int, int], ...]:
    counts: dict[int, int] = {}
    cells = [(i, j) for i in range(n) for j in range(i, n)]
    for bits in range(1 << len(cells)):
        rows = [0] * n
        for k, (i, j) in enumerate(cells):
            if bits >> k & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
        c = corank(F2Matrix(n, n, tuple(rows)))
        counts[c] = counts.get(c, 0) + 1
    return tuple(sorted(counts.items()))


def corank_census(n: int) -> dict[int, int]:
    """Number of symmetric n x n matrices over F2 of each corank (exhaustive)."""
    if n > 5:
        raise ValueError("exhaustive census is limited to n <= 5")
    return dict(_corank_census(n))


def corank_dist(n: int, method: str = "auto") -> dict[int, Fraction]:
    """Exact corank distribution of a uniform symmetric n x n matrix over F2."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if method == "chain" or (method == "auto" and n > 5):
        return corank_dist_chain(n)
    if method not in ("auto", "enumerate"):
        raise ValueError(f"unknown method {method!r}")
    census = corank_census(n)
    total = 2 ** (n * (n + 1) // 2)
    return {k: Fraction(v, total) for k, v in census.items()}


def count_rank_matrices(rows: int, cols: int, r: int) -> int:
    """Number of rows x cols matrices over F2 of rank r (Gaussian binomial count)."""
    if r < 0 or r > min(rows, cols):
        return 0
    num = 1
    for i in range(r):
        num *= (2 ** rows - 2 ** i) * (2 ** cols - 2 ** i)
    den = 1
    for i in range(r):
        den *= 2 ** r - 2 ** i
    return num // den


def q_prob(n2: int, n3: int) -> Fraction:
    """P(a uniform (n2+1) x n2 matrix has rank n2 - n3 and zero bottom row)."""
    if not 0 <= n3 <= n2:
        raise ValueError(f"need n2 >= n3 >= 0, got {n2}, {n3}")
    return Fraction(count_rank_matrices(n2, n2, n2 - n3), 2 ** ((n2 + 1) * n2))


def q_prob_bruteforce(n2: int, n3: int) -> Fraction:
    if n2 > 3:
        raise ValueError("brute force is limited to n2 <= 3")
    if not 0 <= n3 <= n2:
        raise ValueError(f"need n2 >= n3 >= 0, got {n2}, {n3}")
    cells = (n2 + 1) * n2
    hits = 0
    for bits in range(1 << cells):
        rows = tuple((bits >> (i * n2)) & ((1 << n2) - 1) for i in range(n2 + 1))
        if rows[-1] == 0 and rank(F2Matrix(n2 + 1, n2, rows)) == n2 - n3:
            hits += 1
    return Fraction(hits, 1 << cells)


# ---------------------------------------------------------------------------
# empirical experiment
# ---------------------------------------------------------------------------

@dataclass
class DensityReport:
    X: int
    count_D: int = 0
    count_solvable: int = 0
    counts_nm: dict = field(default_factory=dict)
    counts_n: dict = field(default_factory=dict)
    theoretical: dict = field(default_factory=dict)
    theoretical_n: dict = field(default_factory=dict)
    constants: tuple = ()
    notes: tuple = ()

    def add(self, row) -> None:
        self.count_D += 1
        self.count_solvable += row.neg_pell
        n = row.rk4_narrow
        self.counts_n[n] = self.counts_n.get(n, 0) + 1
        if row.rk4_ordinary == n:
            key = (n, row.rk8_narrow)
            self.counts_nm[key] = self.counts_nm.get(key, 0) + 1

    def finish(self) -> "DensityReport":
        pi = markov_stationary(max(list(self.counts_n) + [1]))
        keys = set(self.counts_nm) | {(n, m) for n in range(3) for m in range(n + 1)}
        self.theoretical = {k: float(theorem2_density(*k)) for k in sorted(keys)}
        self.theoretical_n = {n: float(pi[n]) for n in sorted(self.counts_n)}
        a, b = ALPHA, beta()
        self.constants = (a, b, a * b, 1 - a)
        self.notes = (
            "headline density of rk4 = n, rk8 = 0 uses exponent -n(n+3)/2 (the formula's value), not -n(n+3)/4",
        )
        return self

    def fraction(self, count: int) -> float:
        return count / self.count_D if self.count_D else 0.0

    @property
    def solvable_fraction(self) -> float:
        return self.fraction(self.count_solvable)

    @property
    def rk4_zero_fraction(self) -> float:
        return self.fraction(self.counts_n.get(0, 0))

    def table(self) -> list[dict]:
        """One record per (n, m) with empirical share, limit and their ratio."""
        out = []
        for (n, m), theo in self.theoretical.items():
            emp = self.fraction(self.counts_nm.get((n, m), 0))
            out.append({
                "X": self.X, "n": n, "m": m,
                "count": self.counts_nm.get((n, m), 0),
                "empirical": emp, "theoretical": theo,
                "ratio": emp / theo if theo else float("nan"),
            })
        return out


def reports_from_rows(rows: Iterable, cutoffs: Iterable[int]) -> list[DensityReport]:
    """Density reports at each cutoff from one increasing stream of rows."""
    cutoffs = sorted(cutoffs)
    reports = [DensityReport(X) for X in cutoffs]
    for row in rows:
        for rep in reports:
            if row.D <= rep.X:
                rep.add(row)
    return [rep.finish() for rep in reports]


def run_density_experiment(X: int, threads: int = 1, ladder: Optional[Iterable[int]] = None,
                           oracle_bound: int = 0, rows: Optional[Iterable] = None) -> list[DensityReport]:
    """Sweep the Pell family up to X and report at every ladder cutoff <= X (and X itself)."""
    from .sweep import iter_rows

    cutoffs = {c for c in (ladder if ladder is not None else LADDER) if c <= X} | {X}
    if rows is None:
        rows = iter_rows(X, threads=threads, oracle_bound=oracle_bound)
    return reports_from_rows(rows, cutoffs)
