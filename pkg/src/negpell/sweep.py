"""Per-discriminant 2-part data over the Pell family, serial or with a process pool."""
from __future__ import annotations

from dataclasses import astuple, dataclass
from typing import Iterable, Iterator

import numpy as np

from .arith import iter_pell_family, legendre, radicand
from .f2 import F2Matrix, corank
from .pell import period_parity_many
from .quadforms import DEFAULT_ORACLE_BOUND, oracle_profile
from .redei import symbol_profile

CSV_HEADER = "D,omega,rk4_narrow,rk8_narrow,rk4_ordinary,neg_pell,oracle_checked"
CHUNK = 200_000


@dataclass(frozen=True)
class ResultRow:
    D: int
    omega: int
    rk4_narrow: int
    rk8_narrow: int
    rk4_ordinary: int
    neg_pell: bool
    oracle_checked: bool

    def __post_init__(self):
        if not 0 <= self.rk8_narrow <= self.rk4_narrow <= max(self.omega - 1, 0):
            raise ValueError(f"inconsistent ranks in {self}")
        if self.rk4_ordinary not in (self.rk4_narrow, self.rk4_narrow - 1):
            raise ValueError(f"ordinary 4-rank out of range in {self}")
        if self.neg_pell and self.rk4_ordinary != self.rk4_narrow:
            raise ValueError(f"solvable D with differing 4-ranks: {self}")

    def to_csv(self) -> str:
        return ",".join(str(int(v)) for v in astuple(self))

    @classmethod
    def from_csv(cls, line: str) -> "ResultRow":
        D, om, r4, r8, r4o, neg, chk = (int(x) for x in line.strip().split(","))
        if neg not in (0, 1) or chk not in (0, 1):
            raise ValueError(f"bad boolean field in {line!r}")
        return cls(D, om, r4, r8, r4o, bool(neg), bool(chk))


class OracleMismatch(AssertionError):
    pass


def legendre_corank(primes: tuple[int, ...]) -> int:
    """Corank of the Legendre matrix of a radicand given its sorted primes."""
    k = len(primes)
    if k <= 1:
        return 0
    rows = []
    for j in range(1, k):
        row, diag = 0, 0
        pj = primes[j]
        for i in range(k):
            if i == j:
                continue
            bit = legendre(primes[i], pj) == -1
            diag ^= bit
            if i and bit:
                row |= 1 << (i - 1)
        if diag:
            row |= 1 << (j - 1)
        rows.append(row)
    return corank(F2Matrix(k - 1, k - 1, tuple(rows)))


def profile_row(D: int, primes: tuple[int, ...], neg_pell: bool, oracle_bound: int = 0) -> ResultRow:
    rk4 = legendre_corank(primes)
    if rk4:
        s = symbol_profile(D)
        rk8, rk4o = s.rk8_narrow, s.rk4_ordinary
    else:
        rk8, rk4o = 0, 0
    checked = D <= oracle_bound
    row = ResultRow(D, len(primes), rk4, rk8, rk4o, neg_pell, checked)
    if checked:
        o = oracle_profile(D, max(oracle_bound, DEFAULT_ORACLE_BOUND))
        if (o.rk4_narrow, o.rk8_narrow, o.rk4_ordinary, o.neg_pell) != (rk4, rk8, rk4o, neg_pell):
            raise OracleMismatch(f"D={D}: symbols give {row}, class group gives {o}")
    return row


def rows_in_range(lo: int, hi: int, oracle_bound: int = 0) -> list[ResultRow]:
    """Rows for Pell-family D with lo <= D <= hi."""
    family = list(iter_pell_family(hi, lo=lo))
    if not family:
        return []
    parity = period_parity_many(np.array([radicand(D) for D, _ in family], dtype=np.int64))
    return [profile_row(D, ps, bool(par), oracle_bound) for (D, ps), par in zip(family, parity)]


def _chunk_job(args) -> list[ResultRow]:
    return rows_in_range(*args)


def chunks(lo: int, hi: int, size: int = CHUNK) -> list[tuple[int, int]]:
    return [(s, min(s + size - 1, hi)) for s in range(lo, hi + 1, size)]


def iter_rows(max_D: int, threads: int = 1, oracle_bound: int = 0, lo: int = 2,
              chunk_size: int | None = None) -> Iterator[ResultRow]:
    """All rows with lo <= D <= max_D in increasing D; output does not depend on ``threads``."""
    if chunk_size is None:
        chunk_size = max(1000, min(CHUNK, (max_D - lo + 1) // (4 * threads) + 1))
    jobs = [(a, b, oracle_bound) for a, b in chunks(lo, max_D, chunk_size)]
    if threads <= 1 or len(jobs) <= 1:
        for job in jobs:
            yield from _chunk_job(job)
        return
    import multiprocessing as mp

    with mp.get_context("spawn").Pool(threads) as pool:
        for rows in pool.imap(_chunk_job, jobs):
            yield from rows


def write_csv(rows: Iterable[ResultRow], path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in rows:
            fh.write(r.to_csv() + "\n")


def read_csv(path) -> list[ResultRow]:
    with open(path, encoding="ascii", newline="") as fh:
        header = fh.readline().rstrip("\n")
        if header != CSV_HEADER:
            raise ValueError(f"unexpected cache header {header!r}")
        return [ResultRow.from_csv(line) for line in fh if line.strip()]


def recheck_row(row: ResultRow) -> bool:
    """Recompute one cached row from scratch and compare."""
    fresh = rows_in_range(row.D, row.D, row.D if row.oracle_checked else 0)
    return len(fresh) == 1 and fresh[0] == row
