"""Spacing of the prime factors of squarefree integers built from primes not 3 mod 4."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterator, Optional

from .arith import ResourceBoundError, base_primes, iter_pell_radicands

SWEEP_BOUND = 10 ** 8
GUARD = 1e-9


@dataclass(frozen=True)
class SpacingProfile:
    n: int
    primes: tuple[int, ...]

    def __post_init__(self):
        if math.prod(self.primes) != self.n:
            raise ValueError(f"primes {self.primes} do not multiply to {self.n}")
        if list(self.primes) != sorted(set(self.primes)):
            raise ValueError("primes must be distinct and increasing")

    @property
    def r(self) -> int:
        return len(self.primes)

    def flags(self, y1: float, eta: float, x: float) -> tuple[bool, bool, bool]:
        return (is_comfortably_spaced(self, y1), is_regular(self, eta), is_extravagant(self, x))


def _check_bound(x: int) -> None:
    if x > SWEEP_BOUND:
        raise ResourceBoundError(f"x = {x} exceeds the sweep bound {SWEEP_BOUND}")


def enumerate_S(x: int) -> Iterator[SpacingProfile]:
    """Squarefree n < x with no prime factor = 3 mod 4, n = 1 included, increasing."""
    _check_bound(x)
    for n, primes in iter_pell_radicands(1, x):
        yield SpacingProfile(n, primes)


def _decide(lhs: float, rhs: float, exact, strict: bool) -> bool:
    """lhs < rhs (or <=), redone in 50-digit decimals when the gap is tiny."""
    if abs(lhs - rhs) < GUARD * max(1.0, abs(lhs), abs(rhs)):
        with localcontext() as ctx:
            ctx.prec = 50
            lhs_d, rhs_d = exact()
        return lhs_d < rhs_d if strict else lhs_d <= rhs_d
    return lhs < rhs if strict else lhs <= rhs


def is_comfortably_spaced(profile: SpacingProfile, y1: float) -> bool:
    """2 y1 < p_i < p_{i+1} / 2 for every p_i > y1."""
    ps = profile.primes
    for i, p in enumerate(ps):
        if p <= y1:
            continue
        if not 2 * y1 < p:
            return False
        if i + 1 < len(ps) and not 2 * p < ps[i + 1]:
            return False
    return True


def _dln(v) -> Decimal:
    return Decimal(v).ln()


def is_regular(profile: SpacingProfile, eta: float) -> bool:
    """|1/2 log log p_i - i| < eta^(1/5) max(i, eta)^(4/5) for every i < r/3 (1-based)."""
    r = profile.r
    for i in range(1, r + 1):
        if 3 * i >= r:
            break
        p = profile.primes[i - 1]
        lhs = abs(0.5 * math.log(math.log(p)) - i)
        rhs = eta ** 0.2 * max(i, eta) ** 0.8

        def exact(p=p, i=i):
            d_eta = Decimal(str(eta))
            return (abs(_dln(p).ln() / 2 - i),
                    d_eta ** Decimal("0.2") * max(Decimal(i), d_eta) ** Decimal("0.8"))

        if not _decide(lhs, rhs, exact, strict=True):
            return False
    return True


def extravagant_window(r: int) -> list[int]:
    """Indices i with sqrt(r)/2 < i < r/2, decided exactly."""
    return [i for i in range(1, r) if 4 * i * i > r and 2 * i < r]


def is_extravagant(profile: SpacingProfile, x: float) -> bool:
    """log p_i >= (log log p_i)^2 log log log x sum_{j<i} log p_j for some i in the window."""
    if x < profile.n:
        raise ValueError("x must be at least n")
    window = extravagant_window(profile.r)
    if not window:
        return False
    lll = math.log(math.log(math.log(x))) if x > math.e ** math.e else float("-inf")
    for i in window:
        p = profile.primes[i - 1]
        lhs = math.log(p)
        prefix = sum(math.log(q) for q in profile.primes[: i - 1])
        rhs = math.log(math.log(p)) ** 2 * lll * prefix if prefix else 0.0

        def exact(p=p, i=i):
            pre = sum((_dln(q) for q in profile.primes[: i - 1]), Decimal(0))
            return _dln(p), (_dln(p).ln() ** 2) * _dln(x).ln().ln() * pre if pre else Decimal(0)

        if _decide(rhs, lhs, exact, strict=False):
            return True
    return False


@dataclass
class CountTable:
    x: int
    phi: int = 0
    phi_r: dict = field(default_factory=dict)

    @property
    def mu(self) -> float:
        return 0.5 * math.log(math.log(self.x))

    def landau_ratio(self) -> float:
        """Phi(x) sqrt(log x) / x."""
        return self.phi * math.sqrt(math.log(self.x)) / self.x


def count_table(x: int) -> CountTable:
    t = CountTable(x)
    for prof in enumerate_S(x):
        t.phi += 1
        t.phi_r[prof.r] = t.phi_r.get(prof.r, 0) + 1
    return t


def phi_direct(x: int) -> int:
    """|S(x)| by trial division, independent of the sieve."""
    count = 0
    for n in range(1, x):
        m, ok = n, True
        p = 2
        while p * p <= m and ok:
            if m % p == 0:
                m //= p
                ok = m % p != 0 and p % 4 != 3
            p += 1
        if ok and m > 1 and m % 4 == 3:
            ok = False
        count += ok
    return count


def r_window(x: float) -> list[int]:
    """r with |r - mu| < mu^(2/3), mu = 1/2 log log x."""
    mu = 0.5 * math.log(math.log(x))
    w = mu ** (2 / 3)
    return [r for r in range(0, int(mu + w) + 2) if abs(r - mu) < w]


@dataclass
class SpacingStatistics:
    x: int
    y1: float
    eta: float
    counts: CountTable
    window: list
    failures: dict  # r -> (comfortable fails, regular fails, extravagant fails)

    def fractions(self) -> dict:
        out = {}
        for r in self.window:
            total = self.counts.phi_r.get(r, 0)
            f = self.failures.get(r, (0, 0, 0))
            out[r] = tuple(v / total if total else 0.0 for v in f)
        return out

    def comfortable_failure_fraction(self) -> float:
        total = sum(self.counts.phi_r.get(r, 0) for r in self.window)
        bad = sum(self.failures.get(r, (0, 0, 0))[0] for r in self.window)
        return bad / total if total else 0.0


def spacing_statistics(x: int, y1: float = 10, eta: float = 3, extra_y1: tuple = ()) -> SpacingStatistics:
    """Per-r failure counts for the three spacing properties, r in the mu-window.

    n = 1 (no prime factors) counts towards Phi but not towards any r-statistic.
    """
    if y1 <= 3 or eta <= 1:
        raise ValueError("need y1 > 3 and eta > 1")
    window = r_window(x)
    inside = set(window) - {0}
    counts = CountTable(x)
    failures: dict = {}
    for prof in enumerate_S(x):
        counts.phi += 1
        counts.phi_r[prof.r] = counts.phi_r.get(prof.r, 0) + 1
        if prof.r not in inside:
            continue
        c, g, e = failures.get(prof.r, (0, 0, 0))
        failures[prof.r] = (
            c + (not is_comfortably_spaced(prof, y1)),
            g + (not is_regular(prof, eta)),
            e + (not is_extravagant(prof, x)),
        )
    return SpacingStatistics(x, y1, eta, counts, [r for r in window if r in inside], failures)


def comfortable_failure_ladder(x: int, y1_values=(10, 100, 1000)) -> dict:
    """Share of n in S_r(x), r in the mu-window, that are not comfortably spaced, per y1."""
    window = set(r_window(x)) - {0}
    total = 0
    bad = {y: 0 for y in y1_values}
    for prof in enumerate_S(x):
        if prof.r not in window:
            continue
        total += 1
        for y in y1_values:
            bad[y] += not is_comfortably_spaced(prof, y)
    return {y: bad[y] / total for y in y1_values}


def mertens_partial(x: int) -> float:
    """sum over p <= x, p != 3 mod 4, of 1/p, minus 1/2 log log x."""
    if x < 10:
        raise ValueError("x must be >= 10")
    primes = base_primes(x)
    s = math.fsum(1.0 / int(p) for p in primes if p % 4 != 3)
    return s - 0.5 * math.log(math.log(x))
