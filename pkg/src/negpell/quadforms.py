"""Narrow class groups of real quadratic fields via indefinite binary quadratic forms.

This module is the ground truth that the symbol-based computations are checked
against.  Forms are integer triples (a, b, c) with b^2 - 4ac = D; classes are
cycles of reduced forms under the reduction operator, and each class is named
by the lexicographically least form in its cycle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .arith import (
    ResourceBoundError,
    is_fundamental_discriminant,
    kronecker,
    prime_divisors,
    radicand,
)

DEFAULT_ORACLE_BOUND = 10 ** 6

QuadForm = tuple  # (a, b, c)


def discriminant(f: QuadForm) -> int:
    a, b, c = f
    return b * b - 4 * a * c


def is_reduced(f: QuadForm, D: int) -> bool:
    """|sqrt(D) - 2|a|| < b < sqrt(D), decided in exact integers."""
    a, b, _ = f
    if b <= 0 or b * b >= D:
        return False
    two_a = 2 * abs(a)
    # sqrt(D) - b < 2|a| < sqrt(D) + b
    if (two_a + b) ** 2 <= D:
        return False
    return two_a - b <= 0 or (two_a - b) ** 2 < D


def reduced_forms(D: int) -> list[QuadForm]:
    """All reduced forms of discriminant D, sorted."""
    if D >= 1 << 52:
        raise ResourceBoundError(f"D={D} too large for reduced-form enumeration")
    out = []
    q = math.isqrt(D)
    for b in range(D % 2 or 2, q + 1, 2):
        N = (D - b * b) // 4
        # sqrt(D) - b < 2a < sqrt(D) + b, so a runs over a window of width ~b
        window = np.arange(max(1, (q - b) // 2), (q + b) // 2 + 1, dtype=np.int64)
        for a in window[N % window == 0].tolist():
            if (2 * a + b) ** 2 <= D or not (2 * a - b <= 0 or (2 * a - b) ** 2 < D):
                continue
            out.append((a, b, -(N // a)))
            out.append((-a, b, N // a))
    out.sort()
    return out


def reduced_forms_naive(D: int) -> list[QuadForm]:
    """Reduced forms by scanning every (a, b) with |a|, b below sqrt(D)."""
    q = math.isqrt(D)
    out = []
    for b in range(1, q + 1):
        for a in range(-q, q + 1):
            if a == 0 or (D - b * b) % (4 * a):
                continue
            f = (a, b, (b * b - D) // (4 * a))
            if is_reduced(f, D):
                out.append(f)
    out.sort()
    return out


def rho(f: QuadForm, D: int, q: Optional[int] = None) -> QuadForm:
    """One reduction step (a, b, c) -> (c, r, (r^2 - D)/(4c)), properly equivalent."""
    if q is None:
        q = math.isqrt(D)
    _, b, c = f
    m = 2 * abs(c)
    if abs(c) <= q:
        # r = -b mod 2|c| with sqrt(D) - 2|c| < r < sqrt(D)
        r = q - ((q + b) % m)
    else:
        # -|c| < r <= |c|
        r = (-b) % m
        if r > abs(c):
            r -= m
    return (c, r, (r * r - D) // (4 * c))


def reduce_form(f: QuadForm, D: int) -> QuadForm:
    q = math.isqrt(D)
    for _ in range(10_000 + 4 * D.bit_length() ** 2):
        if is_reduced(f, D):
            return f
        f = rho(f, D, q)
    raise RuntimeError(f"reduction of {f} did not terminate")


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(u, v, g) with u*a + v*b = g = gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -x0, -y0, -a
    return x0, y0, a


def compose(f1: QuadForm, f2: QuadForm) -> QuadForm:
    """Dirichlet composition of primitive forms of one discriminant (unreduced)."""
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    D = b1 * b1 - 4 * a1 * c1
    if b2 * b2 - 4 * a2 * c2 != D:
        raise ValueError("forms of different discriminants")
    s = (b1 + b2) // 2
    u1, v1, d1 = _xgcd(a1, a2)
    x, w, d = _xgcd(d1, s)
    u, v = x * u1, x * v1
    # u a1 + v a2 + w s = d
    a3 = a1 * a2 // (d * d)
    b3 = b2 + 2 * (a2 // d) * (v * (s - b2) - w * c2)
    b3 %= 2 * a3 if a3 > 0 else -2 * a3
    num = b3 * b3 - D
    if num % (4 * a3):
        raise ArithmeticError(f"composition failed for {f1}, {f2}")
    return (a3, b3, num // (4 * a3))


@dataclass
class FormClassGroup:
    """Narrow class group of discriminant D, elements indexed 0..h-1 (0 = identity)."""

    D: int
    reps: list[QuadForm]
    class_of: dict = field(repr=False)
    _double: Optional[list[int]] = field(default=None, repr=False)

    @property
    def order(self) -> int:
        return len(self.reps)

    def index(self, f: QuadForm) -> int:
        return self.class_of[reduce_form(f, self.D)]

    def mul(self, i: int, j: int) -> int:
        return self.index(compose(self.reps[i], self.reps[j]))

    def inverse(self, i: int) -> int:
        a, b, c = self.reps[i]
        return self.index((a, -b, c))

    def power(self, i: int, k: int) -> int:
        result, base = 0, i
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def doubling(self) -> list[int]:
        if self._double is None:
            self._double = [self.mul(i, i) for i in range(self.order)]
        return self._double

    def principal_negative(self) -> int:
        """Class of (-1, s, (D - s)/4); trivial iff a unit of norm -1 exists."""
        s = self.D % 2
        return self.index((-1, s, (self.D - s) // 4))

    def table(self) -> list[list[int]]:
        return [[self.mul(i, j) for j in range(self.order)] for i in range(self.order)]


def narrow_class_group(D: int, oracle_bound: int = DEFAULT_ORACLE_BOUND) -> FormClassGroup:
    if D > oracle_bound:
        raise ResourceBoundError(f"D={D} exceeds the oracle bound {oracle_bound}")
    if D <= 1 or not is_fundamental_discriminant(D):
        raise ValueError(f"{D} is not a positive fundamental discriminant")
    q = math.isqrt(D)
    forms = reduced_forms(D)
    class_of: dict = {}
    cycles = []
    for f in forms:
        if f in class_of:
            continue
        cycle = [f]
        g = rho(f, D, q)
        while g != f:
            cycle.append(g)
            g = rho(g, D, q)
        cycles.append(cycle)
        for g in cycle:
            class_of[g] = None
    s = D % 2
    principal = reduce_form((1, s, (s - D) // 4), D)
    reps = []
    cycles.sort(key=lambda cyc: (principal not in cyc, min(cyc)))
    for idx, cyc in enumerate(cycles):
        reps.append(min(cyc))
        for g in cyc:
            class_of[g] = idx
    return FormClassGroup(D, reps, class_of)


def class_number_by_cycles(D: int) -> int:
    """h+(D) as the number of rho-cycles among reduced forms."""
    q = math.isqrt(D)
    seen = set()
    count = 0
    for f in reduced_forms(D):
        if f in seen:
            continue
        count += 1
        g = f
        while True:
            seen.add(g)
            g = rho(g, D, q)
            if g == f:
                break
    return count


# ---------------------------------------------------------------------------
# 2-Sylow structure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwoSylow:
    cyclic_orders: tuple[int, ...]

    def rank(self, k: int) -> int:
        """2^k-rank: number of cyclic factors of order >= 2^k."""
        return sum(1 for d in self.cyclic_orders if d >= 1 << k)


def _two_power_ranks(order: int, double: list[int], quotient=None, max_k: int = 64) -> list[int]:
    """[rk_2, rk_4, ...] from the images 2^k G, optionally in G / H."""
    current = set(range(order))
    name = quotient or (lambda x: x)
    sizes = [len({name(x) for x in current})]
    ranks = []
    for _ in range(max_k):
        current = {double[x] for x in current}
        size = len({name(x) for x in current})
        ratio = sizes[-1] // size
        if ratio == 1:
            break
        ranks.append(ratio.bit_length() - 1)
        sizes.append(size)
    return ranks


def _sylow_from_ranks(ranks: list[int]) -> TwoSylow:
    # rk_{2^k} counts factors of order >= 2^k
    orders = []
    for k, r in enumerate(ranks, start=1):
        nxt = ranks[k] if k < len(ranks) else 0
        orders.extend([1 << k] * (r - nxt))
    return TwoSylow(tuple(sorted(orders)))


def two_sylow(group) -> TwoSylow:
    """2-Sylow invariant factors of a finite abelian group.

    ``group`` is a :class:`FormClassGroup` or a Cayley table (list of rows,
    element 0 the identity).
    """
    if isinstance(group, FormClassGroup):
        return _sylow_from_ranks(_two_power_ranks(group.order, group.doubling()))
    n = len(group)
    double = [group[i][i] for i in range(n)]
    return _sylow_from_ranks(_two_power_ranks(n, double))


def ordinary_two_ranks(G: FormClassGroup) -> list[int]:
    """2^k-ranks of the ordinary class group CL = CL+ / <class of (-1, s, *)>."""
    g = G.principal_negative()
    if g == 0:
        return _two_power_ranks(G.order, G.doubling())
    partner = [G.mul(x, g) for x in range(G.order)]
    return _two_power_ranks(G.order, G.doubling(), quotient=lambda x: min(x, partner[x]))


@dataclass(frozen=True)
class TwoPartProfile:
    D: int
    rk4_narrow: int
    rk8_narrow: int
    rk4_ordinary: int
    neg_pell: bool
    rk2: int = 0

    def __post_init__(self):
        if not (self.rk8_narrow <= self.rk4_narrow <= self.rk2):
            raise ValueError(f"inconsistent ranks {self}")


@dataclass(frozen=True)
class OracleReport:
    """Everything the oracle knows about one discriminant."""

    profile: TwoPartProfile
    narrow_ranks: tuple[int, ...]
    ordinary_ranks: tuple[int, ...]
    class_number_narrow: int
    class_number: int


def oracle_report(D: int, oracle_bound: int = DEFAULT_ORACLE_BOUND) -> OracleReport:
    G = narrow_class_group(D, oracle_bound)
    narrow = _two_power_ranks(G.order, G.doubling())
    ordinary = ordinary_two_ranks(G)
    pad = lambda r, k: r[k - 1] if len(r) >= k else 0
    # the class of (sqrt D) is trivial in CL+ iff some unit has norm -1
    solvable = G.principal_negative() == 0
    h = G.order if solvable else G.order // 2
    profile = TwoPartProfile(
        D,
        rk4_narrow=pad(narrow, 2),
        rk8_narrow=pad(narrow, 3),
        rk4_ordinary=pad(ordinary, 2),
        neg_pell=solvable,
        rk2=pad(narrow, 1),
    )
    return OracleReport(profile, tuple(narrow), tuple(ordinary), G.order, h)


def oracle_profile(D: int, oracle_bound: int = DEFAULT_ORACLE_BOUND) -> TwoPartProfile:
    return oracle_report(D, oracle_bound).profile


# ---------------------------------------------------------------------------
# pairing values read off the class group
# ---------------------------------------------------------------------------

def ambiguous_form(D: int, b: int) -> QuadForm:
    """A form in the class of the ramified ideal of norm |b|, b | radicand(D).

    For b < 0 the class is twisted by the class of (-1, s, *).
    """
    n = abs(b)
    if radicand(D) % n:
        raise ValueError(f"{b} does not divide the radicand of {D}")
    B = n if D % 2 else 0
    f = (n, B, (B * B - D) // (4 * n))
    if b < 0:
        s = D % 2
        f = compose(f, (-1, s, (D - s) // 4))
    return f


def represented_value(f: QuadForm, coprime_to: int, limit: int = 200) -> int:
    """A nonzero value a x^2 + b xy + c y^2 (gcd(x, y) = 1) coprime to ``coprime_to``."""
    a, b, c = f
    for total in range(1, limit):
        for x in range(-total, total + 1):
            y = total - abs(x)
            for yy in {y, -y}:
                if math.gcd(x, yy) != 1:
                    continue
                v = a * x * x + b * x * yy + c * yy * yy
                if v and math.gcd(v, coprime_to) == 1:
                    return v
    raise RuntimeError(f"no coprime value found for {f}")


def genus_character(G: FormClassGroup, a: int, i: int) -> int:
    """chi_a on class i as an F2 value, a a positive divisor of the radicand."""
    d_a = a if a % 4 == 1 else 4 * a
    m = represented_value(G.reps[i], G.D)
    return 0 if kronecker(d_a, m) == 1 else 1


def pairing_via_classes(G: FormClassGroup, a: int, b: int) -> int:
    """<chi_a, b>: chi_a evaluated on a half of the ambiguous class B_D(b)."""
    target = G.index(ambiguous_form(G.D, b))
    double = G.doubling()
    halves = [x for x in range(G.order) if double[x] == target]
    if not halves:
        raise ValueError(f"B_D({b}) is not a double in CL+({G.D})")
    values = {genus_character(G, a, x) for x in halves}
    if len(values) != 1:
        raise ValueError(f"chi_{a} is not trivial on CL+[2] for D={G.D}")
    return values.pop()


def genus_rank(D: int) -> int:
    return len(prime_divisors(D)) - 1
