"""Seeded property suites: Rédei symbol laws, reflection identities, combinatorics,
the corank chain and the class-group oracle.

Each suite returns a SuiteReport; a failing check keeps the smallest failing
instance it saw (smallest by sum of absolute entries).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .arith import SquareClass, is_prime
from .f2 import XorShift64Star, corank, random_symmetric_from

SMALL_PRIMES_1_MOD_4 = tuple(p for p in range(5, 2000, 4) if is_prime(p))


@dataclass
class Check:
    name: str
    passed: int = 0
    failed: int = 0
    example: Optional[tuple] = None

    def record(self, ok: bool, instance=None) -> None:
        if ok:
            self.passed += 1
            return
        self.failed += 1
        if instance is not None and (self.example is None or _weight(instance) < _weight(self.example)):
            self.example = instance


def _weight(instance) -> int:
    try:
        return sum(abs(int(v)) for v in instance if isinstance(v, int))
    except TypeError:
        return 0


@dataclass
class SuiteReport:
    suite: str
    checks: list = field(default_factory=list)

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        c = Check(name)
        self.checks.append(c)
        return c

    @property
    def ok(self) -> bool:
        return all(c.failed == 0 for c in self.checks)

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            status = "PASS" if c.failed == 0 else "FAIL"
            line = f"{status} {self.suite}/{c.name}: {c.passed} passed, {c.failed} failed"
            if c.example is not None:
                line += f"; smallest failure {c.example}"
            out.append(line)
        return out


# ---------------------------------------------------------------------------
# Rédei symbol laws
# ---------------------------------------------------------------------------

def random_entry(rng: XorShift64Star) -> int:
    """+-1 * (1 or 2) * product of 0..2 primes = 1 mod 4 below 2000."""
    k = rng.choice((0, 1, 1, 2))
    v = 1
    chosen = set()
    while len(chosen) < k:
        chosen.add(rng.choice(SMALL_PRIMES_1_MOD_4))
    for p in chosen:
        v *= p
    if rng.below(10) < 3:
        v *= 2
    if rng.below(10) < 3:
        v = -v
    return v


def random_admissible_triple(rng: XorShift64Star) -> tuple[int, int, int]:
    from .redei import is_admissible

    while True:
        t = tuple(random_entry(rng) for _ in range(3))
        if all(x != 1 for x in t) and is_admissible(*t).admissible:
            return t


def _coprime_discs(a: int, b: int) -> bool:
    return math.gcd(SquareClass.of(a).field_discriminant, SquareClass.of(b).field_discriminant) == 1


def suite_redei(trials: int = 1000, seed: int = 0, report: Optional[SuiteReport] = None) -> SuiteReport:
    """Permutation invariance (both ideal choices), trilinearity, the -abc shift, [a, b, -ab] = 0.

    ``trials`` triples are used for permutations, trials/2 for trilinearity and
    the shift, trials/5 pairs for [a, b, -ab].
    """
    from .redei import is_admissible, redei_symbol

    report = report or SuiteReport("redei")
    rng = XorShift64Star(seed)
    perm = report.check("permutation invariance")
    for _ in range(trials):
        t = random_admissible_triple(rng)
        vals = {redei_symbol(*p, ideal_choice=ch) for p in itertools.permutations(t) for ch in (1, -1)}
        perm.record(len(vals) == 1, t)

    tri = report.check("trilinearity")
    done = 0
    while done < trials // 2:
        a, b, c = random_admissible_triple(rng)
        b2 = random_entry(rng)
        if b2 == 1 or not is_admissible(a, b2, c).admissible:
            continue
        done += 1
        bb = int(SquareClass.of(b) * SquareClass.of(b2))
        ok = is_admissible(a, bb, c).admissible and \
            (redei_symbol(a, b, c) + redei_symbol(a, b2, c)) % 2 == redei_symbol(a, bb, c)
        tri.record(ok, (a, b, b2, c))

    shift = report.check("shift c -> -abc")
    done = 0
    while done < trials // 2:
        a, b, c = random_admissible_triple(rng)
        if a < 0 or b < 0 or not _coprime_discs(a, b):
            continue
        done += 1
        c2 = int(SquareClass.of(-a * b * c))
        shift.record(is_admissible(a, b, c2).admissible and redei_symbol(a, b, c) == redei_symbol(a, b, c2), (a, b, c))

    zero = report.check("[a,b,-ab] = 0")
    done = 0
    while done < max(1, trials // 5):
        a, b = abs(random_entry(rng)), abs(random_entry(rng))
        if a == 1 or b == 1 or not _coprime_discs(a, b) or not is_admissible(a, b, -a * b).admissible:
            continue
        done += 1
        zero.record(redei_symbol(a, b, -a * b) == 0, (a, b))
    return report


def suite_reflection(trials: int = 100, seed: int = 0, report: Optional[SuiteReport] = None) -> SuiteReport:
    from .redei import REFLECTION_THEOREMS, reflection_sides, sample_reflection_trial

    report = report or SuiteReport("reflection")
    for k, theorem in enumerate(REFLECTION_THEOREMS):
        rng = XorShift64Star(seed * 8 + k)
        chk = report.check(theorem)
        for _ in range(trials):
            t = sample_reflection_trial(theorem, rng)
            lhs, rhs = reflection_sides(theorem, t)
            chk.record(lhs == rhs, (t.d, *t.p, *t.q, t.a, t.b))
    return report


# ---------------------------------------------------------------------------
# combinatorics and the corank chain
# ---------------------------------------------------------------------------

EPS_GRID = (0.1, 0.2, 0.3, 0.4)


def suite_combinatorics(trials: int = 0, seed: int = 0, report: Optional[SuiteReport] = None) -> SuiteReport:
    from .combinatorics import (ProductSpace, count_eps_bad, hoeffding_bound, hoeffding_fraction,
                                image_dimension, image_dimension_formula, size_tuples)

    report = report or SuiteReport("combinatorics")
    dim = report.check("image dimension = prod(|X_i| - 1)")
    bad_g = report.check("eps-bad g count <= bound")
    hoeff = report.check("eps-bad F share <= 2 exp(-2 eps^2 |X|)")
    for sizes in size_tuples():
        S = ProductSpace(sizes)
        dim.record(image_dimension(S) == image_dimension_formula(S), sizes)
        for eps in EPS_GRID:
            count, bound = count_eps_bad(S, eps)
            bad_g.record(count <= bound, (*sizes, eps))
            hoeff.record(hoeffding_fraction(S, eps) <= hoeffding_bound(S, eps), (*sizes, eps))
    return report


def total_variation(p: dict, q: dict) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(float(p.get(k, 0)) - float(q.get(k, 0))) for k in keys)


def sampled_corank_dist(n: int, samples: int, seed: int) -> dict[int, float]:
    rng = XorShift64Star(seed)
    counts: dict[int, int] = {}
    for _ in range(samples):
        c = corank(random_symmetric_from(n, rng))
        counts[c] = counts.get(c, 0) + 1
    return {k: v / samples for k, v in sorted(counts.items())}


def suite_markov(trials: int = 100_000, seed: int = 0, report: Optional[SuiteReport] = None) -> SuiteReport:
    from .densities import (MarkovModel, corank_dist, markov_stationary, q_prob, q_prob_bruteforce,
                            theorem2_coefficient)

    report = report or SuiteReport("markov")
    census = report.check("census n <= 5 equals chain")
    for n in range(6):
        census.record(corank_dist(n, "enumerate") == corank_dist(n, "chain"), (n,))
    rows = report.check("rows of p_ij sum to 1")
    for row in MarkovModel(30).matrix():
        rows.record(sum(row) == 1)
    pi = markov_stationary(40)
    fixed = report.check("pi is a fixed point")
    for j, v in enumerate(MarkovModel(40).apply_to_alpha(pi)):
        fixed.record(v.coeff == pi[j].coeff and abs(float(v) - float(pi[j])) < 1e-12, (j,))
    ident = report.check("theorem2 = pi_n * Q(n|m)")
    for n in range(9):
        for m in range(n + 1):
            ident.record(theorem2_coefficient(n, m) == pi[n].coeff * q_prob(n, m), (n, m))
    beta_term = report.check("theorem2(n, 0) = 2^(-n(n+3)/2) alpha")
    for n in range(9):
        beta_term.record(theorem2_coefficient(n, 0) == Fraction(1, 2 ** (n * (n + 3) // 2)), (n,))
    qb = report.check("Q brute force = q-binomial")
    for n2 in range(4):
        for n3 in range(n2 + 1):
            qb.record(q_prob(n2, n3) == q_prob_bruteforce(n2, n3), (n2, n3))
    if trials:
        tv = report.check("sampled corank at n=6 within TV 0.01")
        emp = sampled_corank_dist(6, trials, seed)
        tv.record(total_variation(emp, corank_dist(6)) < 0.01, (6, trials, seed))
    return report


# ---------------------------------------------------------------------------
# class-group oracle against symbols and continued fractions
# ---------------------------------------------------------------------------

def suite_oracle(max_D: int = 100_000, seed: int = 0, report: Optional[SuiteReport] = None) -> SuiteReport:
    from .arith import iter_pell_family, radicand
    from .pell import field_unit_norm, period_is_odd
    from .quadforms import oracle_report
    from .redei import symbol_profile
    from .sweep import legendre_corank

    report = report or SuiteReport("oracle")
    rk4 = report.check("rk4 Legendre corank = class group")
    rk8 = report.check("rk8 pairing defect = class group")
    rk4o = report.check("ordinary rk4 = class group")
    pell = report.check("period parity = unit norm = CL equals CL+")
    for D, primes in iter_pell_family(max_D):
        o = oracle_report(D)
        p = o.profile
        s = symbol_profile(D)
        rk4.record(legendre_corank(primes) == p.rk4_narrow == s.rk4_narrow, (D,))
        rk8.record(s.rk8_narrow == p.rk8_narrow, (D,))
        rk4o.record(s.rk4_ordinary == p.rk4_ordinary, (D,))
        by_period = period_is_odd(radicand(D))
        by_unit = field_unit_norm(D) == -1
        coincide = o.class_number == o.class_number_narrow and o.narrow_ranks == o.ordinary_ranks
        pell.record(by_period == by_unit == coincide == p.neg_pell, (D,))
    return report


SUITES = {
    "redei": suite_redei,
    "reflection": suite_reflection,
    "combinatorics": suite_combinatorics,
    "markov": suite_markov,
    "oracle": suite_oracle,
}
