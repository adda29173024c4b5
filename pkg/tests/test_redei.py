import itertools

import pytest

from negpell.arith import INF, iter_pell_family
from negpell.f2 import XorShift64Star
from negpell.quadforms import narrow_class_group, oracle_profile, pairing_via_classes
from negpell.redei import (
    REFLECTION_THEOREMS,
    NotAdmissible,
    PreconditionError,
    ReflectionTrial,
    artin_pairing,
    is_acceptable,
    is_admissible,
    legendre_matrix,
    pairing_matrix,
    pairing_spaces,
    redei_symbol,
    reflection_hypotheses,
    reflection_sides,
    rk4_via_redei_matrix,
    rk8_via_pairing,
    sample_reflection_trial,
    solve_ternary,
    symbol_profile,
    verify_reflection,
)
from negpell.verification import random_admissible_triple


def test_acceptable_examples():
    for b in (-1, 2, 3, 5, -7, 13):
        assert is_acceptable(1, b).acceptable
    bad = is_acceptable(5, 13)
    assert not bad.acceptable and bad.failing_places == {5, 13}
    assert is_acceptable(5, 29).acceptable
    assert is_acceptable(-1, -1).failing_places == {2, INF}


def test_admissible_examples():
    assert is_admissible(1, 5, 29).admissible
    assert is_admissible(5, 29, -1).admissible
    t = is_admissible(5, 13, 17)
    assert not t.admissible and "5" in t.reason and "13" in t.reason


def test_ternary_solutions():
    for a, b in [(5, 29), (5, -1), (13, 17), (2, 17), (-1, 2), (10, 89)]:
        x, y, z = solve_ternary(a, b)
        assert (x, y, z) != (0, 0, 0) and x * x == a * y * y + b * z * z


def test_symbol_trivial_entry_is_zero():
    assert redei_symbol(1, 29, 5) == 0
    assert redei_symbol(5, 1, 29) == 0


def test_symbol_rejects_inadmissible_triples():
    with pytest.raises(NotAdmissible, match="13"):
        redei_symbol(5, 13, 17)


@pytest.mark.parametrize("a,b", [(5, 29), (13, 17), (2, 17), (10, 89), (41, 73), (2, 89)])
def test_symbol_vanishes_on_minus_ab(a, b):
    assert redei_symbol(a, b, -a * b) == 0


def test_symbol_against_class_group_pairing():
    # [a, n/a, b] for n = 5 * 29 * q read from narrow_class_group and from the symbol
    checked = 0
    for q in (41, 53, 61, 73, 89, 97, 101, 109, 113, 137):
        n = 5 * 29 * q
        G = narrow_class_group(n if n % 4 == 1 else 4 * n)
        rows, cols = pairing_spaces(n)
        for a in rows:
            for b in cols:
                assert redei_symbol(a, n // a, b) == pairing_via_classes(G, a, b)
                checked += 1
    assert checked > 0


def test_symbol_permutation_and_ideal_choice():
    rng = XorShift64Star(11)
    for _ in range(60):
        t = random_admissible_triple(rng)
        vals = {redei_symbol(*p, ideal_choice=ch) for p in itertools.permutations(t) for ch in (1, -1)}
        assert len(vals) == 1, t


def test_pairing_cross_check_over_small_family():
    for D, primes in iter_pell_family(20_000):
        if rk4_via_redei_matrix(D) == 0:
            continue
        n = D // 4 if D % 4 == 0 else D
        rows, cols = pairing_spaces(n)
        for a in rows:
            for b in cols:
                artin_pairing(n, a, b, cross_check=True)


def test_pairing_degenerate_domain():
    # rk4 = 0: only the trivial and the full-radicand classes pair, always to 0
    n = 1105
    assert rk4_via_redei_matrix(n) == 0
    assert artin_pairing(n, 1, 1) == 0
    assert artin_pairing(n, n, 1) == 0


def test_pairing_precondition_names_the_place():
    with pytest.raises(PreconditionError, match="fails at"):
        artin_pairing(5 * 13 * 17, 5, 13)
    with pytest.raises(PreconditionError):
        artin_pairing(145, 3, 1)


@pytest.mark.parametrize("D,rk4", [(5, 0), (40, 0), (145, 1), (1105, 0), (11713, 2), (8840, 0)])
def test_rk4_examples(D, rk4):
    assert rk4_via_redei_matrix(D) == rk4 == oracle_profile(D).rk4_narrow


def test_legendre_matrix_shapes():
    assert legendre_matrix(5).rows == 0
    assert legendre_matrix(40).rows == 1
    assert legendre_matrix(1105).rows == 2
    assert legendre_matrix(1105).is_symmetric()


@pytest.mark.parametrize("D", [145, 205, 505, 904, 1105, 12505, 11713])
def test_rk8_examples(D):
    o = oracle_profile(D)
    assert rk8_via_pairing(D) == o.rk8_narrow
    P = pairing_matrix(D)
    assert P.rank == o.rk4_narrow - o.rk8_narrow


def test_symbol_profile_matches_oracle():
    for D in (136, 145, 205, 221, 505, 904, 11713, 12104, 12505):
        s, o = symbol_profile(D), oracle_profile(D)
        assert (s.rk4_narrow, s.rk8_narrow, s.rk4_ordinary) == (o.rk4_narrow, o.rk8_narrow, o.rk4_ordinary)


@pytest.mark.parametrize("theorem", REFLECTION_THEOREMS)
def test_reflection_seeded_trials(theorem):
    for seed in range(4):
        assert verify_reflection(theorem, seed=seed)


def test_reflection_degenerate_character():
    t = ReflectionTrial(1, (5, 13), (17, 29), 1, 1)
    assert reflection_hypotheses("2.8i", t)
    assert reflection_sides("2.8i", t) == (0, 0)


def test_reflection_rejects_bad_configurations():
    bad = ReflectionTrial(1, (5, 5), (17, 29), 1, 1)
    assert not reflection_hypotheses("2.8i", bad)
    with pytest.raises(PreconditionError):
        reflection_sides("2.8i", bad)
    with pytest.raises(ValueError):
        reflection_hypotheses("nope", bad)


def test_sampler_only_returns_valid_trials():
    rng = XorShift64Star(5)
    for theorem in REFLECTION_THEOREMS:
        t = sample_reflection_trial(theorem, rng)
        assert reflection_hypotheses(theorem, t)
        assert t.a != 1 and abs(t.b) != 1
