import itertools

import pytest

from negpell.arith import ResourceBoundError, is_fundamental_discriminant, iter_pell_family
from negpell.pell import negative_pell_solvable
from negpell.quadforms import (
    TwoSylow,
    class_number_by_cycles,
    compose,
    discriminant,
    is_reduced,
    narrow_class_group,
    oracle_profile,
    oracle_report,
    reduced_forms,
    reduced_forms_naive,
    two_sylow,
)

# h+(D), counted by an independent brute-force cycle walk
NARROW_CLASS_NUMBERS = {5: 1, 8: 1, 40: 2, 65: 2, 136: 4, 145: 4, 205: 4, 221: 4, 505: 8, 904: 8,
                        1105: 4, 11713: 16, 12104: 16, 12505: 32}

# (rk4 narrow, rk8 narrow, rk4 ordinary, negative Pell solvable)
PROFILES = {
    5: (0, 0, 0, True),
    40: (0, 0, 0, True),
    136: (1, 0, 0, False),
    145: (1, 0, 1, True),
    205: (1, 0, 0, False),
    505: (1, 1, 1, False),
    904: (1, 1, 1, True),
    1105: (0, 0, 0, True),
    11713: (2, 0, 1, False),
    12104: (2, 0, 2, True),
    12505: (2, 1, 1, False),
}


def fundamental(limit):
    return [D for D in range(5, limit + 1) if is_fundamental_discriminant(D)]


@pytest.mark.parametrize("D,h", sorted(NARROW_CLASS_NUMBERS.items()))
def test_narrow_class_numbers(D, h):
    assert narrow_class_group(D).order == h
    assert class_number_by_cycles(D) == h


@pytest.mark.parametrize("D,expected", sorted(PROFILES.items()))
def test_oracle_profiles(D, expected):
    p = oracle_profile(D)
    assert (p.rk4_narrow, p.rk8_narrow, p.rk4_ordinary, p.neg_pell) == expected


def test_reduced_form_enumeration_matches_naive_scan():
    for D in fundamental(3000):
        forms = reduced_forms(D)
        assert forms == reduced_forms_naive(D)
        assert all(discriminant(f) == D and is_reduced(f, D) for f in forms)


def test_class_representatives_are_least_in_cycle():
    for D in (145, 1105, 8840):
        G = narrow_class_group(D)
        for i, rep in enumerate(G.reps):
            cycle = [f for f, k in G.class_of.items() if k == i]
            assert rep == min(cycle)
        assert G.index((1, D % 2, (D % 2 - D) // 4)) == 0


def test_composition_is_a_group_law_up_to_1000():
    for D in fundamental(1000):
        G = narrow_class_group(D)
        n = G.order
        T = G.table()
        for i in range(n):
            assert T[0][i] == i
            assert T[i][G.inverse(i)] == 0
        for i, j in itertools.product(range(n), repeat=2):
            assert T[i][j] == T[j][i]
            for k in range(n):
                assert T[T[i][j]][k] == T[i][T[j][k]]


def test_composed_forms_keep_discriminant():
    G = narrow_class_group(12505)
    for f in G.reps[:10]:
        for g in G.reps[:10]:
            assert discriminant(compose(f, g)) == 12505


def test_group_order_equals_cycle_count():
    for D in fundamental(20_000)[::7]:
        assert narrow_class_group(D).order == class_number_by_cycles(D)


def test_two_sylow_on_synthetic_tables():
    trivial = [[0]]
    c2 = [[0, 1], [1, 0]]
    # Z/4 x Z/2, element (a, b) stored as 2a + b
    z4z2 = [[2 * ((i // 2 + j // 2) % 4) + (i % 2 ^ j % 2) for j in range(8)] for i in range(8)]
    assert two_sylow(trivial) == TwoSylow(())
    assert two_sylow(c2) == TwoSylow((2,))
    assert two_sylow(z4z2) == TwoSylow((2, 4))
    assert two_sylow(z4z2).rank(1) == 2 and two_sylow(z4z2).rank(2) == 1


def test_two_rank_is_genus_rank_and_pell_criterion():
    for D, primes in iter_pell_family(30_000):
        r = oracle_report(D)
        assert r.profile.rk2 == len(primes) - 1
        coincide = r.class_number == r.class_number_narrow and r.narrow_ranks == r.ordinary_ranks
        assert r.profile.neg_pell == coincide == negative_pell_solvable(D), D
        assert r.profile.rk8_narrow <= r.profile.rk4_narrow <= r.profile.rk2


def test_oracle_bound_and_bad_input():
    with pytest.raises(ResourceBoundError):
        narrow_class_group(10 ** 6 + 1, oracle_bound=10 ** 6)
    with pytest.raises(ValueError):
        narrow_class_group(20)
