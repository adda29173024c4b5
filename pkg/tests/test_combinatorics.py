import math
import random

import pytest

from negpell.combinatorics import (
    BoolFunction,
    ProductSpace,
    bad_g_bound,
    count_eps_bad,
    d_operator,
    d_operator_direct,
    hoeffding_bound,
    hoeffding_fraction,
    image_dimension,
    image_dimension_formula,
    kernel_dimension,
    size_tuples,
)


def all_functions(S):
    return [BoolFunction(S, bits) for bits in range(1 << S.size)]


def span_dimension(vectors):
    span = {0}
    for v in vectors:
        if v not in span:
            span |= {s ^ v for s in span}
    return len(span).bit_length() - 1


@pytest.mark.parametrize("sizes,dim", [((2,), 1), ((2, 2), 1), ((3, 3), 4), ((3,), 2), ((2, 3), 2)])
def test_image_dimension_examples(sizes, dim):
    S = ProductSpace(sizes)
    assert image_dimension(S) == dim == image_dimension_formula(S)


def test_image_dimension_by_direct_sum():
    # every F evaluated through the literal 2^m-term sum
    for sizes in [(2,), (3,), (2, 2), (2, 3), (2, 2, 2)]:
        S = ProductSpace(sizes)
        images = [d_operator_direct(F).bits for F in all_functions(S)]
        assert span_dimension(images) == image_dimension_formula(S)


def test_image_dimension_all_enumerable_tuples():
    tuples = size_tuples()
    assert len(tuples) == 84
    assert max(math.prod(t) for t in tuples) == 18 and max(len(t) for t in tuples) == 3
    for sizes in tuples:
        S = ProductSpace(sizes)
        assert image_dimension(S) == image_dimension_formula(S), sizes
        assert kernel_dimension(S) == S.size - image_dimension_formula(S)


def test_d_examples():
    S = ProductSpace((2, 3))
    const = BoolFunction.from_callable(S, lambda x: 1)
    assert d_operator(const).bits == 0
    S1 = ProductSpace((2,))
    F = BoolFunction.from_callable(S1, lambda x: int(x == (0,)))
    dF = d_operator(F)
    for a in range(2):
        for b in range(2):
            assert dF((a,), (b,)) == F((a,)) ^ F((b,))


def test_d_linear_symmetric_and_matches_direct():
    rng = random.Random(3)
    for sizes in [(2, 2), (3, 2), (2, 2, 2), (4,), (3, 3)]:
        S = ProductSpace(sizes)
        N = S.size
        for _ in range(20):
            F1 = BoolFunction(S, rng.getrandbits(N))
            F2 = BoolFunction(S, rng.getrandbits(N))
            assert d_operator(BoolFunction(S, F1.bits ^ F2.bits)).bits == d_operator(F1).bits ^ d_operator(F2).bits
            g = d_operator(F1)
            assert g.bits == d_operator_direct(F1).bits
            for i in range(N):
                for j in range(N):
                    assert g(S.element(i), S.element(j)) == g(S.element(j), S.element(i))


def test_d_rejects_pair_functions():
    S = ProductSpace((2,))
    with pytest.raises(ValueError):
        d_operator(BoolFunction(S, 0, pairs=True))


def test_eps_bad_extremes():
    S = ProductSpace((2, 3))
    count, _ = count_eps_bad(S, 0.6)
    assert count == 0
    count, _ = count_eps_bad(S, 0)
    assert count == 2 ** image_dimension_formula(S)


def brute_bad_g(S, eps):
    bad = set()
    N = S.size
    for F in all_functions(S):
        zeros = N - bin(F.bits).count("1")
        if abs(zeros - N / 2) >= eps * N:
            bad.add(d_operator_direct(F).bits)
    return len(bad)


def test_eps_bad_count_small_case():
    S = ProductSpace((2, 2))
    count, bound = count_eps_bad(S, 0.25)
    assert count == brute_bad_g(S, 0.25) == 2
    assert count <= bound
    assert bound == pytest.approx(2 ** (1 + 3) * math.exp(-0.5) * 2)


def test_eps_bad_count_matches_brute_force():
    for sizes in [(3,), (2, 3), (2, 2, 2)]:
        S = ProductSpace(sizes)
        for eps in (0.1, 0.2, 0.3, 0.4):
            assert count_eps_bad(S, eps)[0] == brute_bad_g(S, eps)


def test_eps_bad_bound_on_grid():
    for sizes in size_tuples():
        S = ProductSpace(sizes)
        for eps in (0.1, 0.2, 0.3, 0.4):
            count, bound = count_eps_bad(S, eps)
            assert count <= bound, (sizes, eps)
            assert hoeffding_fraction(S, eps) <= hoeffding_bound(S, eps)


@pytest.mark.parametrize("sizes,eps,fraction", [((2,), 0.6, 0.0), ((2, 2), 0.25, 10 / 16), ((3,), 1 / 3, 2 / 8)])
def test_hoeffding_examples(sizes, eps, fraction):
    S = ProductSpace(sizes)
    assert hoeffding_fraction(S, eps) == fraction
    assert fraction <= 2 * math.exp(-2 * eps * eps * S.size)


def test_enumeration_cap():
    S = ProductSpace((19,))
    with pytest.raises(ValueError):
        image_dimension(S)
    with pytest.raises(ValueError):
        count_eps_bad(S, 0.1)
    assert image_dimension(S, mode="formula") == 18
    assert bad_g_bound(S, 0.1) > 0
