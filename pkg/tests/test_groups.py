import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from cayley_cutoff.groups import (GeneratorMultiset, add, check_hypotheses, dot,
                                  element_of, index_of, make_group, neg,
                                  parse_group, replicate_rng, sample_generators,
                                  zero)


def test_make_group_basic():
    g = make_group([6])
    assert g.n == 6 and g.d == 1
    g = make_group([2, 3, 5])
    assert g.n == 30 and g.d == 3


def test_make_group_rejects_small_modulus():
    with pytest.raises(ValueError):
        make_group([4, 1])
    with pytest.raises(ValueError):
        make_group([])


def test_make_group_rejects_overflow():
    with pytest.raises(OverflowError):
        make_group([2 ** 25, 2 ** 25])


def test_parse_group():
    assert parse_group("4,9,25").moduli == (4, 9, 25)
    assert parse_group(" 6 ").n == 6
    with pytest.raises(ValueError):
        parse_group(",")


def test_add_examples():
    g6 = make_group([6])
    assert add(g6, (2,), (5,)) == (1,)
    g23 = make_group([2, 3])
    assert add(g23, (1, 2), (1, 2)) == (0, 1)


def test_add_identity_random():
    g = make_group([5, 7, 4])
    rng = replicate_rng(1, 0)
    for _ in range(100):
        a = tuple(int(rng.integers(0, m)) for m in g.moduli)
        assert add(g, a, zero(g)) == a


def test_add_dimension_mismatch():
    g = make_group([6])
    with pytest.raises(ValueError):
        add(g, (1, 2), (0,))


moduli_st = st.lists(st.integers(2, 12), min_size=1, max_size=3)


@given(moduli=moduli_st, data=st.data())
@settings(max_examples=60, deadline=None)
def test_group_axioms(moduli, data):
    g = make_group(moduli)
    pick = st.integers(0, g.n - 1)
    a = element_of(g, data.draw(pick))
    b = element_of(g, data.draw(pick))
    c = element_of(g, data.draw(pick))
    assert add(g, add(g, a, b), c) == add(g, a, add(g, b, c))
    assert add(g, a, b) == add(g, b, a)
    assert add(g, a, neg(g, a)) == zero(g)


@pytest.mark.parametrize("moduli", [[12], [6, 4], [2, 3, 5], [101], [10, 10, 10]])
def test_index_element_bijection_exhaustive(moduli):
    g = make_group(moduli)
    for i in range(g.n):
        assert index_of(g, element_of(g, i)) == i


def test_dot_examples():
    g5 = make_group([5])
    Z = GeneratorMultiset(generators=((2,), (3,)), k=2)
    assert dot(g5, (1, 1), Z) == (0,)
    assert dot(g5, (0, 0), Z) == (0,)
    g6 = make_group([6])
    Z6 = GeneratorMultiset(generators=((2,), (4,)), k=2)
    # -1*2 + 2*4 = 6 = 0 mod 6
    assert dot(g6, (-1, 2), Z6) == (0,)
    with pytest.raises(ValueError):
        dot(g6, (1,), Z6)


def test_dot_is_linear():
    g = make_group([8, 9])
    rng = replicate_rng(2, 0)
    Z = sample_generators(g, 4, rng)
    for _ in range(50):
        w1 = rng.integers(-10, 10, size=4)
        w2 = rng.integers(-10, 10, size=4)
        lhs = dot(g, (w1 + w2).tolist(), Z)
        rhs = add(g, dot(g, w1.tolist(), Z), dot(g, w2.tolist(), Z))
        assert lhs == rhs


def test_sample_generators_deterministic():
    g = make_group([7, 11])
    Z1 = sample_generators(g, 20, replicate_rng(3, 5))
    Z2 = sample_generators(g, 20, replicate_rng(3, 5))
    assert Z1 == Z2
    with pytest.raises(ValueError):
        sample_generators(g, 0, replicate_rng(3, 5))


def test_sample_generators_uniform_binary():
    g = make_group([2])
    k = 10 ** 5
    Z = sample_generators(g, k, replicate_rng(4, 0))
    ones = sum(z == (1,) for z in Z.generators)
    sigma = math.sqrt(k * 0.25)
    assert abs(ones - k / 2) <= 5 * sigma


def test_sample_generators_chi_square_uniformity():
    g = make_group([2, 3])
    k = 6 * 10 ** 5
    Z = sample_generators(g, k, replicate_rng(5, 0))
    counts = np.zeros(g.n, dtype=int)
    for z in Z.generators:
        counts[index_of(g, z)] += 1
    _, pvalue = stats.chisquare(counts)
    assert pvalue > 1e-6


def test_check_hypotheses_examples():
    rep = check_hypotheses(make_group([101]), 10, 0.1)
    # 101 > 101^{0.1} * (ln 10)^2 ~ 8.40
    assert rep.min_modulus_ok
    assert rep.passes == (rep.min_modulus_ok and rep.small_k_ok and rep.large_k_ok)

    rep = check_hypotheses(make_group([2] * 10), 4, 0.1)
    assert not rep.min_modulus_ok and not rep.passes

    # d > k fails whichever d-clause applies
    rep = check_hypotheses(make_group([3, 3, 3]), 2, 0.1)
    assert not rep.passes


def test_check_hypotheses_validation():
    g = make_group([101])
    for eta in (0.0, 1.0, -0.5):
        with pytest.raises(ValueError):
            check_hypotheses(g, 10, eta)
    with pytest.raises(ValueError):
        check_hypotheses(g, 1, 0.1)


def test_replicate_rng_streams():
    a = replicate_rng(99, 0).integers(0, 2 ** 32, size=8)
    b = replicate_rng(99, 0).integers(0, 2 ** 32, size=8)
    c = replicate_rng(99, 1).integers(0, 2 ** 32, size=8)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
