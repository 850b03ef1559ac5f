import itertools
import math
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from glplancherel.combinatorics import (
    Partition,
    Segment,
    centralizer_data,
    gamma_length,
    overlap_doubled,
    overlap_function,
    partitions_of,
    segment_gs,
)
from glplancherel.errors import InputError


def brute_partitions(e):
    out = set()
    for k in range(1, e + 1):
        for combo in itertools.combinations_with_replacement(range(1, e + 1), k):
            if sum(combo) == e:
                out.add(tuple(sorted(combo, reverse=True)))
    return out


def cycle_type(perm):
    seen, lengths = set(), []
    for s in range(len(perm)):
        if s in seen:
            continue
        n, x = 0, s
        while x not in seen:
            seen.add(x)
            x = perm[x]
            n += 1
        lengths.append(n)
    return tuple(sorted(lengths, reverse=True))


def test_partition_examples():
    assert partitions_of(1) == [Partition((1,))]
    assert len(partitions_of(5)) == 7
    assert len(partitions_of(12)) == 77
    with pytest.raises(InputError):
        partitions_of(0)


@pytest.mark.parametrize("e", range(1, 9))
def test_partitions_match_brute_force(e):
    got = [p.parts for p in partitions_of(e)]
    assert set(got) == brute_partitions(e)
    assert len(got) == len(set(got))
    assert got == sorted(got, reverse=True)


def test_partition_validation_and_str():
    assert str(Partition.of([1, 2])) == "2+1"
    with pytest.raises((InputError, ValueError)):
        Partition((1, 2))
    with pytest.raises((InputError, ValueError)):
        Partition((2, 0))


@pytest.mark.parametrize(
    "parts, expected",
    [((1, 1), (2, 2, 2)), ((2,), (2, 1, 1)), ((2, 2, 1), (8, 2, 3))],
)
def test_centralizer_examples(parts, expected):
    assert centralizer_data(Partition(parts)) == expected


@pytest.mark.parametrize("e", range(1, 8))
def test_centralizer_order_times_class_size(e):
    counts = Counter(cycle_type(p) for p in itertools.permutations(range(e)))
    for p in partitions_of(e):
        assert centralizer_data(p)[0] * counts[p.parts] == math.factorial(e)


def test_centralizer_brute_force_s5():
    # brute-force centralizer of (0 1)(2 3) in S5
    g = (1, 0, 3, 2, 4)
    cent = [p for p in itertools.permutations(range(5))
            if all(p[g[i]] == g[p[i]] for i in range(5))]
    assert len(cent) == centralizer_data(Partition((2, 2, 1)))[0]


def test_overlap_examples():
    assert overlap_function(1, 1) == {Fraction(0): 1}
    assert overlap_function(2, 3) == {Fraction(-3, 2): 1, Fraction(-1, 2): 2,
                                      Fraction(1, 2): 2, Fraction(3, 2): 1}
    assert overlap_doubled(2, 3) == {-3: 1, -1: 2, 1: 2, 3: 1}


@given(st.integers(1, 12), st.integers(1, 12))
def test_overlap_properties(l1, l2):
    a = overlap_function(l1, l2)
    b = Fraction(l1 - 1, 2) + Fraction(l2 - 1, 2)
    assert all(a[-k] == x for k, x in a.items())
    assert sum(a.values()) == l1 * l2
    assert max(a.values()) == min(l1, l2)
    assert a[b] == a[-b] == 1
    gs = segment_gs(l1, l2)
    assert sum(2 * g + 1 for g in gs) == l1 * l2
    assert sum(2 * g for g in gs) == l1 * l2 - min(l1, l2)
    assert gs[0] == abs(Segment(l1).g - Segment(l2).g)


def test_gamma_length_examples():
    assert gamma_length(Partition((1, 1))) == 1
    assert gamma_length(Partition((2, 1))) == 2
    assert gamma_length(Partition((3, 2, 1))) == 11


@pytest.mark.parametrize("e", range(1, 10))
def test_gamma_length_identity(e):
    for p in partitions_of(e):
        assert 2 * gamma_length(p) == e * e - sum(l * l for l in p.parts)


def test_segment():
    assert Segment(4).g == Fraction(3, 2)
    with pytest.raises((InputError, ValueError)):
        Segment(0)
