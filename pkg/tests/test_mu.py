import cmath
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from glplancherel.combinatorics import Segment
from glplancherel.errors import MissingDataError, MixedCuspidalError
from glplancherel.exactalg import FactoredExpr, RatFunc, q
from glplancherel.groupdata import LeviShape, gamma_factor
from glplancherel.invariants import CuspidalDatum, FundamentalInvariants, iwahori_invariants
from glplancherel.mu import SegmentInstance, conductor_pair, j_function, levi_of, mu_levi, mu_pair
from glplancherel.verify import telescoping_conductor

from conftest import single


def seg(l, t, c=0):
    return SegmentInstance(c, Segment(l), t)


def two_cuspidals(f12=2):
    c = CuspidalDatum(m=1, e=1, r=1, d=1, f_self=0)
    return FundamentalInvariants(q=2, cuspidals=(c, c), cross_conductors=((None, f12), (f12, None)))


@pytest.mark.parametrize("m, r, f", [(1, 1, 0), (2, 2, 5), (2, 1, 3), (3, 3, 1)])
def test_mu_pair_unit_segments(m, r, f):
    inv = single(m=m, e=2, r=r, d=1, f_self=f)
    gam = gamma_factor(LeviShape((m, m)))
    want = (FactoredExpr(gam * gam * RatFunc.qpow(f))
            * FactoredExpr.modulus_sq(0, 1, 0, 1) * FactoredExpr.modulus_sq(0, 1, -r, -1))
    assert mu_pair(seg(1, 0), seg(1, 1), inv) == want


def test_mu_pair_gl3_example():
    inv = single(m=1, e=3, r=1, d=1, f_self=0)
    gam = gamma_factor(LeviShape((1, 2)))
    want = (FactoredExpr(gam * gam * RatFunc(q))
            * FactoredExpr.modulus_sq(0, 1, Fraction(-1, 2), 1)
            * FactoredExpr.modulus_sq(0, 1, Fraction(-3, 2), -1))
    assert mu_pair(seg(1, 0), seg(2, 1), inv) == want
    assert mu_pair(seg(2, 0), seg(1, 1), inv) == want


def test_mu_pair_distinct_cuspidals_is_constant():
    inv = two_cuspidals(2)
    got = mu_pair(seg(1, 0, 0), seg(1, 1, 1), inv)
    gam = gamma_factor(LeviShape((1, 1)))
    assert got.factors == ()
    assert got == FactoredExpr(gam * gam * RatFunc(q ** 2))


def test_mu_pair_errors():
    inv = single()
    with pytest.raises(IndexError):
        mu_pair(seg(1, 0), seg(1, 1, c=3), inv)
    with pytest.raises(ValueError):
        mu_pair(seg(1, 0), seg(1, 0), inv)
    with pytest.raises(MissingDataError):
        mu_pair(seg(1, 0, 0), seg(1, 1, 1), two_cuspidals(None))


@pytest.mark.parametrize("l1, l2, f, r, want", [(1, 1, 0, 1, 0), (1, 2, 0, 1, 1), (2, 3, 2, 2, 20)])
def test_conductor_pair_examples(l1, l2, f, r, want):
    inv = single(m=r, e=l1 + l2, r=r, d=1, f_self=f)
    assert conductor_pair(seg(l1, 0), seg(l2, 1), inv) == want


@pytest.mark.parametrize("r", [1, 2, 3])
@pytest.mark.parametrize("f", range(5))
def test_conductor_pair_matches_telescoping(r, f):
    inv = single(m=r, e=16, r=r, d=1, f_self=f)
    for l1 in range(1, 9):
        for l2 in range(1, 9):
            assert conductor_pair(seg(l1, 0), seg(l2, 1), inv) == telescoping_conductor(l1, l2, f, r)


def test_mu_levi_small_cases():
    inv = single(m=1, e=3, r=1, d=1, f_self=0)
    assert mu_levi([seg(3, 0)], inv) == FactoredExpr(1)
    assert mu_levi([seg(2, 0), seg(1, 1)], inv) == mu_pair(seg(2, 0), seg(1, 1), inv)
    with pytest.raises(ValueError):
        mu_levi([seg(1, 0), seg(1, 2)], inv)


def test_mu_levi_iwahori_gl3():
    inv = iwahori_invariants(3)
    segs = [seg(1, i) for i in range(3)]
    gam = gamma_factor(LeviShape((1, 1)))
    want = FactoredExpr(gam ** 6)
    for i in range(3):
        for j in range(i + 1, 3):
            want = want * FactoredExpr.modulus_sq(i, j, 0, 1) * FactoredExpr.modulus_sq(i, j, -1, -1)
    assert mu_levi(segs, inv) == want
    assert levi_of(segs, inv) == LeviShape((1, 1, 1))


def test_j_function():
    inv = single(m=1, e=2, r=1, d=1, f_self=0)
    assert j_function([seg(2, 0)], inv) == FactoredExpr(1)
    want = FactoredExpr.modulus_sq(0, 1, -1, 1) * FactoredExpr.modulus_sq(0, 1, 0, -1)
    assert j_function([seg(1, 0), seg(1, 1)], inv) == want
    with pytest.raises(MixedCuspidalError):
        j_function([seg(1, 0, 0), seg(1, 1, 1)], two_cuspidals())


lengths = st.integers(1, 4)


@given(lengths, lengths, st.integers(1, 2), st.integers(0, 3))
def test_mu_pair_symmetric(l1, l2, r, f):
    inv = single(m=r, e=l1 + l2, r=r, d=1, f_self=f)
    ab = mu_pair(seg(l1, 0), seg(l2, 1), inv)
    ba = mu_pair(seg(l2, 0), seg(l1, 1), inv).relabel({0: 1, 1: 0})
    assert ab == ba


def _rand_point(rng, k):
    return [cmath.exp(1j * rng.uniform(0, 2 * math.pi)) for _ in range(k)]


@pytest.mark.parametrize("parts", [(1, 1), (2, 1), (1, 1, 1), (2, 2), (3, 1, 1)])
def test_mu_rotation_invariance_and_positivity(parts):
    inv = single(m=2, e=sum(parts), r=1, d=1, f_self=3)
    segs = [seg(l, i) for i, l in enumerate(parts)]
    mu = mu_levi(segs, inv)
    rng = random.Random(11)
    for qv in (2, 3, 4, 5):
        for _ in range(250):
            pt = _rand_point(rng, len(parts))
            val = mu.eval(qv, pt)
            assert abs(val.imag) <= 1e-10 * max(1.0, abs(val))
            assert val.real >= -1e-12
        for _ in range(25):
            pt = _rand_point(rng, len(parts))
            lam = cmath.exp(1j * rng.uniform(0, 2 * math.pi))
            a, b = mu.eval(qv, pt), mu.eval(qv, [lam * z for z in pt])
            assert abs(a - b) <= 1e-10 * max(1.0, abs(a))
