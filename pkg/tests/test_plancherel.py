import cmath
import math
import random
from fractions import Fraction

import pytest

from glplancherel.combinatorics import Partition, gamma_length
from glplancherel.errors import InputError, MissingDataError, SingularityError
from glplancherel.exactalg import FactoredExpr, RatFunc, q
from glplancherel.groupdata import LeviShape, c_function, gamma_factor, iwahori_volume
from glplancherel.invariants import CuspidalDatum, FundamentalInvariants, iwahori_invariants
from glplancherel.mu import j_function
from glplancherel.plancherel import (
    ComponentSpec,
    density,
    enumerate_components,
    hecke_density,
    hecke_explicit_constant,
    integrate,
    macdonald_form,
    parse_selector,
    torus_average,
)

from conftest import single


def iw_factor(i, j, r=1):
    return FactoredExpr.modulus_sq(i, j, 0, 1) * FactoredExpr.modulus_sq(i, j, -r, -1)


def multi(e1=2, e2=3, f12=1):
    a = CuspidalDatum(m=1, e=e1, r=1, d=1, f_self=0)
    b = CuspidalDatum(m=2, e=e2, r=2, d="derive", delta=0, f_self="derive")
    return FundamentalInvariants(q=3, cuspidals=(a, b), cross_conductors=((None, f12), (f12, None)))


def test_enumerate_counts():
    assert len(enumerate_components(single(e=1))) == 1
    assert len(enumerate_components(single(e=5))) == 7
    assert len(enumerate_components(multi(2, 3))) == 6


def test_selector_parsing():
    inv = multi(2, 3)
    spec = parse_selector(inv, "1+1|1+2")
    assert spec.partitions == (Partition((1, 1)), Partition((2, 1)))
    assert spec.selector == "1+1|2+1"
    assert spec.k == 4
    for bad in ["3|3", "2", "a|b", "2|3|1", ""]:
        with pytest.raises(InputError):
            parse_selector(inv, bad)


def test_segments_are_canonical():
    spec = parse_selector(multi(2, 3), "1+1|1+2")
    assert [(s.cuspidal_index, s.l, s.torus_index) for s in spec.segments] == \
        [(0, 1, 0), (0, 1, 1), (1, 2, 2), (1, 1, 3)]


def test_density_iwahori_gl2(iw2):
    rep = density(ComponentSpec(iw2, (Partition((1, 1)),)))
    assert rep.constant == RatFunc(q + 1, q)
    assert rep.formal_degree == RatFunc(1)
    assert rep.factors == iw_factor(0, 1)
    assert rep.canonical_mass == 1
    assert rep.effective_quotient_order == 2
    assert rep.eval(2, [1, -1]) == pytest.approx(8 / 3)

    rep2 = density(ComponentSpec(iw2, (Partition((2,)),)))
    assert rep2.constant == RatFunc(1)
    assert rep2.formal_degree == RatFunc(q - 1, 2)
    assert rep2.factors.factors == ()
    assert rep2.canonical_mass == 2


def test_density_numeric_formal_degree():
    inv = single(m=2, e=2, r=2, d=3.0, f_self=5)
    rep = density(ComponentSpec(inv, (Partition((1, 1)),)), 2)
    assert rep.constant == gamma_factor(LeviShape((2, 2))) * RatFunc.qpow(5)
    assert rep.formal_degree == pytest.approx(9.0)
    assert rep.factors == iw_factor(0, 1, r=2)
    assert rep.canonical_mass == 1
    with pytest.raises(MissingDataError):
        density(ComponentSpec(FundamentalInvariants(q=2, cuspidals=(CuspidalDatum(m=1, e=1, r=1),)),
                              (Partition((1,)),)))


def test_density_multi_cuspidal_constant():
    inv = multi(2, 3, f12=1)
    spec = parse_selector(inv, "1+1|2+1")
    rep = density(spec)
    # same-cuspidal factors only: (0,1) for the first, (2,3) for the second
    assert {(f.i, f.j) for f in rep.factors.factors} == {(0, 1), (1, 0), (2, 3), (3, 2)}
    f2 = 0 + 4 - 2
    cond = 1 * 1 * 0 + (2 * 1) * f2 + 1 * (1 * 2 + 1 * 1 + 1 * 2 + 1 * 1)
    assert rep.constant == gamma_factor(LeviShape((1, 1, 4, 2))) * RatFunc.qpow(cond)
    assert rep.levi == LeviShape((1, 1, 4, 2))
    assert rep.canonical_mass == Fraction(1 * 1 * 2 * 1)


def test_weyl_invariance():
    inv = single(m=2, e=5, r=1, d=1, f_self=3)
    rep = density(ComponentSpec(inv, (Partition((2, 2, 1)),)))
    assert rep.factors.relabel({0: 1, 1: 0, 2: 2}) == rep.factors


def test_rotation_invariance_of_density():
    rep = density(ComponentSpec(single(m=1, e=4, r=1, d=1, f_self=0), (Partition((2, 1, 1)),)))
    rng = random.Random(5)
    for _ in range(50):
        pt = [cmath.exp(1j * rng.uniform(0, 2 * math.pi)) for _ in range(3)]
        lam = cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        a, b = rep.eval(3, pt), rep.eval(3, [lam * z for z in pt])
        assert a == pytest.approx(b, rel=1e-10)


@pytest.mark.parametrize("e", range(1, 5))
@pytest.mark.parametrize("m, r, f", [(1, 1, 0), (2, 1, 3), (2, 2, 1), (4, 2, 0)])
def test_one_exponent_constant_and_closure(e, m, r, f):
    inv = single(m=m, e=e, r=r, d=1, f_self=f)
    for spec in enumerate_components(inv):
        rep = density(spec)
        gam = gamma_factor(rep.levi)
        assert rep.constant == RatFunc.qpow(gamma_length(spec.partitions[0]) * f) * gam
        c = c_function(rep.levi)
        lhs = FactoredExpr((c * c * gam).inverse()) * rep.mu
        assert lhs == FactoredExpr(gam) * j_function(spec.segments, inv).inverse()


def test_hecke_examples():
    h1 = hecke_density(1, Partition((1,)))
    assert h1.constant * h1.formal_degree == RatFunc(1) and h1.factors.factors == ()
    h = hecke_density(2, Partition((1, 1)))
    assert h.constant == iwahori_volume(2) * RatFunc(q + 1, q)
    assert iwahori_volume(2) == RatFunc(1, q + 1)
    assert h.factors == iw_factor(0, 1)
    assert h.constant * h.formal_degree == hecke_explicit_constant(2, Partition((1, 1)))
    h2 = hecke_density(2, Partition((2,)))
    assert h2.constant * h2.formal_degree == iwahori_volume(2) * RatFunc(q - 1, 2)
    with pytest.raises(InputError):
        hecke_density(3, Partition((1, 1)))


@pytest.mark.parametrize("n", range(1, 7))
def test_hecke_two_forms(n):
    from glplancherel.combinatorics import partitions_of

    for p in partitions_of(n):
        rep = hecke_density(n, p)
        assert rep.constant * rep.formal_degree == hecke_explicit_constant(n, p)


def test_macdonald_examples():
    assert macdonald_form(1).factors == ()
    assert macdonald_form(2) == iw_factor(0, 1)
    m3 = macdonald_form(3)
    assert len({(min(f.i, f.j), max(f.i, f.j)) for f in m3.factors}) == 3


def fourier_mean(qv, terms=200):
    # constant Fourier coefficient of |1 - z|^2 / |1 - z/q|^2 from the geometric series
    s_even = sum(qv ** (-2 * k) for k in range(terms))
    s_odd = sum(qv ** (-(2 * k + 1)) for k in range(terms))
    return 2 * s_even - 2 * s_odd


@pytest.mark.parametrize("qv", [2, 3, 4, 5])
def test_integrate_iwahori_gl2(qv, iw2):
    assert fourier_mean(qv) == pytest.approx(2 * qv / (qv + 1), abs=1e-9)
    assert torus_average(iw_factor(0, 1), 2, qv, 256) == pytest.approx(fourier_mean(qv), abs=1e-9)
    assert integrate(ComponentSpec(iw2, (Partition((1, 1)),)), qv, 256) == pytest.approx(1.0, abs=1e-6)
    assert integrate(ComponentSpec(iw2, (Partition((2,)),)), qv, 256) == pytest.approx(qv - 1, abs=1e-12)


def test_integrate_gl1():
    assert integrate(ComponentSpec(iwahori_invariants(1), (Partition((1,)),)), 2, 256) == 1.0


@pytest.mark.parametrize("parts", [(1, 1), (2, 1), (1, 1, 1)])
@pytest.mark.parametrize("qv", [2, 3])
def test_integrate_converges(parts, qv):
    spec = ComponentSpec(single(m=1, e=sum(parts), r=1, d=1, f_self=0), (Partition(parts),))
    a, b = integrate(spec, qv, 128), integrate(spec, qv, 256)
    assert abs(a - b) <= 1e-9 * abs(b)


def test_integrate_deterministic_and_errors(iw2):
    spec = ComponentSpec(iw2, (Partition((1, 1)),))
    assert integrate(spec, 3, 64) == integrate(spec, 3, 64)
    with pytest.raises(SingularityError):
        integrate(spec, 1.0, 64)
    with pytest.raises(InputError):
        integrate(spec, 2, 4)


def test_component_spec_checks():
    with pytest.raises(InputError):
        ComponentSpec(single(e=2), (Partition((3,)),))
    with pytest.raises(InputError):
        ComponentSpec(single(e=2), ())
