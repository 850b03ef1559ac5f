from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from glplancherel.errors import InputError, MissingDataError, ValidationError
from glplancherel.exactalg import RatFunc, q
from glplancherel.invariants import (
    CuspidalDatum,
    FundamentalInvariants,
    derive_conductor,
    derive_formal_degree,
    discriminant_exponent,
    ensure_valid,
    iwahori_invariants,
    resolve_formal_degree,
    validate,
)


def codes(inv):
    return {v.code for v in validate(inv)}


def test_iwahori_datum_is_valid():
    inv = FundamentalInvariants(q=3, cuspidals=(CuspidalDatum(m=1, e=2, r=1, d=1, delta=0, f_self=0),))
    assert validate(inv) == []
    assert ensure_valid(inv) is inv
    assert validate(iwahori_invariants(4)) == []


def test_r_must_divide_m():
    inv = FundamentalInvariants(q=2, cuspidals=(CuspidalDatum(m=3, e=1, r=2, d=1, f_self=0),))
    assert "R_DIVIDES_M" in codes(inv)


def test_conductor_identity_violation():
    inv = FundamentalInvariants(q=2, cuspidals=(CuspidalDatum(m=2, e=1, r=1, delta=1, f_self=3),))
    vs = [v for v in validate(inv) if v.code == "CONDUCTOR_IDENTITY"]
    assert vs and "4" in vs[0].message
    with pytest.raises(ValidationError) as exc:
        ensure_valid(inv)
    assert "CONDUCTOR_IDENTITY" in str(exc.value)


@pytest.mark.parametrize(
    "kwargs, code",
    [
        (dict(q=1), "Q_TOO_SMALL"),
        (dict(cusp=dict(m=0, e=1, r=1, d=1, f_self=0)), "M_POSITIVE"),
        (dict(cusp=dict(m=1, e=0, r=1, d=1, f_self=0)), "E_POSITIVE"),
        (dict(cusp=dict(m=1, e=1, r=0, d=1, f_self=0)), "R_POSITIVE"),
        (dict(cusp=dict(m=1, e=1, r=1, delta=-2)), "DELTA_NEGATIVE"),
        (dict(cusp=dict(m=2, e=1, r=1, delta=Fraction(1, 2))), "DELTA_NOT_REPRESENTABLE"),
        (dict(cusp=dict(m=1, e=1, r=1, d=1, f_self=-1)), "CONDUCTOR_NEGATIVE"),
        (dict(cusp=dict(m=1, e=1, r=1, d=1, f_self="derive")), "CONDUCTOR_UNRESOLVABLE"),
        (dict(cusp=dict(m=1, e=1, r=1, d="derive", f_self=0)), "FORMAL_DEGREE_UNRESOLVABLE"),
        (dict(cusp=dict(m=1, e=1, r=1, d=-1.0, f_self=0)), "FORMAL_DEGREE_NONPOSITIVE"),
    ],
)
def test_violation_codes(kwargs, code):
    cusp = kwargs.get("cusp", dict(m=1, e=1, r=1, d=1, f_self=0))
    inv = FundamentalInvariants(q=kwargs.get("q", 2), cuspidals=(CuspidalDatum(**cusp),))
    assert code in codes(inv)


def test_no_cuspidals():
    assert "NO_CUSPIDALS" in codes(FundamentalInvariants(q=2, cuspidals=()))


def _two(cross):
    c = CuspidalDatum(m=1, e=1, r=1, d=1, f_self=0)
    return FundamentalInvariants(q=2, cuspidals=(c, c), cross_conductors=cross)


@pytest.mark.parametrize(
    "cross, code",
    [
        ((), "CROSS_MISSING"),
        (((None, 1),), "CROSS_SHAPE"),
        (((0, 1), (1, None)), "CROSS_DIAGONAL"),
        (((None, 1), (2, None)), "CROSS_ASYMMETRIC"),
        (((None, None), (None, None)), "CROSS_MISSING"),
        (((None, -1), (-1, None)), "CROSS_NEGATIVE"),
    ],
)
def test_cross_conductor_checks(cross, code):
    assert code in codes(_two(cross))


def test_cross_valid():
    inv = _two(((None, 2), (2, None)))
    assert validate(inv) == []
    assert inv.cross(0, 1) == 2
    assert inv.n == 2 and inv.t == 2


@given(st.integers(-2, 5), st.integers(-1, 4), st.integers(-1, 4),
       st.one_of(st.none(), st.fractions(-2, 8, max_denominator=2)),
       st.one_of(st.none(), st.integers(-2, 10)))
def test_validate_is_total_and_idempotent(m, e, r, delta, f):
    inv = FundamentalInvariants(q=2, cuspidals=(CuspidalDatum(m=m, e=e, r=r, d=1, delta=delta, f_self=f),))
    first = validate(inv)
    assert validate(inv) == first


@pytest.mark.parametrize("m, r, delta, f", [(1, 1, 0, 0), (2, 1, 0, 3), (2, 2, 4, 6)])
def test_derive_conductor(m, r, delta, f):
    assert derive_conductor(CuspidalDatum(m=m, e=1, r=r, delta=delta)) == f


def test_derive_conductor_needs_delta():
    with pytest.raises(MissingDataError):
        derive_conductor(CuspidalDatum(m=1, e=1, r=1))


def test_derive_formal_degree_examples():
    assert derive_formal_degree(CuspidalDatum(m=1, e=1, r=1, delta=0)) == RatFunc(1)
    want = RatFunc(q ** 2 - 1) * RatFunc.qpow(Fraction(-1, 2), Fraction(1, 2))
    assert derive_formal_degree(CuspidalDatum(m=2, e=1, r=1, delta=0)) == want
    assert derive_formal_degree(CuspidalDatum(m=2, e=1, r=2, delta=0)) == RatFunc(q - 1)
    assert derive_formal_degree(CuspidalDatum(m=2, e=1, r=2, delta=0), 3) == pytest.approx(2.0)
    with pytest.raises(MissingDataError):
        derive_formal_degree(CuspidalDatum(m=1, e=1, r=1))


def test_discriminant_exponent():
    assert discriminant_exponent(CuspidalDatum(m=1, e=1, r=1, delta=0), 1) == 0
    assert discriminant_exponent(CuspidalDatum(m=2, e=1, r=1, delta=4), 2) == 4
    assert discriminant_exponent(CuspidalDatum(m=4, e=1, r=2, delta=8), 2) == 2
    with pytest.raises(InputError):
        discriminant_exponent(CuspidalDatum(m=4, e=1, r=2, delta=8), 3)


def test_formal_degree_precedence():
    exact = CuspidalDatum(m=2, e=1, r=2, d=RatFunc(q), delta=0)
    assert exact.fd_mode == "exact" and resolve_formal_degree(exact) == RatFunc(q)
    derive = CuspidalDatum(m=2, e=1, r=2, d=5.0, delta=0)
    assert derive.fd_mode == "derive" and resolve_formal_degree(derive) == RatFunc(q - 1)
    numeric = CuspidalDatum(m=2, e=1, r=2, d=5.0)
    assert numeric.fd_mode == "numeric" and resolve_formal_degree(numeric) == 5.0
    missing = CuspidalDatum(m=2, e=1, r=2)
    assert missing.fd_mode == "missing"
    with pytest.raises(MissingDataError):
        resolve_formal_degree(missing)
