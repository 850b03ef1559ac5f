from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import HealthCheck, settings

from glplancherel import CuspidalDatum, FundamentalInvariants
from glplancherel.exactalg import HalfPowerPoly, RatFunc

settings.register_profile(
    "repo", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")

V = sp.Symbol("v", positive=True)
Q = V ** 2


def poly_to_sympy(p: HalfPowerPoly):
    return sum((sp.Rational(x.numerator, x.denominator) * V ** k for k, x in p.coeffs.items()),
               sp.Integer(0))


def to_sympy(x: RatFunc):
    return poly_to_sympy(x.num) / poly_to_sympy(x.den)


def sym_equal(x: RatFunc, expr) -> bool:
    return sp.cancel(sp.together(to_sympy(x) - expr)) == 0


def single(m=1, e=2, r=1, d=1, delta=None, f_self=0, q=2):
    return FundamentalInvariants(q=q, cuspidals=(CuspidalDatum(m=m, e=e, r=r, d=d, delta=delta, f_self=f_self),))


@pytest.fixture
def iw2():
    return single(m=1, e=2, r=1, d=1, delta=Fraction(0), f_self=0)
