"""Formal degrees of Steinberg and generalized Steinberg representations.

All exact results are :class:`RatFunc` in v = q^(1/2); the ratio path with a
user-measured numeric d(sigma) returns floats.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

from .errors import InputError, MissingDataError
from .exactalg import HalfPowerPoly, RatFunc, q
from .groupdata import gl_order

Scalar = Union[RatFunc, float]

__all__ = [
    "steinberg_fd",
    "fd_ratio",
    "fd_ratio_rewritten",
    "explicit_fd",
    "fd_ratio_explicit",
    "fd_ratio_square_display",
    "fd_ratio_delta_display",
    "fd_generalized_steinberg",
    "fd_product",
]


@lru_cache(maxsize=None)
def steinberg_fd(l: int) -> RatFunc:
    """d(St(l)) = (1/l) prod_{j=1}^{l-1} (q^j - 1)."""
    if l < 1:
        raise InputError("l must be >= 1")
    out = HalfPowerPoly.const(Fraction(1, l))
    for j in range(1, l):
        out = out * (q ** j - 1)
    return RatFunc(out)


def _qm1(k: int) -> HalfPowerPoly:
    return q ** k - 1


def _check(m: int, e: int, r: int) -> None:
    if m < 1 or e < 1 or r < 1:
        raise InputError(f"m, e, r must be >= 1 (got m={m}, e={e}, r={r})")
    if m % r:
        raise InputError(f"r={r} does not divide m={m}")


@lru_cache(maxsize=None)
def fd_ratio(m: int, e: int, r: int, f) -> RatFunc:
    """d(St(sigma, e)) / d(sigma)^e from the fundamental invariants alone."""
    _check(m, e, r)
    f = Fraction(f)
    if f < 0:
        raise InputError("conductor f must be >= 0")
    const = Fraction(m ** (e - 1), r ** (e - 1) * e)
    expo = Fraction(e * e - e, 2) * (f + r - 2 * m * m)
    out = RatFunc.qpow(expo, const)
    out = out * RatFunc(_qm1(r) ** e, _qm1(e * r))
    return out * RatFunc(gl_order(e * m), gl_order(m) ** e)


@lru_cache(maxsize=None)
def fd_ratio_rewritten(m: int, e: int, r: int, f) -> RatFunc:
    """The same ratio written through Steinberg degrees of GL(em) and GL(m)."""
    _check(m, e, r)
    f = Fraction(f)
    out = RatFunc.qpow(Fraction(e * e - e, 2) * (f + r - m * m), Fraction(1, r ** (e - 1)))
    out = out * RatFunc(_qm1(e * m) * _qm1(r) ** e, _qm1(m) ** e * _qm1(e * r))
    return out * steinberg_fd(e * m) / steinberg_fd(m) ** e


@lru_cache(maxsize=None)
def explicit_fd(m: int, r: int, delta, e: int = 1) -> RatFunc:
    """d(St(sigma, e)) from (m, r, delta):

    r (q^{em} - 1)/(q^{er} - 1) q^{(er - em + e^2 delta)/2} d(St(em)).
    With e = 1 this is d(sigma) itself.
    """
    _check(m, e, r)
    delta = Fraction(delta)
    expo = (e * r - e * m + e * e * delta) / 2
    if (2 * expo).denominator != 1:
        raise InputError(f"delta={delta} gives the exponent {expo}, not a half-integer")
    out = RatFunc.qpow(expo, r) * RatFunc(_qm1(e * m), _qm1(e * r))
    return out * steinberg_fd(e * m)


def fd_ratio_explicit(m: int, e: int, r: int, delta, power: int | None = None) -> RatFunc:
    """explicit_fd(e) / explicit_fd(1)^power (power defaults to e)."""
    power = e if power is None else power
    return explicit_fd(m, r, delta, e) / explicit_fd(m, r, delta, 1) ** power


def fd_ratio_square_display(m: int, e: int, r: int) -> RatFunc:
    """Closed form of d(pi)/d(sigma)^{e^2}; note delta drops out."""
    _check(m, e, r)
    e2 = e * e
    out = RatFunc.qpow(Fraction((e2 - e) * (m - r), 2), Fraction(1, r ** (e2 - 1)))
    out = out * RatFunc(_qm1(e * m) * _qm1(r) ** e2, _qm1(e * r) * _qm1(m) ** e2)
    return out * steinberg_fd(e * m) / steinberg_fd(m) ** e2


def fd_ratio_delta_display(m: int, e: int, r: int, delta) -> RatFunc:
    """Closed form of d(pi)/d(sigma)^e in terms of delta."""
    _check(m, e, r)
    out = RatFunc.qpow(Fraction(e * e - e, 2) * Fraction(delta), Fraction(1, r ** (e - 1)))
    out = out * RatFunc(_qm1(e * m) * _qm1(r) ** e, _qm1(e * r) * _qm1(m) ** e)
    return out * steinberg_fd(e * m) / steinberg_fd(m) ** e


def fd_generalized_steinberg(c, l: int, q_val=None) -> Scalar:
    """d(St(sigma, l)) for the cuspidal datum c.

    Precedence follows the datum: an exact d(sigma) goes through the ratio
    formula, otherwise delta gives the explicit formula, otherwise a numeric
    d(sigma) goes through the ratio formula evaluated at q_val.
    """
    from .invariants import resolve_self_conductor  # local: invariants imports us

    if l < 1:
        raise InputError("l must be >= 1")
    mode = c.fd_mode
    if mode == "exact":
        ratio = RatFunc(1) if l == 1 else fd_ratio(c.m, l, c.r, resolve_self_conductor(c))
        return ratio * c.d ** l
    if mode == "derive":
        return explicit_fd(c.m, c.r, c.delta, l)
    if mode == "numeric":
        if l == 1:
            return float(c.d)
        if q_val is None:
            raise MissingDataError("numeric formal degree needs a value of q")
        ratio = fd_ratio(c.m, l, c.r, resolve_self_conductor(c))
        return ratio(q_val) * float(c.d) ** l
    raise MissingDataError(f"formal degree of cuspidal (m={c.m}, r={c.r}) is not resolvable")


def fd_product(values: Iterable[Scalar], q_val=None) -> Scalar:
    """Formal degree of a tensor product: the product of the factors' degrees.

    Exact inputs give an exact product; if any factor is numeric, every factor
    is evaluated at q_val.
    """
    values = list(values)
    if all(isinstance(x, (RatFunc, int, Fraction)) for x in values):
        out = RatFunc(1)
        for x in values:
            out = out * x
        return out
    if q_val is None and any(isinstance(x, RatFunc) and x.constant_value() is None for x in values):
        raise MissingDataError("mixed exact/numeric formal degrees need a value of q")
    out = 1.0
    for x in values:
        out *= scalar_value(x, q_val)
    return out


def is_exact(x) -> bool:
    return isinstance(x, RatFunc)


def scalar_value(x: Scalar, q_val: float) -> float:
    if isinstance(x, RatFunc):
        c = x.constant_value()
        return float(c) if c is not None else x(q_val)
    if isinstance(x, (int, Fraction)):
        return float(x)
    if math.isnan(x):
        raise ValueError("NaN scalar")
    return float(x)
