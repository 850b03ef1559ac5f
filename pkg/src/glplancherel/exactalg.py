"""Exact arithmetic: Laurent polynomials in v = q^(1/2), rational functions of
v, and factored torus expressions built from (1 - z_j/z_i * q^a).

Coefficients are :class:`fractions.Fraction` (arbitrary precision, always
reduced). Every value here is immutable.
"""
from __future__ import annotations

import cmath
import math
import re
from fractions import Fraction
from functools import reduce
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import DomainError, ParseError, SingularityError

__all__ = [
    "HalfPowerPoly",
    "RatFunc",
    "Factor",
    "FactoredExpr",
    "q",
    "v",
    "as_ratfunc",
    "parse_scalar",
    "render_exponent",
    "exact_eq",
]

UNIT_TOL = 1e-12
SINGULAR_TOL = 1e-14


# ---------------------------------------------------------------------------
# dense integer polynomial helpers (coefficient lists, lowest degree first)

def _trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _content(a: Sequence[int]) -> int:
    return reduce(math.gcd, a, 0)


def _primitive(a: list[int]) -> list[int]:
    c = _content(a)
    if c == 0:
        return []
    if a[-1] < 0:
        c = -c
    return [x // c for x in a]


def _prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of a by b (integer coefficients)."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(a) - 1 >= db and a:
        shift = len(a) - 1 - db
        la = a[-1]
        a = [x * lb for x in a]
        for k, bk in enumerate(b):
            a[k + shift] -= la * bk
        _trim(a)
    return a


def _poly_gcd(a: list[int], b: list[int]) -> list[int]:
    """Primitive gcd (positive leading coefficient) over Q of two integer polynomials."""
    a, b = _primitive(list(a)), _primitive(list(b))
    if not a:
        return b
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    while b:
        if len(b) == 1:
            return [1]
        r = _prem(a, b)
        a, b = b, _primitive(r)
    return a


def _divexact_int(a: list[int], b: list[int]) -> list[int]:
    """Quotient of a by b when every long-division step is integral and exact."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    out = [0] * max(len(a) - db, 1)
    while len(a) - 1 >= db and a:
        shift = len(a) - 1 - db
        c, rem = divmod(a[-1], lb)
        if rem:
            raise ArithmeticError("inexact polynomial division")
        out[shift] = c
        if c:
            for k, bk in enumerate(b):
                a[k + shift] -= c * bk
        a.pop()
        _trim(a)
    if a:
        raise ArithmeticError("inexact polynomial division")
    return out


def _num(x):
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return x
    return Fraction(x)


def _norm(x):
    """Store integral coefficients as int (faster), others as Fraction."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


# ---------------------------------------------------------------------------

class HalfPowerPoly:
    """Laurent polynomial in v with rational coefficients, where v**2 = q.

    >>> (q - 1) * (q + 1) == q**2 - 1
    True
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs=None):
        c: dict[int, object] = {}
        if coeffs:
            items = coeffs.items() if isinstance(coeffs, dict) else coeffs
            for k, x in items:
                if not x:
                    continue
                k = int(k)
                x = c.get(k, 0) + _num(x)
                if x:
                    c[k] = x
                else:
                    c.pop(k, None)
        self._c = {k: _norm(x) for k, x in sorted(c.items())}
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def const(cls, x) -> "HalfPowerPoly":
        return cls({0: x})

    @classmethod
    def vpow(cls, k: int, coeff=1) -> "HalfPowerPoly":
        return cls({k: coeff})

    @classmethod
    def qpow(cls, a, coeff=1) -> "HalfPowerPoly":
        """coeff * q**a with a in (1/2)Z."""
        two_a = Fraction(a) * 2
        if two_a.denominator != 1:
            raise ValueError(f"q-exponent {a} is not a half-integer")
        return cls({int(two_a): coeff})

    # inspection -------------------------------------------------------
    @property
    def coeffs(self) -> dict[int, Fraction]:
        return {k: Fraction(x) for k, x in self._c.items()}

    def is_zero(self) -> bool:
        return not self._c

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    @property
    def low(self) -> int:
        return next(iter(self._c))

    @property
    def high(self) -> int:
        return next(reversed(self._c))

    @property
    def leading(self) -> Fraction:
        return Fraction(self._c[self.high])

    def constant_value(self):
        """The coefficient if this is a constant, else None."""
        if not self._c:
            return Fraction(0)
        if len(self._c) == 1 and 0 in self._c:
            return Fraction(self._c[0])
        return None

    # arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, HalfPowerPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return HalfPowerPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for k, x in other._c.items():
            c[k] = c.get(k, 0) + x
        return HalfPowerPoly(c)

    __radd__ = __add__

    def __neg__(self):
        return HalfPowerPoly({k: -x for k, x in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self._c or not other._c:
            return HalfPowerPoly()
        da, a = self._scaled()
        db, b = other._scaled()
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        lo = self.low + other.low
        den = da * db
        return HalfPowerPoly._from_dense(lo, prod, den)

    def _scaled(self) -> tuple[int, list[int]]:
        """(D, A) with self = v^low * A(v) / D and A integral."""
        den = 1
        for x in self._c.values():
            if isinstance(x, Fraction):
                den = den * x.denominator // math.gcd(den, x.denominator)
        lo = self.low
        out = [0] * (self.high - lo + 1)
        for k, x in self._c.items():
            out[k - lo] = int(x * den) if den != 1 else x
        return den, out

    @classmethod
    def _from_dense(cls, lo: int, ints: list[int], den: int = 1) -> "HalfPowerPoly":
        obj = cls.__new__(cls)
        if den == 1:
            obj._c = {lo + i: x for i, x in enumerate(ints) if x}
        else:
            obj._c = {lo + i: _norm(Fraction(x, den)) for i, x in enumerate(ints) if x}
        obj._hash = None
        return obj

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial; use RatFunc")
        result = HalfPowerPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        return RatFunc(self, 1) / other

    def __rtruediv__(self, other):
        return as_ratfunc(other) / RatFunc(self, 1)

    def shift(self, k: int) -> "HalfPowerPoly":
        """Multiply by v**k."""
        return HalfPowerPoly({e + k: x for e, x in self._c.items()})

    def subs_power(self, r: int) -> "HalfPowerPoly":
        """Substitute v -> v**r (i.e. q -> q**r)."""
        return HalfPowerPoly({e * r: x for e, x in self._c.items()})

    def exact_div(self, other: "HalfPowerPoly") -> "HalfPowerPoly":
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if not self._c:
            return HalfPowerPoly()
        da, a = self._scaled()
        db, b = other._scaled()
        lb = b[-1]
        steps = len(a) - len(b) + 1
        if steps <= 0:
            raise ArithmeticError("inexact polynomial division")
        scale = lb ** steps if abs(lb) != 1 else 1
        quo = _divexact_int([x * scale for x in a], b)
        # self/other = (A/da)/(B/db) = quo * db / (da * scale)
        num_scale = db
        den = da * scale
        g = math.gcd(num_scale, den)
        num_scale //= g
        den //= g
        return HalfPowerPoly._from_dense(self.low - other.low, [x * num_scale for x in quo], den)

    def _int_dense(self) -> list[int]:
        den = reduce(lambda acc, x: acc * x.denominator // math.gcd(acc, x.denominator),
                     self._c.values(), 1)
        lo = self.low
        out = [0] * (self.high - lo + 1)
        for k, x in self._c.items():
            out[k - lo] = int(x * den)
        return out

    # comparison / evaluation -----------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = HalfPowerPoly.const(other)
        if not isinstance(other, HalfPowerPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._c.items()))
        return self._hash

    def __call__(self, q_val):
        vv = math.sqrt(q_val) if not isinstance(q_val, complex) else cmath.sqrt(q_val)
        return sum(float(x) * vv ** k for k, x in self._c.items())

    def eval_array(self, q_val: float) -> float:
        return self(q_val)

    def __repr__(self):
        return f"HalfPowerPoly({self.render()!r})"

    def render(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for k, x in sorted(self._c.items(), reverse=True):
            sign = "-" if x < 0 else "+"
            mag = abs(x)
            mono = _render_qpow(k)
            if mono == "":
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    __str__ = render


def render_exponent(two_a: int) -> str:
    """Render the half-integer two_a/2 as it appears inside q^( )."""
    if two_a % 2 == 0:
        return str(two_a // 2)
    return f"{two_a}/2"


def _render_qpow(k: int) -> str:
    if k == 0:
        return ""
    if k == 2:
        return "q"
    if k % 2 == 0 and k > 0:
        return f"q^{k // 2}"
    return f"q^({render_exponent(k)})"


q = HalfPowerPoly.vpow(2)
v = HalfPowerPoly.vpow(1)


class RatFunc:
    """Reduced quotient of two HalfPowerPoly.

    Canonical form: gcd removed, denominator's lowest v-exponent is 0 and its
    leading coefficient is 1. Two RatFunc compare equal iff they are equal as
    rational functions of v.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=1, *, _reduced: bool = False):
        if not isinstance(num, HalfPowerPoly):
            num = HalfPowerPoly.const(num)
        if not isinstance(den, HalfPowerPoly):
            den = HalfPowerPoly.const(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def qpow(cls, a, coeff=1) -> "RatFunc":
        return cls(HalfPowerPoly.qpow(a, coeff), _reduced=False)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den == HalfPowerPoly.const(1)

    def constant_value(self):
        if self.is_polynomial():
            return self.num.constant_value()
        return None

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (HalfPowerPoly, int, Fraction)):
            return RatFunc(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        # cross-reduce first so the gcds stay small
        n1, d2 = _reduce_pair(self.num, other.den)
        n2, d1 = _reduce_pair(other.num, self.den)
        return _normalize_units(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return _normalize_units(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return _normalize_units(self.num ** n, self.den ** n)

    def subs_power(self, r: int) -> "RatFunc":
        return RatFunc(self.num.subs_power(r), self.den.subs_power(r))

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __call__(self, q_val):
        d = self.den(q_val)
        if abs(d) < SINGULAR_TOL:
            raise SingularityError(f"scalar denominator vanishes at q={q_val}")
        return self.num(q_val) / d

    def __float__(self):
        c = self.constant_value()
        if c is None:
            raise TypeError("non-constant rational function has no float value")
        return float(c)

    def render(self) -> str:
        num, den = self.num, self.den
        if not num.is_zero() and num.low < 0:
            # show a ratio of honest polynomials: (q^2 + q + 1)/q^2
            den = den.shift(-num.low)
            num = num.shift(-num.low)
        n = num.render()
        if den == HalfPowerPoly.const(1):
            return n
        d = den.render()
        if len(num.coeffs) > 1:
            n = f"({n})"
        if len(den.coeffs) > 1 or "*" in d:
            d = f"({d})"
        return f"{n}/{d}"

    __str__ = render

    def __repr__(self):
        return f"RatFunc({self.render()!r})"


def _normalize_units(num: HalfPowerPoly, den: HalfPowerPoly) -> RatFunc:
    """Fix the monomial/constant unit ambiguity (assumes gcd already trivial)."""
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    s = -den.low
    lead = den.leading
    num = num.shift(s)
    den = den.shift(s)
    if lead != 1:
        num = num * HalfPowerPoly.const(Fraction(1) / lead)
        den = den * HalfPowerPoly.const(Fraction(1) / lead)
    return RatFunc(num, den, _reduced=True)


def _reduce_pair(a: HalfPowerPoly, b: HalfPowerPoly):
    if a.is_zero():
        return a, HalfPowerPoly.const(1)
    if a.is_monomial() or b.is_monomial():
        return a, b
    g = _poly_gcd(a._int_dense(), b._int_dense())
    if len(g) <= 1:
        return a, b
    gp = HalfPowerPoly(enumerate(g))
    return a.exact_div(gp), b.exact_div(gp)


def _reduce(num: HalfPowerPoly, den: HalfPowerPoly):
    num, den = _reduce_pair(num, den)
    r = _normalize_units(num, den)
    return r.num, r.den


def as_ratfunc(x) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, (HalfPowerPoly, int, Fraction)):
        return RatFunc(x)
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"cannot interpret {x!r} as an exact scalar")


# ---------------------------------------------------------------------------
# parser for the textual scalar grammar

_TOKEN = re.compile(r"\s*(?:(\d+)|(q|v)|(\*\*|[-+*/^()]))")


def parse_scalar(text: str) -> RatFunc:
    """Parse an exact scalar such as ``(q^2 - 1)*q^(-1/2)/2``.

    Accepts integers, ``q``, ``v`` (= q^(1/2)), ``+ - * /``, parentheses and
    ``^``/``**`` with an integer or parenthesized rational exponent. Powers of
    a bare ``q`` may be half-integers.
    """
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos} in {text!r}")
        pos = m.end()
        if m.group(1):
            toks.append(("num", int(m.group(1))))
        elif m.group(2):
            toks.append(("var", m.group(2)))
        else:
            op = m.group(3)
            toks.append(("op", "^" if op == "**" else op))
    parser = _Parser(toks, text)
    out = parser.expr()
    if parser.i != len(toks):
        raise ParseError(f"trailing input in {text!r}")
    return out


class _Parser:
    def __init__(self, toks, text):
        self.toks = toks
        self.i = 0
        self.text = text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, val=None):
        t = self.peek()
        if t[0] is None or (kind and t[0] != kind) or (val and t[1] != val):
            raise ParseError(f"malformed scalar {self.text!r}")
        self.i += 1
        return t

    def expr(self) -> RatFunc:
        out = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self) -> RatFunc:
        out = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            if op == "*":
                out = out * rhs
            else:
                if rhs.is_zero():
                    raise ParseError(f"division by zero in {self.text!r}")
                out = out / rhs
        return out

    def unary(self) -> RatFunc:
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> RatFunc:
        kind, val = self.peek()
        bare = None
        if kind == "var":
            self.take()
            bare = val
            base = RatFunc(q if val == "q" else v)
        elif kind == "num":
            self.take()
            base = RatFunc(val)
        elif (kind, val) == ("op", "("):
            self.take()
            base = self.expr()
            self.take("op", ")")
        else:
            raise ParseError(f"malformed scalar {self.text!r}")
        if self.peek() == ("op", "^"):
            self.take()
            ex = self.exponent()
            if bare is not None:
                step = 2 if bare == "q" else 1
                k = ex * step
                if k.denominator != 1:
                    raise ParseError(f"exponent {ex} not representable in {self.text!r}")
                return RatFunc(HalfPowerPoly.vpow(int(k)))
            if ex.denominator != 1:
                raise ParseError(f"fractional power of a compound expression in {self.text!r}")
            if base.is_zero() and ex < 0:
                raise ParseError(f"division by zero in {self.text!r}")
            return base ** int(ex)
        return base

    def exponent(self) -> Fraction:
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return Fraction(val)
        if (kind, val) == ("op", "-"):
            self.take()
            return -self.exponent()
        if (kind, val) == ("op", "("):
            self.take()
            e = self.expr()
            self.take("op", ")")
            c = e.constant_value()
            if c is None:
                raise ParseError(f"non-constant exponent in {self.text!r}")
            return c
        raise ParseError(f"malformed exponent in {self.text!r}")


# ---------------------------------------------------------------------------
# factored torus expressions

class Factor(NamedTuple):
    """(1 - z_j/z_i * q^(two_a/2)) ** e, torus indices 0-based."""

    i: int
    j: int
    two_a: int
    e: int

    @property
    def a(self) -> Fraction:
        return Fraction(self.two_a, 2)


def _canonical_factors(factors: Iterable) -> tuple[Factor, ...]:
    acc: dict[tuple[int, int, int], int] = {}
    for f in factors:
        i, j, two_a, e = f
        if i == j:
            raise ValueError(f"factor with i == j == {i}")
        key = (int(i), int(j), int(two_a))
        acc[key] = acc.get(key, 0) + int(e)
    return tuple(Factor(*k, e) for k, e in sorted(acc.items()) if e)


class FactoredExpr:
    """scalar * prod (1 - z_j z_i^{-1} q^a)^e.

    The squared modulus |1 - z_j/z_i q^a|^2 is the pair of factors (i, j, a)
    and (j, i, a); on the unit torus z_i/z_j is the conjugate of z_j/z_i.
    """

    __slots__ = ("scalar", "factors", "_nf")

    def __init__(self, scalar=1, factors: Iterable = ()):
        self.scalar = as_ratfunc(scalar)
        self.factors = _canonical_factors(factors)
        self._nf = None

    @classmethod
    def modulus_sq(cls, i: int, j: int, a, e: int = 1, scalar=1) -> "FactoredExpr":
        two_a = Fraction(a) * 2
        if two_a.denominator != 1:
            raise ValueError(f"exponent {a} is not a half-integer")
        t = int(two_a)
        return cls(scalar, [(i, j, t, e), (j, i, t, e)])

    # algebra ----------------------------------------------------------
    def __mul__(self, other):
        if isinstance(other, FactoredExpr):
            return FactoredExpr(self.scalar * other.scalar, self.factors + other.factors)
        return FactoredExpr(self.scalar * as_ratfunc(other), self.factors)

    __rmul__ = __mul__

    def inverse(self) -> "FactoredExpr":
        return FactoredExpr(self.scalar.inverse(), [(f.i, f.j, f.two_a, -f.e) for f in self.factors])

    def __truediv__(self, other):
        if isinstance(other, FactoredExpr):
            return self * other.inverse()
        return FactoredExpr(self.scalar / as_ratfunc(other), self.factors)

    def __pow__(self, n: int):
        return FactoredExpr(self.scalar ** n, [(f.i, f.j, f.two_a, f.e * n) for f in self.factors])

    def relabel(self, perm: dict[int, int] | Sequence[int]) -> "FactoredExpr":
        """Rename torus indices: index t becomes perm[t]."""
        return FactoredExpr(self.scalar, [(perm[f.i], perm[f.j], f.two_a, f.e) for f in self.factors])

    def subs_power(self, r: int) -> "FactoredExpr":
        """q -> q**r everywhere (scalar and factor exponents)."""
        return FactoredExpr(self.scalar.subs_power(r),
                            [(f.i, f.j, f.two_a * r, f.e) for f in self.factors])

    def torus_part(self) -> "FactoredExpr":
        return FactoredExpr(1, self.factors)

    @property
    def max_index(self) -> int:
        return max((max(f.i, f.j) for f in self.factors), default=-1)

    def is_constant(self) -> bool:
        return not self.factors

    # normal form and equality ----------------------------------------
    def normal_form(self) -> tuple[RatFunc, tuple[Factor, ...]]:
        """Fold q-powers out of complete squared-modulus pairs.

        (1 - w q^a)(1 - w^{-1} q^a) = q^{2a} (1 - w q^{-a})(1 - w^{-1} q^{-a})
        holds identically, so paired factors with a > 0 are rewritten with
        -a and the q^{2a e} moved into the scalar.
        """
        if self._nf is not None:
            return self._nf
        exps = {(f.i, f.j, f.two_a): f.e for f in self.factors}
        shift = 0
        out: dict[tuple[int, int, int], int] = dict(exps)
        for (i, j, t), e in exps.items():
            if t <= 0 or i > j:
                continue
            e2 = exps.get((j, i, t), 0)
            if e == 0 or e2 == 0 or (e > 0) != (e2 > 0):
                continue
            p = min(e, e2) if e > 0 else max(e, e2)
            out[(i, j, t)] -= p
            out[(j, i, t)] -= p
            out[(i, j, -t)] = out.get((i, j, -t), 0) + p
            out[(j, i, -t)] = out.get((j, i, -t), 0) + p
            shift += 2 * t * p  # q^{2a p} = v^{2 two_a p}
        scalar = self.scalar * HalfPowerPoly.vpow(shift) if shift else self.scalar
        factors = _canonical_factors((i, j, t, e) for (i, j, t), e in out.items())
        self._nf = (scalar, factors)
        return self._nf

    def normalized(self) -> "FactoredExpr":
        """The same expression written in its normal form."""
        scalar, factors = self.normal_form()
        return FactoredExpr(scalar, factors)

    def __eq__(self, other):
        if not isinstance(other, FactoredExpr):
            return NotImplemented
        return self.normal_form() == other.normal_form()

    def __hash__(self):
        return hash(self.normal_form())

    # numerics -----------------------------------------------------------
    def eval(self, q_val: float, point: Sequence[complex]) -> complex:
        if q_val <= 0:
            raise SingularityError(f"q must be positive, got {q_val}")
        z = [complex(x) for x in point]
        if len(z) <= self.max_index:
            raise DomainError(f"point has {len(z)} coordinates, expression needs {self.max_index + 1}")
        for x in z:
            if abs(abs(x) - 1.0) > UNIT_TOL:
                raise DomainError(f"torus coordinate {x} is not of modulus 1")
        val = complex(self.scalar(q_val))
        for f in self.factors:
            term = 1 - z[f.j] / z[f.i] * q_val ** (f.two_a / 2)
            if f.e < 0 and abs(term) < SINGULAR_TOL:
                raise SingularityError(f"factor {f} vanishes at q={q_val}, z={z}")
            val *= term ** f.e
        return val

    def eval_torus(self, q_val: float, z: np.ndarray) -> np.ndarray:
        """Vectorized torus part (scalar excluded); z has shape (..., k)."""
        out = np.ones(z.shape[:-1], dtype=complex)
        for f in self.factors:
            term = 1 - z[..., f.j] / z[..., f.i] * q_val ** (f.two_a / 2)
            out *= term ** f.e
        return out

    # rendering ----------------------------------------------------------
    def render(self, one_based: bool = True) -> str:
        """Scalar times paired factors |1 - zj/zi * q^(a)|^2, raw factors otherwise."""
        off = 1 if one_based else 0
        exps = {(f.i, f.j, f.two_a): f.e for f in self.factors}
        num, den = [], []
        for (i, j, t), e in sorted(exps.items()):
            if i > j:
                continue
            e2 = exps.get((j, i, t), 0)
            p = 0
            if e and e2 and (e > 0) == (e2 > 0):
                p = min(e, e2) if e > 0 else max(e, e2)
                exps[(j, i, t)] = e2 - p
                exps[(i, j, t)] = e - p
            if p:
                body = f"|1 - z{j + off}/z{i + off}{_qsuffix(t)}|"
                tgt = num if p > 0 else den
                tgt.append(body + f"^{2 * abs(p)}")
        for (i, j, t), e in sorted(exps.items()):
            if e:
                body = f"(1 - z{j + off}/z{i + off}{_qsuffix(t)})"
                tgt = num if e > 0 else den
                tgt.append(body if abs(e) == 1 else f"{body}^{abs(e)}")
        s = self.scalar.render()
        if num:
            if len(self.scalar.num.coeffs) > 1 and self.scalar.is_polynomial():
                s = f"({s})"
            s = s + " * " + " * ".join(num) if s != "1" else " * ".join(num)
        for d in den:
            s += f" / {d}"
        return s

    __str__ = render

    def __repr__(self):
        return f"FactoredExpr({self.render()!r})"

    def to_dict(self) -> dict:
        return {
            "scalar": self.scalar.render(),
            "factors": [
                {"i": f.i, "j": f.j, "a": render_exponent(f.two_a), "e": f.e} for f in self.factors
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "FactoredExpr":
        facs = []
        for f in doc.get("factors", []):
            a = Fraction(str(f["a"]))
            facs.append((int(f["i"]), int(f["j"]), int(a * 2), int(f["e"])))
        return cls(parse_scalar(doc["scalar"]), facs)


def _qsuffix(two_a: int) -> str:
    if two_a == 0:
        return ""
    return f" * q^({render_exponent(two_a)})"


def exact_eq(a: FactoredExpr, b: FactoredExpr) -> bool:
    """Exact equality: equal scalars and equal factor multisets (in normal form)."""
    return a == b
