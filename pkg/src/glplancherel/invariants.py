"""Fundamental invariants of a Bernstein component: the data model, validation
and derivation of missing invariants (conductor, formal degree)."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .degrees import explicit_fd
from .errors import InputError, MissingDataError, ValidationError
from .exactalg import RatFunc

__all__ = [
    "CuspidalDatum",
    "FundamentalInvariants",
    "Violation",
    "validate",
    "ensure_valid",
    "derive_conductor",
    "derive_formal_degree",
    "discriminant_exponent",
    "resolve_self_conductor",
    "resolve_formal_degree",
    "iwahori_invariants",
]

DERIVE = "derive"

FormalDegree = Union[RatFunc, float, str, None]
Conductor = Union[Fraction, str, None]


@dataclass(frozen=True)
class CuspidalDatum:
    """One prime factor sigma^e: sigma a supercuspidal of GL(m).

    ``d`` is a RatFunc (exact), a float (numeric), ``"derive"`` or None;
    ``f_self`` is f(sigma^v x sigma), ``"derive"`` or None.
    """

    m: int
    e: int
    r: int
    d: FormalDegree = None
    delta: Optional[Fraction] = None
    f_self: Conductor = None

    def __post_init__(self):
        if self.delta is not None:
            object.__setattr__(self, "delta", Fraction(self.delta))
        if self.f_self is not None and self.f_self != DERIVE:
            object.__setattr__(self, "f_self", Fraction(self.f_self))
        if isinstance(self.d, (int, Fraction)) and not isinstance(self.d, bool):
            object.__setattr__(self, "d", RatFunc(Fraction(self.d)))

    @property
    def fd_mode(self) -> str:
        """exact > derive > numeric; 'missing' when nothing applies."""
        if isinstance(self.d, RatFunc):
            return "exact"
        if self.delta is not None and (self.d is None or self.d == DERIVE or isinstance(self.d, float)):
            return "derive"
        if isinstance(self.d, float):
            return "numeric"
        return "missing"


@dataclass(frozen=True)
class FundamentalInvariants:
    q: int
    cuspidals: tuple[CuspidalDatum, ...]
    cross_conductors: tuple[tuple[Optional[Fraction], ...], ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "cuspidals", tuple(self.cuspidals))
        rows = tuple(
            tuple(None if x is None else Fraction(x) for x in row) for row in self.cross_conductors
        )
        object.__setattr__(self, "cross_conductors", rows)

    @property
    def n(self) -> int:
        return sum(c.m * c.e for c in self.cuspidals)

    @property
    def t(self) -> int:
        return len(self.cuspidals)

    def cross(self, i: int, j: int) -> Fraction:
        if i == j:
            raise ValueError("cross conductor requested on the diagonal")
        try:
            x = self.cross_conductors[i][j]
        except IndexError:
            x = None
        if x is None:
            raise MissingDataError(f"cross conductor f_{i}{j} not supplied")
        return x


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    where: str = ""

    def as_dict(self) -> dict:
        return {"code": self.code, "message": self.message, "where": self.where}


def validate(inv: FundamentalInvariants) -> list[Violation]:
    out: list[Violation] = []

    def bad(code, msg, where=""):
        out.append(Violation(code, msg, where))

    if not isinstance(inv.q, int) or inv.q < 2:
        bad("Q_TOO_SMALL", f"q must be an integer >= 2, got {inv.q!r}", "q")
    if not inv.cuspidals:
        bad("NO_CUSPIDALS", "at least one cuspidal datum is required", "cuspidals")
    for idx, c in enumerate(inv.cuspidals):
        w = f"cuspidals[{idx}]"
        if c.m < 1:
            bad("M_POSITIVE", f"m must be >= 1, got {c.m}", w)
        if c.e < 1:
            bad("E_POSITIVE", f"e must be >= 1, got {c.e}", w)
        if c.r < 1:
            bad("R_POSITIVE", f"r must be >= 1, got {c.r}", w)
        elif c.m >= 1 and c.m % c.r:
            bad("R_DIVIDES_M", f"torsion number r={c.r} must divide m={c.m}", w)
        if c.delta is not None:
            if c.delta < 0:
                bad("DELTA_NEGATIVE", f"delta must be >= 0, got {c.delta}", w)
            # exponents (r - m + delta)/2 and (er - em + e^2 delta)/2 must lie in Z/2
            if c.delta.denominator != 1:
                bad("DELTA_NOT_REPRESENTABLE",
                    f"delta={c.delta} puts q^((r-m+delta)/2) outside half-integer powers", w)
        if isinstance(c.f_self, Fraction):
            if c.f_self < 0:
                bad("CONDUCTOR_NEGATIVE", f"f_self must be >= 0, got {c.f_self}", w)
            if c.delta is not None and c.m >= 1 and c.r >= 1:
                expected = c.delta + c.m * c.m - c.r
                if c.f_self != expected:
                    bad("CONDUCTOR_IDENTITY",
                        f"f_self={c.f_self} but delta + m^2 - r = {expected}", w)
        if c.f_self == DERIVE and c.delta is None:
            bad("CONDUCTOR_UNRESOLVABLE", "f_self='derive' needs delta", w)
        if c.d == DERIVE and c.delta is None:
            bad("FORMAL_DEGREE_UNRESOLVABLE", "d='derive' needs delta", w)
        if isinstance(c.d, float) and not c.d > 0:
            bad("FORMAL_DEGREE_NONPOSITIVE", f"numeric d must be > 0, got {c.d}", w)
    t = len(inv.cuspidals)
    rows = inv.cross_conductors
    if rows:
        if len(rows) != t or any(len(row) != t for row in rows):
            bad("CROSS_SHAPE", f"cross_conductors must be {t}x{t}", "cross_conductors")
        else:
            for i in range(t):
                if rows[i][i] is not None:
                    bad("CROSS_DIAGONAL", "diagonal of cross_conductors must be empty (null)",
                        f"cross_conductors[{i}][{i}]")
                for j in range(i + 1, t):
                    a, b = rows[i][j], rows[j][i]
                    if a != b:
                        bad("CROSS_ASYMMETRIC", f"f_{i}{j}={a} but f_{j}{i}={b}",
                            f"cross_conductors[{i}][{j}]")
                    elif a is None:
                        bad("CROSS_MISSING", f"f_{i}{j} not supplied", f"cross_conductors[{i}][{j}]")
                    elif a < 0:
                        bad("CROSS_NEGATIVE", f"f_{i}{j}={a} must be >= 0",
                            f"cross_conductors[{i}][{j}]")
    elif t > 1:
        bad("CROSS_MISSING", f"{t} cuspidals need a {t}x{t} cross_conductors matrix",
            "cross_conductors")
    return out


def ensure_valid(inv: FundamentalInvariants) -> FundamentalInvariants:
    problems = validate(inv)
    if problems:
        raise ValidationError(problems)
    return inv


def derive_conductor(c: CuspidalDatum) -> Fraction:
    """f(sigma^v x sigma) = delta + m^2 - r."""
    if c.delta is None:
        raise MissingDataError("deriving the conductor needs delta")
    return c.delta + c.m * c.m - c.r


def derive_formal_degree(c: CuspidalDatum, q_val=None):
    """d(sigma) = r (q^m - 1)/(q^r - 1) q^((r - m + delta)/2) d(St(m)).

    Exact unless q_val is given, in which case the value at q_val.
    """
    if c.delta is None:
        raise MissingDataError("deriving the formal degree needs delta")
    out = explicit_fd(c.m, c.r, c.delta, 1)
    return out if q_val is None else out(q_val)


def discriminant_exponent(c: CuspidalDatum, degE: int) -> Fraction:
    """([E:F]^2 / m^2) * delta."""
    if c.delta is None:
        raise MissingDataError("discriminant exponent needs delta")
    if degE < 1 or c.m % degE:
        raise InputError(f"[E:F]={degE} must divide m={c.m}")
    return Fraction(degE * degE, c.m * c.m) * c.delta


def resolve_self_conductor(c: CuspidalDatum) -> Fraction:
    if isinstance(c.f_self, Fraction):
        return c.f_self
    if c.delta is not None:
        return derive_conductor(c)
    raise MissingDataError(f"self conductor of cuspidal (m={c.m}, r={c.r}) unavailable")


def resolve_formal_degree(c: CuspidalDatum):
    mode = c.fd_mode
    if mode == "exact":
        return c.d
    if mode == "derive":
        return derive_formal_degree(c)
    if mode == "numeric":
        return float(c.d)
    raise MissingDataError(f"formal degree of cuspidal (m={c.m}, r={c.r}) unavailable")


def iwahori_invariants(n: int, q: int = 2) -> FundamentalInvariants:
    """The component of GL(n) containing (T, 1)."""
    return FundamentalInvariants(
        q=q, cuspidals=(CuspidalDatum(m=1, e=n, r=1, d=RatFunc(1), delta=Fraction(0), f_self=Fraction(0)),)
    )
