"""Harish-Chandra mu-function of GL(n) on arbitrary standard Levis, conductors
of pairs of generalized Steinberg representations, and the j-function."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .combinatorics import Segment, segment_gs
from .errors import MixedCuspidalError
from .exactalg import FactoredExpr, RatFunc
from .groupdata import LeviShape, gamma_factor
from .invariants import FundamentalInvariants, resolve_self_conductor

__all__ = [
    "SegmentInstance",
    "mu_pair",
    "mu_pair_torus",
    "conductor_pair",
    "mu_levi",
    "j_function",
    "levi_of",
]


@dataclass(frozen=True)
class SegmentInstance:
    """St(sigma_c, l) placed on torus coordinate z_{torus_index}."""

    cuspidal_index: int
    seg: Segment
    torus_index: int

    @property
    def l(self) -> int:
        return self.seg.l


def _cuspidal(inv: FundamentalInvariants, idx: int):
    if idx < 0 or idx >= len(inv.cuspidals):
        raise IndexError(f"cuspidal index {idx} out of range")
    return inv.cuspidals[idx]


def _check_pair(a: SegmentInstance, b: SegmentInstance) -> None:
    if a.torus_index == b.torus_index:
        raise ValueError("segments share a torus coordinate")


def conductor_pair(a: SegmentInstance, b: SegmentInstance, inv: FundamentalInvariants) -> Fraction:
    """f(pi_a^v x pi_b)."""
    _check_pair(a, b)
    ca = _cuspidal(inv, a.cuspidal_index)
    _cuspidal(inv, b.cuspidal_index)
    ll = a.l * b.l
    if a.cuspidal_index != b.cuspidal_index:
        return ll * inv.cross(a.cuspidal_index, b.cuspidal_index)
    return ll * resolve_self_conductor(ca) + ca.r * (ll - min(a.l, b.l))


def mu_pair_torus(a: SegmentInstance, b: SegmentInstance, inv: FundamentalInvariants) -> FactoredExpr:
    """prod_g |1 - z_b/z_a q^{gr}|^2 / |1 - z_b/z_a q^{-(g+1)r}|^2 (empty for distinct cuspidals)."""
    _check_pair(a, b)
    if a.cuspidal_index != b.cuspidal_index:
        return FactoredExpr(1)
    r = _cuspidal(inv, a.cuspidal_index).r
    i, j = sorted((a.torus_index, b.torus_index))
    out = FactoredExpr(1)
    for g in segment_gs(a.l, b.l):
        out = out * FactoredExpr.modulus_sq(i, j, g * r, +1)
        out = out * FactoredExpr.modulus_sq(i, j, -(g + 1) * r, -1)
    return out


def mu_pair(a: SegmentInstance, b: SegmentInstance, inv: FundamentalInvariants) -> FactoredExpr:
    """mu on the maximal Levi GL(l_a m_a) x GL(l_b m_b) of GL(l_a m_a + l_b m_b)."""
    _check_pair(a, b)
    ca = _cuspidal(inv, a.cuspidal_index)
    cb = _cuspidal(inv, b.cuspidal_index)
    gam = gamma_factor(LeviShape((a.l * ca.m, b.l * cb.m)))
    ll = a.l * b.l
    if a.cuspidal_index != b.cuspidal_index:
        f = inv.cross(a.cuspidal_index, b.cuspidal_index)
    else:
        f = resolve_self_conductor(ca)
    return FactoredExpr(gam * gam * RatFunc.qpow(ll * f)) * mu_pair_torus(a, b, inv)


def _pairs(segs: Sequence[SegmentInstance]):
    for x in range(len(segs)):
        for y in range(x + 1, len(segs)):
            yield segs[x], segs[y]


def _check_indices(segs: Sequence[SegmentInstance]) -> None:
    idx = sorted(s.torus_index for s in segs)
    if idx != list(range(len(segs))):
        raise ValueError(f"torus indices must be 0..k-1 without repeats, got {idx}")


def mu_levi(segs: Sequence[SegmentInstance], inv: FundamentalInvariants) -> FactoredExpr:
    """Product formula: mu_{G|M} is the product of mu_pair over unordered pairs."""
    _check_indices(segs)
    out = FactoredExpr(1)
    for a, b in _pairs(segs):
        out = out * mu_pair(a, b, inv)
    return out


def levi_of(segs: Sequence[SegmentInstance], inv: FundamentalInvariants) -> LeviShape:
    return LeviShape(tuple(s.l * inv.cuspidals[s.cuspidal_index].m for s in segs))


def j_function(segs: Sequence[SegmentInstance], inv: FundamentalInvariants) -> FactoredExpr:
    """j(omega) = q^{-l(gamma) f} prod |1 - z q^{-(g+1)r}|^2 / |1 - z q^{gr}|^2.

    One-exponent case only. The sign of the conductor exponent is the one
    forced by c^-2 gamma^-1 mu = gamma j^-1.
    """
    _check_indices(segs)
    cusp = {s.cuspidal_index for s in segs}
    if len(cusp) > 1:
        raise MixedCuspidalError("j_function is only defined for a single cuspidal")
    if not segs:
        return FactoredExpr(1)
    c = _cuspidal(inv, next(iter(cusp)))
    ell = sum(a.l * b.l for a, b in _pairs(segs))
    out = FactoredExpr(RatFunc.qpow(-ell * resolve_self_conductor(c))) if ell else FactoredExpr(1)
    for a, b in _pairs(segs):
        out = out * mu_pair_torus(a, b, inv).inverse()
    return out
