"""Orders of GL(n, F_q), Poincare polynomials of S_n, and the volume-derived
constants gamma(G|M), c(G|M) of standard Levi subgroups."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import InputError
from .exactalg import HalfPowerPoly, RatFunc, q

__all__ = [
    "LeviShape",
    "gl_order",
    "poincare_poly",
    "poincare_at_qinv",
    "gamma_factor",
    "gamma_factor_poincare",
    "c_function",
    "iwahori_volume",
]


@dataclass(frozen=True)
class LeviShape:
    blocks: tuple[int, ...]

    def __post_init__(self):
        blocks = tuple(int(b) for b in self.blocks)
        if not blocks or any(b < 1 for b in blocks):
            raise InputError(f"invalid Levi blocks {self.blocks!r}")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n(self) -> int:
        return sum(self.blocks)

    @property
    def k(self) -> int:
        return len(self.blocks)


@lru_cache(maxsize=None)
def gl_order(n: int) -> HalfPowerPoly:
    """|GL(n, q)| = prod_{j<n} (q^n - q^j) as a polynomial in q."""
    if n < 0:
        raise InputError("n must be >= 0")
    out = HalfPowerPoly.const(1)
    qn = q ** n
    for j in range(n):
        out = out * (qn - q ** j)
    return out


@lru_cache(maxsize=None)
def poincare_poly(n: int) -> HalfPowerPoly:
    """P_{S_n}(q) = prod_{i=1}^n (q^i - 1)/(q - 1) = prod_i (1 + q + ... + q^(i-1))."""
    if n < 1:
        raise InputError("n must be >= 1")
    out = HalfPowerPoly.const(1)
    for i in range(1, n + 1):
        out = out * HalfPowerPoly({2 * t: 1 for t in range(i)})
    return out


@lru_cache(maxsize=None)
def poincare_at_qinv(n: int) -> RatFunc:
    """P_{S_n}(q^{-1})."""
    p = poincare_poly(n)
    return RatFunc(HalfPowerPoly({-k: c for k, c in p.coeffs.items()}))


@lru_cache(maxsize=None)
def _gamma_blocks(blocks: tuple[int, ...]) -> RatFunc:
    n = sum(blocks)
    r = sum(blocks[i] * blocks[j] for i in range(len(blocks)) for j in range(i + 1, len(blocks)))
    den = HalfPowerPoly.const(1)
    for b in blocks:
        den = den * gl_order(b)
    return RatFunc(gl_order(n), den) * RatFunc.qpow(-2 * r)


def gamma_factor(shape: LeviShape) -> RatFunc:
    """gamma(G|M) = q^{-2 sum n_i n_j} |GL(n,q)| / prod |GL(n_i,q)|.

    Cross-checked against the Poincare-polynomial form on every call.
    """
    out = _gamma_blocks(tuple(sorted(shape.blocks)))
    alt = gamma_factor_poincare(shape)
    if out != alt:  # pragma: no cover - would mean a broken exact layer
        raise ArithmeticError(f"gamma factor mismatch for {shape.blocks}: {out} vs {alt}")
    return out


@lru_cache(maxsize=None)
def _gamma_poincare(blocks: tuple[int, ...]) -> RatFunc:
    out = poincare_at_qinv(sum(blocks))
    for b in blocks:
        out = out / poincare_at_qinv(b)
    return out


def gamma_factor_poincare(shape: LeviShape) -> RatFunc:
    """P_{S_n}(q^-1) / prod P_{S_{n_i}}(q^-1)."""
    return _gamma_poincare(tuple(sorted(shape.blocks)))


@lru_cache(maxsize=None)
def _c_blocks(blocks: tuple[int, ...]) -> RatFunc:
    k = len(blocks)
    if k == 1:
        return RatFunc(1)
    num = RatFunc(1)
    for i in range(k):
        for j in range(i + 1, k):
            num = num * poincare_at_qinv(blocks[i] + blocks[j])
    den = poincare_at_qinv(sum(blocks))
    for b in blocks:
        den = den * poincare_at_qinv(b) ** (k - 2)
    return num / den


def c_function(shape: LeviShape) -> RatFunc:
    """c(G|M); defined as 1 when M = G."""
    return _c_blocks(tuple(sorted(shape.blocks)))


def iwahori_volume(n: int) -> RatFunc:
    """mu(I) = 1/P_{S_n}(q) with vol GL(n, o_F) = 1."""
    return RatFunc(1, poincare_poly(n))
