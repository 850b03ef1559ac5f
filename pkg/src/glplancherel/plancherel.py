"""Plancherel density on each orbifold component X^gamma/Z(gamma) of the
extended quotient, its numeric mass, and the Iwahori/Hecke special cases."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .combinatorics import Partition, Segment, centralizer_data, partitions_of
from .degrees import Scalar, fd_generalized_steinberg, fd_product, scalar_value
from .errors import InputError, SingularityError
from .exactalg import FactoredExpr, HalfPowerPoly, RatFunc
from .groupdata import LeviShape, gamma_factor, iwahori_volume
from .invariants import FundamentalInvariants, iwahori_invariants, resolve_self_conductor
from .mu import SegmentInstance, levi_of, mu_levi, mu_pair_torus

__all__ = [
    "ComponentSpec",
    "DensityReport",
    "enumerate_components",
    "parse_selector",
    "density",
    "hecke_density",
    "hecke_explicit_constant",
    "macdonald_form",
    "integrate",
    "torus_average",
]


@dataclass(frozen=True)
class ComponentSpec:
    """One partition of e_i per cuspidal datum."""

    inv: FundamentalInvariants
    partitions: tuple[Partition, ...]

    def __post_init__(self):
        parts = tuple(p if isinstance(p, Partition) else Partition.of(p) for p in self.partitions)
        if len(parts) != len(self.inv.cuspidals):
            raise InputError(f"need {len(self.inv.cuspidals)} partitions, got {len(parts)}")
        for p, c in zip(parts, self.inv.cuspidals):
            if p.total != c.e:
                raise InputError(f"partition {p} does not sum to e={c.e}")
        object.__setattr__(self, "partitions", parts)

    @property
    def segments(self) -> tuple[SegmentInstance, ...]:
        out = []
        for ci, p in enumerate(self.partitions):
            for l in p.parts:
                out.append(SegmentInstance(ci, Segment(l), len(out)))
        return tuple(out)

    @property
    def k(self) -> int:
        return sum(p.k for p in self.partitions)

    @property
    def selector(self) -> str:
        return "|".join(str(p) for p in self.partitions)

    def centralizer(self) -> tuple[int, int, int]:
        order = eff = 1
        for p in self.partitions:
            o, e, _ = centralizer_data(p)
            order *= o
            eff *= e
        return order, eff, self.k


def enumerate_components(inv: FundamentalInvariants) -> list[ComponentSpec]:
    per = [partitions_of(c.e) for c in inv.cuspidals]
    return [ComponentSpec(inv, combo) for combo in itertools.product(*per)]


def parse_selector(inv: FundamentalInvariants, selector: str) -> ComponentSpec:
    """'2+1|3' -> partitions (2,1) of e_0 and (3) of e_1; part order is irrelevant."""
    try:
        chunks = selector.strip().split("|")
        parts = [Partition.of(int(x) for x in chunk.split("+")) for chunk in chunks]
        return ComponentSpec(inv, tuple(parts))
    except (ValueError, InputError) as exc:
        raise InputError(f"selector {selector!r} names no component: {exc}") from None


@dataclass(frozen=True)
class DensityReport:
    """d nu = constant * formal_degree * factors * d omega on one component.

    d omega is canonical_mass times the probability Haar measure on T^k,
    pushed to the quotient by the coordinate permutations.
    """

    constant: RatFunc
    factors: FactoredExpr
    formal_degree: Scalar
    canonical_mass: Fraction
    effective_quotient_order: int
    centralizer_order: int
    levi: LeviShape
    torus_dim: int
    selector: str = ""
    mu: Optional[FactoredExpr] = field(default=None, compare=False)

    def exact_density(self) -> FactoredExpr:
        """constant * d(omega) * torus part (requires an exact formal degree)."""
        if not isinstance(self.formal_degree, RatFunc):
            raise TypeError("formal degree is numeric")
        return FactoredExpr(self.constant * self.formal_degree) * self.factors

    def scalar_value(self, q_val: float) -> float:
        return self.constant(q_val) * scalar_value(self.formal_degree, q_val)

    def eval(self, q_val: float, point: Sequence[complex]) -> float:
        """Density value (against d omega) at a torus point."""
        if q_val <= 1:
            raise SingularityError(f"q must be > 1, got {q_val}")
        pt = list(point)
        if len(pt) != self.torus_dim:
            raise InputError(f"point needs {self.torus_dim} coordinates, got {len(pt)}")
        val = self.factors.eval(q_val, pt) if self.torus_dim else 1.0
        return (self.scalar_value(q_val) * val).real

    def with_constant(self, constant: RatFunc) -> "DensityReport":
        return DensityReport(constant, self.factors, self.formal_degree, self.canonical_mass,
                             self.effective_quotient_order, self.centralizer_order, self.levi,
                             self.torus_dim, self.selector, self.mu)


def density(spec: ComponentSpec, q_val=None) -> DensityReport:
    """Assemble the density: q^{sum l l' f} gamma(G|M) d(omega) prod |...|^2.

    Same-cuspidal pairs carry the torus factors; cross-cuspidal pairs only
    contribute the constant q^{l l' f_ij}.
    """
    inv = spec.inv
    segs = spec.segments
    levi = levi_of(segs, inv)
    cond = Fraction(0)
    factors = FactoredExpr(1)
    for x in range(len(segs)):
        for y in range(x + 1, len(segs)):
            a, b = segs[x], segs[y]
            ll = a.l * b.l
            if a.cuspidal_index == b.cuspidal_index:
                cond += ll * resolve_self_conductor(inv.cuspidals[a.cuspidal_index])
                factors = factors * mu_pair_torus(a, b, inv)
            else:
                cond += ll * inv.cross(a.cuspidal_index, b.cuspidal_index)
    constant = gamma_factor(levi) * RatFunc.qpow(cond)
    qv = inv.q if q_val is None else q_val
    fds = [fd_generalized_steinberg(inv.cuspidals[s.cuspidal_index], s.l, qv) for s in segs]
    fd = fd_product(fds, qv)
    mass = Fraction(1)
    for s in segs:
        c = inv.cuspidals[s.cuspidal_index]
        mass *= Fraction(s.l * c.m, c.r)
    order, eff, k = spec.centralizer()
    return DensityReport(
        constant=constant,
        factors=factors,
        formal_degree=fd,
        canonical_mass=mass,
        effective_quotient_order=eff,
        centralizer_order=order,
        levi=levi,
        torus_dim=k,
        selector=spec.selector,
        mu=mu_levi(segs, inv),
    )


def hecke_explicit_constant(n: int, p: Partition) -> RatFunc:
    """prod_i q^{(l_i^2 - l_i)/2} (q-1)^{l_i} / (l_i (q^{l_i} - 1)) * q^{(n - n^2)/2}."""
    q = HalfPowerPoly.vpow(2)
    out = RatFunc.qpow(Fraction(n - n * n, 2))
    for l in p.parts:
        out = out * RatFunc.qpow(Fraction(l * l - l, 2), Fraction(1, l))
        out = out * RatFunc((q - 1) ** l, q ** l - 1)
    return out


def hecke_density(n: int, p: Partition) -> DensityReport:
    """Plancherel density of the extended affine Hecke algebra H(n, q).

    The returned constant is mu(I) gamma(G|M); together with d(omega) it
    equals the explicit closed form, which is checked here.
    """
    if p.total != n:
        raise InputError(f"partition {p} is not a partition of {n}")
    rep = density(ComponentSpec(iwahori_invariants(n), (p,)))
    rep = rep.with_constant(iwahori_volume(n) * rep.constant)
    if rep.constant * rep.formal_degree != hecke_explicit_constant(n, p):  # pragma: no cover
        raise ArithmeticError(f"Hecke density forms disagree for n={n}, p={p}")
    return rep


def macdonald_form(n: int) -> FactoredExpr:
    """prod_{i<j} |1 - z_j/z_i|^2 / |1 - z_j/z_i q^{-1}|^2 on T^n."""
    out = FactoredExpr(1)
    for i in range(n):
        for j in range(i + 1, n):
            out = out * FactoredExpr.modulus_sq(i, j, 0, 1) * FactoredExpr.modulus_sq(i, j, -1, -1)
    iw = density(ComponentSpec(iwahori_invariants(n), (Partition((1,) * n),)))
    if iw.factors != out:  # pragma: no cover
        raise ArithmeticError("Macdonald form differs from the Iwahori density")
    return out


def torus_average(expr: FactoredExpr, k: int, q_val: float, grid_n: int) -> float:
    """Tensor trapezoid average of the torus part of expr over T^k.

    The factors depend on ratios z_j/z_i only, so fixing z_0 = 1 gives the
    same lattice average with one dimension fewer.
    """
    if k <= 1 or not expr.factors:
        return 1.0
    theta = 2 * np.pi * np.arange(grid_n) / grid_n
    circle = np.exp(1j * theta)
    axes = [np.ones(1, dtype=complex)] + [circle] * (k - 1)
    mesh = np.meshgrid(*axes, indexing="ij")
    z = np.stack(mesh, axis=-1)
    vals = expr.eval_torus(q_val, z)
    return float(np.sum(vals.real, dtype=np.float64) / vals.size)


def integrate(spec: ComponentSpec, q_val: float, grid_n: int = 256) -> float:
    """Total Plancherel mass of the component X^gamma/Z(gamma)."""
    if q_val <= 1:
        raise SingularityError(f"q must be > 1, got {q_val}")
    if grid_n < 8:
        raise InputError("grid_n must be >= 8")
    rep = density(spec, q_val)
    avg = torus_average(rep.factors, rep.torus_dim, q_val, grid_n)
    return rep.scalar_value(q_val) / rep.effective_quotient_order * float(rep.canonical_mass) * avg
