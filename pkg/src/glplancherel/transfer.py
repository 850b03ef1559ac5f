"""Transfer of Plancherel densities: GL(n', D) via lambda(D/F), and the
single-cuspidal component of GL(n, F) to the Iwahori component of GL(e, K)
with q_K = q^r."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, NotProportionalError
from .exactalg import FactoredExpr, HalfPowerPoly, RatFunc, q
from .groupdata import iwahori_volume
from .invariants import iwahori_invariants
from .plancherel import ComponentSpec, DensityReport, density

__all__ = ["lambda_DF", "steinberg_fd_division", "transfer_density", "KappaResult", "kappa",
           "reference_density"]


def lambda_DF(d: int, n_prime: int) -> RatFunc:
    """prod (q^m - 1)^-1 over 1 <= m <= d n' - 1 with d not dividing m."""
    if d < 1 or n_prime < 1:
        raise InputError("d and n' must be >= 1")
    den = HalfPowerPoly.const(1)
    for m in range(1, d * n_prime):
        if m % d:
            den = den * (q ** m - 1)
    return RatFunc(1, den)


def steinberg_fd_division(d: int, n_prime: int) -> RatFunc:
    """d(St) of GL(n', D): (1/n) prod_{j=1}^{n'-1} (q^{dj} - 1), n = d n'."""
    if d < 1 or n_prime < 1:
        raise InputError("d and n' must be >= 1")
    out = HalfPowerPoly.const(Fraction(1, d * n_prime))
    for j in range(1, n_prime):
        out = out * (q ** (d * j) - 1)
    return RatFunc(out)


def transfer_density(report: DensityReport, d: int, n_prime: int) -> DensityReport:
    """Scale the constant by lambda(D/F); the caller asserts the component lies
    in the Jacquet-Langlands image."""
    if report.levi.n != d * n_prime:
        raise InputError(f"report is for GL({report.levi.n}), not GL({d * n_prime})")
    return report.with_constant(report.constant * lambda_DF(d, n_prime))


@dataclass(frozen=True)
class KappaResult:
    kappa: RatFunc
    iwahori_volume_K: RatFunc
    volume_over_dim: RatFunc  # implied mu(J^G)/dim(lambda^G) = mu_0(I)/kappa
    r: int


def reference_density(spec: ComponentSpec) -> DensityReport:
    """Density of the matching Iwahori component of GL(e, K), written in q = q_F."""
    (c,) = spec.inv.cuspidals
    ref = density(ComponentSpec(iwahori_invariants(c.e), spec.partitions))
    return DensityReport(
        constant=ref.constant.subs_power(c.r),
        factors=ref.factors.subs_power(c.r),
        formal_degree=ref.formal_degree.subs_power(c.r),
        canonical_mass=ref.canonical_mass,
        effective_quotient_order=ref.effective_quotient_order,
        centralizer_order=ref.centralizer_order,
        levi=ref.levi,
        torus_dim=ref.torus_dim,
        selector=ref.selector,
    )


def kappa(spec: ComponentSpec) -> KappaResult:
    """d nu / d nu_0 as an exact constant (canonical measures included)."""
    if len(spec.inv.cuspidals) != 1:
        raise InputError("kappa needs a single-cuspidal component")
    (c,) = spec.inv.cuspidals
    a = density(spec)
    if not isinstance(a.formal_degree, RatFunc):
        raise InputError("kappa needs an exact formal degree")
    ref = reference_density(spec)
    quotient = a.factors / ref.factors
    scalar, leftover = quotient.normal_form()
    if leftover or scalar != RatFunc(1):
        raise NotProportionalError(f"torus factors do not cancel: {quotient}")
    k = (a.constant * a.formal_degree * a.canonical_mass) / (
        ref.constant * ref.formal_degree * ref.canonical_mass)
    vol = iwahori_volume(c.e).subs_power(c.r)
    return KappaResult(kappa=k, iwahori_volume_K=vol, volume_over_dim=vol / k, r=c.r)
