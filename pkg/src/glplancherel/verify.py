"""Identity suites cross-checking every formula against a second derivation.

Each suite returns a :class:`SuiteResult`; ``run_suites`` drives them for the
``verify`` command. Functions are looked up through their modules at call
time so a patched (corrupted) implementation is caught.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import combinatorics, degrees, groupdata, mu, plancherel, transfer
from .combinatorics import Partition, Segment, partitions_of
from .exactalg import FactoredExpr, HalfPowerPoly, RatFunc, q
from .invariants import CuspidalDatum, FundamentalInvariants, iwahori_invariants

__all__ = ["SuiteResult", "SUITES", "run_suites", "telescoping_conductor", "fd_grid",
           "compositions"]

Q_SAMPLES = (2, 3, 4, 5)


@dataclass
class SuiteResult:
    name: str
    description: str
    checked: int = 0
    failures: list[dict] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures and self.checked > 0

    def check(self, cond: bool, **case) -> None:
        self.checked += 1
        if not cond and len(self.failures) < 20:
            self.failures.append({k: str(v) for k, v in case.items()})

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "status": "pass" if self.ok else "fail",
            "checked": self.checked,
            "failures": self.failures,
        }


def compositions(n: int):
    """All ordered block shapes (n_1, ..., n_k) summing to n."""
    for cuts in itertools.product((0, 1), repeat=n - 1):
        blocks, cur = [], 1
        for c in cuts:
            if c:
                blocks.append(cur)
                cur = 1
            else:
                cur += 1
        blocks.append(cur)
        yield tuple(blocks)


def fd_grid(m_max: int = 4, e_max: int = 4, delta_max: int = 6):
    for m in range(1, m_max + 1):
        for r in range(1, m + 1):
            if m % r:
                continue
            for e in range(1, e_max + 1):
                for delta in range(delta_max + 1):
                    yield m, e, r, delta


def telescoping_conductor(l1: int, l2: int, f, r: int) -> Fraction:
    """f(pi_1^v x pi_2) recomputed from the L-factor bookkeeping.

    L' = |prod_{i,j} lambda(1+k)/lambda(k)|^2 with k = i + j - b and
    L'' = |prod_g lambda(1+g)/lambda(g)|^2; the surviving lambda(s) occur in
    pairs s, -s and |lambda(s)/lambda(-s)|^2 = q^{2 s r}.
    """
    # lambda arguments are kept doubled so every key is an integer
    exps: dict[int, int] = {}
    b2 = l1 + l2 - 2
    for i in range(l1):
        for j in range(l2):
            k2 = 2 * (i + j) - b2
            exps[2 + k2] = exps.get(2 + k2, 0) + 1
            exps[k2] = exps.get(k2, 0) - 1
    g2 = abs(l1 - l2)
    while g2 <= b2:
        exps[2 + g2] = exps.get(2 + g2, 0) - 1
        exps[g2] = exps.get(g2, 0) + 1
        g2 += 2
    exps = {s2: c for s2, c in exps.items() if c}
    for s2, c in exps.items():
        if exps.get(-s2, 0) != -c:
            raise ArithmeticError(f"unpaired lambda({Fraction(s2, 2)}) in the telescoped product")
    extra = sum(s2 * r * c for s2, c in exps.items() if s2 > 0)
    return l1 * l2 * Fraction(f) + extra


# ---------------------------------------------------------------------------
# suites

def suite_poincare(res: SuiteResult, n_max: int = 12) -> None:
    for n in range(1, n_max + 1):
        lhs = groupdata.poincare_at_qinv(n)
        rhs = RatFunc(groupdata.gl_order(n), q ** (n * n - n) * (q - 1) ** n)
        res.check(lhs == rhs, n=n, lhs=lhs, rhs=rhs)


def suite_gamma(res: SuiteResult, n_max: int = 8) -> None:
    for n in range(1, n_max + 1):
        for blocks in compositions(n):
            r = sum(blocks[i] * blocks[j] for i in range(len(blocks)) for j in range(i + 1, len(blocks)))
            den = HalfPowerPoly.const(1)
            for b in blocks:
                den = den * groupdata.gl_order(b)
            from_orders = RatFunc(groupdata.gl_order(n), den) * RatFunc.qpow(-2 * r)
            from_poincare = groupdata.poincare_at_qinv(n)
            for b in blocks:
                from_poincare = from_poincare / groupdata.poincare_at_qinv(b)
            res.check(from_orders == from_poincare, blocks=blocks)
            # gamma * c = prod over pairs of the maximal-Levi gammas
            shape = groupdata.LeviShape(blocks)
            pair_prod = RatFunc(1)
            for i in range(len(blocks)):
                for j in range(i + 1, len(blocks)):
                    pair_prod = pair_prod * groupdata.gamma_factor(
                        groupdata.LeviShape((blocks[i], blocks[j])))
            res.check(groupdata.gamma_factor(shape) * groupdata.c_function(shape) == pair_prod,
                      blocks=blocks, identity="gamma*c")


def suite_overlap(res: SuiteResult, l_max: int = 12) -> None:
    for l1 in range(1, l_max + 1):
        for l2 in range(1, l_max + 1):
            a = combinatorics.overlap_function(l1, l2)
            b = Fraction(l1 - 1, 2) + Fraction(l2 - 1, 2)
            res.check(all(a.get(-k) == x for k, x in a.items()), l=(l1, l2), prop="even")
            res.check(sum(a.values()) == l1 * l2, l=(l1, l2), prop="sum")
            res.check(max(a.values()) == min(l1, l2), l=(l1, l2), prop="max")
            res.check(a[-b] == 1 and a[b] == 1, l=(l1, l2), prop="ends")
            gs = combinatorics.segment_gs(l1, l2)
            res.check(sum(2 * g + 1 for g in gs) == l1 * l2, l=(l1, l2), prop="sum(2g+1)")
            res.check(sum(2 * g for g in gs) == l1 * l2 - min(l1, l2), l=(l1, l2), prop="sum(2g)")


def suite_conductor(res: SuiteResult, l_max: int = 8, r_max: int = 3, f_max: int = 4) -> None:
    for r in range(1, r_max + 1):
        m = r
        for f in range(f_max + 1):
            inv = FundamentalInvariants(q=2, cuspidals=(CuspidalDatum(m=m, e=2 * l_max, r=r, f_self=f),))
            for l1 in range(1, l_max + 1):
                for l2 in range(1, l_max + 1):
                    a = mu.SegmentInstance(0, Segment(l1), 0)
                    b = mu.SegmentInstance(0, Segment(l2), 1)
                    got = mu.conductor_pair(a, b, inv)
                    want = telescoping_conductor(l1, l2, f, r)
                    res.check(got == want, l=(l1, l2), r=r, f=f, got=got, want=want)


def suite_fd_web(res: SuiteResult, grid=None) -> None:
    for m, e, r, delta in (grid or fd_grid()):
        f = delta + m * m - r
        thm64 = degrees.fd_ratio(m, e, r, f)
        res.check(thm64 == degrees.fd_ratio_rewritten(m, e, r, f), case=(m, e, r, delta), id="rewrite")
        explicit = degrees.fd_ratio_explicit(m, e, r, delta)
        res.check(explicit == thm64, case=(m, e, r, delta), id="conductor closure")
        res.check(explicit == degrees.fd_ratio_delta_display(m, e, r, delta),
                  case=(m, e, r, delta), id="delta display")
        res.check(degrees.fd_ratio_explicit(m, e, r, delta, power=e * e)
                  == degrees.fd_ratio_square_display(m, e, r), case=(m, e, r, delta), id="e^2 display")
        d_pi = degrees.explicit_fd(m, r, delta, e)
        res.check(all(d_pi(x) > 0 for x in Q_SAMPLES), case=(m, e, r, delta), id="positive")


def suite_hecke(res: SuiteResult, n_max: int = 6) -> None:
    for n in range(1, n_max + 1):
        for p in partitions_of(n):
            rep = plancherel.density(plancherel.ComponentSpec(iwahori_invariants(n), (p,)))
            structural = groupdata.iwahori_volume(n) * rep.constant * rep.formal_degree
            explicit = plancherel.hecke_explicit_constant(n, p)
            res.check(structural == explicit, n=n, p=p, structural=structural, explicit=explicit)
            res.check(rep.constant * rep.formal_degree == explicit / groupdata.iwahori_volume(n),
                      n=n, p=p, id="gamma d")


def _one_exponent_specs(e_max: int = 4, f_max: int = 3):
    for m in range(1, 5):
        for r in range(1, m + 1):
            if m % r:
                continue
            for f in range(f_max + 1):
                for e in range(1, e_max + 1):
                    inv = FundamentalInvariants(q=2, cuspidals=(CuspidalDatum(m=m, e=e, r=r, d=1, f_self=f),))
                    for p in partitions_of(e):
                        yield plancherel.ComponentSpec(inv, (p,))


def suite_closure(res: SuiteResult, e_max: int = 4) -> None:
    for spec in _one_exponent_specs(e_max):
        segs = spec.segments
        levi = mu.levi_of(segs, spec.inv)
        gam = groupdata.gamma_factor(levi)
        c = groupdata.c_function(levi)
        lhs = FactoredExpr((c * c * gam).inverse()) * mu.mu_levi(segs, spec.inv)
        rhs = FactoredExpr(gam) * mu.j_function(segs, spec.inv).inverse()
        case = (spec.inv.cuspidals[0], spec.selector)
        res.check(lhs == rhs, case=case, lhs=lhs, rhs=rhs)
        # density assembly: constant * torus part == c^-2 gamma^-1 mu
        rep = plancherel.density(spec)
        res.check(FactoredExpr(rep.constant) * rep.factors == lhs, case=case, id="assembly")
        ell = combinatorics.gamma_length(spec.partitions[0])
        f = spec.inv.cuspidals[0].f_self
        res.check(rep.constant == RatFunc.qpow(ell * f) * gam, case=case, id="constant")


def suite_lambda(res: SuiteResult, d_max: int = 4, n_max: int = 4) -> None:
    want = RatFunc(1, (q - 1) * (q ** 3 - 1) * (q ** 5 - 1))
    res.check(transfer.lambda_DF(2, 3) == want, case="d=2, n'=3")
    for d in range(1, d_max + 1):
        for n_prime in range(1, n_max + 1):
            n = d * n_prime
            lhs = transfer.lambda_DF(d, n_prime)
            prod_g = HalfPowerPoly.const(1)
            for j in range(1, n):
                prod_g = prod_g * (q ** j - 1)
            prod_d = HalfPowerPoly.const(1)
            for j in range(1, n_prime):
                prod_d = prod_d * (q ** (d * j) - 1)
            res.check(lhs * prod_g == RatFunc(prod_d), d=d, n_prime=n_prime)
            res.check(transfer.lambda_DF(d, n_prime) * degrees.steinberg_fd(n)
                      == transfer.steinberg_fd_division(d, n_prime), d=d, n_prime=n_prime, id="St")


def suite_kappa(res: SuiteResult, grid=None, e_max: int = 5) -> None:
    seen = set()
    for m, e, r, delta in (grid or fd_grid(e_max=e_max)):
        if (m, e, r, delta) in seen:
            continue
        seen.add((m, e, r, delta))
        inv = FundamentalInvariants(
            q=2, cuspidals=(CuspidalDatum(m=m, e=e, r=r, d="derive", delta=delta, f_self="derive"),))
        values = set()
        for spec in plancherel.enumerate_components(inv):
            try:
                values.add(transfer.kappa(spec).kappa)
            except Exception as exc:  # NotProportionalError and friends
                res.check(False, case=(m, e, r, delta), selector=spec.selector, error=exc)
                continue
            res.check(True)
        res.check(len(values) == 1, case=(m, e, r, delta), kappas=len(values))


def suite_macdonald(res: SuiteResult, n_max: int = 6) -> None:
    for n in range(1, n_max + 1):
        rep = plancherel.density(plancherel.ComponentSpec(iwahori_invariants(n), (Partition((1,) * n),)))
        res.check(rep.factors == plancherel.macdonald_form(n), n=n)


SUITES: dict[str, tuple[str, Callable[[SuiteResult], None]]] = {
    "poincare": ("P_Sn(1/q) = |GL(n,q)| / (q^(n^2-n) (q-1)^n), n <= 12", suite_poincare),
    "gamma": ("gamma(G|M) from group orders = Poincare form; gamma*c = prod gamma_ij, n <= 8",
              suite_gamma),
    "overlap": ("overlap function a(k) and the sum(2g+1), sum(2g) identities, l <= 12", suite_overlap),
    "conductor": ("conductor of pairs vs telescoped L-factor oracle, l <= 8, r <= 3, f <= 4",
                  suite_conductor),
    "fd": ("formal degree identity web on m <= 4, e <= 4, delta <= 6", suite_fd_web),
    "hecke": ("Hecke algebra density: structural = explicit, n <= 6", suite_hecke),
    "closure": ("c^-2 gamma^-1 mu = gamma j^-1 and density assembly, e <= 4", suite_closure),
    "lambda": ("lambda(D/F) example and lambda * d(St_G) = d(St_G'), d, n' <= 4", suite_lambda),
    "kappa": ("transfer constant independent of the partition, e <= 5", suite_kappa),
    "macdonald": ("all-ones Iwahori torus part = Macdonald product, n <= 6", suite_macdonald),
}


def run_suites(only=None) -> list[SuiteResult]:
    names = list(SUITES) if not only else list(only)
    out = []
    for name in names:
        if name not in SUITES:
            raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
        desc, fn = SUITES[name]
        res = SuiteResult(name, desc)
        t0 = time.perf_counter()
        try:
            fn(res)
        except Exception as exc:  # a crash is a failure, with the reason recorded
            res.failures.append({"error": f"{type(exc).__name__}: {exc}"})
        res.seconds = time.perf_counter() - t0
        out.append(res)
    return out
