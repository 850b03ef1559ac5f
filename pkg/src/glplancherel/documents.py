"""JSON input and output documents.

Input::

    {"q": 3,
     "cuspidals": [{"m": 1, "e": 2, "r": 1, "d": 1, "delta": 0, "f_self": 0}],
     "cross_conductors": [[null]]}

``d`` may be an integer or a string (exact scalar such as ``"(q^2-1)*q^(-1/2)/2"``),
a JSON float (numeric), or ``"derive"``. ``delta`` and ``f_self`` accept
integers or rational strings; ``f_self`` also accepts ``"derive"``.
Output documents are serialized with sorted keys so equal inputs give
byte-identical text.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Sequence

from .errors import ParseError
from .exactalg import FactoredExpr, RatFunc, parse_scalar
from .invariants import DERIVE, CuspidalDatum, FundamentalInvariants
from .plancherel import ComponentSpec, DensityReport

__all__ = [
    "parse_invariants",
    "load_invariants",
    "invariants_to_doc",
    "component_record",
    "density_doc",
    "density_from_doc",
    "dumps",
]

_CUSP_KEYS = {"m", "e", "r", "d", "delta", "f_self"}


def _int(x: Any, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(f"{where}: expected an integer, got {x!r}")
    return x


def _rational(x: Any, where: str) -> Fraction:
    if isinstance(x, bool):
        raise ParseError(f"{where}: expected a number, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError:
            raise ParseError(f"{where}: {x!r} is not a rational number") from None
    if isinstance(x, float) and x.is_integer():
        return Fraction(int(x))
    raise ParseError(f"{where}: expected an integer or rational string, got {x!r}")


def _formal_degree(x: Any, where: str):
    if x is None or x == DERIVE:
        return x
    if isinstance(x, bool):
        raise ParseError(f"{where}: bad formal degree {x!r}")
    if isinstance(x, int):
        return RatFunc(x)
    if isinstance(x, float):
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    raise ParseError(f"{where}: bad formal degree {x!r}")


def _cuspidal(doc: Any, where: str) -> CuspidalDatum:
    if not isinstance(doc, dict):
        raise ParseError(f"{where}: expected an object")
    unknown = set(doc) - _CUSP_KEYS
    if unknown:
        raise ParseError(f"{where}: unknown keys {sorted(unknown)}")
    for key in ("m", "e", "r"):
        if key not in doc:
            raise ParseError(f"{where}: missing {key!r}")
    f_self = doc.get("f_self")
    if f_self is not None and f_self != DERIVE:
        f_self = _rational(f_self, f"{where}.f_self")
    delta = doc.get("delta")
    if delta is not None:
        delta = _rational(delta, f"{where}.delta")
    return CuspidalDatum(
        m=_int(doc["m"], f"{where}.m"),
        e=_int(doc["e"], f"{where}.e"),
        r=_int(doc["r"], f"{where}.r"),
        d=_formal_degree(doc.get("d"), f"{where}.d"),
        delta=delta,
        f_self=f_self,
    )


def parse_invariants(text: str) -> FundamentalInvariants:
    """Parse (not validate) an input document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    unknown = set(doc) - {"q", "cuspidals", "cross_conductors"}
    if unknown:
        raise ParseError(f"unknown keys {sorted(unknown)}")
    if "q" not in doc or "cuspidals" not in doc:
        raise ParseError("input needs 'q' and 'cuspidals'")
    cusps = doc["cuspidals"]
    if not isinstance(cusps, list):
        raise ParseError("'cuspidals' must be a list")
    cross = doc.get("cross_conductors") or []
    if not isinstance(cross, list) or not all(isinstance(row, list) for row in cross):
        raise ParseError("'cross_conductors' must be a list of lists")
    rows = tuple(
        tuple(None if x is None else _rational(x, f"cross_conductors[{i}][{j}]") for j, x in enumerate(row))
        for i, row in enumerate(cross)
    )
    return FundamentalInvariants(
        q=_int(doc["q"], "q"),
        cuspidals=tuple(_cuspidal(c, f"cuspidals[{i}]") for i, c in enumerate(cusps)),
        cross_conductors=rows,
    )


def load_invariants(path: str | Path) -> FundamentalInvariants:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    return parse_invariants(text)


def _scalar_out(x) -> Any:
    if isinstance(x, RatFunc):
        return x.render()
    if isinstance(x, Fraction):
        return str(x)
    return x


def invariants_to_doc(inv: FundamentalInvariants) -> dict:
    cusps = []
    for c in inv.cuspidals:
        rec: dict[str, Any] = {"m": c.m, "e": c.e, "r": c.r}
        if c.d is not None:
            rec["d"] = _scalar_out(c.d)
        if c.delta is not None:
            rec["delta"] = str(c.delta)
        if c.f_self is not None:
            rec["f_self"] = _scalar_out(c.f_self)
        cusps.append(rec)
    doc: dict[str, Any] = {"q": inv.q, "cuspidals": cusps}
    if inv.cross_conductors:
        doc["cross_conductors"] = [[None if x is None else str(x) for x in row]
                                   for row in inv.cross_conductors]
    return doc


def component_record(spec: ComponentSpec) -> dict:
    order, eff, k = spec.centralizer()
    mass = Fraction(1)
    for s in spec.segments:
        c = spec.inv.cuspidals[s.cuspidal_index]
        mass *= Fraction(s.l * c.m, c.r)
    return {
        "selector": spec.selector,
        "partitions": [list(p.parts) for p in spec.partitions],
        "torus_dim": k,
        "centralizer": {"order": order, "effective_order": eff, "k": k},
        "levi": [s.l * spec.inv.cuspidals[s.cuspidal_index].m for s in spec.segments],
        "canonical_mass": str(mass),
    }


def _point_out(pt: Sequence[complex]) -> list:
    return [[float(complex(z).real), float(complex(z).imag)] for z in pt]


def density_doc(rep: DensityReport, q_val: Optional[float] = None,
                points: Sequence[Sequence[complex]] = ()) -> dict:
    exact_fd = isinstance(rep.formal_degree, RatFunc)
    doc: dict[str, Any] = {
        "selector": rep.selector,
        "levi": list(rep.levi.blocks),
        "torus_dim": rep.torus_dim,
        "constant": rep.constant.render(),
        "formal_degree": _scalar_out(rep.formal_degree),
        "formal_degree_mode": "exact" if exact_fd else "numeric",
        "factors": rep.factors.to_dict()["factors"],
        "torus_part": rep.factors.render(),
        "canonical_mass": str(rep.canonical_mass),
        "effective_quotient_order": rep.effective_quotient_order,
        "centralizer_order": rep.centralizer_order,
    }
    if exact_fd:
        doc["density"] = rep.exact_density().render()
    if rep.mu is not None:
        nf = rep.mu.normalized()
        doc["mu"] = {
            "expression": rep.mu.render(),
            "normal_form": nf.render(),
            "constant": nf.scalar.render(),
            "factors": nf.to_dict()["factors"],
        }
    if q_val is not None:
        doc["q"] = q_val
        doc["numeric"] = {
            "constant": rep.constant(q_val),
            "formal_degree": rep.scalar_value(q_val) / rep.constant(q_val),
            "prefactor": rep.scalar_value(q_val),
        }
        doc["values"] = [{"point": _point_out(pt), "density": rep.eval(q_val, pt)} for pt in points]
    return doc


def density_from_doc(doc: dict):
    """(constant, formal degree, torus part) recovered from a density document."""
    const = parse_scalar(doc["constant"])
    fd = doc["formal_degree"]
    fd = parse_scalar(fd) if isinstance(fd, str) else float(fd)
    factors = FactoredExpr.from_dict({"scalar": "1", "factors": doc["factors"]})
    return const, fd, factors


def _default(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, RatFunc):
        return x.render()
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(doc: Any, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(doc, sort_keys=True, indent=2, default=_default)
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), default=_default)
