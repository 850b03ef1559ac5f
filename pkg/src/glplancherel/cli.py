"""Command-line front end: ``glplancherel {components,density,verify,integrate,transfer}``.

Exit codes: 0 ok, 2 parse error, 3 validation failure, 4 unknown component
selector, 5 singularity (or an evaluation point off the unit circle).
"""
from __future__ import annotations

import argparse
import sys
from typing import Any, Optional, Sequence

from . import plancherel, transfer, verify
from .documents import component_record, density_doc, dumps, invariants_to_doc, load_invariants
from .errors import (
    DomainError,
    InputError,
    MissingDataError,
    ParseError,
    SingularityError,
    ValidationError,
)
from .exactalg import RatFunc
from .invariants import FundamentalInvariants, ensure_valid

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_SELECTOR, EXIT_SINGULAR = 0, 2, 3, 4, 5


class _Exit(Exception):
    def __init__(self, code: int, doc: dict):
        self.code = code
        self.doc = doc


def _load(path: str) -> FundamentalInvariants:
    try:
        inv = load_invariants(path)
    except ParseError as exc:
        raise _Exit(EXIT_PARSE, {"error": "parse", "message": str(exc)})
    try:
        return ensure_valid(inv)
    except ValidationError as exc:
        raise _Exit(EXIT_VALIDATION, {
            "error": "validation",
            "violations": [v.as_dict() for v in exc.violations],
        })


def _select(inv: FundamentalInvariants, selector: Optional[str]) -> plancherel.ComponentSpec:
    if selector is None:
        specs = plancherel.enumerate_components(inv)
        if len(specs) == 1:
            return specs[0]
        raise _Exit(EXIT_SELECTOR, {
            "error": "selector",
            "message": "--component is required; choose from " + ", ".join(s.selector for s in specs),
        })
    try:
        return plancherel.parse_selector(inv, selector)
    except InputError as exc:
        raise _Exit(EXIT_SELECTOR, {"error": "selector", "message": str(exc)})


def _parse_point(text: str) -> list[complex]:
    try:
        return [complex(tok.strip().replace(" ", "")) for tok in text.split(",")]
    except ValueError:
        raise _Exit(EXIT_PARSE, {"error": "parse", "message": f"bad --point {text!r}"})


# ---------------------------------------------------------------------------
# commands

def cmd_components(args) -> dict:
    inv = _load(args.input)
    specs = plancherel.enumerate_components(inv)
    return {"n": inv.n, "count": len(specs), "components": [component_record(s) for s in specs]}


def cmd_density(args) -> dict:
    inv = _load(args.input)
    spec = _select(inv, args.component)
    q_val = args.q
    if args.point and q_val is None:
        q_val = float(inv.q)
    rep = plancherel.density(spec, q_val if q_val is not None else inv.q)
    points = [_parse_point(p) for p in args.point or ()]
    doc = density_doc(rep, q_val, points)
    doc["input"] = invariants_to_doc(inv)
    return doc


def cmd_verify(args) -> dict:
    only = []
    for item in args.only or ():
        only.extend(x for x in item.split(",") if x)
    unknown = [x for x in only if x not in verify.SUITES]
    if unknown:
        raise _Exit(EXIT_PARSE, {"error": "parse",
                                 "message": f"unknown suite(s) {unknown}; known: {list(verify.SUITES)}"})
    results = verify.run_suites(only or None)
    ok = all(r.ok for r in results)
    doc = {"status": "pass" if ok else "fail", "suites": [r.as_dict() for r in results]}
    if not ok:
        raise _Exit(1, doc)
    return doc


def cmd_integrate(args) -> dict:
    inv = _load(args.input)
    spec = _select(inv, args.component)
    q_val = float(args.q if args.q is not None else inv.q)
    if args.grid < 8:
        raise _Exit(EXIT_PARSE, {"error": "parse", "message": "--grid must be >= 8"})
    mass = plancherel.integrate(spec, q_val, args.grid)
    doc: dict[str, Any] = {"selector": spec.selector, "q": q_val, "grid": args.grid, "mass": mass}
    half = args.grid // 2
    if half >= 8:
        coarse = plancherel.integrate(spec, q_val, half)
        doc["mass_half_grid"] = coarse
        doc["delta"] = abs(mass - coarse)
    return doc


def cmd_transfer(args) -> dict:
    try:
        lam = transfer.lambda_DF(args.d, args.n_prime)
        st = transfer.steinberg_fd_division(args.d, args.n_prime)
    except InputError as exc:
        raise _Exit(EXIT_PARSE, {"error": "parse", "message": str(exc)})
    doc: dict[str, Any] = {
        "d": args.d,
        "n_prime": args.n_prime,
        "n": args.d * args.n_prime,
        "lambda": lam.render(),
        "steinberg_formal_degree": st.render(),
    }
    if args.input:
        inv = _load(args.input)
        spec = _select(inv, args.component)
        rep = plancherel.density(spec, inv.q)
        if rep.levi.n == args.d * args.n_prime:
            doc["transferred"] = density_doc(transfer.transfer_density(rep, args.d, args.n_prime))
        else:
            doc["transferred"] = None
            doc["note"] = f"component lives on GL({rep.levi.n}), not GL({args.d * args.n_prime})"
        if inv.t == 1 and isinstance(rep.formal_degree, RatFunc):
            k = transfer.kappa(spec)
            doc["kappa"] = {
                "kappa": k.kappa.render(),
                "iwahori_volume_K": k.iwahori_volume_K.render(),
                "volume_over_dim": k.volume_over_dim.render(),
                "r": k.r,
            }
    return doc


# ---------------------------------------------------------------------------

def _text(doc: Any, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(doc, dict):
        for key in sorted(doc):
            val = doc[key]
            if isinstance(val, (dict, list)) and val:
                lines.append(f"{pad}{key}:")
                lines.append(_text(val, indent + 1))
            else:
                lines.append(f"{pad}{key}: {val}")
    elif isinstance(doc, list):
        for item in doc:
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}-")
                lines.append(_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {item}")
    else:
        lines.append(f"{pad}{doc}")
    return "\n".join(lines)


def _emit(doc: Any, args, stream) -> None:
    if args.pretty:
        stream.write(dumps(doc, pretty=True) + "\n")
    elif args.json:
        stream.write(dumps(doc) + "\n")
    else:
        stream.write(_text(doc) + "\n")


def build_parser() -> argparse.ArgumentParser:
    def fmt_flags(default):
        f = argparse.ArgumentParser(add_help=False)
        f.add_argument("--json", action="store_true", default=default, help="compact JSON output")
        f.add_argument("--pretty", action="store_true", default=default, help="indented JSON output")
        return f

    # the flags work before or after the subcommand; SUPPRESS keeps the
    # subparser from resetting a flag given before it
    fmt = fmt_flags(argparse.SUPPRESS)
    p = argparse.ArgumentParser(prog="glplancherel", description=__doc__.splitlines()[0],
                                parents=[fmt_flags(False)])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("components", parents=[fmt], help="list the components of a Bernstein block")
    c.add_argument("input")
    c.set_defaults(func=cmd_components)

    d = sub.add_parser("density", parents=[fmt], help="Plancherel density of one component")
    d.add_argument("input")
    d.add_argument("--component", help='partition selector such as "2+1" or "2+1|3"')
    d.add_argument("--q", type=float, help="also evaluate numerically at this q")
    d.add_argument("--point", action="append", metavar="Z1,Z2,...",
                   help="torus point (complex numbers); repeatable")
    d.set_defaults(func=cmd_density)

    v = sub.add_parser("verify", parents=[fmt], help="run the identity suites")
    v.add_argument("--only", action="append", metavar="SUITE",
                   help=f"comma-separated subset of: {', '.join(verify.SUITES)}")
    v.set_defaults(func=cmd_verify)

    i = sub.add_parser("integrate", parents=[fmt], help="total Plancherel mass of one component")
    i.add_argument("input")
    i.add_argument("--component")
    i.add_argument("--q", type=float, help="defaults to the q of the input")
    i.add_argument("--grid", type=int, default=256)
    i.set_defaults(func=cmd_integrate)

    t = sub.add_parser("transfer", parents=[fmt], help="lambda(D/F) and the Iwahori transfer constant")
    t.add_argument("input", nargs="?")
    t.add_argument("--d", type=int, required=True, help="index of the division algebra")
    t.add_argument("--n-prime", type=int, required=True, dest="n_prime")
    t.add_argument("--component")
    t.set_defaults(func=cmd_transfer)
    return p


def main(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        doc = args.func(args)
        code = EXIT_OK
    except _Exit as exc:
        doc, code = exc.doc, exc.code
    except (ValidationError, MissingDataError) as exc:
        doc, code = {"error": "validation", "message": str(exc)}, EXIT_VALIDATION
    except (SingularityError, DomainError, ZeroDivisionError) as exc:
        doc, code = {"error": "singularity", "message": str(exc)}, EXIT_SINGULAR
    except (ParseError, InputError) as exc:
        doc, code = {"error": "parse", "message": str(exc)}, EXIT_PARSE
    _emit(doc, args, stdout if code in (EXIT_OK, 1) else stderr)
    return code


def main_entry() -> None:  # pragma: no cover
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_entry()
