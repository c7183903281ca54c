"""Command-line front end.

    diffalg order SYSTEM [--convention maxplus|minusinf]
    diffalg jacobi SYSTEM [--convention maxplus|minusinf]
    diffalg reduce SYSTEM --target NAME
    diffalg linearize SYSTEM [--at POINT | --generic FILE] [--convention ...]
    diffalg decompose SYSTEM [--max-components K] [--max-steps S]
    diffalg jbc-check SYSTEM [--components FILE] [--json] [--max-components K] [--max-steps S]
    diffalg member SYSTEM EXPR [--bounds N,P,D,E] [--jets N] [--prolong P] [--deg D] [--power E]
    diffalg radical-member SYSTEM EXPR [same bound flags]

SYSTEM is a system file (see `sysfile`).  Output is deterministic: the same
input always produces byte-identical output.  Exit codes:

    0   success (jbc-check HOLDS, membership Member, complete decomposition, ...)
    1   negative or inconclusive verdict
    2   usage, parse, or file-format errors
    3   domain errors (non-square system, point not on the zero set, ...)
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .decompose import (
    JbcVerdict,
    SplitBounds,
    component_dimension,
    jbc_check,
    split_decompose,
)
from .diffpoly import Convention, OrderCapExceeded, _NegInf
from .jacobi import jacobi_assign, order_matrix, ritt_bound
from .linearize import (
    PointNotOnZeroSetError,
    jacobi_after_linearization,
    linearize_at,
    linearize_sym,
    linearized_order_matrix,
)
from .oracle import TruncationBounds, radical_member, truncated_member
from .ranking import ConstantPolyError
from .reduction import (
    NotAutoreducedError,
    StepLimitExceeded,
    ritt_reduce_seq,
    verify_certificate,
)
from .sysfile import (
    ParseError,
    SysFileError,
    SystemFile,
    format_components,
    parse_components,
    parse_poly,
    parse_system,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_FORMAT = 2
EXIT_DOMAIN = 3

_DOMAIN_ERRORS = (
    ConstantPolyError,
    NotAutoreducedError,
    StepLimitExceeded,
    OrderCapExceeded,
    PointNotOnZeroSetError,
    ZeroDivisionError,
    KeyError,
    ValueError,  # includes context/squareness/point validation
)


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise SysFileError(f"cannot read {path}: {exc.strerror or exc}") from None


def _load_system(path: str) -> SystemFile:
    return parse_system(_read_file(path))


def _convention(word: str) -> Convention:
    return Convention.MAX_PLUS if word == "maxplus" else Convention.MINUS_INFINITY


def _value_text(v) -> str:
    return "-inf" if isinstance(v, _NegInf) else str(v)


def _parse_bounds_flag(text: str) -> TruncationBounds:
    parts = text.split(",")
    if len(parts) != 4:
        raise SysFileError("--bounds expects four comma-separated integers N,P,D,E")
    try:
        n, p, d, e = (int(x) for x in parts)
    except ValueError:
        raise SysFileError("--bounds expects four comma-separated integers N,P,D,E") from None
    return TruncationBounds(
        jet_order=n, prolongation_order=p, degree_bound=d, power_bound=e
    )


def _bounds_from_args(args) -> TruncationBounds:
    base = _parse_bounds_flag(args.bounds) if args.bounds else TruncationBounds()
    fields = {
        "jet_order": args.jets,
        "prolongation_order": args.prolong,
        "degree_bound": args.deg,
        "power_bound": args.power,
    }
    overrides = {k: v for k, v in fields.items() if v is not None}
    if overrides:
        base = TruncationBounds(
            jet_order=overrides.get("jet_order", base.jet_order),
            prolongation_order=overrides.get("prolongation_order", base.prolongation_order),
            degree_bound=overrides.get("degree_bound", base.degree_bound),
            power_bound=overrides.get("power_bound", base.power_bound),
        )
    return base


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_order(args) -> int:
    sf = _load_system(args.system)
    conv = _convention(args.convention)
    m = order_matrix(list(sf.system), conv)
    print(f"order matrix ({args.convention}):")
    print(m.to_text())
    return EXIT_OK


def _cmd_jacobi(args) -> int:
    sf = _load_system(args.system)
    conv = _convention(args.convention)
    m = order_matrix(list(sf.system), conv)
    r = jacobi_assign(m)
    print(f"order matrix ({args.convention}):")
    print(m.to_text())
    print(f"jacobi number: {_value_text(r.value)}")
    if r.witness is None:
        print("witness: (no admissible assignment)")
    else:
        names = sf.context.names
        eq_names = [nm for nm, _ in sf.equations]
        pairs = ", ".join(
            f"{names[j]} <- {eq_names[r.witness[j]]}" for j in range(len(names))
        )
        print(f"witness: {pairs}")
    if conv is Convention.MAX_PLUS:
        print(f"ritt bound: {ritt_bound(m)}")
    return EXIT_OK


def _cmd_reduce(args) -> int:
    sf = _load_system(args.system)
    target = sf.equation(args.target)
    divisors = [(nm, p) for nm, p in sf.equations if nm != args.target]
    if not divisors:
        raise SysFileError("reduce needs at least one equation besides the target")
    seq = [p for _, p in divisors]
    cert = ritt_reduce_seq(target, seq, sf.ranking)
    ok = verify_certificate(cert, target, seq, sf.ranking)
    print(f"dividend: {args.target} = {target.to_text()}")
    for nm, p in divisors:
        print(f"divisor: {nm} = {p.to_text()}")
    print(f"multiplier: {cert.multiplier.to_text()}")
    factors = ", ".join(f.to_text() for f in cert.factors) or "(none)"
    print(f"factors: {factors}")
    for (nm, _p), q in zip(divisors, cert.quotients):
        print(f"quotient[{nm}]: {q.to_text()}")
    print(f"remainder: {cert.remainder.to_text()}")
    print(f"verified: {'yes' if ok else 'NO'}")
    return EXIT_OK if ok else EXIT_NEGATIVE


def _cmd_linearize(args) -> int:
    sf = _load_system(args.system)
    conv = _convention(args.convention)
    us = list(sf.system)
    eq_names = [nm for nm, _ in sf.equations]

    if args.at is None and args.generic is None:
        for nm, u in sf.equations:
            print(f"L[{nm}] = {linearize_sym(u).to_text()}")
        return EXIT_OK

    if args.at is not None:
        pt = sf.point(args.at)
        label = args.at
    else:
        comps = parse_components(_read_file(args.generic), sf.context, sf.ranking)
        if not comps:
            raise SysFileError(f"{args.generic}: no component blocks")
        pt = comps[0].generic_point()
        label = "generic"

    heuristic = False
    for nm, u in sf.equations:
        lp = linearize_at(u, pt)
        heuristic = heuristic or lp.heuristic
        print(f"L[{nm}, {label}] = {lp.to_text() if not lp.is_zero() else '0'}")
    if len(us) == sf.context.n:
        m = linearized_order_matrix(us, pt, conv)
        print(f"linearized order matrix ({args.convention}):")
        print(m.to_text())
        r = jacobi_after_linearization(us, pt, conv)
        print(f"linearized jacobi number: {_value_text(r.value)}")
        orig = jacobi_assign(order_matrix(us, conv))
        print(f"original jacobi number: {_value_text(orig.value)}")
    if heuristic:
        print("note: support decided modulo an unverified-prime component")
    return EXIT_OK


def _cmd_decompose(args) -> int:
    sf = _load_system(args.system)
    bounds = SplitBounds(max_components=args.max_components, max_steps=args.max_steps)
    dec = split_decompose(list(sf.system), sf.ranking, bounds)
    if dec.components:
        print(format_components(dec.components, sf.context), end="")
    else:
        print("# no components (empty zero set)")
    print(f"# complete: {'yes' if dec.complete else 'no'}")
    for k, c in enumerate(dec.components, start=1):
        dim = component_dimension(c)
        print(f"# component {k} dimension: {'infinite' if dim is None else dim}")
    return EXIT_OK if dec.complete else EXIT_NEGATIVE


def _cmd_jbc_check(args) -> int:
    sf = _load_system(args.system)
    components = None
    if args.components:
        components = parse_components(
            _read_file(args.components), sf.context, sf.ranking
        )
        if not components:
            raise SysFileError(f"{args.components}: no component blocks")
    elif sf.components:
        components = sf.components
    bounds = SplitBounds(max_components=args.max_components, max_steps=args.max_steps)
    report = jbc_check(list(sf.system), sf.ranking, components=components, bounds=bounds)
    print(report.to_json() if args.json else report.to_text())
    return EXIT_OK if report.verdict is JbcVerdict.HOLDS else EXIT_NEGATIVE


def _cmd_member(args, radical: bool) -> int:
    sf = _load_system(args.system)
    try:
        f = parse_poly(args.expr, sf.context)
    except ParseError as exc:
        raise SysFileError(f"expression: {exc}") from None
    bounds = _bounds_from_args(args)
    gens = list(sf.system)
    w = radical_member(f, gens, bounds) if radical else truncated_member(f, gens, bounds)
    print(w.to_text())
    return EXIT_OK if w.is_member() else EXIT_NEGATIVE


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 2 with a single-line message
        self.exit(EXIT_FORMAT, f"{self.prog}: error: {message}\n")


def _add_convention(p: argparse.ArgumentParser):
    p.add_argument(
        "--convention",
        choices=("maxplus", "minusinf"),
        default="maxplus",
        help="order of an absent variable: 0 (maxplus) or -inf (minusinf)",
    )


def _add_split_bounds(p: argparse.ArgumentParser):
    p.add_argument("--max-components", type=int, default=SplitBounds().max_components)
    p.add_argument("--max-steps", type=int, default=SplitBounds().max_steps)


def _add_oracle_bounds(p: argparse.ArgumentParser):
    p.add_argument("--bounds", metavar="N,P,D,E", help="all four truncation bounds at once")
    p.add_argument("--jets", type=int, help="max derivative order in the query")
    p.add_argument("--prolong", type=int, help="max prolongation order of the generators")
    p.add_argument("--deg", type=int, help="max total degree of candidate products")
    p.add_argument("--power", type=int, help="max exponent for radical membership")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="diffalg", description=__doc__, add_help=True)
    sub = top.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("order", help="print the order matrix")
    p.add_argument("system")
    _add_convention(p)
    p.set_defaults(fn=_cmd_order)

    p = sub.add_parser("jacobi", help="assignment maximum of the order matrix")
    p.add_argument("system")
    _add_convention(p)
    p.set_defaults(fn=_cmd_jacobi)

    p = sub.add_parser("reduce", help="Ritt-divide one equation by the others")
    p.add_argument("system")
    p.add_argument("--target", required=True, metavar="NAME", help="equation to divide")
    p.set_defaults(fn=_cmd_reduce)

    p = sub.add_parser("linearize", help="tangent system, symbolically or at a point")
    p.add_argument("system")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--at", metavar="POINT", help="a point named in the system file")
    g.add_argument("--generic", metavar="FILE", help="component file; use its generic point")
    _add_convention(p)
    p.set_defaults(fn=_cmd_linearize)

    p = sub.add_parser("decompose", help="split into characteristic-set components")
    p.add_argument("system")
    _add_split_bounds(p)
    p.set_defaults(fn=_cmd_decompose)

    p = sub.add_parser("jbc-check", help="dimension-vs-assignment-maximum check")
    p.add_argument("system")
    p.add_argument("--components", metavar="FILE", help="externally computed components")
    p.add_argument("--json", action="store_true")
    _add_split_bounds(p)
    p.set_defaults(fn=_cmd_jbc_check)

    p = sub.add_parser("member", help="truncated ideal membership with certificate")
    p.add_argument("system")
    p.add_argument("expr", metavar="EXPR")
    _add_oracle_bounds(p)
    p.set_defaults(fn=lambda a: _cmd_member(a, radical=False))

    p = sub.add_parser("radical-member", help="membership of some power f^e")
    p.add_argument("system")
    p.add_argument("expr", metavar="EXPR")
    _add_oracle_bounds(p)
    p.set_defaults(fn=lambda a: _cmd_member(a, radical=True))

    return top


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, SysFileError) as exc:
        print(f"diffalg: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except _DOMAIN_ERRORS as exc:
        msg = exc.args[0] if exc.args else str(exc)
        print(f"diffalg: {msg}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
