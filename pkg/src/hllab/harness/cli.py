"""Command line interface: ``hllab <subcommand> ...``.

Exit status: 0 on success, 1 on usage errors, 2 when an input violates a
documented precondition (the message names it).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from hllab import constants
from hllab.constructions import KINDS, ConstructionSpec, build
from hllab.errors import DomainError, NumericError
from hllab.exponents import (
    SpaceSignature,
    check_tuple,
    classify,
    format_exponent,
    parse_exponent,
    parse_exponent_list,
)
from hllab.harness.io import dumps_tensor, load_tensor, records_to_csv
from hllab.harness.scan import SCAN_KINDS, fit_records, littlewood_check, scan
from hllab.norms import NormProblem, norm_ascent, norm_vertex_exact
from hllab.tensorlab import MixedNormSpec

GLOBAL_DEFAULTS = {"seed": 0, "out": None, "format": "json", "trials": 20, "restarts": 32, "tol": 1e-10}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        # --t would otherwise be read as an abbreviation of --trials or --tol
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _exponent(text):
    try:
        return parse_exponent(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _exponent_list(text):
    try:
        return parse_exponent_list(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _global_flags(parser):
    # SUPPRESS so a subparser does not clobber a value given before the subcommand
    default = lambda key: argparse.SUPPRESS
    parser.add_argument("--seed", type=int, default=default("seed"), help="base random seed (default 0)")
    parser.add_argument("--out", default=default("out"), help="write output to this path instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"), default=default("format"))
    parser.add_argument("--trials", type=int, default=default("trials"), help="trials per dimension (default 20)")
    parser.add_argument("--restarts", type=int, default=default("restarts"), help="ascent restarts (default 32)")
    parser.add_argument("--tol", type=float, default=default("tol"), help="ascent tolerance (default 1e-10)")


def _signature_flags(parser, need_q=True):
    parser.add_argument("--m", type=int, help="degree; defaults to the number of --p entries")
    parser.add_argument("--p", type=_exponent_list, required=True, help="domain exponents, e.g. inf,inf or 4,4")
    parser.add_argument("--s", type=_exponent, required=True)
    if need_q:
        parser.add_argument("--q", type=_exponent, required=True)
    parser.add_argument("--field", choices=("real", "complex"), default="real")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    _global_flags(common)
    parser = _Parser(prog="hllab", description="Hardy-Littlewood exponent and norm laboratory", parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("exponent", parents=[common], help="classify a signature and print optimal exponents")
    _signature_flags(p)

    p = sub.add_parser("tuple-check", parents=[common], help="check an admissible mixed exponent tuple")
    _signature_flags(p)
    p.add_argument("--t", type=_exponent_list, required=True)

    p = sub.add_parser("constant", parents=[common], help="evaluate a constant bound")
    p.add_argument("which", choices=("khintchine", "bh", "mixed", "theorem61"))
    p.add_argument("--p", type=_exponent, help="Khintchine exponent")
    p.add_argument("--m", type=int)
    p.add_argument("--field", choices=("real", "complex"), default="complex")
    p.add_argument("--q-tuple", type=_exponent_list, help="sorted exponents with sum 1/q_k = (m+1)/2")
    p.add_argument("--a-c1", type=float, help="complex Khintchine constant at p = 1, if needed")
    p.add_argument("--cq", type=float, default=1.0, help="cotype constant C_q(Y)")
    p.add_argument("--pi", type=float, default=1.0, help="summing norm pi_{r,1}(v)")

    p = sub.add_parser("norm", parents=[common], help="estimate the operator norm of a tensor file")
    p.add_argument("--tensor", required=True)
    p.add_argument("--p", type=_exponent_list, required=True)
    p.add_argument("--s", type=_exponent, default=Fraction(1))
    p.add_argument("--exact", action="store_true", help="require vertex enumeration")
    p.add_argument("--max-iter", type=int, default=500)

    p = sub.add_parser("construct", parents=[common], help="write a construction as a tensor file")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--d", type=int)
    p.add_argument("--p", type=_exponent_list, default=())
    p.add_argument("--s", type=_exponent, default=Fraction(1))
    p.add_argument("--field", choices=("real", "complex"), default="real")

    p = sub.add_parser("scan", parents=[common], help="run a scaling experiment and emit CSV")
    p.add_argument("--kind", choices=SCAN_KINDS, required=True)
    _signature_flags(p)
    p.add_argument("--t", type=_exponent_list, required=True, help="outer mixed-norm exponents")
    p.add_argument("--n", type=_int_list, required=True, help="ascending dimensions, e.g. 4,8,16")
    p.add_argument("--exact", choices=("auto", "always", "never"), default="auto")
    p.add_argument("--fit", action="store_true", help="append a log-log fit of the ratio (json format only)")

    p = sub.add_parser("littlewood", parents=[common], help="check the 4/3 inequality on random sign forms")
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--field", choices=("real", "complex"), default="real")
    return parser


def _signature(args) -> SpaceSignature:
    m = args.m if args.m is not None else len(args.p)
    p = args.p
    if len(p) == 1 and m > 1:
        p = p * m
    return SpaceSignature(m, p, args.s, args.q, args.field)


def _jsonable(value):
    if isinstance(value, Fraction):
        return format_exponent(value)
    if isinstance(value, float) and value == float("inf"):
        return "inf"
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    return value


def _rows_csv(rows: list[dict]) -> str:
    import csv
    import io

    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _jsonable(v) for k, v in row.items()})
    return buf.getvalue()


def _emit(args, payload: dict) -> str:
    if args.format == "csv":
        return _rows_csv([payload])
    return json.dumps(_jsonable(payload), indent=2, sort_keys=False) + "\n"


def _cmd_exponent(args) -> str:
    sig = _signature(args)
    report = classify(sig).to_dict()
    report["harmonic"] = format_exponent(sig.harmonic)
    return _emit(args, report)


def _cmd_tuple_check(args) -> str:
    res = check_tuple(_signature(args), args.t)
    payload = {
        "ok": res.ok,
        "slack": res.slack,
        "budget": res.budget,
        "lower": res.interval[0],
        "upper": res.interval[1],
        "violations": "; ".join(res.violations),
    }
    return _emit(args, payload)


def _cmd_constant(args) -> str:
    payload = {"constant": args.which}
    if args.which == "khintchine":
        if args.p is None:
            raise UsageError("constant khintchine needs --p")
        payload.update(p=args.p, field=args.field, value=constants.khintchine(float(args.p), args.field))
    elif args.which == "bh":
        if args.m is None:
            raise UsageError("constant bh needs --m")
        payload.update(m=args.m, field=args.field, value=constants.bh_constant_classic(args.m, args.field))
    elif args.which == "mixed":
        if not args.q_tuple:
            raise UsageError("constant mixed needs --q-tuple")
        value = constants.mixed_exponent_constant(args.q_tuple, args.field, args.a_c1)
        payload.update(
            q_tuple=",".join(format_exponent(x) for x in args.q_tuple),
            field=args.field,
            uses_a_c1=args.field == "complex" and constants.touches_complex_p1(args.q_tuple),
            value=value,
        )
    else:
        if args.m is None:
            raise UsageError("constant theorem61 needs --m")
        ctx = constants.VectorConstantContext(q=2, C_qY=args.cq, pi_r1=args.pi, r=1, kahane=lambda p, q: 1.0)
        payload.update(m=args.m, cq=args.cq, pi=args.pi, value=constants.theorem61_constant(args.m, ctx))
    return _emit(args, payload)


def _cmd_norm(args) -> str:
    A = load_tensor(args.tensor)
    p = args.p * A.m if len(args.p) == 1 and A.m > 1 else args.p
    prob = NormProblem(A, p, args.s)
    if args.exact:
        est = norm_vertex_exact(prob)
    else:
        est = norm_ascent(prob, restarts=args.restarts, max_iter=args.max_iter, tol=args.tol, seed=args.seed)
    return _emit(args, est.to_dict())


def _cmd_construct(args) -> str:
    spec = ConstructionSpec(args.kind, args.m, args.n, args.d, args.p, args.s, args.field, args.seed)
    return dumps_tensor(build(spec))


def _cmd_scan(args) -> str:
    sig = _signature(args)
    t = args.t * sig.m if len(args.t) == 1 and sig.m > 1 else args.t
    spec = MixedNormSpec(t, sig.q)
    records = scan(
        args.kind, sig, spec, args.n, trials=args.trials, seed=args.seed, restarts=args.restarts, exact=args.exact, tol=args.tol
    )
    if args.format == "csv":
        return records_to_csv(records)
    payload = {"records": [r.to_dict() for r in records]}
    if args.fit and len(records) >= 3:
        fit = fit_records(records)
        payload["fit"] = {"slope": fit.slope, "intercept": fit.intercept, "r_squared": fit.r_squared}
    return json.dumps(payload, indent=2) + "\n"


def _cmd_littlewood(args) -> str:
    report = littlewood_check(args.n_max, args.trials, args.field, args.seed, args.restarts, args.tol)
    return _emit(args, report.to_dict())


COMMANDS = {
    "exponent": _cmd_exponent,
    "tuple-check": _cmd_tuple_check,
    "constant": _cmd_constant,
    "norm": _cmd_norm,
    "construct": _cmd_construct,
    "scan": _cmd_scan,
    "littlewood": _cmd_littlewood,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "scan" and not hasattr(args, "format"):
        args.format = "csv"
    for key, value in GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    try:
        text = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"hllab: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"hllab: error: {exc}", file=sys.stderr)
        return 1
    except (DomainError, NumericError) as exc:
        print(f"hllab: domain error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
