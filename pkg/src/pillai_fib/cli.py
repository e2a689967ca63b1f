"""Command-line interface: ``pillai-fib <command> ...``."""

from __future__ import annotations

import argparse
import logging
import math
import sys
from fractions import Fraction

from .contfrac import cf_expand
from .errors import ExpansionExhausted, InconsistencyError, PrecisionExhausted
from .numerics import DEFAULT_PRECISION, const_alpha
from .pipeline import (
    PipelineConfig,
    check_certificate,
    config_from_args,
    dumps_certificate,
    load_config,
    run_proof,
)
from .reduction import build_instance, gamma_ratio, reduce_with_cf
from .search import SPECIAL_CASES, SearchBox, scan_special_case, search_box, verify_triple


def _big_int(text: str) -> int:
    """Parse integers written as 21600000000000000, 2.16e16 or 216*10**14 style decimals."""
    value = Fraction(text.replace("_", ""))
    return math.ceil(value)


def _cmd_prove(args) -> int:
    base = load_config(args.config) if args.config else PipelineConfig()
    config = config_from_args(base, precision_digits=args.precision, out_path=args.out,
                              emit_trace=args.trace or None)
    cert = run_proof(config)
    if config.out_path:
        print(f"certificate written to {config.out_path}")
    else:
        sys.stdout.write(dumps_certificate(cert))
    print("solutions:", " ".join(f"({x},{y},{n})" for x, y, n in cert.solutions), file=sys.stderr)
    return 0


def _cmd_verify(args) -> int:
    ok = verify_triple(args.x, args.y, args.n)
    print(f"3^{args.x} - F_{args.n} * 2^{args.y} = 1: {'yes' if ok else 'no'}")
    return 0 if ok else 1


def _cmd_search(args) -> int:
    if args.x_max is None:
        box = SearchBox.from_n_bound(args.y_min, args.y_max, args.n_min, args.n_max)
    else:
        box = SearchBox(args.y_min, args.y_max, args.n_min, args.n_max, args.x_max)
    for x, y, n in search_box(box):
        print(x, y, n)
    return 0


def _cmd_reduce(args) -> int:
    M = _big_int(args.m)
    P = args.precision
    inst = build_instance(args.y, M, P)
    cf = cf_expand(gamma_ratio(P), 200)
    out = reduce_with_cf(inst, cf)
    print(f"y={args.y} M={M} k={out.k} q={out.q_used}")
    print(f"epsilon={out.epsilon.to_string(20)}")
    print(f"bound: n <= {out.omega_bound}")
    return 0


def _cmd_cf(args) -> int:
    P = args.precision
    source = const_alpha(P) if args.const == "alpha" else gamma_ratio(P)
    cf = cf_expand(source, args.terms)
    for k, (a, (p, q)) in enumerate(zip(cf.quotients, cf.convergents)):
        print(k, a, p, q)
    if cf.trusted_terms < args.terms:
        print(f"# only {cf.trusted_terms} terms certified at {P} digits", file=sys.stderr)
    return 0


def _cmd_scan(args) -> int:
    for a, b in scan_special_case(args.case, args.x_max, args.n_max):
        print(a, b)
    return 0


def _cmd_check(args) -> int:
    problems = check_certificate(args.file)
    for p in problems:
        print("FAIL:", p)
    if not problems:
        print("certificate OK")
    return 1 if problems else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pillai-fib", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prove", help="run the full pipeline and emit a certificate")
    p.add_argument("--precision", type=int)
    p.add_argument("--out")
    p.add_argument("--trace", action="store_true")
    p.add_argument("--config", help="flat key = value configuration file")
    p.set_defaults(func=_cmd_prove)

    p = sub.add_parser("verify", help="exact check of one triple")
    p.add_argument("x", type=int)
    p.add_argument("y", type=int)
    p.add_argument("n", type=int)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("search", help="exact search of a box")
    p.add_argument("--y-min", type=int, required=True)
    p.add_argument("--y-max", type=int, required=True)
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--x-max", type=int, help="exclusive cap on x (default ceil(1.1 n_max))")
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("reduce", help="one reduction instance")
    p.add_argument("--y", type=int, required=True)
    p.add_argument("--m", required=True)
    p.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("cf", help="continued fraction of alpha or log(alpha)/log(3)")
    p.add_argument("--const", choices=("alpha", "gamma"), required=True)
    p.add_argument("--terms", type=int, required=True)
    p.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    p.set_defaults(func=_cmd_cf)

    p = sub.add_parser("scan", help="finite-window scan of a small-y family")
    p.add_argument("--case", choices=SPECIAL_CASES, required=True)
    p.add_argument("--x-max", type=int, default=120)
    p.add_argument("--n-max", type=int, default=300)
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("check", help="re-validate a certificate file")
    p.add_argument("file")
    p.set_defaults(func=_cmd_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (PrecisionExhausted, ExpansionExhausted, InconsistencyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
