"""Command-line entry point.

Exit codes: 0 on success, 1 for invalid input, 2 when a computation fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from fractions import Fraction

import numpy as np

from . import constants as C
from . import montecarlo as mc
from . import stable as st
from .cf import Angle, ExpansionTooShort, cf_expand
from .sums import (G_FUNCTIONS, KERNELS, SingularTermError, SumKind, direct_sum,
                   legendre_violations, verify_block_identity)

log = logging.getLogger("diolaws")

SCHEMAS = {
    "constants": ("name", "value", "error_estimate", "route_count"),
    "cf": ("k", "a", "p", "q"),
    "sum": ("alpha", "N", "kind", "p", "g", "value", "exact"),
    "verify": ("alpha", "p", "blocks_checked", "mismatches", "legendre_violations", "summary"),
    "stable_cdf": ("alpha0", "beta0", "x", "cdf"),
    "stable_quantile": ("alpha0", "beta0", "q", "x"),
    "stable_sample": ("alpha0", "beta0", "index", "x"),
    "mc": mc.CSV_HEADER,
}


class InputError(Exception):
    """Bad arguments or configuration (exit code 1)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _cell(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


class Emitter:
    """Writes one table as CSV (streaming) or as JSON with string values."""

    def __init__(self, header, fmt: str, fh):
        self.header, self.fmt, self.fh = tuple(header), fmt, fh
        self.records = []
        self.writer = None

    def _start(self):
        # the header waits for the first row so that input errors leave no output
        if self.writer is None:
            self.writer = csv.writer(self.fh, lineterminator="\n")
            self.writer.writerow(self.header)

    def row(self, values):
        values = [_cell(v) for v in values]
        if self.fmt == "csv":
            self._start()
            self.writer.writerow(values)
            self.fh.flush()
        else:
            self.records.append(dict(zip(self.header, values)))

    def close(self):
        if self.fmt == "json":
            json.dump(self.records, self.fh, indent=1)
            self.fh.write("\n")
        else:
            self._start()
        self.fh.flush()


def _families_epilog() -> str:
    lines = ["statistic families accepted in mc configs:"]
    lines += [f"  {name:18s} {text}" for name, text in mc.FAMILY_HELP.items()]
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("csv", "json"), default=argparse.SUPPRESS,
                        help="table format (default csv)")
    common.add_argument("--out-path", default=argparse.SUPPRESS,
                        help="write the table here instead of stdout")
    common.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS,
                        help="more log output on stderr")

    parser = _Parser(prog="diolaws", parents=[common],
                     description="Diophantine sums, their constants and their stable limit laws.",
                     epilog=_families_epilog(),
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--replot-from", metavar="CSV", default=None,
                        help="re-emit a table written earlier by this program")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    sub.add_parser("constants", parents=[common], help="table of all derived constants")

    p = sub.add_parser("cf", parents=[common], help="partial quotients and convergents")
    p.add_argument("--alpha", required=True, help="p/q or a decimal (read as 128-bit dyadic)")
    p.add_argument("--max-terms", type=int, default=64)

    p = sub.add_parser("sum", parents=[common], help="a direct sum over n <= N")
    p.add_argument("--alpha", required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--kind", choices=KERNELS, required=True)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--g", choices=sorted(G_FUNCTIONS), default=None)

    p = sub.add_parser("verify", parents=[common], help="exact block identities for a rational")
    p.add_argument("--alpha", required=True)
    p.add_argument("--p", type=int, default=1)

    p = sub.add_parser("stable", parents=[common], help="stable law cdf, quantile or samples")
    p.add_argument("--alpha0", type=float, required=True)
    p.add_argument("--beta0", type=float, required=True)
    p.add_argument("action", choices=("cdf", "quantile", "sample"))
    p.add_argument("values", nargs="*", type=float,
                   help="points for cdf, probabilities for quantile")
    p.add_argument("--count", type=int, default=10, help="number of samples")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("mc", parents=[common], help="run a Monte Carlo experiment",
                       epilog=_families_epilog(),
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("config", help="JSON experiment config")
    return parser


def _angle(text: str) -> Angle:
    try:
        return Angle.parse(text)
    except ValueError as exc:
        raise InputError(f"alpha: {exc}") from None


def _cmd_constants(args, out: Emitter):
    for row in C.constants_table():
        out.row([row[k] for k in SCHEMAS["constants"]])


def _cmd_cf(args, out: Emitter):
    alpha = _angle(args.alpha)
    if args.max_terms < 1:
        raise InputError("max-terms: must be at least 1")
    try:
        cf = cf_expand(alpha, args.max_terms)
    except ValueError as exc:
        raise InputError(f"alpha: {exc}") from None
    for k in range(len(cf) + 1):
        out.row([k, cf.partial_quotients[k - 1] if k else "", cf.p[k], cf.q[k]])


def _cmd_sum(args, out: Emitter):
    alpha = _angle(args.alpha)
    if args.N < 1:
        raise InputError("N: must be at least 1")
    order_one = args.kind in ("signed_reciprocal", "unsigned_reciprocal", "positive_part",
                              "negative_part", "cot", "abs_cot")
    p = args.p if args.p is not None else (1.0 if order_one else 2.0)
    try:
        kind = SumKind(args.kind, p, G_FUNCTIONS[args.g] if args.g else None)
    except ValueError as exc:
        raise InputError(f"kind: {exc}") from None
    value = direct_sum(alpha, args.N, kind)
    exact = str(value) if isinstance(value, Fraction) else ""
    out.row([str(alpha), args.N, args.kind, p, args.g or "", float(value), exact])


def _cmd_verify(args, out: Emitter):
    alpha = _angle(args.alpha)
    if alpha.dyadic and "/" not in args.alpha:
        log.info("decimal alpha read as a 128-bit dyadic rational")
    if args.p < 1:
        raise InputError("p: must be a positive integer")
    if alpha.numerator == 0:
        raise InputError("alpha: must be nonzero")
    report = verify_block_identity(alpha, args.p)
    violations = legendre_violations(alpha) if alpha.denominator <= 10**6 else []
    out.row([str(alpha), args.p, report.blocks_checked, len(report.mismatches),
             len(violations), report.summary()])
    if not report.ok or violations:
        raise RuntimeError(report.summary())


def _cmd_stable(args, out: Emitter):
    try:
        params = st.StableParams(args.alpha0, args.beta0)
    except ValueError as exc:
        raise InputError(f"alpha0/beta0: {exc}") from None
    a, b = params.alpha0, params.beta0
    if args.action == "cdf":
        for x in args.values:
            out.row([a, b, x, float(st.cdf(params, x))])
    elif args.action == "quantile":
        for q in args.values:
            if not 0 < q < 1:
                raise InputError("values: probabilities must lie in (0, 1)")
            out.row([a, b, q, st.quantile(params, q)])
    else:
        if args.count < 1:
            raise InputError("count: must be positive")
        xs = st.sample(params, np.random.default_rng(args.seed), args.count)
        for i, x in enumerate(xs):
            out.row([a, b, i, float(x)])


def _cmd_mc(args, out: Emitter):
    try:
        config = mc.load_config(args.config)
    except OSError as exc:
        raise InputError(f"config: {exc}") from None
    except mc.ConfigError as exc:
        raise InputError(str(exc)) from None
    threads = os.environ.get("DLL_THREADS")
    if threads:
        try:
            workers = int(threads)
            if workers < 1:
                raise ValueError
        except ValueError:
            raise InputError("DLL_THREADS: must be a positive integer") from None
        config = mc.ExperimentConfig(config.statistic, config.N_ladder, config.M,
                                     config.density, config.seed, workers)
    log.info("running %s over %s with M=%d", config.statistic.family,
             list(config.N_ladder), config.M)
    mc.run_experiment(config, on_row=lambda r: out.row([getattr(r, h) for h in mc.CSV_HEADER]))


def _replot(path: str, out_fmt: str, fh):
    try:
        with open(path, newline="") as f:
            text = f.read()
    except OSError as exc:
        raise InputError(f"replot-from: {exc}") from None
    reader = csv.reader(io.StringIO(text))
    header = tuple(next(reader, ()))
    if header not in SCHEMAS.values():
        raise InputError("replot-from: header matches no table this program writes")
    if header == mc.CSV_HEADER:
        try:
            mc.rows_from_csv(text)
        except ValueError as exc:
            raise InputError(f"replot-from: {exc}") from None
    out = Emitter(header, out_fmt, fh)
    for rec in reader:
        if not rec:
            continue
        if len(rec) != len(header):
            raise InputError(f"replot-from: malformed row {rec!r}")
        out.row(rec)
    out.close()


COMMANDS = {"constants": _cmd_constants, "cf": _cmd_cf, "sum": _cmd_sum,
            "verify": _cmd_verify, "stable": _cmd_stable, "mc": _cmd_mc}


def _schema(args) -> tuple:
    if args.command == "stable":
        return SCHEMAS["stable_" + args.action]
    return SCHEMAS[args.command]


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    verbosity = getattr(args, "verbose", 0)
    logging.basicConfig(level=logging.WARNING - 10 * min(verbosity, 2), stream=sys.stderr,
                        format="%(levelname)s %(message)s")
    fmt = getattr(args, "output", "csv")
    out_path = getattr(args, "out_path", None)
    if args.replot_from is None and args.command is None:
        print("error: a subcommand or --replot-from is required", file=sys.stderr)
        return 1
    fh = None
    try:
        fh = open(out_path, "w", newline="") if out_path else sys.stdout
        if args.replot_from is not None:
            _replot(args.replot_from, fmt, fh)
            return 0
        out = Emitter(_schema(args), fmt, fh)
        COMMANDS[args.command](args, out)
        out.close()
        return 0
    except (InputError, mc.ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: out-path: {exc}", file=sys.stderr)
        return 1
    except (SingularTermError, ExpansionTooShort, ArithmeticError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # any other failure during a computation
        log.debug("failure", exc_info=True)
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    finally:
        if fh is not None and fh is not sys.stdout:
            fh.close()


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
