"""Command line entry point.

Exit codes: 0 when every check passes, 2 when a mathematical check fails,
1 for usage, IO and budget errors.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from contextlib import contextmanager
from pathlib import Path

from . import __version__
from .biflag import kernel_infinite
from .errors import BudgetExceeded, QFlagsError
from .flag import cell_points, default_budget, enumerate_flags, flag_from_perm
from .gfq import field_new
from .kernel import KernelValue, gram_matrix, kappa, kernel_value
from .perm import enumerate_sn, inversions, poincare_sum
from .serialize import (biflag_from_json, dump_json, flag_from_json, load_json, write_flags_csv,
                        write_gram_csv)
from .verify import check_budget, run_verification


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive(value: str) -> int:
    v = int(value)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _instance_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--budget", type=_positive, default=None,
                   help="max flag count (default 10^6 or $STEINBERG_BUDGET)")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output path (stdout when omitted)")
    p.add_argument("--format", choices=["json", "csv"], default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qflags", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _instance_args(sub.add_parser("flags", help="count / dump Fl(n, q)"))
    _instance_args(sub.add_parser("cells", help="Schubert cell table"))
    _instance_args(sub.add_parser("gram", help="export the exact Gram matrix as CSV"))
    p = sub.add_parser("verify", help="run the full verification suite")
    _instance_args(p)
    p.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")

    p = sub.add_parser("kernel", help="k and K for two serialized flags")
    p.add_argument("--flag-a", required=True)
    p.add_argument("--flag-b", required=True)

    p = sub.add_parser("biflag", help="operations on windowed flags of Fl(2 infinity)")
    bsub = p.add_subparsers(dest="biflag_command", required=True, parser_class=_Parser)
    pk = bsub.add_parser("kernel", help="infinite kernel of two serialized biflags")
    pk.add_argument("--a", required=True)
    pk.add_argument("--b", required=True)
    return parser


@contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        buf = io.StringIO()
        yield buf
        Path(path).write_text(buf.getvalue())


def _kernel_json(k: int, value: KernelValue) -> dict:
    return {"k": k, "K": str(value)}


def _cmd_flags(args) -> int:
    spec = field_new(args.q)
    budget = args.budget or default_budget()
    count = poincare_sum(args.n, args.q)
    if count > budget:
        raise BudgetExceeded(count, budget)
    flags = enumerate_flags(args.n, spec, budget)
    fmt = args.format or ("csv" if args.out else "json")
    with _output(args.out) as fh:
        if fmt == "csv":
            write_flags_csv(flags, fh)
        else:
            dump_json({"n": args.n, "q": args.q, "flag_count": len(flags), "poincare_sum": count}, fh)
    return 0 if len(flags) == count else 2


def _cmd_cells(args) -> int:
    spec = field_new(args.q)
    budget = args.budget or default_budget()
    check_count = poincare_sum(args.n, args.q)
    if check_count > budget:
        raise BudgetExceeded(check_count, budget)
    rows = []
    ok = True
    for sigma in enumerate_sn(args.n):
        points = cell_points(sigma, spec, budget)
        k = kappa(flag_from_perm(sigma, spec))
        ok &= len(points) == args.q ** inversions(sigma) and k == inversions(sigma)
        rows.append({"sigma": str(sigma), "inversions": inversions(sigma), "size": len(points),
                     "kappa_value": str(KernelValue(k, args.q))})
    with _output(args.out) as fh:
        if (args.format or "csv") == "csv":
            fh.write("sigma,inversions,size,kappa_value\n")
            for r in rows:
                fh.write(f"\"{r['sigma']}\",{r['inversions']},{r['size']},{r['kappa_value']}\n")
        else:
            dump_json({"n": args.n, "q": args.q, "cells": rows}, fh)
    return 0 if ok else 2


def _cmd_gram(args) -> int:
    check_budget(args.n, args.q, args.budget)
    flags = enumerate_flags(args.n, field_new(args.q), args.budget)
    g = gram_matrix(flags)
    with _output(args.out) as fh:
        write_gram_csv(g, fh)
    return 0


def _cmd_verify(args) -> int:
    report = run_verification(args.n, args.q, args.budget, args.samples, args.seed, args.timings)
    with _output(args.out) as fh:
        dump_json(report.to_json(), fh)
    for c in report.checks:
        print(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.detail}", file=sys.stderr)
    return 0 if report.passed else 2


def _cmd_kernel(args) -> int:
    a = flag_from_json(load_json(args.flag_a))
    b = flag_from_json(load_json(args.flag_b))
    val = kernel_value(a, b)
    dump_json(_kernel_json(val.k, val), sys.stdout)
    return 0


def _cmd_biflag(args) -> int:
    a = biflag_from_json(load_json(args.a))
    b = biflag_from_json(load_json(args.b))
    val = kernel_infinite(a, b)
    dump_json(_kernel_json(val.k, val), sys.stdout)
    return 0


COMMANDS = {
    "flags": _cmd_flags,
    "cells": _cmd_cells,
    "gram": _cmd_gram,
    "verify": _cmd_verify,
    "kernel": _cmd_kernel,
    "biflag": _cmd_biflag,
}


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except BudgetExceeded as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return 1
    except (QFlagsError, OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
