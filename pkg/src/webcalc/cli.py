"""Command-line entry point.

Exit codes: 0 when everything requested succeeded and every check passed,
1 when a check failed, 2 for usage errors, 3 for bad input (unreadable
file, syntax or type error, unusable specialization point).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import ariki_koike as ak
from . import rep_engine as re_
from . import suites
from .rep_engine import LeviDatum, NegativeLabel
from .scalar_field import DenominatorVanishes, format_scalar
from .web_ir import UnknownGenerator, WebSyntaxError, evaluate, parse_checked
from .linear_algebra import PRIME, ShapeMismatch

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3

CONFIG_KEYS = ("n", "levi", "mode", "point", "prime", "seed", "output", "tensor")


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


def read_config(path: str) -> dict[str, str]:
    """key=value lines; '#' starts a comment."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as e:
        raise UsageError(f"cannot read config file {path}: {e.strerror}") from None
    for num, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{num}: expected key=value")
        key, value = (x.strip() for x in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{num}: unknown key {key!r}")
        out[key] = value
    return out


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--n", type=int, help="rank n of gl_n")
    p.add_argument("--levi", help="Levi composition as a comma list summing to n (default: n)")
    p.add_argument("--mode", choices=("exact", "v1", "spec"), help="exact (default), v -> 1, or specialized")
    p.add_argument("--point", help="specialization point for --mode spec, e.g. v=3,u1=5,u2=7")
    p.add_argument("--prime", type=int, help=f"prime for --mode spec (default {PRIME})")
    p.add_argument("--seed", type=int, help="random seed (falls back to WEBCALC_SEED, then 0)")
    p.add_argument("--config", help="key=value file with defaults for the options above")
    p.add_argument("--output", help="write the JSON result here instead of stdout")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="webcalc", description="Annular web evaluation and verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate a web term file to a matrix")
    p.add_argument("--file", required=True)
    p.add_argument("--tensor", choices=("skein", "hopf"))

    p = sub.add_parser("check", parents=[common], help="run a verification suite")
    p.add_argument("--suite", required=True, choices=suites.SUITES)
    p.add_argument("--deep", action="store_true", help="raise the bounds to n = 4, m = 4")
    p.add_argument("--timing", action="store_true", help="record elapsed_ms (output is then not byte-stable)")
    p.add_argument("--only", help="run only instances whose key contains this text")

    p = sub.add_parser("circle", parents=[common], help="essential circle value, computed and predicted")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--side", choices=("left", "right"), required=True)

    p = sub.add_parser("ak", parents=[common], help="Ariki-Koike report")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--check", action="append", choices=("relations", "jm", "dimension", "kernel"),
                   help="repeatable; default runs all")

    p = sub.add_parser("dim", parents=[common], help="generalized blob algebra dimension")
    p.add_argument("--m", type=int, required=True)
    return parser


def _resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Fill unset options from the config file, then WEBCALC_SEED, then defaults."""
    cfg = read_config(args.config) if args.config else {}
    for key in CONFIG_KEYS:
        if getattr(args, key, None) is None and key in cfg:
            if not hasattr(args, key):
                continue
            val: object = cfg[key]
            if key in ("n", "seed", "prime"):
                try:
                    val = int(cfg[key])
                except ValueError:
                    raise UsageError(f"config value for {key} must be an integer") from None
            setattr(args, key, val)
    if args.seed is None:
        env = os.environ.get("WEBCALC_SEED")
        if env is not None:
            try:
                args.seed = int(env)
            except ValueError:
                raise UsageError("WEBCALC_SEED must be an integer") from None
    args.seed = 0 if args.seed is None else args.seed
    args.mode = args.mode or "exact"
    args.prime = args.prime or PRIME
    if hasattr(args, "tensor"):
        args.tensor = args.tensor or "skein"
    return args


def _context(args: argparse.Namespace) -> LeviDatum:
    if args.n is None:
        raise UsageError("--n is required")
    try:
        comp = tuple(int(x) for x in args.levi.split(",")) if args.levi else (args.n,)
    except ValueError:
        raise UsageError(f"--levi must be a comma list of integers, got {args.levi!r}") from None
    try:
        ctx = LeviDatum(args.n, comp)
    except ValueError as e:
        raise UsageError(str(e)) from None
    return ctx.with_mode("v1") if args.mode == "v1" else ctx


def _point(args: argparse.Namespace, d: int) -> tuple[int, list[int]]:
    if not args.point:
        raise UsageError("--mode spec needs --point v=...,u1=...")
    vals = {}
    for part in args.point.split(","):
        if "=" not in part:
            raise UsageError(f"bad --point entry {part!r}")
        k, v = (x.strip() for x in part.split("=", 1))
        try:
            vals[k] = int(v)
        except ValueError:
            raise UsageError(f"--point value for {k} must be an integer") from None
    missing = [k for k in ["v"] + [f"u{i}" for i in range(1, d + 1)] if k not in vals]
    if missing:
        raise UsageError(f"--point is missing {', '.join(missing)}")
    return vals["v"], [vals[f"u{i}"] for i in range(1, d + 1)]


def _emit(args: argparse.Namespace, text: str):
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


def cmd_eval(args) -> int:
    ctx = _context(args)
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"cannot read {args.file}: {e.strerror}") from None
    term = parse_checked(text)
    if args.mode == "spec":
        point = _point(args, ctx.d)
        m = evaluate(term, ctx, "specialized", args.tensor, point=point, p=args.prime)
    else:
        m = evaluate(term, ctx, "exact", args.tensor)
    _emit(args, _dump(m.to_json()))
    return EXIT_OK


def cmd_check(args) -> int:
    bounds = suites.Bounds.deep() if args.deep else suites.Bounds()
    only = (lambda inst: args.only in inst.key) if args.only else None
    records = suites.run_suite(args.suite, bounds, args.seed, timing=args.timing, only=only)
    _emit(args, suites.report_lines(records))
    counts = suites.summarize(records)
    print(f"{args.suite}: {len(records)} instances, "
          + ", ".join(f"{v} {k}" for k, v in sorted(counts.items())), file=sys.stderr)
    for r in records:
        if r["status"] != "pass":
            print(f"  {r['status']}: {r['instance']}", file=sys.stderr)
    return EXIT_OK if suites.all_passed(records) else EXIT_CHECK_FAILED


def cmd_circle(args) -> int:
    ctx = _context(args)
    if not 0 <= args.k <= ctx.n:
        raise UsageError(f"--k must lie in 0..{ctx.n}")
    got = re_.essential_circle_value(args.k, args.side, ctx)
    want = re_.predicted_circle_value(args.k, args.side, ctx)
    _emit(args, _dump({"n": ctx.n, "levi": list(ctx.composition), "mode": args.mode, "k": args.k,
                       "side": args.side, "computed": format_scalar(got), "predicted": format_scalar(want),
                       "equal": got == want}))
    return EXIT_OK if got == want else EXIT_CHECK_FAILED


def cmd_ak(args) -> int:
    ctx = _context(args)
    if args.m < 0:
        raise UsageError("--m must be non-negative")
    checks = tuple(args.check) if args.check else ("relations", "jm", "dimension", "kernel")
    rep = ak.ak_report(args.m, ctx, args.seed, checks)
    _emit(args, _dump(rep))
    return EXIT_OK if ak.report_passes(rep) else EXIT_CHECK_FAILED


def cmd_dim(args) -> int:
    ctx = _context(args)
    if args.m < 0:
        raise UsageError("--m must be non-negative")
    _emit(args, _dump(ak.blob_dimension(args.m, ctx)))
    return EXIT_OK


COMMANDS = {"eval": cmd_eval, "check": cmd_check, "circle": cmd_circle, "ak": cmd_ak, "dim": cmd_dim}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        args = _resolve(args)
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(f"webcalc {args.command}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (InputError, WebSyntaxError, UnknownGenerator, ShapeMismatch, NegativeLabel) as e:
        print(f"webcalc {args.command}: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT
    except DenominatorVanishes as e:
        print(f"webcalc {args.command}: specialization point is singular: {e}", file=sys.stderr)
        return EXIT_INPUT


def entry() -> None:
    sys.exit(main())
