"""Command line front end.

    skeinjw ctx --root 8
    skeinjw eval --root 12 --expr "jw2n1 ; (id(2) @ cap(3,0))"
    skeinjw jw --k 3 --root 8 --coeff-table
    skeinjw verify --root 8 --suite all --report out.json
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from .diagram import SignatureMismatch, TLMorphism
from .dsl import ElaborationError, SkeinSyntaxError, evaluate_source
from .projectors import NotConstructible, jw
from .scalar import GENERIC, Context, DivisionByZero, derive_root_context
from .verify import CHECK_NAMES, SUITES, SuiteConfig, run_suite, summarize

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class CliConfig:
    command: str
    roots: list[int] = field(default_factory=list)
    expr: str | None = None
    k: int | None = None
    suite: str = "all"
    m_max: int = 3
    k_max: int = 2
    report: str | None = None
    json: bool = False
    coeff_table: bool = False
    generic: bool = False
    budget: float | None = None


class UsageError(Exception):
    pass


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"N must be >= 1, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skeinjw", description="Temperley-Lieb computations at roots of unity.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ctx", help="show the arithmetic context of a root of unity")
    p.add_argument("--root", type=_positive, required=True, metavar="N")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("eval", help="evaluate a DSL expression to a TL morphism (JSON)")
    p.add_argument("--root", type=_positive, metavar="N", help="omit for generic q")
    p.add_argument("--expr", required=True, help="inline source or a file path")

    p = sub.add_parser("jw", help="print a Jones-Wenzl projector")
    p.add_argument("--k", type=_nonneg, required=True)
    p.add_argument("--root", type=_positive, metavar="N", help="omit for generic q")
    out = p.add_mutually_exclusive_group()
    out.add_argument("--json", action="store_true")
    out.add_argument("--coeff-table", action="store_true")

    p = sub.add_parser("verify", help="run the identity suite")
    p.add_argument("--root", type=_positive, action="append", required=True, metavar="N",
                   help="may be repeated")
    p.add_argument("--suite", default="all", help="|".join(SUITES) + " or a single check name")
    p.add_argument("--m-max", type=_nonneg, default=3)
    p.add_argument("--k-max", type=_nonneg, default=2)
    p.add_argument("--generic", action="store_true", help="also run the toolkit at generic q")
    p.add_argument("--budget", type=float, help="seconds; default SKEIN_TIME_BUDGET_SECS or 900")
    p.add_argument("--report", metavar="PATH", help="write the JSON report here")
    p.add_argument("--json", action="store_true", help="print the JSON report instead of text")
    return parser


def config_from_args(ns: argparse.Namespace) -> CliConfig:
    roots = ns.root if isinstance(ns.root, list) else ([ns.root] if ns.root else [])
    cfg = CliConfig(command=ns.command, roots=roots)
    for name in ("expr", "k", "suite", "m_max", "k_max", "report", "json", "coeff_table", "generic", "budget"):
        if hasattr(ns, name):
            setattr(cfg, name, getattr(ns, name))
    if cfg.command == "verify" and cfg.suite not in SUITES and cfg.suite not in CHECK_NAMES:
        raise UsageError(f"unknown suite {cfg.suite!r}; choose from {', '.join(SUITES + CHECK_NAMES)}")
    return cfg


def _dump(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False)


def _context(cfg: CliConfig) -> Context:
    return derive_root_context(cfg.roots[0]) if cfg.roots else GENERIC


def cmd_ctx(cfg: CliConfig, out) -> int:
    ctx = derive_root_context(cfg.roots[0])
    if cfg.json:
        data = {"N": ctx.N, "n": ctx.n, "t": ctx.t_sign, "tHalf": ctx.t_half.to_json(),
                "q": ctx.q.to_json(), "v": ctx.v.to_json()}
        print(_dump(data), file=out)
    else:
        print(f"N={ctx.N} n={ctx.n} t={ctx.t_sign} tHalf={ctx.t_half}", file=out)
    return EXIT_OK


def _read_expr(src: str) -> str:
    if os.path.isfile(src):
        with open(src, encoding="utf-8") as fh:
            return fh.read()
    return src


def cmd_eval(cfg: CliConfig, out) -> int:
    f = evaluate_source(_read_expr(cfg.expr), _context(cfg))
    print(_dump(f.to_json()), file=out)
    return EXIT_OK


def coeff_table(f: TLMorphism) -> list[tuple[list[int], str]]:
    return [(list(p), str(c)) for p, c in sorted(f.terms.items())]


def cmd_jw(cfg: CliConfig, out) -> int:
    f = jw(cfg.k, _context(cfg))
    if cfg.coeff_table:
        for pairing, coeff in coeff_table(f):
            print(f"{' '.join(map(str, pairing))}\t{coeff}", file=out)
    else:
        print(_dump(f.to_json()), file=out)
    return EXIT_OK


def cmd_verify(cfg: CliConfig, out) -> int:
    suite = SuiteConfig(roots=cfg.roots, m_max=cfg.m_max, k_max=cfg.k_max, suite=cfg.suite,
                        generic=cfg.generic, budget=cfg.budget)
    printer = None if cfg.json else (lambda r: print(r.line(), file=out, flush=True))
    reports = run_suite(suite, on_report=printer)
    data = [r.to_json() for r in reports]
    if cfg.report:
        with open(cfg.report, "w", encoding="utf-8") as fh:
            fh.write(_dump(data) + "\n")
    if cfg.json:
        print(_dump(data), file=out)
    else:
        counts = summarize(reports)
        print(f"{counts['pass']} passed, {counts['fail']} failed, {counts['skipped']} skipped", file=out)
    return EXIT_FAIL if any(r.failed for r in reports) else EXIT_OK


COMMANDS = {"ctx": cmd_ctx, "eval": cmd_eval, "jw": cmd_jw, "verify": cmd_verify}


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = config_from_args(ns)
        return COMMANDS[cfg.command](cfg, out)
    except UsageError as exc:
        parser.print_usage(err)
        print(f"error: {exc}", file=err)
    except SkeinSyntaxError as exc:
        print(f"SyntaxError: {exc}", file=err)
    except (ElaborationError, NotConstructible, SignatureMismatch, DivisionByZero, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=err)
    return EXIT_USAGE


def entry() -> None:
    sys.exit(main())

