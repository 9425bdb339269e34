"""The identity suite: every check compares two morphisms exactly and reports."""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from typing import Callable, Iterator

from . import identities as I
from .diagram import TLMorphism
from .projectors import NotConstructible, hat_size, jw, verify_jw_axioms
from .scalar import GENERIC, Context, derive_root_context

DEFAULT_BUDGET = 900.0
# squaring a projector costs (terms)^2 gluings; larger ones get axiom checks only
TOOLKIT_MAX_SIZE = 9
WITNESS_TERMS = 8

SUITES = ("all", "toolkit", "steinberg", "frobenius", "tower")


@dataclass
class CheckReport:
    name: str
    params: dict
    outcome: str
    reason: str = ""
    witness: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.outcome == "pass"

    @property
    def failed(self) -> bool:
        return self.outcome == "fail"

    def to_json(self, timing: bool = False) -> dict:
        out = {"name": self.name, "params": self.params, "outcome": self.outcome,
               "reason": self.reason, "witness": self.witness}
        if timing:
            out["seconds"] = round(self.seconds, 3)
        return out

    def line(self) -> str:
        args = ", ".join(f"{k}={v}" for k, v in self.params.items())
        tail = f"  ({self.reason})" if self.reason else ""
        return f"{self.outcome.upper():7} {self.name}({args}){tail}"


def _scalar_json(c):
    return c.to_json() if hasattr(c, "to_json") else str(c)


def witness_terms(diff: TLMorphism, limit: int = WITNESS_TERMS) -> list:
    items = sorted(diff.terms.items())[:limit]
    return [{"pairing": list(p), "coeff": _scalar_json(c)} for p, c in items]


def _ctx_params(ctx: Context) -> dict:
    return {"N": ctx.N, "n": ctx.n} if ctx.is_root else {"N": None}


Comparison = tuple[str, TLMorphism, TLMorphism]


def run_check(name: str, ctx: Context, params: dict, build: Callable[[], list[Comparison]]) -> CheckReport:
    """Build the comparisons, diff them, and wrap the outcome."""
    full = {**_ctx_params(ctx), **params}
    start = time.perf_counter()
    try:
        comparisons = build()
    except NotConstructible as exc:
        return CheckReport(name, full, "skipped", f"{type(exc).__name__}: {exc}",
                           seconds=time.perf_counter() - start)
    for label, lhs, rhs in comparisons:
        diff = lhs - rhs
        if not diff.is_zero():
            reason = f"{label}: sides differ in {len(diff.terms)} terms" if label else \
                f"sides differ in {len(diff.terms)} terms"
            return CheckReport(name, full, "fail", reason, witness_terms(diff),
                               time.perf_counter() - start)
    return CheckReport(name, full, "pass", seconds=time.perf_counter() - start)


def _one(pair) -> list[Comparison]:
    return [("", pair[0], pair[1])]


# ---------------------------------------------------------------------------
# JW toolkit


def check_jw_axioms(ctx: Context, k: int) -> CheckReport:
    start = time.perf_counter()
    full = {**_ctx_params(ctx), "k": k}
    try:
        rep = verify_jw_axioms(jw(k, ctx))
    except NotConstructible as exc:
        return CheckReport("jw_axioms", full, "skipped", f"{type(exc).__name__}: {exc}")
    elapsed = time.perf_counter() - start
    if rep.ok:
        return CheckReport("jw_axioms", full, "pass", seconds=elapsed)
    why = [] if rep.identity_coefficient_ok else ["identity coefficient is not 1"]
    why += [f"{side} cap at {i} survives" for side, i in rep.failing_caps[:4]]
    return CheckReport("jw_axioms", full, "fail", "; ".join(why),
                       [list(c) for c in rep.failing_caps], elapsed)


def check_jw_hat_axioms(ctx: Context, k: int) -> CheckReport:
    rep = check_jw_axioms(ctx, hat_size(ctx.n, k))
    rep.name = "jw_hat_axioms"
    rep.params = {**_ctx_params(ctx), "k": k, "size": hat_size(ctx.n, k)}
    return rep


def check_jw_idempotence(ctx: Context, k: int) -> CheckReport:
    return run_check("jw_idempotence", ctx, {"k": k}, lambda: _one(I.idempotence(jw(k, ctx))))


def check_jw_absorption(ctx: Context, a: int, b: int, offset: int) -> CheckReport:
    def build():
        below = I.absorption(ctx, a, b, offset, below=True)
        above = I.absorption(ctx, a, b, offset, below=False)
        return [("below", *below), ("above", *above)]

    return run_check("jw_absorption", ctx, {"a": a, "b": b, "offset": offset}, build)


def check_jw_trace(ctx: Context, m: int) -> CheckReport:
    return run_check("jw_trace", ctx, {"m": m}, lambda: _one(I.jw_trace(ctx, m)))


def check_triangle(ctx: Context, n: int, m: int) -> CheckReport:
    return run_check("triangle", ctx, {"n_box": n, "m": m}, lambda: _one(I.triangle(ctx, n, m)))


def check_telescoping(ctx: Context, n: int, m: int) -> CheckReport:
    return run_check("telescoping", ctx, {"n_box": n, "m": m}, lambda: _one(I.telescoping(ctx, n, m)))


def check_crossing_absorption(ctx: Context, k: int, l: int, M: int) -> CheckReport:
    def build():
        out = []
        for kind in ("over", "under"):
            for offset in sorted({0, M - k - l}):
                for above in (True, False):
                    tag = f"{kind} offset={offset} box_{'above' if above else 'below'}"
                    out.append((tag, *I.crossing_absorption(ctx, k, l, M, offset, kind, above)))
        return out

    return run_check("crossing_absorption", ctx, {"k": k, "l": l, "M": M}, build)


def check_jw_crossing(ctx: Context, m: int, M: int | None = None) -> CheckReport:
    M = m if M is None else M
    return run_check("jw_crossing", ctx, {"m": m, "M": M}, lambda: _one(I.jw_crossing(ctx, m, M)))


def check_root_consistency(ctx: Context) -> CheckReport:
    return run_check("root_consistency", ctx, {}, lambda: _one(I.root_consistency(ctx)))


# ---------------------------------------------------------------------------
# Steinberg and Frobenius


def _is_label_size(ctx: Context, M: int) -> bool:
    n = ctx.n
    return M == 2 * n - 1 or (M >= n - 1 and (M - (n - 1)) % n == 0)


def _need_box(ctx: Context, M: int) -> None:
    if M < ctx.n or not _is_label_size(ctx, M):
        raise NotConstructible(f"M={M} is not a constructible context box for n={ctx.n}")


def check_steinberg_second(ctx: Context, M: int) -> CheckReport:
    def build():
        _need_box(ctx, M)
        return _one(I.steinberg_second(ctx, M))

    return run_check("steinberg_second", ctx, {"M": M}, build)


def check_steinberg_first(ctx: Context, m: int, mirrored: bool = False) -> CheckReport:
    return run_check("steinberg_first", ctx, {"m": m, "mirrored": mirrored},
                     lambda: _one(I.steinberg_first(ctx, m, mirrored)))


def check_ncross(ctx: Context, M: int) -> CheckReport:
    def build():
        _need_box(ctx, M)
        return _one(I.ncross(ctx, M))

    return run_check("ncross", ctx, {"M": M}, build)


def check_frobenius_loop(ctx: Context) -> CheckReport:
    return run_check("frobenius_loop", ctx, {}, lambda: _one(I.frobenius_loop(ctx)))


def check_frobenius_crossing(ctx: Context, M: int) -> CheckReport:
    def build():
        _need_box(ctx, M)
        # the local ncross identity the relation reduces to comes first
        out = [("ncross", *I.ncross(ctx, M))]
        for name, (word, index) in sorted(I.frobenius_instances(ctx).items()):
            out.append((name, *I.frobenius_crossing(ctx, word, index)))
        return out

    return run_check("frobenius_crossing", ctx, {"M": M}, build)


# ---------------------------------------------------------------------------
# the JW_{n-1+kn} tower


def check_green_trace(ctx: Context, k: int) -> CheckReport:
    return run_check("green_trace", ctx, {"k": k}, lambda: _one(I.green_trace(ctx, k)))


def check_other_steinberg(ctx: Context, k: int) -> CheckReport:
    if k == 1:
        rep = check_steinberg_second(ctx, 2 * ctx.n - 1)
        rep.name, rep.params = "other_steinberg", {**_ctx_params(ctx), "k": 1}
        rep.reason = rep.reason or "k=1 is steinberg_second with M=2n-1"
        return rep

    def build():
        return [("closed", *I.other_steinberg(ctx, k)), *I.other_steinberg_absorption(ctx, k)]

    return run_check("other_steinberg", ctx, {"k": k}, build)


# ---------------------------------------------------------------------------
# suites


@dataclass
class SuiteConfig:
    roots: list[int] = field(default_factory=lambda: [8])
    m_max: int = 3
    k_max: int = 2
    M: list[int] | None = None
    suite: str = "all"
    generic: bool = False
    generic_k_max: int = 6
    budget: float | None = None

    def time_budget(self) -> float:
        if self.budget is not None:
            return self.budget
        env = os.environ.get("SKEIN_TIME_BUDGET_SECS")
        return float(env) if env else DEFAULT_BUDGET


Thunk = Callable[[], CheckReport]


def _constructible_sizes(ctx: Context, k_max: int) -> list[int]:
    n = ctx.n
    sizes = set(range(n)) | {2 * n - 1}
    sizes |= {hat_size(n, k) for k in range(2, k_max + 1)}
    return sorted(s for s in sizes if s <= TOOLKIT_MAX_SIZE)


def generic_toolkit(k_max: int = 6) -> Iterator[tuple[str, Thunk]]:
    ctx = GENERIC
    for k in range(k_max + 1):
        yield "jw_axioms", lambda k=k: check_jw_axioms(ctx, k)
        yield "jw_idempotence", lambda k=k: check_jw_idempotence(ctx, k)
    for a in range(2, k_max + 1):
        for b in range(2, a):
            for off in sorted({0, a - b}):
                yield "jw_absorption", lambda a=a, b=b, off=off: check_jw_absorption(ctx, a, b, off)
    for m in range(1, k_max + 1):
        yield "jw_trace", lambda m=m: check_jw_trace(ctx, m)
    for n in range(2, k_max):
        for m in range(n):
            if 2 * m <= k_max:
                yield "triangle", lambda n=n, m=m: check_triangle(ctx, n, m)
                if m <= n - 2:
                    yield "telescoping", lambda n=n, m=m: check_telescoping(ctx, n, m)
    for k in range(1, 4):
        for l in range(1, 4):
            for M in range(k + l, k_max + 1):
                yield "crossing_absorption", lambda k=k, l=l, M=M: check_crossing_absorption(ctx, k, l, M)
    for m in range(1, 4):
        yield "jw_crossing", lambda m=m: check_jw_crossing(ctx, m)


def root_toolkit(ctx: Context, k_max: int) -> Iterator[tuple[str, Thunk]]:
    n = ctx.n
    sizes = _constructible_sizes(ctx, k_max)
    for k in sizes:
        yield "jw_axioms", lambda k=k: check_jw_axioms(ctx, k)
    for k in sizes:
        yield "jw_idempotence", lambda k=k: check_jw_idempotence(ctx, k)
    for a in sizes:
        for b in sizes:
            if 2 <= b < a:
                for off in sorted({0, a - b}):
                    yield "jw_absorption", lambda a=a, b=b, off=off: check_jw_absorption(ctx, a, b, off)
    for m in range(1, n):
        yield "jw_trace", lambda m=m: check_jw_trace(ctx, m)
    for m in range(n):
        yield "triangle", lambda m=m: check_triangle(ctx, n, m)
    for m in range(n - 1):
        yield "telescoping", lambda m=m: check_telescoping(ctx, n, m)
    for k in range(1, 4):
        for l in range(1, 4):
            for M in sizes:
                if k + l <= M <= 2 * n - 1:
                    yield "crossing_absorption", lambda k=k, l=l, M=M: check_crossing_absorption(ctx, k, l, M)
    for m in range(1, n):
        yield "jw_crossing", lambda m=m: check_jw_crossing(ctx, m, 2 * n - 1)
    if 2 * n - 1 <= 5:
        yield "root_consistency", lambda: check_root_consistency(ctx)


def steinberg_checks(ctx: Context, cfg: SuiteConfig) -> Iterator[tuple[str, Thunk]]:
    Ms = cfg.M or [2 * ctx.n - 1]
    for M in Ms:
        yield "steinberg_second", lambda M=M: check_steinberg_second(ctx, M)
    for m in range(cfg.m_max + 1):
        for mirrored in (False, True):
            yield "steinberg_first", lambda m=m, mr=mirrored: check_steinberg_first(ctx, m, mr)
    for M in Ms:
        yield "ncross", lambda M=M: check_ncross(ctx, M)


def frobenius_checks(ctx: Context, cfg: SuiteConfig) -> Iterator[tuple[str, Thunk]]:
    yield "frobenius_loop", lambda: check_frobenius_loop(ctx)
    for M in cfg.M or [2 * ctx.n - 1]:
        yield "frobenius_crossing", lambda M=M: check_frobenius_crossing(ctx, M)


def tower_checks(ctx: Context, cfg: SuiteConfig) -> Iterator[tuple[str, Thunk]]:
    for k in range(2, cfg.k_max + 1):
        yield "jw_hat_axioms", lambda k=k: check_jw_hat_axioms(ctx, k)
    for k in range(2, cfg.k_max + 1):
        yield "green_trace", lambda k=k: check_green_trace(ctx, k)
    for k in range(1, cfg.k_max + 1):
        yield "other_steinberg", lambda k=k: check_other_steinberg(ctx, k)


_GROUPS = {
    "steinberg": steinberg_checks,
    "frobenius": frobenius_checks,
    "tower": tower_checks,
}


def planned_checks(cfg: SuiteConfig) -> Iterator[tuple[str, Thunk]]:
    """Checks in dependency order: projector axioms, then identities built on them."""
    groups = ["toolkit", "steinberg", "frobenius", "tower"]
    wanted = groups if cfg.suite == "all" else [g for g in groups if g == cfg.suite]
    only = None if cfg.suite in SUITES else cfg.suite
    if only is not None:
        wanted = groups
    if cfg.generic and "toolkit" in wanted:
        for name, thunk in generic_toolkit(cfg.generic_k_max):
            if only in (None, name):
                yield name, thunk
    for N in cfg.roots:
        ctx = derive_root_context(N)
        for group in wanted:
            source = root_toolkit(ctx, cfg.k_max) if group == "toolkit" else _GROUPS[group](ctx, cfg)
            for name, thunk in source:
                if only in (None, name):
                    yield name, thunk


CHECK_NAMES = (
    "jw_axioms", "jw_idempotence", "jw_absorption", "jw_trace", "triangle", "telescoping",
    "crossing_absorption", "jw_crossing", "root_consistency", "steinberg_second", "steinberg_first",
    "ncross", "frobenius_loop", "frobenius_crossing", "jw_hat_axioms", "green_trace", "other_steinberg",
)


def run_suite(cfg: SuiteConfig | None = None, on_report: Callable[[CheckReport], None] | None = None
              ) -> list[CheckReport]:
    cfg = cfg or SuiteConfig()
    if cfg.suite not in SUITES and cfg.suite not in CHECK_NAMES:
        raise ValueError(f"unknown suite {cfg.suite!r}")
    budget = cfg.time_budget()
    start = time.perf_counter()
    reports = []
    for name, thunk in planned_checks(cfg):
        if time.perf_counter() - start > budget:
            rep = CheckReport(name, {}, "skipped", "time budget exhausted")
        else:
            rep = thunk()
        reports.append(rep)
        if on_report:
            on_report(rep)
    return reports


def summarize(reports: list[CheckReport]) -> dict:
    out = {"pass": 0, "fail": 0, "skipped": 0}
    for r in reports:
        out[r.outcome] += 1
    return out
