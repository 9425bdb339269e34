"""Jones-Wenzl projectors: the generic recursion, JW_{2n-1} at a root of unity,
thick elements and the tower JW_{n-1+kn}."""

from __future__ import annotations

import threading
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction

from . import diagram as D
from .chebyshev import quantum_integer
from .diagram import TLMorphism
from .scalar import Context, Cyclotomic, GENERIC, RootContext, derive_root_context


class NotConstructible(ValueError):
    pass


class QuantumIntegerVanishes(NotConstructible):
    def __init__(self, j: int):
        super().__init__(f"quantum integer [{j}] vanishes")
        self.j = j


class ThickJWNotDefined(NotConstructible):
    def __init__(self, j: int):
        super().__init__(f"[{j}]_t vanishes, thick JW undefined")
        self.j = j


class SignContext:
    """Scalars in Q with q = t; used to build JW_k at the parameter t = +-1."""

    is_root = False
    N = None

    def __init__(self, t: int):
        self.t = Fraction(t)
        self.label = f"t={t}"
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def const(self, value) -> Fraction:
        return Fraction(value)

    def q_power(self, k: int) -> Fraction:
        return self.t ** k

    @property
    def delta(self) -> Fraction:
        return -self.t - 1 / self.t

    def __eq__(self, other):
        return isinstance(other, SignContext) and other.t == self.t

    def __hash__(self):
        return hash(("sign", self.t))


# ---------------------------------------------------------------------------
# cache


class ProjectorTable:
    """Memo of constructed projectors for one context."""

    def __init__(self, ctx):
        self.ctx = ctx
        self._cache: dict[tuple, TLMorphism] = {}
        self._lock = threading.Lock()

    def get(self, key: tuple, build):
        f = self._cache.get(key)
        if f is None:
            # construction is deterministic, so a duplicate build is harmless
            f = build()
            with self._lock:
                self._cache.setdefault(key, f)
        return f

    def labels(self) -> list[tuple]:
        return sorted(self._cache, key=repr)

    def clear(self):
        with self._lock:
            self._cache.clear()

    @contextmanager
    def override(self, key: tuple, f: TLMorphism):
        """Temporarily replace one entry; everything built from it is rebuilt inside."""
        with self._lock:
            saved = dict(self._cache)
            self._cache.clear()
            self._cache[key] = f
        try:
            yield self
        finally:
            with self._lock:
                self._cache.clear()
                self._cache.update(saved)


_tables: dict = {}
_tables_lock = threading.Lock()


def table_for(ctx) -> ProjectorTable:
    with _tables_lock:
        t = _tables.get(ctx)
        if t is None:
            t = _tables[ctx] = ProjectorTable(ctx)
        return t


# ---------------------------------------------------------------------------
# generic recursion


def jones_wenzl(k: int, ctx: Context = GENERIC) -> TLMorphism:
    """JW_k = JW_{k-1} (x) 1 + [k-1]/[k] (JW_{k-1} (x) 1) e_{k-2} (JW_{k-1} (x) 1)."""
    if k < 0:
        raise ValueError("jones_wenzl needs k >= 0")
    if k <= 1:
        return D.identity(k, ctx)

    def build():
        qk = quantum_integer(k, ctx)
        if not qk:
            raise QuantumIntegerVanishes(k)
        prev = D.pad(jones_wenzl(k - 1, ctx), 0, 1)
        # the hook term unfolds into prev composed with the loop-free words
        # e_{k-2} e_{k-3} ... e_j, weighted [j+1]/[k-1]
        tail = D.identity(k, ctx)
        word = D.identity(k, ctx)
        for j in range(k - 2, -1, -1):
            word = D.compose(word, D.e(k, j, ctx))
            tail = tail + word.scale(quantum_integer(j + 1, ctx) / qk)
        return D.compose(prev, tail)

    return table_for(ctx).get(("jw", k), build)


def jones_wenzl_by_hook(k: int, ctx: Context = GENERIC) -> TLMorphism:
    """The recursion with the hook term composed literally (slow; for cross-checks)."""
    if k <= 1:
        return D.identity(k, ctx)
    qk = quantum_integer(k, ctx)
    if not qk:
        raise QuantumIntegerVanishes(k)
    prev = D.pad(jones_wenzl_by_hook(k - 1, ctx), 0, 1)
    hook = D.compose(D.compose(prev, D.e(k, k - 2, ctx)), prev)
    return prev + hook.scale(quantum_integer(k - 1, ctx) / qk)


# ---------------------------------------------------------------------------
# root of unity constructions


def _hook_pairing(n: int, k: int) -> tuple[int, ...]:
    """Middle matching of A_k on 2n-1 strands: one diagonal strand with k nested caps and cups."""
    w = 2 * n - 1
    p = [0] * (2 * w)

    def join(a, b):
        p[a], p[b] = b, a

    for i in range(n - 1 - k):
        join(i, w + i)
    join(n - 1 - k, w + n - 1 + k)
    for j in range(k):
        join(n - 1 - j, n + j)
        join(w + n - 2 - j, w + n - 1 + j)
    for i in range(n + k, w):
        join(i, w + i)
    return tuple(p)


def jw_2n_minus_1(ctx: RootContext) -> TLMorphism:
    """A_0 + sum_k (-1)^k (A_k + A_k') built from two copies of JW_{n-1}."""
    if not ctx.is_root:
        raise NotConstructible("jw2n1 needs a root of unity context")
    n = ctx.n

    def build():
        if n == 1:
            return D.identity(1, ctx)
        small = jones_wenzl(n - 1, ctx)
        w = 2 * n - 1
        total = D.tensor_all(small, D.identity(1, ctx), small)
        # A_k: right box below the hook, left box above it
        upper_left = D.pad(small, 0, n)
        lower_right = D.pad(small, n, 0)
        for k in range(1, n):
            mid = D.basis_morphism(w, w, _hook_pairing(n, k), ctx)
            a = D.compose_all(lower_right, mid, upper_left)
            term = a + D.mirror(a)
            total = total + term if k % 2 == 0 else total - term
        return total

    return table_for(ctx).get(("jw2n1",), build)


def thick_parameter(ctx: RootContext) -> SignContext:
    return SignContext(ctx.t_sign)


def thick_jw(k: int, ctx: RootContext) -> TLMorphism:
    """JW_k at the scalar t with every strand replaced by an n-cable."""
    if k < 1:
        raise ValueError("thick_jw needs k >= 1")

    def build():
        tctx = thick_parameter(ctx)
        for j in range(2, k + 1):
            if not quantum_integer(j, tctx):
                raise ThickJWNotDefined(j)
        base = jones_wenzl(k, tctx)
        cabled = D.cable(base, ctx.n)
        return D.TLMorphism(cabled.source, cabled.target, ctx,
                            {p: ctx.const(c) for p, c in cabled.terms.items()})

    return table_for(ctx).get(("tjw", k), build)


def hat_size(n: int, k: int) -> int:
    return n - 1 + k * n


def jw_hat_layers(k: int, ctx: RootContext) -> list[TLMorphism]:
    """Bottom-to-top factors whose product is JW_{n-1+kn} (k >= 2)."""
    n = ctx.n
    size = hat_size(n, k)
    big = jw_2n_minus_1(ctx)
    outer = D.pad(big, size - (2 * n - 1), 0)
    below = D.pad(jw_hat(k - 1, ctx), 0, n)
    middle = D.pad(thick_jw(k, ctx), n - 1, 0)
    return [outer, below, middle, below, outer]


def jw_hat(k: int, ctx: RootContext) -> TLMorphism:
    """JW_{n-1+kn}; jw_hat(0) is JW_{n-1} and jw_hat(1) is JW_{2n-1}."""
    if not ctx.is_root:
        raise NotConstructible("jwhat needs a root of unity context")
    if k < 0:
        raise ValueError("jw_hat needs k >= 0")
    if k == 0:
        return jones_wenzl(ctx.n - 1, ctx)
    if k == 1:
        return jw_2n_minus_1(ctx)
    def build():
        outer, below, middle, _, _ = jw_hat_layers(k, ctx)
        # the thick element is small, so grouping around it keeps intermediates sparse
        core = D.compose(D.compose(below, middle), below)
        return D.compose(D.compose(outer, core), outer)

    return table_for(ctx).get(("jwhat", k), build)


# ---------------------------------------------------------------------------
# dispatch


def jw(k: int, ctx: Context = GENERIC) -> TLMorphism:
    """JW_k by whichever construction applies in ctx."""
    if not ctx.is_root:
        return jones_wenzl(k, ctx)
    n = ctx.n
    if k < n:
        return jones_wenzl(k, ctx)
    if k == 2 * n - 1:
        return jw_2n_minus_1(ctx)
    if k >= n - 1 and (k - (n - 1)) % n == 0:
        return jw_hat((k - (n - 1)) // n, ctx)
    first = next(j for j in range(2, k + 1) if not quantum_integer(j, ctx))
    raise QuantumIntegerVanishes(first)


def build_label(label: str, params: tuple, ctx: Context, size: int | None = None) -> TLMorphism:
    if label == "jw":
        return jw(int(params[0]), ctx)
    if label == "jw2n1":
        return jw_2n_minus_1(ctx)
    if label == "jwhat":
        return jw_hat(int(params[0]), ctx)
    if label == "tjw":
        if not ctx.is_root:
            raise NotConstructible("tjw needs a root of unity context")
        return thick_jw(int(params[0]), ctx)
    raise NotConstructible(f"unknown projector label {label!r}")


# ---------------------------------------------------------------------------
# axioms


@dataclass
class AxiomReport:
    size: int
    identity_coefficient_ok: bool
    failing_caps: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.identity_coefficient_ok and not self.failing_caps

    def to_json(self) -> dict:
        return {"size": self.size, "identity_coefficient": self.identity_coefficient_ok,
                "failing_caps": [list(c) for c in self.failing_caps], "ok": self.ok}


def verify_jw_axioms(f: TLMorphism) -> AxiomReport:
    """Identity coefficient 1 and every adjacent cap, top or bottom, kills f."""
    k = f.source
    ctx = f.ctx
    ok_id = f.source == f.target and f.coefficient(D.identity_pairing(k)) == ctx.one
    fails = []
    for i in range(k - 1):
        if not D.compose(f, D.cap(k, i, ctx)).is_zero():
            fails.append(("top", i))
        if not D.compose(D.cup(k, i, ctx), f).is_zero():
            fails.append(("bottom", i))
    return AxiomReport(k, ok_id, fails)


def root(N: int) -> RootContext:
    return derive_root_context(N)


__all__ = [
    "NotConstructible", "QuantumIntegerVanishes", "ThickJWNotDefined", "SignContext", "ProjectorTable",
    "jones_wenzl", "jones_wenzl_by_hook", "jw_2n_minus_1", "thick_jw", "jw_hat", "jw_hat_layers", "jw", "build_label",
    "verify_jw_axioms", "AxiomReport", "hat_size", "table_for", "Cyclotomic",
]
