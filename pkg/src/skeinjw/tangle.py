"""Tangles as slice words, their Kauffman-bracket resolution, threading and cabling."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from . import diagram as D
from .chebyshev import IntPoly, chebyshev_T
from .diagram import TLMorphism
from .scalar import Context, GENERIC


class MalformedWord(ValueError):
    pass


class BoxNotConstructible(ValueError):
    pass


class NotAClosedComponent(ValueError):
    pass


class DanglingGreenEnd(ValueError):
    pass


KINDS = ("id", "cup", "cap", "over", "under", "box")


@dataclass(frozen=True)
class Slice:
    """One horizontal layer.  ``i`` is a position, or the left offset for a box."""

    kind: str
    i: int = 0
    size: int = 0
    label: str = ""
    params: tuple = ()
    morphism: Optional[TLMorphism] = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise MalformedWord(f"unknown slice kind {self.kind!r}")

    def out_width(self, w: int) -> int:
        k = self.kind
        if k == "cup":
            if not 0 <= self.i <= w:
                raise MalformedWord(f"cup at {self.i} on {w} strands")
            return w + 2
        if k == "cap":
            if not 0 <= self.i <= w - 2:
                raise MalformedWord(f"cap at {self.i} on {w} strands")
            return w - 2
        if k in ("over", "under"):
            if not 0 <= self.i <= w - 2:
                raise MalformedWord(f"{k} at {self.i} on {w} strands")
        if k == "box" and not (0 <= self.i and self.i + self.size <= w):
            raise MalformedWord(f"box of size {self.size} at {self.i} on {w} strands")
        return w


def Id() -> Slice:
    return Slice("id")


def Cup(i: int) -> Slice:
    return Slice("cup", i)


def Cap(i: int) -> Slice:
    return Slice("cap", i)


def Over(i: int) -> Slice:
    return Slice("over", i)


def Under(i: int) -> Slice:
    return Slice("under", i)


def Box(offset: int, size: int, label: str = "", params: tuple = (), morphism: TLMorphism | None = None) -> Slice:
    if morphism is not None:
        if morphism.source != morphism.target or morphism.source != size:
            raise MalformedWord(f"box morphism {morphism.signature} does not have size {size}")
    return Slice("box", offset, size, label, tuple(params), morphism)


@dataclass(frozen=True)
class TangleWord:
    """Bottom-to-top list of slices starting from ``bottom`` strands."""

    bottom: int
    slices: tuple[Slice, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "slices", tuple(self.slices))
        self.widths  # validates

    @property
    def widths(self) -> list[int]:
        w = [self.bottom]
        for s in self.slices:
            w.append(s.out_width(w[-1]))
        return w

    @property
    def top(self) -> int:
        return self.widths[-1]

    def then(self, *slices: Slice) -> "TangleWord":
        return TangleWord(self.bottom, self.slices + tuple(slices))

    def __add__(self, other: "TangleWord") -> "TangleWord":
        if self.top != other.bottom:
            raise MalformedWord(f"cannot stack width {other.bottom} on width {self.top}")
        return TangleWord(self.bottom, self.slices + other.slices)

    def shifted(self, left: int, right: int = 0) -> "TangleWord":
        """The same word with extra vertical strands on either side."""
        out = []
        for s in self.slices:
            out.append(Slice(s.kind, s.i + left, s.size, s.label, s.params, s.morphism))
        return TangleWord(self.bottom + left + right, tuple(out))

    def crossing_count(self) -> int:
        return sum(s.kind in ("over", "under") for s in self.slices)

    def mirror(self) -> "TangleWord":
        """Swap every over-crossing for an under-crossing."""
        swap = {"over": "under", "under": "over"}
        return TangleWord(self.bottom, tuple(
            Slice(swap.get(s.kind, s.kind), s.i, s.size, s.label, s.params, s.morphism) for s in self.slices))

    # --- components -------------------------------------------------------
    def _components(self):
        widths = self.widths
        parent: dict = {}

        def find(x):
            while parent.setdefault(x, x) != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

        ends = set()
        for p in range(widths[0]):
            ends.add((0, p))
            find((0, p))
        for p in range(widths[-1]):
            ends.add((len(self.slices), p))
        for s, sl in enumerate(self.slices):
            w = widths[s]
            k, i = sl.kind, sl.i
            for p in range(w):
                find((s, p))
            for p in range(widths[s + 1]):
                find((s + 1, p))
            if k == "id":
                for p in range(w):
                    union((s, p), (s + 1, p))
            elif k == "cup":
                for p in range(w):
                    union((s, p), (s + 1, p if p < i else p + 2))
                union((s + 1, i), (s + 1, i + 1))
            elif k == "cap":
                union((s, i), (s, i + 1))
                for p in range(w):
                    if p < i:
                        union((s, p), (s + 1, p))
                    elif p > i + 1:
                        union((s, p), (s + 1, p - 2))
            elif k in ("over", "under"):
                for p in range(w):
                    if p == i:
                        union((s, p), (s + 1, p + 1))
                    elif p == i + 1:
                        union((s, p), (s + 1, p - 1))
                    else:
                        union((s, p), (s + 1, p))
            else:
                for p in range(w):
                    if i <= p < i + sl.size:
                        ends.add((s, p))
                        ends.add((s + 1, p))
                    else:
                        union((s, p), (s + 1, p))
        comp = {node: find(node) for node in list(parent)}
        open_roots = {comp[x] for x in ends if x in comp}
        return comp, open_roots

    def component_at(self, level: int, pos: int):
        comp, _ = self._components()
        try:
            return comp[(level, pos)]
        except KeyError:
            raise MalformedWord(f"no strand at level {level}, position {pos}") from None

    def closed_components(self) -> list:
        comp, open_roots = self._components()
        return sorted({r for r in comp.values() if r not in open_roots})

    def open_components(self) -> list:
        _, open_roots = self._components()
        return sorted(open_roots)

    def component_ends(self, root) -> list[tuple[str, int, int]]:
        """Where an open component terminates: ('bottom'|'top'|'box', level, pos)."""
        comp, _ = self._components()
        out = []
        for (lvl, p), r in comp.items():
            if r != root:
                continue
            if lvl == 0:
                out.append(("bottom", lvl, p))
            if lvl == len(self.slices):
                out.append(("top", lvl, p))
            if lvl < len(self.slices):
                sl = self.slices[lvl]
                if sl.kind == "box" and sl.i <= p < sl.i + sl.size:
                    out.append(("box", lvl, p))
            if lvl > 0:
                sl = self.slices[lvl - 1]
                if sl.kind == "box" and sl.i <= p < sl.i + sl.size:
                    out.append(("box", lvl, p))
        return sorted(out, key=lambda t: (t[1], t[2], t[0]))

    # --- cabling ----------------------------------------------------------
    def cabled(self, mults: dict) -> "TangleWord":
        """Replace each component r by mults.get(r, 1) parallel copies (0 deletes it)."""
        comp, _ = self._components()
        widths = self.widths

        def mult(level, p):
            return mults.get(comp[(level, p)], 1)

        def start(level, i):
            return sum(mult(level, p) for p in range(i))

        new_bottom = start(0, widths[0])
        out: list[Slice] = []
        for s, sl in enumerate(self.slices):
            k, i = sl.kind, sl.i
            if k == "id":
                continue
            if k == "cup":
                c = mult(s + 1, i)
                i2 = start(s + 1, i)
                out.extend(Cup(i2 + j) for j in range(c))
            elif k == "cap":
                c = mult(s, i)
                i2 = start(s, i)
                out.extend(Cap(i2 + j) for j in range(c - 1, -1, -1))
            elif k in ("over", "under"):
                c, d = mult(s, i), mult(s, i + 1)
                i2 = start(s, i)
                for a in range(c - 1, -1, -1):
                    for b in range(d):
                        out.append(Slice(k, i2 + a + b))
            else:
                i2 = start(s, i)
                size = sum(mult(s, p) for p in range(i, i + sl.size))
                morph = sl.morphism if size == sl.size else None
                if morph is None and not sl.label:
                    raise MalformedWord("cannot resize an unlabelled box")
                out.append(Slice("box", i2, size, sl.label, sl.params, morph))
        return TangleWord(new_bottom, tuple(out))


# ---------------------------------------------------------------------------
# resolution

BoxResolver = Callable[[Slice, Context], TLMorphism]


def default_box_resolver(sl: Slice, ctx: Context) -> TLMorphism:
    if sl.morphism is not None:
        return sl.morphism
    from . import projectors

    try:
        f = projectors.build_label(sl.label, sl.params, ctx, size=sl.size)
    except projectors.NotConstructible as exc:
        raise BoxNotConstructible(str(exc)) from exc
    if f.source != sl.size:
        raise BoxNotConstructible(f"{sl.label}{sl.params} has size {f.source}, box needs {sl.size}")
    return f


def crossing_morphism(kind: str, w: int, i: int, ctx: Context) -> TLMorphism:
    """Kauffman bracket of a single crossing slice."""
    a, b = (ctx.v, ctx.v_power(-1)) if kind == "over" else (ctx.v_power(-1), ctx.v)
    return D.identity(w, ctx).scale(a) + D.e(w, i, ctx).scale(b)


def apply_slice(f: TLMorphism, sl: Slice, ctx: Context, resolver: BoxResolver = default_box_resolver) -> TLMorphism:
    """Stack one slice on top of the running morphism ``f``."""
    w = f.target
    k = sl.kind
    if k == "id":
        return f
    if k == "cup":
        return D.compose(f, D.cup(w + 2, sl.i, ctx))
    if k == "cap":
        return D.compose(f, D.cap(w, sl.i, ctx))
    if k in ("over", "under"):
        a, b = (ctx.v, ctx.v_power(-1)) if k == "over" else (ctx.v_power(-1), ctx.v)
        return f.scale(a) + D.compose(f, D.e(w, sl.i, ctx)).scale(b)
    box = resolver(sl, ctx)
    return D.compose(f, D.pad(box, sl.i, w - sl.i - sl.size))


def resolve(word: TangleWord, ctx: Context = GENERIC, start: TLMorphism | None = None,
            resolver: BoxResolver = default_box_resolver) -> TLMorphism:
    """Resolve every crossing and evaluate loops, slice by slice."""
    f = D.identity(word.bottom, ctx) if start is None else start
    if f.target != word.bottom:
        raise MalformedWord(f"start morphism ends at {f.target}, word starts at {word.bottom}")
    for sl in word.slices:
        f = apply_slice(f, sl, ctx, resolver)
    return f


def thread_many(word: TangleWord, polys: dict, ctx: Context = GENERIC,
                resolver: BoxResolver = default_box_resolver, start: TLMorphism | None = None) -> TLMorphism:
    """Thread polys[r] along each closed component r simultaneously."""
    closed = set(word.closed_components())
    for r in polys:
        if r not in closed:
            raise NotAClosedComponent(f"component {r} has boundary endpoints")
    roots = sorted(polys)
    expansions = [sorted(polys[r].as_dict().items()) for r in roots]
    total = None
    for choice in itertools.product(*expansions):
        coeff = 1
        mults = {}
        for r, (deg, a) in zip(roots, choice):
            coeff *= a
            mults[r] = deg
        term = resolve(word.cabled(mults), ctx, start=start, resolver=resolver).scale(ctx.const(coeff))
        total = term if total is None else total + term
    if total is None:
        s = word.bottom if start is None else start.source
        return D.zero(s, word.top, ctx)
    return total


def thread(word: TangleWord, component, P: IntPoly, ctx: Context = GENERIC,
           resolver: BoxResolver = default_box_resolver) -> TLMorphism:
    """Sum over c of a_c times the word with ``component`` cabled c times, where P = sum a_c x^c."""
    return thread_many(word, {component: P}, ctx, resolver)


def thread_all_closed(word: TangleWord, P: IntPoly, ctx: Context = GENERIC,
                      resolver: BoxResolver = default_box_resolver, start: TLMorphism | None = None) -> TLMorphism:
    return thread_many(word, {r: P for r in word.closed_components()}, ctx, resolver, start)


def unknot_word() -> TangleWord:
    return TangleWord(0, (Cup(0), Cap(0)))


def encircle_word(m: int, mirrored: bool = False) -> TangleWord:
    """A loop around m vertical strands: lower arc passes under, upper arc over."""
    lower, upper = ("under", "over") if not mirrored else ("over", "under")
    slices = [Cup(0)]
    slices += [Slice(lower, p) for p in range(1, m + 1)]
    slices += [Slice(upper, p) for p in range(m)]
    slices.append(Cap(m))
    return TangleWord(m, tuple(slices))


def encircle(m: int, P: IntPoly, ctx: Context = GENERIC, mirrored: bool = False) -> TLMorphism:
    word = encircle_word(m, mirrored)
    loop = word.component_at(1, 0)
    return thread(word, loop, P, ctx)


def cable_crossing_word(left: int, c: int, d: int, right: int = 0, kind: str = "over") -> TangleWord:
    """A c-cable crossing a d-cable (the left cable passes over for kind='over')."""
    slices = []
    for a in range(c - 1, -1, -1):
        for b in range(d):
            slices.append(Slice(kind, left + a + b))
    return TangleWord(left + c + d + right, tuple(slices))


# ---------------------------------------------------------------------------
# green strands


def expand_green(word: TangleWord, green: Iterable[tuple[int, int]], n: int, ctx: Context,
                 absorbers: Iterable[tuple[int, int]] = (), resolver: BoxResolver = default_box_resolver,
                 start: TLMorphism | None = None) -> TLMorphism:
    """Green closed components become T_n-threadings, green arcs become n-cables.

    ``green`` lists (level, position) seeds on green components.  Every green arc
    must end on a box, or at a boundary point listed in ``absorbers``.
    """
    comp, open_roots = word._components()
    absorbers = set(absorbers)
    roots = sorted({comp[(lvl, p)] for lvl, p in green})
    open_mults = {}
    closed_polys = {}
    for r in roots:
        if r in open_roots:
            for where, lvl, p in word.component_ends(r):
                if where != "box" and (lvl, p) not in absorbers:
                    raise DanglingGreenEnd(f"green arc ends at {where} position {p} without a projector")
            open_mults[r] = n
        else:
            closed_polys[r] = chebyshev_T(n)
    cab = word.cabled(open_mults)
    if not closed_polys:
        return resolve(cab, ctx, start=start, resolver=resolver)
    # component roots change after cabling; re-identify closed green components by seeds
    new_comp, _ = cab._components()
    new_closed = {}
    for r, P in closed_polys.items():
        lvl, p = min(node for node, root in comp.items() if root == r)
        shift = sum(open_mults.get(comp[(lvl, x)], 1) for x in range(p))
        new_closed[new_comp[(_cabled_level(word, open_mults, lvl), shift)]] = P
    return thread_many(cab, new_closed, ctx, resolver, start)


def _cabled_level(word: TangleWord, mults: dict, level: int) -> int:
    """Index of the level in word.cabled(mults) corresponding to ``level``."""
    comp, _ = word._components()
    count = 0
    for s in range(level):
        sl = word.slices[s]
        k, i = sl.kind, sl.i
        if k == "id":
            continue
        if k == "cup":
            count += mults.get(comp[(s + 1, i)], 1)
        elif k == "cap":
            count += mults.get(comp[(s, i)], 1)
        elif k in ("over", "under"):
            count += mults.get(comp[(s, i)], 1) * mults.get(comp[(s, i + 1)], 1)
        else:
            count += 1
    return count
