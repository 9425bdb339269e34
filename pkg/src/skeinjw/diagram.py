"""Planar matchings and the crossing-free Temperley-Lieb category.

Boundary points of a (k, l) matching are indexed bottom 0..k-1 left to right,
then top k..k+l-1 left to right.  Composition ``compose(f, g)`` stacks ``g``
on top of ``f`` (diagrams read bottom to top).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from .scalar import Context, CycScalar, GENERIC, scalar_from_json

Pairing = tuple[int, ...]


class SignatureMismatch(ValueError):
    pass


class NotPlanar(ValueError):
    pass


# ---------------------------------------------------------------------------
# matchings


def cyclic_order(k: int, l: int) -> list[int]:
    """Boundary indices in cyclic order: bottom left to right, top right to left."""
    return list(range(k)) + list(range(k + l - 1, k - 1, -1))


def is_planar(pairing: Pairing, k: int) -> bool:
    l = len(pairing) - k
    pos = {p: r for r, p in enumerate(cyclic_order(k, l))}
    stack = []
    for p in cyclic_order(k, l):
        partner = pairing[p]
        if pos[partner] > pos[p]:
            stack.append(p)
        elif not stack or stack.pop() != partner:
            return False
    return True


@dataclass(frozen=True)
class PlanarMatching:
    bottom: int
    top: int
    pairing: Pairing

    def __post_init__(self):
        n = self.bottom + self.top
        if len(self.pairing) != n or n % 2:
            raise NotPlanar(f"pairing of length {len(self.pairing)} does not fit ({self.bottom},{self.top})")
        for i, j in enumerate(self.pairing):
            if not 0 <= j < n or j == i or self.pairing[j] != i:
                raise NotPlanar(f"not a fixed-point-free involution: {self.pairing}")
        if not is_planar(self.pairing, self.bottom):
            raise NotPlanar(f"chords cross: {self.pairing}")

    def chords(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j in enumerate(self.pairing) if i < j]


def enumerate_matchings(k: int, l: int) -> list[Pairing]:
    """All planar matchings of signature (k, l), in a fixed order."""
    if (k + l) % 2:
        return []
    order = cyclic_order(k, l)

    def rec(lo: int, hi: int) -> Iterator[list[tuple[int, int]]]:
        if lo >= hi:
            yield []
            return
        for mid in range(lo + 1, hi, 2):
            for inner in rec(lo + 1, mid):
                for outer in rec(mid + 1, hi):
                    yield [(lo, mid)] + inner + outer

    out = []
    for chords in rec(0, k + l):
        p = [0] * (k + l)
        for a, b in chords:
            p[order[a]] = order[b]
            p[order[b]] = order[a]
        out.append(tuple(p))
    return out


def identity_pairing(k: int) -> Pairing:
    return tuple(range(k, 2 * k)) + tuple(range(k))


@lru_cache(maxsize=1 << 20)
def glue(a: Pairing, k: int, b: Pairing, l: int) -> tuple[Pairing, int]:
    """Stack b (l -> m) on a (k -> l); return the pairing and the number of closed loops."""
    m = len(b) - l
    res = [-1] * (k + m)
    seen = [False] * l
    for start in range(k + m):
        if res[start] >= 0:
            continue
        if start < k:
            on_a, p = True, a[start]
        else:
            on_a, p = False, b[l + start - k]
        while True:
            if on_a:
                if p < k:
                    end = p
                    break
                j = p - k
                seen[j] = True
                p = b[j]
                on_a = False
            else:
                if p >= l:
                    end = k + p - l
                    break
                seen[p] = True
                p = a[k + p]
                on_a = True
        res[start] = end
        res[end] = start
    loops = 0
    for j in range(l):
        if seen[j]:
            continue
        loops += 1
        cur = j
        while not seen[cur]:
            seen[cur] = True
            # middle point cur: go through b to another middle point, then through a
            nxt = b[cur]
            seen[nxt] = True
            cur = a[k + nxt] - k
    return tuple(res), loops


def glue_oracle(a: Pairing, k: int, b: Pairing, l: int) -> tuple[Pairing, int]:
    """Independent connectivity computation by explicit graph traversal."""
    m = len(b) - l
    # vertices: ("bot", i), ("mid", j), ("top", i)
    adj: dict[tuple, list[tuple]] = defaultdict(list)

    def va(p):
        return ("bot", p) if p < k else ("mid", p - k)

    def vb(p):
        return ("mid", p) if p < l else ("top", p - l)

    for i, j in enumerate(a):
        adj[va(i)].append(va(j))
    for i, j in enumerate(b):
        adj[vb(i)].append(vb(j))
    res = [-1] * (k + m)
    visited = set()

    def component(v):
        comp, todo = [], [v]
        while todo:
            u = todo.pop()
            if u in visited:
                continue
            visited.add(u)
            comp.append(u)
            todo.extend(adj[u])
        return comp

    def index(v):
        return v[1] if v[0] == "bot" else k + v[1]

    loops = 0
    for v in [("bot", i) for i in range(k)] + [("top", i) for i in range(m)] + [("mid", j) for j in range(l)]:
        if v in visited:
            continue
        ends = [u for u in component(v) if u[0] != "mid"]
        if not ends:
            loops += 1
        else:
            x, y = ends
            res[index(x)] = index(y)
            res[index(y)] = index(x)
    return tuple(res), loops


# ---------------------------------------------------------------------------
# morphisms


class TLMorphism:
    """Linear combination of planar matchings of a fixed signature."""

    __slots__ = ("source", "target", "ctx", "terms")

    def __init__(self, source: int, target: int, ctx: Context = GENERIC,
                 terms: dict[Pairing, CycScalar] | None = None):
        self.source = source
        self.target = target
        self.ctx = ctx
        self.terms = {p: c for p, c in (terms or {}).items() if c}

    # --- basic queries ----------------------------------------------------
    @property
    def signature(self) -> tuple[int, int]:
        return (self.source, self.target)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, pairing: Pairing) -> CycScalar:
        return self.terms.get(tuple(pairing), self.ctx.zero)

    def matchings(self) -> list[PlanarMatching]:
        return [PlanarMatching(self.source, self.target, p) for p in self.terms]

    def __len__(self):
        return len(self.terms)

    def _check(self, other: "TLMorphism"):
        if self.signature != other.signature:
            raise SignatureMismatch(f"{self.signature} vs {other.signature}")

    # --- vector space -----------------------------------------------------
    def __add__(self, other: "TLMorphism") -> "TLMorphism":
        self._check(other)
        out = dict(self.terms)
        for p, c in other.terms.items():
            out[p] = out[p] + c if p in out else c
        return TLMorphism(self.source, self.target, self.ctx, out)

    def __neg__(self) -> "TLMorphism":
        return TLMorphism(self.source, self.target, self.ctx, {p: -c for p, c in self.terms.items()})

    def __sub__(self, other: "TLMorphism") -> "TLMorphism":
        return self + (-other)

    def scale(self, s) -> "TLMorphism":
        if not s:
            return TLMorphism(self.source, self.target, self.ctx)
        return TLMorphism(self.source, self.target, self.ctx, {p: c * s for p, c in self.terms.items()})

    def __rmul__(self, s) -> "TLMorphism":
        return self.scale(s)

    def __eq__(self, other):
        if not isinstance(other, TLMorphism):
            return NotImplemented
        return self.signature == other.signature and self.terms == other.terms

    __hash__ = None

    def __repr__(self):
        return f"TLMorphism({self.source}->{self.target}, {len(self.terms)} terms)"

    def __str__(self):
        if not self.terms:
            return f"0 : {self.source}->{self.target}"
        return "\n".join(f"({c}) {list(p)}" for p, c in sorted(self.terms.items()))

    # --- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "terms": [{"pairing": list(p), "coeff": c.to_json()} for p, c in sorted(self.terms.items())],
        }

    @classmethod
    def from_json(cls, data: dict, ctx: Context = GENERIC) -> "TLMorphism":
        terms = {tuple(t["pairing"]): scalar_from_json(t["coeff"]) for t in data["terms"]}
        return cls(int(data["source"]), int(data["target"]), ctx, terms)


def basis_morphism(k: int, l: int, pairing: Pairing, ctx: Context = GENERIC, coeff=None) -> TLMorphism:
    return TLMorphism(k, l, ctx, {tuple(pairing): ctx.one if coeff is None else coeff})


def zero(k: int, l: int, ctx: Context = GENERIC) -> TLMorphism:
    return TLMorphism(k, l, ctx)


def identity(k: int, ctx: Context = GENERIC) -> TLMorphism:
    return basis_morphism(k, k, identity_pairing(k), ctx)


def cap(k: int, i: int, ctx: Context = GENERIC) -> TLMorphism:
    """k -> k-2, joining bottom points i and i+1."""
    if not 0 <= i <= k - 2:
        raise IndexError(f"cap({k},{i}) out of range")
    l = k - 2
    p = [0] * (k + l)
    p[i], p[i + 1] = i + 1, i
    for j in range(k):
        if j < i:
            p[j], p[k + j] = k + j, j
        elif j > i + 1:
            p[j], p[k + j - 2] = k + j - 2, j
    return basis_morphism(k, l, p, ctx)


def cup(k: int, i: int, ctx: Context = GENERIC) -> TLMorphism:
    """k-2 -> k, inserting an adjacent pair at top positions i, i+1."""
    return flip(cap(k, i, ctx))


def e(k: int, i: int, ctx: Context = GENERIC) -> TLMorphism:
    return compose(cap(k, i, ctx), cup(k, i, ctx))


# ---------------------------------------------------------------------------
# composition and friends


def _delta_powers(ctx: Context, upto: int) -> list:
    out = [ctx.one]
    d = ctx.delta
    for _ in range(upto):
        out.append(out[-1] * d)
    return out


def compose(f: TLMorphism, g: TLMorphism) -> TLMorphism:
    """``g`` stacked on top of ``f``: a morphism f.source -> g.target."""
    if f.target != g.source:
        raise SignatureMismatch(f"cannot stack {g.signature} on {f.signature}")
    ctx = f.ctx if f.ctx.is_root else g.ctx
    k, l = f.source, f.target
    # Scalar multiplication is expensive; count occurrences of
    # (result, coeff of f, coeff of g, loops) and multiply once per bucket.
    fvals: dict = {}
    gvals: dict = {}
    fterms = [(p, fvals.setdefault(c, len(fvals))) for p, c in f.terms.items()]
    gterms = [(p, gvals.setdefault(c, len(gvals))) for p, c in g.terms.items()]
    counts: dict = defaultdict(int)
    maxloops = 0
    for a, ia in fterms:
        for b, ib in gterms:
            r, loops = glue(a, k, b, l)
            counts[(r, ia, ib, loops)] += 1
            if loops > maxloops:
                maxloops = loops
    flist = list(fvals)
    glist = list(gvals)
    dpow = _delta_powers(ctx, maxloops)
    prods: dict = {}
    out: dict = {}
    for (r, ia, ib, loops), cnt in counts.items():
        key = (ia, ib, loops)
        val = prods.get(key)
        if val is None:
            val = prods[key] = flist[ia] * glist[ib] * dpow[loops]
        if cnt != 1:
            val = val * cnt
        out[r] = out[r] + val if r in out else val
    return TLMorphism(k, g.target, ctx, out)


def compose_all(*fs: TLMorphism) -> TLMorphism:
    """Compose bottom to top: compose_all(a, b, c) = c on b on a."""
    result = fs[0]
    for f in fs[1:]:
        result = compose(result, f)
    return result


def _shift_tensor(a: Pairing, k: int, b: Pairing, kk: int) -> Pairing:
    l = len(a) - k
    ll = len(b) - kk
    src = k + kk

    def ma(p):
        return p if p < k else src + (p - k)

    def mb(p):
        return k + p if p < kk else src + l + (p - kk)

    res = [0] * (src + l + ll)
    for i, j in enumerate(a):
        res[ma(i)] = ma(j)
    for i, j in enumerate(b):
        res[mb(i)] = mb(j)
    return tuple(res)


def tensor(f: TLMorphism, g: TLMorphism) -> TLMorphism:
    """``g`` placed to the right of ``f``."""
    ctx = f.ctx if f.ctx.is_root else g.ctx
    out: dict = {}
    for a, ca in f.terms.items():
        for b, cb in g.terms.items():
            r = _shift_tensor(a, f.source, b, g.source)
            val = ca * cb
            out[r] = out[r] + val if r in out else val
    return TLMorphism(f.source + g.source, f.target + g.target, ctx, out)


def tensor_all(*fs: TLMorphism) -> TLMorphism:
    result = fs[0]
    for f in fs[1:]:
        result = tensor(result, f)
    return result


def pad(f: TLMorphism, left: int, right: int) -> TLMorphism:
    """Id_left (x) f (x) Id_right, without scalar multiplication."""
    if not left and not right:
        return f
    L = identity_pairing(left)
    R = identity_pairing(right)
    out = {}
    for p, c in f.terms.items():
        out[_shift_tensor(_shift_tensor(L, left, p, f.source), left + f.source, R, right)] = c
    return TLMorphism(left + f.source + right, left + f.target + right, f.ctx, out)


def _trace_pairing(a: Pairing, k: int, r: int) -> tuple[Pairing, int]:
    kk = k - r
    # closure connects top k+(k-1-s) with bottom k-1-s for s < r
    def closure(p):
        if kk <= p < k:
            return k + p
        if p >= k + kk:
            return p - k
        return None

    def rename(p):
        return p if p < kk else kk + (p - k)

    res = [-1] * (2 * kk)
    used = [False] * (2 * k)
    for start in [i for i in range(kk)] + [k + i for i in range(kk)]:
        if res[rename(start)] >= 0:
            continue
        used[start] = True
        p = a[start]
        while True:
            used[p] = True
            c = closure(p)
            if c is None:
                break
            used[c] = True
            p = a[c]
        res[rename(start)] = rename(p)
        res[rename(p)] = rename(start)
    loops = 0
    for s in range(kk, k):
        if used[s]:
            continue
        loops += 1
        p = s
        while not used[p]:
            used[p] = True
            q = a[p]
            used[q] = True
            p = closure(q)
    return tuple(res), loops


def partial_trace_right(f: TLMorphism, r: int) -> TLMorphism:
    """Close the r rightmost strands around the right side."""
    if f.source != f.target:
        raise SignatureMismatch("partial trace needs an endomorphism")
    if not 0 <= r <= f.source:
        raise ValueError(f"cannot trace {r} strands of {f.source}")
    ctx = f.ctx
    dpow = _delta_powers(ctx, r)
    out: dict = {}
    for a, c in f.terms.items():
        p, loops = _trace_pairing(a, f.source, r)
        val = c * dpow[loops] if loops else c
        out[p] = out[p] + val if p in out else val
    return TLMorphism(f.source - r, f.source - r, ctx, out)


def annulus_closure(f: TLMorphism) -> dict[int, CycScalar]:
    """Close every strand through an annulus; returns {degree of x: coefficient}.

    Contractible loops evaluate to the loop value, core loops contribute x.
    """
    if f.source != f.target:
        raise SignatureMismatch("annulus closure needs an endomorphism")
    k = f.source
    ctx = f.ctx
    out: dict[int, CycScalar] = {}
    for a, c in f.terms.items():
        used = [False] * (2 * k)
        core = contractible = 0
        for s in range(2 * k):
            if used[s]:
                continue
            winding = 0
            p = s
            while not used[p]:
                used[p] = True
                q = a[p]
                used[q] = True
                # closure arc from q to its partner, signed by direction
                if q >= k:
                    winding += 1
                    p = q - k
                else:
                    winding -= 1
                    p = q + k
            if winding:
                core += 1
            else:
                contractible += 1
        val = c * ctx.delta ** contractible if contractible else c
        out[core] = out[core] + val if core in out else val
    return {d: c for d, c in sorted(out.items()) if c}


# ---------------------------------------------------------------------------
# symmetries and cabling


def _mirror_pairing(a: Pairing, k: int) -> Pairing:
    l = len(a) - k

    def m(p):
        return k - 1 - p if p < k else k + (l - 1 - (p - k))

    res = [0] * len(a)
    for i, j in enumerate(a):
        res[m(i)] = m(j)
    return tuple(res)


def mirror(f: TLMorphism) -> TLMorphism:
    """Left-right reflection."""
    return TLMorphism(f.source, f.target, f.ctx, {_mirror_pairing(p, f.source): c for p, c in f.terms.items()})


def _flip_pairing(a: Pairing, k: int) -> Pairing:
    l = len(a) - k

    def m(p):
        return l + p if p < k else p - k

    res = [0] * len(a)
    for i, j in enumerate(a):
        res[m(i)] = m(j)
    return tuple(res)


def flip(f: TLMorphism) -> TLMorphism:
    """Top-bottom reflection (signature reversed)."""
    return TLMorphism(f.target, f.source, f.ctx, {_flip_pairing(p, f.source): c for p, c in f.terms.items()})


def cable_pairing(a: Pairing, k: int, c: int) -> Pairing:

    def pos(p, r):
        # copy of boundary point p at cyclic rank r
        if p < k:
            return p * c + r
        return k * c + (p - k) * c + (c - 1 - r)

    res = [0] * (c * len(a))
    for p, q in enumerate(a):
        for r in range(c):
            res[pos(p, r)] = pos(q, c - 1 - r)
    return tuple(res)


def cable(f: TLMorphism, c: int) -> TLMorphism:
    if c < 1:
        raise ValueError("cable needs c >= 1")
    if c == 1:
        return f
    return TLMorphism(f.source * c, f.target * c, f.ctx,
                      {cable_pairing(p, f.source, c): v for p, v in f.terms.items()})


def random_morphism(rng, k: int, l: int, ctx: Context = GENERIC, terms: int = 3) -> TLMorphism:
    """Small random integer combination of matchings (used by tests)."""
    basis = enumerate_matchings(k, l)
    out: dict = {}
    for _ in range(terms):
        p = rng.choice(basis)
        out[p] = out.get(p, ctx.zero) + ctx.const(rng.randint(-3, 3))
    return TLMorphism(k, l, ctx, out)


def from_terms(k: int, l: int, items: Iterable[tuple[Pairing, CycScalar]], ctx: Context = GENERIC) -> TLMorphism:
    out: dict = {}
    for p, c in items:
        p = tuple(p)
        out[p] = out[p] + c if p in out else c
    return TLMorphism(k, l, ctx, out)
