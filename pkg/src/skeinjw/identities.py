"""Both sides of every identity the suite checks, as TL morphisms.

Each builder returns ``(lhs, rhs)``; the identity holds iff they are equal.
"""

from __future__ import annotations

from fractions import Fraction

from . import diagram as D
from .chebyshev import chebyshev_T, quantum_integer
from .diagram import TLMorphism
from .projectors import (hat_size, jones_wenzl, jw, jw_2n_minus_1, jw_hat,
                         thick_jw, thick_parameter)
from .scalar import Context, RootContext
from .tangle import (Box, Cap, Cup, Over, Slice, TangleWord, Under, cable_crossing_word, encircle,
                     resolve, thread_all_closed)


def nested_cups(m: int, ctx: Context) -> TLMorphism:
    """0 -> 2m: m nested cups."""
    f = D.identity(0, ctx)
    for j in range(m):
        f = D.compose(f, D.cup(2 * j + 2, j, ctx))
    return f


def nested_caps(m: int, ctx: Context) -> TLMorphism:
    return D.flip(nested_cups(m, ctx))


# ---------------------------------------------------------------------------
# JW toolkit


def absorption(ctx: Context, a: int, b: int, offset: int, below: bool) -> tuple[TLMorphism, TLMorphism]:
    big = jw(a, ctx)
    small = D.pad(jw(b, ctx), offset, a - b - offset)
    lhs = D.compose(small, big) if below else D.compose(big, small)
    return lhs, big


def idempotence(f: TLMorphism) -> tuple[TLMorphism, TLMorphism]:
    return D.compose(f, f), f


def jw_trace(ctx: Context, m: int) -> tuple[TLMorphism, TLMorphism]:
    ratio = -quantum_integer(m + 1, ctx) / quantum_integer(m, ctx)
    return D.partial_trace_right(jw(m, ctx), 1), jw(m - 1, ctx).scale(ratio)


def _blank_box(ctx: Context, n: int, need: int) -> TLMorphism:
    """Smallest convenient projector on at least ``need`` strands."""
    if not ctx.is_root:
        return jones_wenzl(need, ctx)
    if need < ctx.n:
        return jones_wenzl(need, ctx)
    return jw_2n_minus_1(ctx)


def _triangle_lhs(ctx: Context, n: int, m: int, box: TLMorphism) -> TLMorphism:
    """JW_{n-1} with its m rightmost bottom strands bent up into ``box``
    next to its m rightmost top strands."""
    a = n - 1 - m
    extra = box.source - 2 * m
    return D.compose_all(
        D.pad(nested_cups(m, ctx), a, extra),
        D.pad(jones_wenzl(n - 1, ctx), 0, m + extra),
        D.pad(box, a, 0),
    )


def _staircase(ctx: Context, n: int, m: int, low: TLMorphism, start: int, box: TLMorphism) -> TLMorphism:
    """Bent strands, then ``low`` on the left, then e_start ... e_{n-3}, then JW_{n-2}, then the box."""
    a = n - 1 - m
    extra = box.source - 2 * m
    w = n - 1 + m + extra
    layers = [D.pad(nested_cups(m, ctx), a, extra), D.pad(low, 0, w - low.source)]
    layers += [D.e(w, i, ctx) for i in range(start, n - 2)]
    layers.append(D.pad(jones_wenzl(n - 2, ctx), 0, w - (n - 2)))
    layers.append(D.pad(box, a, 0))
    return D.compose_all(*layers)


def triangle(ctx: Context, n: int, m: int) -> tuple[TLMorphism, TLMorphism]:
    """Bending m strands of JW_{n-1} into an uncappable box leaves
    [n-m-1]/[n-1] times JW_{n-m-1} followed by a staircase of turnbacks."""
    box = _blank_box(ctx, n, 2 * m)
    lhs = _triangle_lhs(ctx, n, m, box)
    a = n - 1 - m
    if m == 0:
        return lhs, D.pad(jones_wenzl(n - 1, ctx), 0, box.source)
    if a == 0:
        return lhs, D.zero(lhs.source, lhs.target, ctx)
    coeff = quantum_integer(n - m - 1, ctx) / quantum_integer(n - 1, ctx)
    rhs = _staircase(ctx, n, m, jones_wenzl(a, ctx), a - 1, box).scale(coeff)
    return lhs, rhs


def telescoping(ctx: Context, n: int, m: int) -> tuple[TLMorphism, TLMorphism]:
    """The triangle followed by one step of the recursion on JW_{n-m-1}."""
    if not 0 <= m <= n - 2:
        raise ValueError("telescoping needs 0 <= m <= n-2")
    box = _blank_box(ctx, n, 2 * m)
    lhs = _triangle_lhs(ctx, n, m, box)
    a = n - 1 - m
    qn1 = quantum_integer(n - 1, ctx)
    low = D.pad(jones_wenzl(a - 1, ctx), 0, 1)
    if m == 0:
        # no bent strands: this is the recursion for JW_{n-1} itself
        first = D.pad(low, 0, box.source)
        hook = D.compose_all(low, D.e(a, a - 2, ctx), low) if a >= 2 else D.zero(a, a, ctx)
        second = D.pad(hook, 0, box.source)
    else:
        first = _staircase(ctx, n, m, low, a - 1, box)
        second = _staircase(ctx, n, m, low, a - 2, box) if a >= 2 else D.zero(lhs.source, lhs.target, ctx)
    c1 = quantum_integer(n - m - 1, ctx) / qn1
    c2 = quantum_integer(n - m - 2, ctx) / qn1 if n - m - 2 >= 0 else ctx.zero
    return lhs, first.scale(c1) + second.scale(c2)


def crossing_absorption(ctx: Context, k: int, l: int, M: int, offset: int = 0,
                        kind: str = "over", box_above: bool = True) -> tuple[TLMorphism, TLMorphism]:
    """A k-cable crossing an l-cable next to JW_M picks up q^{+-kl/2}."""
    box = jw(M, ctx)
    word = cable_crossing_word(offset, k, l, M - offset - k - l, kind)
    if box_above:
        lhs = D.compose(resolve(word, ctx), box)
    else:
        lhs = resolve(word, ctx, start=box)
    sign = 1 if kind == "over" else -1
    return lhs, box.scale(ctx.v_power(sign * k * l))


def jw_crossing(ctx: Context, m: int, M: int | None = None) -> tuple[TLMorphism, TLMorphism]:
    """One strand passing over an m-cable that runs between two projectors."""
    if m < 1:
        raise ValueError("jw_crossing needs a cable of at least one strand")
    M = m if M is None else M
    extra = M - m
    width = extra + 1 + m + extra
    s = extra
    bottom = D.pad(jw(M, ctx), s + 1, 0)
    top = D.pad(jw(M, ctx), 0, extra + 1)
    word = TangleWord(width, tuple(Over(s + j) for j in range(m)))
    lhs = D.compose(resolve(word, ctx, start=bottom), top)
    # turnback: s caps with the first cable strand, the cable shifts left,
    # and a cup forms at the top between the last cable slot and s's exit
    p = list(D.identity_pairing(width))

    def join(x, y):
        p[x], p[y] = y, x

    join(s, s + 1)
    join(width + s + m - 1, width + s + m)
    for j in range(1, m):
        join(s + j + 1, width + s + j - 1)
    turn = D.basis_morphism(width, width, tuple(p), ctx)
    rhs = (D.compose(bottom, top).scale(ctx.v_power(m))
           + D.compose_all(bottom, turn, top).scale(ctx.v_power(-m)))
    return lhs, rhs


def root_consistency(ctx: RootContext) -> tuple[TLMorphism, TLMorphism]:
    """Generic JW_{2n-1}, with its coefficients reduced and specialized at the root."""
    from .scalar import GENERIC

    gen = jones_wenzl(2 * ctx.n - 1, GENERIC)
    specialized = {p: c.evaluate(ctx.v) for p, c in gen.terms.items()}
    return D.TLMorphism(gen.source, gen.target, ctx, specialized), jw_2n_minus_1(ctx)


# ---------------------------------------------------------------------------
# Steinberg identities


def steinberg_second(ctx: RootContext, M: int) -> tuple[TLMorphism, TLMorphism]:
    n = ctx.n
    box = jw(M, ctx)
    lhs = D.tensor(jones_wenzl(n - 1, ctx), box)
    side = D.pad(box, n - 1, 0)
    rhs = D.compose_all(side, D.pad(jw_2n_minus_1(ctx), 0, M - n), side)
    return lhs, rhs


def steinberg_first_word(ctx: RootContext, m: int, mirrored: bool = False) -> TangleWord:
    """JW_{2n-1} with its rightmost n strands closed in a loop around m strands."""
    n = ctx.n
    lower, upper = ("under", "over") if not mirrored else ("over", "under")
    b = n - 1
    slices: list[Slice] = [Cup(b + j) for j in range(n)]
    # the right half of the cup moves right past the m strands
    for a in range(n - 1, -1, -1):
        for c in range(m):
            slices.append(Slice(lower, b + n + a + c))
    slices.append(Box(0, 2 * n - 1, "jw2n1", morphism=jw_2n_minus_1(ctx)))
    for a in range(n - 1, -1, -1):
        for c in range(m):
            slices.append(Slice(upper, b + a + c))
    slices += [Cap(b + m + j) for j in range(n - 1, -1, -1)]
    return TangleWord(b + m, tuple(slices))


def steinberg_first(ctx: RootContext, m: int, mirrored: bool = False) -> tuple[TLMorphism, TLMorphism]:
    n = ctx.n
    lhs = D.tensor(jones_wenzl(n - 1, ctx), encircle(m, chebyshev_T(n), ctx, mirrored))
    rhs = resolve(steinberg_first_word(ctx, m, mirrored), ctx)
    return lhs, rhs


def ncross(ctx: RootContext, M: int) -> tuple[TLMorphism, TLMorphism]:
    """Two n-cables crossing between JW_M (x) JW_M sandwiches."""
    n = ctx.n
    box = jw(M, ctx)
    lower_left = D.pad(box, 0, M)
    lower_right = D.pad(box, M, 0)
    B = D.compose(lower_left, lower_right)
    word = cable_crossing_word(M - n, n, n, M - n, "over")
    crossed = resolve(word, ctx, start=B)
    lhs = D.compose_all(crossed, lower_left, lower_right)
    turn = D.pad(D.cable(D.e(2, 0, ctx), n), M - n, M - n)
    th = ctx.t_half
    rhs = B.scale(th) + D.compose_all(B, turn, lower_left, lower_right).scale(th.inverse())
    return lhs, rhs


def frobenius_loop(ctx: RootContext) -> tuple[TLMorphism, TLMorphism]:
    from .tangle import thread, unknot_word

    word = unknot_word()
    lhs = thread(word, word.closed_components()[0], chebyshev_T(ctx.n), ctx)
    return lhs, D.identity(0, ctx).scale(-ctx.t - ctx.t.inverse())


def frobenius_instances(ctx: RootContext) -> dict[str, tuple[TangleWord, int]]:
    """Closed loops around a JW_{n-1} bundle, with the index of a designated crossing."""
    b = ctx.n - 1
    bundle = [Box(0, b, "jw", (b,), morphism=jones_wenzl(b, ctx))] if b else []
    # loop around the bundle, then a kink
    around = [Cup(0)] + [Under(p) for p in range(1, b + 1)] + [Over(p) for p in range(b)]
    kink = TangleWord(b, tuple(bundle + around + [Over(b), Cap(b)]))
    # loop around the bundle clasped with a small loop
    clasp_slices = bundle + around + [Cup(b + 1), Under(b + 2), Over(b + 1), Cap(b + 2), Cap(b)]
    clasp = TangleWord(b, tuple(clasp_slices))
    return {
        "kink": (kink, len(bundle) + len(around)),
        "clasp": (clasp, len(bundle) + len(around) + 1),
    }


def _replace_crossing(word: TangleWord, index: int, smoothing: str) -> TangleWord:
    sl = word.slices[index]
    if smoothing == "id":
        new = ()
    else:
        new = (Cap(sl.i), Cup(sl.i))
    return TangleWord(word.bottom, word.slices[:index] + new + word.slices[index + 1:])


def frobenius_crossing(ctx: RootContext, word: TangleWord, index: int) -> tuple[TLMorphism, TLMorphism]:
    """T_n threading respects the crossing relation at parameter t."""
    P = chebyshev_T(ctx.n)
    kind = word.slices[index].kind
    lhs = thread_all_closed(word, P, ctx)
    a = thread_all_closed(_replace_crossing(word, index, "id"), P, ctx)
    b = thread_all_closed(_replace_crossing(word, index, "e"), P, ctx)
    th = ctx.t_half
    if kind == "over":
        rhs = a.scale(th) + b.scale(th.inverse())
    else:
        rhs = a.scale(th.inverse()) + b.scale(th)
    return lhs, rhs


# ---------------------------------------------------------------------------
# the JW_{n-1+kn} tower


def thick_ratio(ctx: RootContext, k: int) -> Fraction:
    tctx = thick_parameter(ctx)
    return -quantum_integer(k, tctx) / quantum_integer(k - 1, tctx)


def green_trace(ctx: RootContext, k: int) -> tuple[TLMorphism, TLMorphism]:
    lhs = D.partial_trace_right(jw_hat(k - 1, ctx), ctx.n)
    return lhs, jw_hat(k - 2, ctx).scale(ctx.const(thick_ratio(ctx, k)))


def green_closure_boxes(ctx: RootContext, k: int) -> list[TLMorphism]:
    """Box j (1-based) covers green cable j and the n-1 strands to its left."""
    n = ctx.n
    size = hat_size(n, k)
    big = jw_2n_minus_1(ctx)
    return [D.pad(big, (j - 1) * n, size - (j - 1) * n - (2 * n - 1)) for j in range(1, k + 1)]


def close_green(ctx: RootContext, k: int, f: TLMorphism) -> TLMorphism:
    # nearest the element sits box 1 on both sides; apply boxes outward one at
    # a time so the intermediate stays the size of f
    for box in green_closure_boxes(ctx, k):
        f = D.compose(D.compose(box, f), box)
    return f


def other_steinberg(ctx: RootContext, k: int) -> tuple[TLMorphism, TLMorphism]:
    lhs = D.tensor(jones_wenzl(ctx.n - 1, ctx), thick_jw(k, ctx))
    return close_green(ctx, k, lhs), close_green(ctx, k, jw_hat(k, ctx))


def other_steinberg_absorption(ctx: RootContext, k: int) -> list[tuple[str, TLMorphism, TLMorphism]]:
    hat = jw_hat(k, ctx)
    elem = D.tensor(jones_wenzl(ctx.n - 1, ctx), thick_jw(k, ctx))
    return [("hat_after", D.compose(elem, hat), hat), ("hat_before", D.compose(hat, elem), hat)]

