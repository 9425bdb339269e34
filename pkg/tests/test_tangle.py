import itertools
import random

import pytest
from hypothesis import given, strategies as st

from skeinjw import diagram as D
from skeinjw.chebyshev import IntPoly, X, chebyshev_T, parse_intpoly
from skeinjw.projectors import jw_2n_minus_1
from skeinjw.scalar import GENERIC, derive_root_context
from skeinjw.tangle import (
    Box, BoxNotConstructible, Cap, Cup, DanglingGreenEnd, MalformedWord, NotAClosedComponent, Over, Slice,
    TangleWord, Under, cable_crossing_word, encircle, encircle_word, expand_green, resolve, thread, unknot_word,
)

v = GENERIC.v
delta = GENERIC.delta
CTXS = [GENERIC, derive_root_context(8), derive_root_context(12)]


def state_sum(word: TangleWord, ctx):
    """Brute-force Kauffman state sum: pick a smoothing for every crossing, then compose."""
    crossings = [j for j, s in enumerate(word.slices) if s.kind in ("over", "under")]
    total = None
    for states in itertools.product((0, 1), repeat=len(crossings)):
        choice = dict(zip(crossings, states))
        f, w, coeff = D.identity(word.bottom, ctx), word.bottom, ctx.one
        for j, s in enumerate(word.slices):
            if s.kind == "cup":
                g = D.cup(w + 2, s.i, ctx)
            elif s.kind == "cap":
                g = D.cap(w, s.i, ctx)
            elif j in choice:
                g = D.e(w, s.i, ctx) if choice[j] else D.identity(w, ctx)
                # over: +1/2 on the identity smoothing, under: the reverse
                sign = 1 if s.kind == "over" else -1
                coeff = coeff * ctx.v_power(sign if choice[j] == 0 else -sign)
            else:
                continue
            f = D.compose(f, g)
            w = g.target
        term = f.scale(coeff)
        total = term if total is None else total + term
    return total


def test_single_over():
    assert resolve(TangleWord(2, (Over(0),))) == D.identity(2).scale(v) + D.e(2, 0).scale(v.inverse())
    assert resolve(TangleWord(2, (Under(0),))) == D.identity(2).scale(v.inverse()) + D.e(2, 0).scale(v)


@pytest.mark.parametrize("ctx", CTXS, ids=str)
def test_reidemeister_two(ctx):
    assert resolve(TangleWord(2, (Over(0), Under(0))), ctx) == D.identity(2, ctx)
    assert resolve(TangleWord(2, (Under(0), Over(0))), ctx) == D.identity(2, ctx)


@pytest.mark.parametrize("ctx", CTXS, ids=str)
@pytest.mark.parametrize("kind", [Over, Under])
def test_reidemeister_three(ctx, kind):
    a = TangleWord(3, (kind(0), kind(1), kind(0)))
    b = TangleWord(3, (kind(1), kind(0), kind(1)))
    assert resolve(a, ctx) == resolve(b, ctx)


def kink(kind):
    return TangleWord(1, (Cup(1), kind(0), Cap(1)))


def test_kinks():
    factors = {resolve(kink(Over)).coefficient(D.identity_pairing(1)),
               resolve(kink(Under)).coefficient(D.identity_pairing(1))}
    assert factors == {-v ** 3, -(v ** 3).inverse()}
    assert len(resolve(kink(Over))) == 1


def random_host(rng, width):
    """A random crossing/cup/cap word keeping the width between 1 and 4."""
    slices, w = [], width
    for _ in range(rng.randint(1, 4)):
        options = ["over", "under"] if w >= 2 else []
        if w <= 3:
            options.append("cup")
        if w >= 3:
            options.append("cap")
        kind = rng.choice(options)
        if kind == "cup":
            slices.append(Cup(rng.randint(0, w)))
            w += 2
        else:
            i = rng.randint(0, w - 2)
            slices.append(Slice(kind, i) if kind != "cap" else Cap(i))
            w = w - 2 if kind == "cap" else w
    return slices, w


@given(st.integers(0, 10**9))
def test_moves_inside_random_hosts(seed):
    rng = random.Random(seed)
    width = rng.randint(2, 3)
    below, w = random_host(rng, width)
    while w < 3:
        below.append(Cup(0))
        w += 2
    above, _ = random_host(rng, w)
    i = rng.randint(0, w - 2)
    j = rng.randint(0, w - 3)
    k = rng.choice([Over, Under])
    other = Under if k is Over else Over

    def word(middle):
        return TangleWord(width, tuple(below) + tuple(middle) + tuple(above))

    plain = resolve(word(()))
    assert resolve(word((k(i), other(i)))) == plain
    assert resolve(word((k(j), k(j + 1), k(j)))) == resolve(word((k(j + 1), k(j), k(j + 1))))
    # kink on strand 0 of the middle layer
    kinked = resolve(word((Cup(1), k(0), Cap(1))))
    factor = -v ** 3 if k is Over else -(v ** 3).inverse()
    assert kinked == plain.scale(factor)


@given(st.integers(0, 10**9), st.sampled_from(CTXS[:2]))
def test_resolve_matches_state_sum(seed, ctx):
    rng = random.Random(seed)
    width = rng.randint(2, 3)
    slices, _ = random_host(rng, width)
    word = TangleWord(width, tuple(slices))
    assert resolve(word, ctx) == state_sum(word, ctx)


def test_malformed():
    with pytest.raises(MalformedWord):
        TangleWord(1, (Over(0),))
    with pytest.raises(MalformedWord):
        TangleWord(2, (Cap(1),))
    with pytest.raises(MalformedWord):
        TangleWord(2, ()) + TangleWord(3, ())


def test_box_not_constructible():
    with pytest.raises(BoxNotConstructible):
        resolve(TangleWord(2, (Box(0, 2, "jw", (2,)),)), derive_root_context(8))


def test_thread_unknot():
    word = unknot_word()
    loop = word.closed_components()[0]
    assert thread(word, loop, X) == D.identity(0).scale(delta)
    assert thread(word, loop, parse_intpoly("x^2")) == D.identity(0).scale(delta * delta)


@pytest.mark.parametrize("N", [8, 12, 20])
def test_thread_unknot_T_n(N):
    ctx = derive_root_context(N)
    word = unknot_word()
    got = thread(word, word.closed_components()[0], chebyshev_T(ctx.n), ctx)
    assert got == D.identity(0, ctx).scale(-ctx.t - ctx.t.inverse())


def test_thread_requires_closed_component():
    word = encircle_word(1)
    with pytest.raises(NotAClosedComponent):
        thread(word, word.component_at(0, 0), X)


def test_encircle_examples():
    ctx = derive_root_context(12)
    assert encircle(0, chebyshev_T(ctx.n), ctx) == D.identity(0, ctx).scale(-ctx.t - ctx.t.inverse())
    word = encircle_word(1)
    assert encircle(1, X) == state_sum(word, GENERIC)
    # an unlinked-looking loop around a strand is still -q^2-q^-2 on it
    assert encircle(1, X) == D.identity(1).scale(-GENERIC.q_power(2) - GENERIC.q_power(-2))


@given(st.integers(0, 3), st.dictionaries(st.integers(0, 3), st.integers(-3, 3), max_size=3),
       st.dictionaries(st.integers(0, 3), st.integers(-3, 3), max_size=3), st.booleans())
def test_encircle_linear(m, p, q, mirrored):
    P, Q = IntPoly.from_dict(p), IntPoly.from_dict(q)
    lhs = encircle(m, P + Q, mirrored=mirrored)
    assert lhs == encircle(m, P, mirrored=mirrored) + encircle(m, Q, mirrored=mirrored)


@pytest.mark.parametrize("N", [8, 12])
def test_threading_commutes_with_annulus_closure(N):
    # the core of the annulus is the closure of one strand; threading it by T_n gives T_n(x)
    ctx = derive_root_context(N)
    P = chebyshev_T(ctx.n)
    closed = {}
    for d, a in P.coeffs:
        for deg, c in D.annulus_closure(D.identity(d, ctx)).items():
            closed[deg] = closed.get(deg, ctx.zero) + c * a
    assert {d: c for d, c in closed.items() if c} == {d: ctx.const(a) for d, a in P.coeffs}


@pytest.mark.parametrize("N", [8, 12])
def test_green_strand_is_a_cable(N):
    ctx = derive_root_context(N)
    n = ctx.n
    word = TangleWord(2, (Over(0),))
    got = expand_green(word, [(0, 0)], n, ctx, absorbers=[(0, 0), (1, 1)])
    assert got == resolve(cable_crossing_word(0, n, 1), ctx)
    straight = expand_green(TangleWord(1, ()), [(0, 0)], n, ctx, absorbers=[(0, 0)])
    assert straight == D.cable(D.identity(1, ctx), n)


@pytest.mark.parametrize("N", [8, 12])
def test_green_between_boxes(N):
    ctx = derive_root_context(N)
    w = 2 * ctx.n - 1
    big = jw_2n_minus_1(ctx)
    boxed = TangleWord(w, (Box(0, w, "jw2n1"), Box(0, w, "jw2n1")))
    assert expand_green(boxed, [], ctx.n, ctx) == D.compose(big, big) == big


def test_dangling_green_end():
    word = TangleWord(2, (Over(0),))
    with pytest.raises(DanglingGreenEnd):
        expand_green(word, [(0, 0)], 2, derive_root_context(8))


@pytest.mark.parametrize("N", [8, 12])
def test_green_loop(N):
    ctx = derive_root_context(N)
    got = expand_green(unknot_word(), [(1, 0)], ctx.n, ctx)
    assert got == D.identity(0, ctx).scale(-ctx.t - ctx.t.inverse())
