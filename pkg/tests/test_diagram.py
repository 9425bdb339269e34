import random

import pytest
import sympy
from hypothesis import given, strategies as st

from skeinjw import diagram as D
from skeinjw.chebyshev import chebyshev_S
from skeinjw.projectors import jones_wenzl
from skeinjw.scalar import GENERIC, derive_root_context

from oracles import components_oracle

delta = GENERIC.delta


def test_identity_examples():
    assert D.identity(0).terms == {(): GENERIC.one}
    assert D.identity(2).terms == {(2, 3, 0, 1): GENERIC.one}


def test_cap_and_loop():
    assert D.cap(2, 0).terms == {(1, 0): GENERIC.one}
    assert D.compose(D.cup(2, 0), D.cap(2, 0)) == D.identity(0).scale(delta)
    assert D.compose(D.cap(2, 0), D.cup(2, 0)) == D.e(2, 0)


@pytest.mark.parametrize("k, i", [(2, 0), (3, 1), (4, 1), (5, 3)])
def test_e_squared(k, i):
    e = D.e(k, i)
    assert D.compose(e, e) == e.scale(delta)


def test_generator_ranges():
    with pytest.raises(IndexError):
        D.cap(2, 1)
    with pytest.raises(IndexError):
        D.cup(3, 2)


def test_compose_signature_mismatch():
    with pytest.raises(D.SignatureMismatch):
        D.compose(D.identity(2), D.identity(3))
    with pytest.raises(D.SignatureMismatch):
        D.identity(2) + D.identity(3)


def test_tensor_examples():
    assert D.tensor(D.identity(1), D.identity(1)) == D.identity(2)
    f = D.e(3, 1)
    assert D.tensor(f, D.identity(0)) == f


@pytest.mark.parametrize("k, catalan", [(k, sympy.catalan(k)) for k in range(9)])
def test_catalan_counts(k, catalan):
    ms = D.enumerate_matchings(k, k)
    assert len(ms) == len(set(ms)) == catalan
    assert all(D.is_planar(p, k) for p in ms)


def test_odd_signature_is_empty():
    assert D.enumerate_matchings(2, 1) == []


def test_planar_matching_validation():
    with pytest.raises(D.NotPlanar):
        D.PlanarMatching(2, 2, (3, 2, 1, 0))
    with pytest.raises(D.NotPlanar):
        D.PlanarMatching(2, 0, (0, 1))


def test_glue_agrees_with_oracle_500_pairs():
    rng = random.Random(20240601)
    for _ in range(500):
        k, l, m = rng.randint(0, 5), rng.randint(0, 6), rng.randint(0, 5)
        if (k + l) % 2:
            l += 1
        if (l + m) % 2:
            m += 1
        a = rng.choice(D.enumerate_matchings(k, l))
        b = rng.choice(D.enumerate_matchings(l, m))
        assert D.glue(a, k, b, l) == components_oracle(a, k, b, l)
        assert D.glue_oracle(a, k, b, l) == components_oracle(a, k, b, l)


seeds = st.integers(0, 2**32 - 1)


def small_morphisms(seed, *sizes, ctx=GENERIC):
    rng = random.Random(seed)
    return [D.random_morphism(rng, a, b, ctx) for a, b in zip(sizes, sizes[1:])]


@given(seeds, st.sampled_from([(2, 2, 4, 2), (3, 1, 3, 3), (4, 2, 2, 4), (3, 3, 3, 3)]))
def test_associativity(seed, sizes):
    f, g, h = small_morphisms(seed, *sizes)
    assert D.compose(D.compose(f, g), h) == D.compose(f, D.compose(g, h))


@given(seeds)
def test_identity_law(seed):
    (f,) = small_morphisms(seed, 3, 3)
    assert D.compose(D.identity(3), f) == f == D.compose(f, D.identity(3))


@given(seeds, st.sampled_from([8, 12]))
def test_interchange(seed, N):
    ctx = derive_root_context(N)
    f, f2 = small_morphisms(seed, 2, 2, 2, ctx=ctx)
    g, g2 = small_morphisms(seed + 1, 1, 3, 1, ctx=ctx)
    lhs = D.compose(D.tensor(f, g), D.tensor(f2, g2))
    assert lhs == D.tensor(D.compose(f, f2), D.compose(g, g2))


@given(seeds, st.integers(1, 3))
def test_cable_functorial(seed, c):
    # each closed loop becomes c loops, so loops pick up an extra delta^(c-1)
    rng = random.Random(seed)
    k, l, m = rng.choice([(2, 2, 2), (3, 1, 3), (2, 4, 2), (4, 2, 0)])
    a = rng.choice(D.enumerate_matchings(k, l))
    b = rng.choice(D.enumerate_matchings(l, m))
    glued, loops = D.glue(a, k, b, l)
    lhs = D.compose(D.cable(D.basis_morphism(k, l, a), c), D.cable(D.basis_morphism(l, m, b), c))
    assert lhs == D.cable(D.basis_morphism(k, m, glued), c).scale(delta ** (c * loops))


@given(seeds, st.integers(1, 3))
def test_cable_functorial_without_loops(seed, c):
    f, g = small_morphisms(seed, 1, 3, 3)
    if all(D.glue(a, 1, b, 3)[1] == 0 for a in f.terms for b in g.terms):
        assert D.cable(D.compose(f, g), c) == D.compose(D.cable(f, c), D.cable(g, c))


def test_cable_examples():
    assert D.cable(D.identity(1), 3) == D.identity(3)
    assert D.cable(D.cap(2, 0), 2).terms == {(3, 2, 1, 0): GENERIC.one}
    ce = D.cable(D.e(2, 0), 2)
    assert D.compose(ce, ce) == ce.scale(delta * delta)


def test_partial_trace_examples():
    assert D.partial_trace_right(D.identity(1), 1) == D.identity(0).scale(delta)
    assert D.partial_trace_right(D.e(2, 0), 2) == D.identity(0).scale(delta)


@pytest.mark.parametrize("m", range(1, 7))
def test_jw_trace_ratio(m):
    from skeinjw.chebyshev import quantum_integer as qi
    ratio = -qi(m + 1, GENERIC) / qi(m, GENERIC)
    assert D.partial_trace_right(jones_wenzl(m), 1) == jones_wenzl(m - 1).scale(ratio)


def test_annulus_examples():
    assert D.annulus_closure(D.identity(1)) == {1: GENERIC.one}
    assert D.annulus_closure(D.e(2, 0)) == {0: delta}
    assert D.annulus_closure(D.e(3, 0)) == {1: delta}


@pytest.mark.parametrize("m", range(0, 6))
def test_annulus_of_jw_is_S(m):
    closure = D.annulus_closure(jones_wenzl(m))
    expected = {d: GENERIC.const(c) for d, c in chebyshev_S(m).coeffs}
    assert {d: c for d, c in closure.items() if c} == expected


@given(seeds)
def test_mirror_and_flip_are_involutions(seed):
    (f,) = small_morphisms(seed, 3, 5)
    assert D.mirror(D.mirror(f)) == f
    assert D.flip(D.flip(f)) == f


@given(seeds)
def test_json_roundtrip(seed):
    ctx = derive_root_context(12)
    (f,) = small_morphisms(seed, 2, 4, ctx=ctx)
    assert D.TLMorphism.from_json(D.to_json(f) if hasattr(D, "to_json") else f.to_json(), ctx) == f
