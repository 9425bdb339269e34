from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest
import sympy

from skeinjw import diagram as D
from skeinjw.chebyshev import quantum_integer
from skeinjw.identities import absorption, crossing_absorption, jw_crossing, root_consistency, telescoping, triangle
from skeinjw.projectors import (
    NotConstructible, ProjectorTable, QuantumIntegerVanishes, jones_wenzl, jones_wenzl_by_hook, jw,
    jw_2n_minus_1, jw_hat, thick_jw, verify_jw_axioms,
)
from skeinjw.scalar import GENERIC, derive_root_context

v = sympy.symbols("v")


def to_sympy(c):
    num = sum(sympy.Rational(x.numerator, x.denominator) * v**i for i, x in enumerate(c.num))
    den = sum(sympy.Rational(x.numerator, x.denominator) * v**i for i, x in enumerate(c.den))
    return v**c.shift * num / den


def jw_by_linear_algebra(k):
    """Solve identity coefficient 1 plus uncappability for the coefficients directly."""
    basis = D.enumerate_matchings(k, k)
    cs = sympy.symbols(f"c0:{len(basis)}")
    loop = -v**2 - v**-2
    eqs = [cs[basis.index(D.identity_pairing(k))] - 1]
    for i in range(k - 1):
        for gen, flip in ((D.cap(k, i), False), (D.cup(k, i), True)):
            (g,) = gen.terms
            acc = {}
            for c, p in zip(cs, basis):
                glued, loops = D.glue(g, k - 2, p, k) if flip else D.glue(p, k, g, k)
                acc[glued] = acc.get(glued, 0) + c * loop**loops
            eqs.extend(acc.values())
    sol = sympy.solve(eqs, cs, dict=True)[0]
    return {p: sympy.simplify(sol[c]) for p, c in zip(basis, cs)}


@pytest.mark.parametrize("k", [2, 3, 4])
def test_jw_matches_linear_algebra(k):
    expected = jw_by_linear_algebra(k)
    got = jones_wenzl(k)
    for p, c in expected.items():
        assert sympy.simplify(to_sympy(got.coefficient(p)) - c) == 0


def test_jw_examples():
    assert jones_wenzl(1) == D.identity(1)
    assert jones_wenzl(2) == D.identity(2) + D.e(2, 0).scale(quantum_integer(2, GENERIC).inverse())
    with pytest.raises(QuantumIntegerVanishes) as info:
        jones_wenzl(2, derive_root_context(8))
    assert info.value.j == 2


@pytest.mark.parametrize("k", range(0, 6))
def test_hook_and_unfolded_recursions_agree(k):
    assert jones_wenzl(k) == jones_wenzl_by_hook(k)


@pytest.mark.parametrize("k", range(0, 7))
def test_generic_jw_axioms_and_idempotence(k):
    f = jones_wenzl(k)
    assert verify_jw_axioms(f).ok
    assert D.compose(f, f) == f


@pytest.mark.parametrize("N", [8, 12, 20])
def test_jw2n1_axioms(N):
    ctx = derive_root_context(N)
    report = verify_jw_axioms(jw_2n_minus_1(ctx))
    assert report.ok, report.to_json()


def test_jw2n1_small_cases():
    assert jw_2n_minus_1(derive_root_context(2)) == D.identity(1, derive_root_context(2))
    f = jw_2n_minus_1(derive_root_context(12))
    assert f.coefficient(D.identity_pairing(5)) == f.ctx.one


def test_verify_jw_axioms_examples():
    assert verify_jw_axioms(D.identity(1)).ok
    report = verify_jw_axioms(D.identity(2))
    assert not report.ok and report.identity_coefficient_ok
    assert report.failing_caps == [("top", 0), ("bottom", 0)]


def test_thick_jw_examples():
    ctx = derive_root_context(8)
    assert thick_jw(1, ctx) == D.identity(2, ctx)
    expected = D.identity(4, ctx) + D.cable(D.e(2, 0, ctx), 2).scale(ctx.const(Fraction(1, 2)))
    assert thick_jw(2, ctx) == expected
    ctx12 = derive_root_context(12)
    # [2] at t = -1 is -2
    expected = D.identity(6, ctx12) - D.cable(D.e(2, 0, ctx12), 3).scale(ctx12.const(Fraction(1, 2)))
    assert thick_jw(2, ctx12) == expected


@pytest.mark.parametrize("N, k", [(8, 2), (8, 3), (12, 2)])
def test_jw_hat_axioms(N, k):
    assert verify_jw_axioms(jw_hat(k, derive_root_context(N))).ok


def test_jw_dispatch():
    ctx = derive_root_context(12)
    assert jw(2, ctx) == jones_wenzl(2, ctx)
    assert jw(5, ctx) is jw_2n_minus_1(ctx)
    assert jw_hat(1, ctx) is jw_2n_minus_1(ctx)
    assert jw_hat(0, ctx) == jones_wenzl(2, ctx)
    assert jw(8, ctx) is jw_hat(2, ctx)
    for bad in (3, 4, 6):
        with pytest.raises(QuantumIntegerVanishes):
            jw(bad, ctx)
    with pytest.raises(NotConstructible):
        jw_2n_minus_1(GENERIC)


def test_table_concurrent_builds_agree():
    table = ProjectorTable(GENERIC)
    with ThreadPoolExecutor(4) as pool:
        results = list(pool.map(lambda _: table.get(("x",), lambda: jones_wenzl_by_hook(4)), range(8)))
    assert all(r == results[0] for r in results)
    assert table.labels() == [("x",)]


@pytest.mark.parametrize("ctx, a", [(GENERIC, 4), (GENERIC, 5), (derive_root_context(8), 3),
                                    (derive_root_context(12), 5)], ids=str)
def test_absorption(ctx, a):
    for b in range(a + 1):
        if ctx.is_root and b >= ctx.n and b != 2 * ctx.n - 1:
            continue
        for offset in range(a - b + 1):
            for below in (True, False):
                lhs, rhs = absorption(ctx, a, b, offset, below)
                assert lhs == rhs


@pytest.mark.parametrize("N", [8, 12])
def test_trace_in_root_mode(N):
    ctx = derive_root_context(N)
    for m in range(1, ctx.n):
        ratio = -quantum_integer(m + 1, ctx) / quantum_integer(m, ctx)
        assert D.partial_trace_right(jones_wenzl(m, ctx), 1) == jones_wenzl(m - 1, ctx).scale(ratio)


TRI_CTXS = [GENERIC, derive_root_context(8), derive_root_context(12), derive_root_context(16)]


@pytest.mark.parametrize("ctx", TRI_CTXS, ids=str)
def test_triangle_and_telescoping(ctx):
    sizes = [ctx.n] if ctx.is_root else [2, 3, 4]
    for n in sizes:
        for m in range(n):
            lhs, rhs = triangle(ctx, n, m)
            assert lhs == rhs, (n, m)
        for m in range(n - 1):
            lhs, rhs = telescoping(ctx, n, m)
            assert lhs == rhs, (n, m)


@pytest.mark.parametrize("N", [8, 12])
def test_crossing_absorption(N):
    ctx = derive_root_context(N)
    M = 2 * ctx.n - 1
    for k in range(1, 4):
        for l in range(1, 4):
            if k + l <= M:
                for kind in ("over", "under"):
                    lhs, rhs = crossing_absorption(ctx, k, l, M, kind=kind)
                    assert lhs == rhs, (k, l, kind)


@pytest.mark.parametrize("N", [8, 12])
def test_jw_crossing(N):
    ctx = derive_root_context(N)
    for m in range(1, ctx.n):
        lhs, rhs = jw_crossing(ctx, m, 2 * ctx.n - 1)
        assert lhs == rhs
    with pytest.raises(ValueError):
        jw_crossing(ctx, 0)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_jw_crossing_generic(m):
    lhs, rhs = jw_crossing(GENERIC, m)
    assert lhs == rhs


@pytest.mark.parametrize("N", [8, 12])
def test_root_consistency(N):
    lhs, rhs = root_consistency(derive_root_context(N))
    assert lhs == rhs
