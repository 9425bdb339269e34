from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from skeinjw import diagram as D
from skeinjw.chebyshev import chebyshev_T, quantum_integer
from skeinjw.dsl import Compose, ElaborationError, Scaled, SkeinSyntaxError, Sum, evaluate, evaluate_source, parse
from skeinjw.projectors import jones_wenzl, jw_2n_minus_1, jw_hat, thick_jw
from skeinjw.scalar import GENERIC, derive_root_context
from skeinjw.tangle import TangleWord, Over, encircle, resolve


def test_composition_root():
    ast = parse("jw(3) ; (id(1) @ cap(2,0))")
    assert isinstance(ast, Compose)


def test_sum_with_scaled_child():
    ast = parse("[2] * id(2) + e(2,0)")
    assert isinstance(ast, Sum)
    assert isinstance(ast.terms[0][1], Scaled)


def test_unclosed_call():
    with pytest.raises(SkeinSyntaxError) as info:
        parse("jw(")
    assert (info.value.line, info.value.column) == (1, 4)


def test_error_positions_on_later_lines():
    with pytest.raises(SkeinSyntaxError) as info:
        parse("id(2)\n  ; bogus(1)")
    assert (info.value.line, info.value.column) == (2, 5)


@pytest.mark.parametrize("src", ["", "id(2) +", "cup(2)", "e(2,0) e(2,0)", "encircle(1, x^)", "1/0 id(1)"])
def test_syntax_errors(src):
    with pytest.raises(SkeinSyntaxError):
        parse(src)


def test_evaluation_matches_builders():
    q2 = quantum_integer(2, GENERIC)
    assert evaluate_source("[2] * id(2) + e(2,0)") == D.identity(2).scale(q2) + D.e(2, 0)
    assert evaluate_source("jw(3) ; (id(1) @ cap(2,0))") == D.compose(jones_wenzl(3), D.pad(D.cap(2, 0), 1, 0))
    assert evaluate_source("cup(2,0) ; cap(2,0)") == D.identity(0).scale(GENERIC.delta)
    assert evaluate_source("over(2,0)") == resolve(TangleWord(2, (Over(0),)))
    assert evaluate_source("cable(e(2,0), 2)") == D.cable(D.e(2, 0), 2)
    assert evaluate_source("encircle(1, T(2))") == encircle(1, chebyshev_T(2))
    assert evaluate_source("q^(-3/2) id(1)") == D.identity(1).scale(GENERIC.v_power(-3))
    assert evaluate_source("-id(1) - 1/2 id(1)") == D.identity(1).scale(GENERIC.const(Fraction(-3, 2)))
    assert evaluate_source("[3]! id(0)") == D.identity(0).scale(
        quantum_integer(2, GENERIC) * quantum_integer(3, GENERIC))


def test_root_atoms():
    ctx = derive_root_context(8)
    assert evaluate_source("jw2n1", ctx) == jw_2n_minus_1(ctx)
    assert evaluate_source("jwhat(2)", ctx) == jw_hat(2, ctx)
    assert evaluate_source("tjw(2)", ctx) == thick_jw(2, ctx)


@pytest.mark.parametrize("src", ["id(2) ; id(3)", "id(2) + id(3)", "cap(2,1)", "jw2n1", "tjw(2)"])
def test_elaboration_errors(src):
    with pytest.raises(ElaborationError):
        evaluate(parse(src))


@given(st.lists(st.sampled_from(["id(2)", "e(2,0)", "over(2,0)", "under(2,0)", "[2] id(2)"]), min_size=1, max_size=4))
def test_composition_is_compose_all(parts):
    src = " ; ".join(f"({p})" for p in parts)
    assert evaluate_source(src) == D.compose_all(*(evaluate_source(p) for p in parts))


@given(st.lists(st.sampled_from(["id(1)", "e(2,0)", "cup(2,0)", "over(2,0)"]), min_size=1, max_size=3))
def test_tensor_is_tensor_all(parts):
    src = " @ ".join(parts)
    assert evaluate_source(src) == D.tensor_all(*(evaluate_source(p) for p in parts))
