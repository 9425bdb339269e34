"""A small expression language for TL morphisms.

    [2] * id(2) + e(2,0)
    jw(3) ; (id(1) @ cap(3,1))
    q^(1/2) over(2,0) - encircle(1, T(2))

``;`` stacks bottom to top (``f ; g`` is g on top of f), ``@`` places side by
side and binds tighter than ``;``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from . import diagram as D
from . import projectors as P
from .chebyshev import IntPoly, parse_intpoly, quantum_factorial, quantum_integer
from .diagram import TLMorphism
from .scalar import GENERIC, Context
from .tangle import crossing_morphism, encircle


class SkeinSyntaxError(SyntaxError):
    """Malformed source; ``line`` and ``column`` are 1-based."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class ElaborationError(ValueError):
    """The expression parsed but does not denote a morphism."""


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Scalar:
    kind: str  # "rational", "qhalf", "qint", "qfact"
    value: Fraction | int


@dataclass(frozen=True)
class Atom:
    name: str
    args: tuple[int, ...] = ()


@dataclass(frozen=True)
class Cable:
    body: "Expr"
    copies: int


@dataclass(frozen=True)
class Encircle:
    m: int
    poly: IntPoly


@dataclass(frozen=True)
class Tensor:
    parts: tuple["Expr", ...]


@dataclass(frozen=True)
class Compose:
    parts: tuple["Expr", ...]


@dataclass(frozen=True)
class Scaled:
    scalar: Scalar
    body: "Expr"


@dataclass(frozen=True)
class Sum:
    terms: tuple[tuple[int, "Expr"], ...]


Expr = Union[Atom, Cable, Encircle, Tensor, Compose, Scaled, Sum]

_ARITY = {"id": 1, "cup": 2, "cap": 2, "over": 2, "under": 2, "e": 2, "jw": 1, "jwhat": 1, "tjw": 1, "jw2n1": 0}


# ---------------------------------------------------------------------------
# parsing


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.pos = 0

    def error(self, message: str, pos: int | None = None):
        pos = self.pos if pos is None else pos
        line = self.src.count("\n", 0, pos) + 1
        column = pos - (self.src.rfind("\n", 0, pos) + 1) + 1
        raise SkeinSyntaxError(message, line, column)

    def skip(self):
        while self.pos < len(self.src) and self.src[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.src[self.pos] if self.pos < len(self.src) else ""

    def accept(self, text: str) -> bool:
        self.skip()
        if self.src.startswith(text, self.pos):
            self.pos += len(text)
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            found = self.peek() or "end of input"
            self.error(f"expected {text!r}, found {found!r}")

    def integer(self, signed: bool = False) -> int:
        self.skip()
        start = self.pos
        if signed and self.peek() == "-":
            self.pos += 1
        while self.pos < len(self.src) and self.src[self.pos].isdigit():
            self.pos += 1
        text = self.src[start:self.pos]
        if not text.lstrip("-"):
            self.pos = start
            self.error("expected an integer")
        return int(text)

    def word(self) -> str:
        self.skip()
        start = self.pos
        while self.pos < len(self.src) and (self.src[self.pos].isalnum() or self.src[self.pos] == "_"):
            self.pos += 1
        return self.src[start:self.pos]

    # expr := sum
    def parse(self) -> Expr:
        expr = self.sum()
        self.skip()
        if self.pos < len(self.src):
            self.error(f"unexpected {self.src[self.pos]!r}")
        return expr

    def sum(self) -> Expr:
        lead = -1 if self.accept("-") else 1
        terms = [(lead, self.prod())]
        while True:
            if self.accept("+"):
                terms.append((1, self.prod()))
            elif self.accept("-"):
                terms.append((-1, self.prod()))
            else:
                break
        return terms[0][1] if terms == [(1, terms[0][1])] else Sum(tuple(terms))

    def prod(self) -> Expr:
        scalar = self.scalar()
        if scalar is not None:
            self.accept("*")
        body = self.composition()
        return body if scalar is None else Scaled(scalar, body)

    def composition(self) -> Expr:
        parts = [self.tensor()]
        while self.accept(";"):
            parts.append(self.tensor())
        return parts[0] if len(parts) == 1 else Compose(tuple(parts))

    def tensor(self) -> Expr:
        parts = [self.factor()]
        while self.accept("@"):
            parts.append(self.factor())
        return parts[0] if len(parts) == 1 else Tensor(tuple(parts))

    def scalar(self) -> Scalar | None:
        c = self.peek()
        if c.isdigit():
            num = self.integer()
            if self.accept("/"):
                den = self.integer()
                if den == 0:
                    self.error("zero denominator")
                return Scalar("rational", Fraction(num, den))
            return Scalar("rational", Fraction(num))
        if c == "[":
            self.pos += 1
            k = self.integer()
            self.expect("]")
            if self.accept("!"):
                return Scalar("qfact", k)
            return Scalar("qint", k)
        if c == "q" and self.src.startswith("^", self._after_space(self.pos + 1)):
            self.pos += 1
            self.expect("^")
            self.expect("(")
            k = self.integer(signed=True)
            self.expect("/")
            self.expect("2")
            self.expect(")")
            return Scalar("qhalf", k)
        return None

    def _after_space(self, pos: int) -> int:
        while pos < len(self.src) and self.src[pos].isspace():
            pos += 1
        return pos

    def factor(self) -> Expr:
        if self.accept("("):
            inner = self.sum()
            self.expect(")")
            return inner
        start = self.pos
        name = self.word()
        if not name:
            found = self.peek() or "end of input"
            self.error(f"expected a diagram, found {found!r}")
        if name == "cable":
            self.expect("(")
            body = self.sum()
            self.expect(",")
            c = self.integer()
            self.expect(")")
            return Cable(body, c)
        if name == "encircle":
            self.expect("(")
            m = self.integer()
            self.expect(",")
            return Encircle(m, self.poly_literal())
        if name not in _ARITY:
            self.error(f"unknown atom {name!r}", start)
        arity = _ARITY[name]
        if arity == 0:
            return Atom(name)
        self.expect("(")
        args = [self.integer()]
        for _ in range(arity - 1):
            self.expect(",")
            args.append(self.integer())
        self.expect(")")
        return Atom(name, tuple(args))

    def poly_literal(self) -> IntPoly:
        """Raw text up to the matching ')' is a polynomial literal."""
        self.skip()
        start = self.pos
        depth = 0
        while self.pos < len(self.src):
            c = self.src[self.pos]
            if c == "(":
                depth += 1
            elif c == ")":
                if depth == 0:
                    break
                depth -= 1
            self.pos += 1
        if self.pos >= len(self.src):
            self.error("expected ')' after polynomial")
        text = self.src[start:self.pos]
        try:
            poly = parse_intpoly(text)
        except ValueError as exc:
            self.error(f"bad polynomial: {exc}", start)
        self.pos += 1
        return poly


def parse(source: str) -> Expr:
    return _Parser(source).parse()


# ---------------------------------------------------------------------------
# evaluation


def scalar_value(s: Scalar, ctx: Context):
    if s.kind == "rational":
        return ctx.const(s.value)
    if s.kind == "qhalf":
        return ctx.v_power(s.value)
    if s.kind == "qint":
        return quantum_integer(s.value, ctx)
    return quantum_factorial(s.value, ctx)


def _atom(a: Atom, ctx: Context) -> TLMorphism:
    name, args = a.name, a.args
    if name == "id":
        return D.identity(args[0], ctx)
    if name in ("cup", "cap", "e", "over", "under"):
        k, i = args
        # cup(k,i) makes k strands, cap(k,i) takes k strands
        if i + 2 > k:
            raise ElaborationError(f"{name}({k},{i}): position out of range")
        if name == "cup":
            return D.cup(k, i, ctx)
        if name == "cap":
            return D.cap(k, i, ctx)
        if name == "e":
            return D.e(k, i, ctx)
        return crossing_morphism(name, k, i, ctx)
    if name == "jw":
        return P.jw(args[0], ctx)
    if name == "jw2n1":
        return P.jw_2n_minus_1(ctx)
    if name == "jwhat":
        return P.jw_hat(args[0], ctx)
    if not ctx.is_root:
        raise P.NotConstructible("tjw needs a root of unity context")
    return P.thick_jw(args[0], ctx)


def evaluate(expr: Expr, ctx: Context = GENERIC) -> TLMorphism:
    """Elaborate an AST; signature and constructibility problems raise ElaborationError."""
    try:
        return _eval(expr, ctx)
    except ElaborationError:
        raise
    except (D.SignatureMismatch, P.NotConstructible) as exc:
        raise ElaborationError(f"{type(exc).__name__}: {exc}") from exc


def _eval(expr: Expr, ctx: Context) -> TLMorphism:
    if isinstance(expr, Atom):
        return _atom(expr, ctx)
    if isinstance(expr, Cable):
        if expr.copies < 1:
            raise ElaborationError("cable needs at least one copy")
        return D.cable(_eval(expr.body, ctx), expr.copies)
    if isinstance(expr, Encircle):
        return encircle(expr.m, expr.poly, ctx)
    if isinstance(expr, Tensor):
        return D.tensor_all(*(_eval(p, ctx) for p in expr.parts))
    if isinstance(expr, Compose):
        return D.compose_all(*(_eval(p, ctx) for p in expr.parts))
    if isinstance(expr, Scaled):
        return _eval(expr.body, ctx).scale(scalar_value(expr.scalar, ctx))
    total = None
    for sign, term in expr.terms:
        f = _eval(term, ctx)
        if total is None:
            total = f if sign > 0 else -f
        elif f.signature != total.signature:
            raise ElaborationError(f"cannot add {f.signature} to {total.signature}")
        else:
            total = total + f if sign > 0 else total - f
    return total


def evaluate_source(source: str, ctx: Context = GENERIC) -> TLMorphism:
    return evaluate(parse(source), ctx)
