"""Quantum integers and the Chebyshev polynomials T_k, S_k."""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass, field
from fractions import Fraction

from .scalar import Context, CycScalar


@dataclass(frozen=True)
class IntPoly:
    """Polynomial in x with integer coefficients, sparse and canonical."""

    coeffs: tuple[tuple[int, int], ...] = field(default=())

    @classmethod
    def from_dict(cls, terms: dict[int, int]) -> "IntPoly":
        return cls(tuple(sorted((d, int(c)) for d, c in terms.items() if c != 0)))

    @classmethod
    def x_power(cls, d: int, c: int = 1) -> "IntPoly":
        return cls.from_dict({d: c})

    def as_dict(self) -> dict[int, int]:
        return dict(self.coeffs)

    @property
    def degree(self) -> int:
        return self.coeffs[-1][0] if self.coeffs else -1

    def __add__(self, other: "IntPoly") -> "IntPoly":
        out = self.as_dict()
        for d, c in other.coeffs:
            out[d] = out.get(d, 0) + c
        return IntPoly.from_dict(out)

    def __neg__(self) -> "IntPoly":
        return IntPoly(tuple((d, -c) for d, c in self.coeffs))

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + (-other)

    def __mul__(self, other) -> "IntPoly":
        if isinstance(other, int):
            return IntPoly.from_dict({d: c * other for d, c in self.coeffs})
        out: dict[int, int] = {}
        for d1, c1 in self.coeffs:
            for d2, c2 in other.coeffs:
                out[d1 + d2] = out.get(d1 + d2, 0) + c1 * c2
        return IntPoly.from_dict(out)

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {"coeffs": {str(d): c for d, c in self.coeffs}}

    @classmethod
    def from_json(cls, data: dict) -> "IntPoly":
        return cls.from_dict({int(d): int(c) for d, c in data["coeffs"].items()})

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        out = ""
        for d, c in reversed(self.coeffs):
            mono = "" if d == 0 else ("x" if d == 1 else f"x^{d}")
            mag = abs(c)
            body = (str(mag) if (mag != 1 or not mono) else "") + mono
            if not out:
                out = ("-" if c < 0 else "") + body
            else:
                out += (" - " if c < 0 else " + ") + body
        return out


X = IntPoly.x_power(1)
ONE = IntPoly.x_power(0)

_memo_lock = threading.Lock()
_T_memo: list[IntPoly] = [IntPoly.x_power(0, 2), X]
_S_memo: list[IntPoly] = [ONE, X]


def _extend(memo: list[IntPoly], k: int) -> IntPoly:
    if k < len(memo):
        return memo[k]
    with _memo_lock:
        while len(memo) <= k:
            memo.append(X * memo[-1] - memo[-2])
    return memo[k]


def chebyshev_T(k: int) -> IntPoly:
    if k < 0:
        raise ValueError("chebyshev_T needs k >= 0")
    return _extend(_T_memo, k)


def chebyshev_S(k: int) -> IntPoly:
    if k < 0:
        raise ValueError("chebyshev_S needs k >= 0")
    return _extend(_S_memo, k)


def evaluate_poly(P: IntPoly, a: CycScalar) -> CycScalar:
    """P(a) by Horner's rule."""
    terms = P.as_dict()
    acc = a * 0
    for d in range(P.degree, -1, -1):
        acc = acc * a + terms.get(d, 0)
    return acc


def quantum_integer(k: int, ctx: Context) -> CycScalar:
    """[k] = q^{k-1} + q^{k-3} + ... + q^{1-k}."""
    if k < 0:
        raise ValueError("quantum_integer needs k >= 0")
    acc = ctx.zero
    for j in range(k):
        acc = acc + ctx.q_power(k - 1 - 2 * j)
    return acc


def quantum_factorial(k: int, ctx: Context) -> CycScalar:
    acc = ctx.one
    for j in range(1, k + 1):
        acc = acc * quantum_integer(j, ctx)
    return acc


def quantum_integer_at_sign(k: int, t: int) -> Fraction:
    """[k]_t for a rational parameter t (in practice t = +1 or -1)."""
    t = Fraction(t)
    return sum((t ** (k - 1 - 2 * j) for j in range(k)), Fraction(0))


_TERM = re.compile(r"\s*([+-]?)\s*(\d*)\s*(\*?\s*x(?:\s*\^\s*(\d+))?)?\s*")


def parse_intpoly(text: str) -> IntPoly:
    """Parse literals such as ``x^2-2``, ``3x^3 - x``, ``T(3)``, ``S(2)``."""
    src = text.strip()
    m = re.fullmatch(r"([TS])\s*\(\s*(\d+)\s*\)", src)
    if m:
        k = int(m.group(2))
        return chebyshev_T(k) if m.group(1) == "T" else chebyshev_S(k)
    if not src:
        raise ValueError("empty polynomial literal")
    pos = 0
    out: dict[int, int] = {}
    first = True
    while pos < len(src):
        m = _TERM.match(src, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad polynomial literal {text!r} at column {pos + 1}")
        sign, digits, xpart, power = m.groups()
        if not digits and not xpart:
            raise ValueError(f"bad polynomial literal {text!r} at column {pos + 1}")
        if not sign and not first:
            raise ValueError(f"missing operator in {text!r} at column {pos + 1}")
        c = int(digits) if digits else 1
        if sign == "-":
            c = -c
        d = (int(power) if power else 1) if xpart else 0
        out[d] = out.get(d, 0) + c
        pos = m.end()
        first = False
    return IntPoly.from_dict(out)
