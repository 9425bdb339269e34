"""Exact coefficient arithmetic.

Two coefficient domains are supported:

* root mode: the cyclotomic field Q(zeta_N), where ``v = zeta_N`` plays the role
  of q^{1/2}.  Elements are coefficient vectors of length phi(N) in the power
  basis, always reduced modulo the N-th cyclotomic polynomial.
* generic mode: rational functions in the formal variable ``v`` over Q, kept in
  lowest terms.  Laurent polynomials are the special case of a monomial
  denominator.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

from flint import fmpq, fmpq_poly, fmpz_poly

Rational = Union[int, Fraction]


class DivisionByZero(ZeroDivisionError):
    pass


class InexactDivision(ArithmeticError):
    """The quotient of two Laurent polynomials is not a Laurent polynomial."""


class ModeMismatch(TypeError):
    pass


# ---------------------------------------------------------------------------
# polynomial views: tuples of Fractions, lowest degree first

Poly = tuple

_ZERO = Fraction(0)
_ONE = Fraction(1)


# ---------------------------------------------------------------------------
# cyclotomic polynomials

@lru_cache(maxsize=None)
def cyclotomic_polynomial(N: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_N, lowest degree first."""
    if N < 1:
        raise ValueError(f"cyclotomic_polynomial needs N >= 1, got {N}")
    return tuple(int(c) for c in fmpz_poly.cyclotomic(N).coeffs())


def euler_phi(N: int) -> int:
    return len(cyclotomic_polynomial(N)) - 1


# ---------------------------------------------------------------------------
# root mode


class Cyclotomic:
    """Element of Q(zeta_N) in the power basis 1, zeta, ..., zeta^{phi-1}.

    Stored as a FLINT fmpq_poly reduced modulo Phi_N; ``coeffs`` is the padded
    tuple of Fractions.
    """

    __slots__ = ("N", "_p", "_hash")

    def __init__(self, N: int, coeffs: Iterable[Rational]):
        self.N = N
        self._p = fmpq_poly([_fq(x) for x in coeffs]) % _modulus(N)
        self._hash = None

    @classmethod
    def _raw(cls, N: int, p: fmpq_poly) -> "Cyclotomic":
        obj = object.__new__(cls)
        obj.N = N
        obj._p = p
        obj._hash = None
        return obj

    @property
    def coeffs(self) -> tuple:
        c = _as_fractions(self._p)
        return c + (_ZERO,) * (euler_phi(self.N) - len(c))

    @classmethod
    def const(cls, N: int, value: Rational) -> "Cyclotomic":
        return cls._raw(N, fmpq_poly([_fq(value)]) if value else _FZERO)

    @classmethod
    def zeta_power(cls, N: int, k: int) -> "Cyclotomic":
        return cls._raw(N, _zeta_table(N)[k % N])

    # --- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return self._p.is_zero()

    def __bool__(self) -> bool:
        return not self._p.is_zero()

    def is_rational(self) -> bool:
        return self._p.degree() <= 0

    def __eq__(self, other):
        if isinstance(other, Cyclotomic):
            return self.N == other.N and self._p == other._p
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.N, str(self._p)))
        return self._hash

    # --- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "Cyclotomic":
        if isinstance(other, Cyclotomic):
            if other.N != self.N:
                raise ModeMismatch(f"cannot combine Q(zeta_{self.N}) with Q(zeta_{other.N})")
            return other
        if isinstance(other, (int, Fraction)):
            return Cyclotomic.const(self.N, other)
        if isinstance(other, RationalFunction):
            raise ModeMismatch("cannot combine root-mode and generic-mode scalars")
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Cyclotomic._raw(self.N, self._p + other._p)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic._raw(self.N, -self._p)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Cyclotomic._raw(self.N, self._p - other._p)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic._raw(self.N, self._p * _fq(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._p, other._p
        if a.degree() <= 0 or b.degree() <= 0:
            return Cyclotomic._raw(self.N, a * b)
        return Cyclotomic._raw(self.N, (a * b) % _modulus(self.N))

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise DivisionByZero("inverse of zero in Q(zeta_%d)" % self.N)
        if self.is_rational():
            return Cyclotomic._raw(self.N, fmpq_poly([1 / self._p[0]]))
        g, s, _ = self._p.xgcd(_modulus(self.N))
        # Phi_N is irreducible, so g == 1
        assert g == 1, g
        return Cyclotomic._raw(self.N, s % _modulus(self.N))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = Cyclotomic.const(self.N, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # --- output -----------------------------------------------------------
    def to_json(self) -> dict:
        return {"N": self.N, "coeffs": [_frac_str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "Cyclotomic":
        return cls(int(data["N"]), [Fraction(c) for c in data["coeffs"]])

    def __repr__(self):
        return f"Cyclotomic({self.N}, {self})"

    def __str__(self):
        return _format_terms(((i, c) for i, c in enumerate(self.coeffs)), f"z{self.N}")


@lru_cache(maxsize=None)
def _modulus(N: int) -> fmpq_poly:
    return fmpq_poly(list(cyclotomic_polynomial(N)))


@lru_cache(maxsize=None)
def _zeta_table(N: int) -> tuple:
    mod = _modulus(N)
    return tuple(fmpq_poly([0] * j + [1]) % mod for j in range(N))


# ---------------------------------------------------------------------------
# generic mode


class RationalFunction:
    """v^shift * num(v) / den(v) in lowest terms.

    Canonical form: num(0) != 0 (or num == 0, shift == 0, den == 1), den(0) != 0,
    den monic, gcd(num, den) == 1.  Polynomials are FLINT fmpq_poly values; the
    ``num``/``den`` attributes expose them as tuples of Fractions.
    """

    __slots__ = ("shift", "_n", "_d", "_hash")

    def __init__(self, shift: int, num, den=(_ONE,)):
        n = _as_flint(num)
        d = _as_flint(den)
        if d.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        self.shift, self._n, self._d = _canonical(shift, n, d)
        self._hash = None

    @classmethod
    def _raw(cls, shift: int, n: fmpq_poly, d: fmpq_poly) -> "RationalFunction":
        obj = object.__new__(cls)
        obj.shift = shift
        obj._n = n
        obj._d = d
        obj._hash = None
        return obj

    @property
    def num(self) -> Poly:
        return _as_fractions(self._n)

    @property
    def den(self) -> Poly:
        return _as_fractions(self._d)

    @classmethod
    def const(cls, value: Rational) -> "RationalFunction":
        value = Fraction(value)
        if value == 0:
            return cls._raw(0, _FZERO, _FONE)
        return cls._raw(0, fmpq_poly([_fq(value)]), _FONE)

    @classmethod
    def monomial(cls, k: int, coeff: Rational = 1) -> "RationalFunction":
        if coeff == 0:
            return cls.const(0)
        return cls._raw(k, fmpq_poly([_fq(coeff)]), _FONE)

    @classmethod
    def laurent(cls, terms: dict[int, Rational]) -> "RationalFunction":
        terms = {k: Fraction(c) for k, c in terms.items() if c != 0}
        if not terms:
            return cls.const(0)
        lo = min(terms)
        coeffs = [_ZERO] * (max(terms) - lo + 1)
        for k, c in terms.items():
            coeffs[k - lo] = c
        return cls._raw(lo, fmpq_poly([_fq(c) for c in coeffs]), _FONE)

    def is_zero(self) -> bool:
        return self._n.is_zero()

    def __bool__(self):
        return not self._n.is_zero()

    def is_laurent(self) -> bool:
        return self._d.degree() == 0

    def laurent_terms(self) -> dict[int, Fraction]:
        if not self.is_laurent():
            raise InexactDivision(f"{self} is not a Laurent polynomial")
        return {self.shift + i: c for i, c in enumerate(self.num) if c}

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.shift == other.shift and self._n == other._n and self._d == other._d
        if isinstance(other, (int, Fraction)):
            return self == RationalFunction.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.shift, self.num, self.den))
        return self._hash

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Fraction)):
            return RationalFunction.const(other)
        if isinstance(other, Cyclotomic):
            raise ModeMismatch("cannot combine generic-mode and root-mode scalars")
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self._n.is_zero():
            return other
        if other._n.is_zero():
            return self
        lo = min(self.shift, other.shift)
        a = self._n * _x_power(self.shift - lo)
        b = other._n * _x_power(other.shift - lo)
        if self._d == other._d:
            n = a + b
            if self._d.degree() == 0:
                if n.is_zero():
                    return RationalFunction.const(0)
                k, n = _strip_low(n)
                return RationalFunction._raw(lo + k, n, self._d)
            return RationalFunction._raw(*_canonical(lo, n, self._d))
        n = a * other._d + b * self._d
        return RationalFunction._raw(*_canonical(lo, n, self._d * other._d))

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(self.shift, -self._n, self._d)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return RationalFunction.const(0)
            return RationalFunction._raw(self.shift, self._n * _fq(other), self._d)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self._n.is_zero() or other._n.is_zero():
            return RationalFunction.const(0)
        n = self._n * other._n
        shift = self.shift + other.shift
        if self._d.degree() == 0 and other._d.degree() == 0:
            return RationalFunction._raw(shift, n, _FONE)
        return RationalFunction._raw(*_canonical(shift, n, self._d * other._d))

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self._n.is_zero():
            raise DivisionByZero("inverse of zero rational function")
        return RationalFunction._raw(*_canonical(-self.shift, self._d, self._n))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = RationalFunction.const(1)
        for _ in range(k):
            result = result * self
        return result

    def exact_div(self, other: "RationalFunction") -> "RationalFunction":
        """Laurent-polynomial division that must come out exact."""
        q = self / other
        if self.is_laurent() and other.is_laurent() and not q.is_laurent():
            raise InexactDivision(f"({self}) / ({other}) is not a Laurent polynomial")
        return q

    def evaluate(self, value: Cyclotomic) -> Cyclotomic:
        """Substitute v -> value (a root-mode scalar)."""
        def horner(p):
            acc = Cyclotomic.const(value.N, 0)
            for c in reversed(p):
                acc = acc * value + c
            return acc
        den = horner(self.den)
        if den.is_zero():
            raise DivisionByZero(f"denominator of {self} vanishes at {value}")
        return horner(self.num) * value ** self.shift / den

    def to_json(self) -> dict:
        return {
            "shift": self.shift,
            "num": [_frac_str(c) for c in self.num],
            "den": [_frac_str(c) for c in self.den],
        }

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        num = _format_terms(((self.shift + i, c) for i, c in enumerate(self.num)), "v")
        if self.is_laurent():
            return num
        return f"({num})/({_format_terms(enumerate(self.den), 'v')})"


_FZERO = fmpq_poly([])
_FONE = fmpq_poly([1])


def _fq(c) -> fmpq:
    c = Fraction(c)
    return fmpq(c.numerator, c.denominator)


def _as_flint(p) -> fmpq_poly:
    if isinstance(p, fmpq_poly):
        return p
    return fmpq_poly([_fq(x) for x in p])


def _as_fractions(p: fmpq_poly) -> Poly:
    return tuple(Fraction(int(c.p), int(c.q)) for c in p.coeffs())


@lru_cache(maxsize=None)
def _x_power(k: int) -> fmpq_poly:
    return fmpq_poly([0] * k + [1])


def _strip_low(p: fmpq_poly) -> tuple[int, fmpq_poly]:
    """Split p = v^k * b with b(0) != 0."""
    coeffs = p.coeffs()
    k = 0
    while k < len(coeffs) and coeffs[k] == 0:
        k += 1
    if k == 0:
        return 0, p
    return k, fmpq_poly(coeffs[k:])


def _canonical(shift: int, n: fmpq_poly, d: fmpq_poly) -> tuple[int, fmpq_poly, fmpq_poly]:
    if n.is_zero():
        return 0, _FZERO, _FONE
    k, n = _strip_low(n)
    shift += k
    k, d = _strip_low(d)
    shift -= k
    if d.degree() > 0:
        g = n.gcd(d)
        if g.degree() > 0:
            n = n // g
            d = d // g
    lead = d[d.degree()]
    if lead != 1:
        n = n / lead
        d = d / lead
    return shift, n, d


CycScalar = Union[Cyclotomic, RationalFunction]


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_terms(terms, var: str) -> str:
    parts = []
    for k, c in terms:
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mono and abs(c) == 1:
            body = mono
        else:
            body = _frac_str(abs(c)) + (f"*{mono}" if mono else "")
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def scalar_from_json(data: dict) -> CycScalar:
    if "N" in data:
        return Cyclotomic.from_json(data)
    return RationalFunction(int(data["shift"]), [Fraction(c) for c in data["num"]],
                            [Fraction(c) for c in data["den"]])


# ---------------------------------------------------------------------------
# arithmetic environments


class GenericContext:
    """Coefficients are rational functions in the formal variable v = q^{1/2}."""

    is_root = False
    N = None
    n = None
    label = "generic"

    def __init__(self):
        self.zero = RationalFunction.const(0)
        self.one = RationalFunction.const(1)
        self.v = RationalFunction.monomial(1)
        self.q = RationalFunction.monomial(2)
        self._delta = RationalFunction.laurent({2: -1, -2: -1})

    def const(self, value: Rational) -> RationalFunction:
        return RationalFunction.const(value)

    def v_power(self, k: int) -> RationalFunction:
        return RationalFunction.monomial(k)

    def q_power(self, k: int) -> RationalFunction:
        return RationalFunction.monomial(2 * k)

    @property
    def delta(self) -> RationalFunction:
        """Value of a contractible loop, -(q + q^{-1})."""
        return self._delta

    def __eq__(self, other):
        return isinstance(other, GenericContext)

    def __hash__(self):
        return hash("generic")

    def __repr__(self):
        return "GenericContext()"


GENERIC = GenericContext()


class RootContext:
    """v = zeta_N, q = v^2, n minimal with q^n = +-1, t^{1/2} = v^{n^2}, t = q^{n^2}."""

    is_root = True

    def __init__(self, N: int):
        if N < 1:
            raise ValueError(f"RootContext needs N >= 1, got {N}")
        self.N = N
        self.label = f"root(N={N})"
        self.zero = Cyclotomic.const(N, 0)
        self.one = Cyclotomic.const(N, 1)
        self.v = Cyclotomic.zeta_power(N, 1)
        self.q = Cyclotomic.zeta_power(N, 2)
        minus_one = Cyclotomic.const(N, -1)
        m = 1
        while True:
            qm = self.q_power(m)
            if qm == self.one or qm == minus_one:
                break
            m += 1
        self.n = m
        self.t_half = self.v_power(m * m)
        self.t = self.t_half * self.t_half
        self._delta = -(self.q + self.q_power(-1))
        sign = 1 if (m - 1) % 2 == 0 else -1
        assert self.q_power(m) * sign == self.t, "(-1)^(n-1) q^n != t"
        assert self.t == 1 or self.t == -1

    def const(self, value: Rational) -> Cyclotomic:
        return Cyclotomic.const(self.N, value)

    def v_power(self, k: int) -> Cyclotomic:
        return Cyclotomic.zeta_power(self.N, k)

    def q_power(self, k: int) -> Cyclotomic:
        return Cyclotomic.zeta_power(self.N, 2 * k)

    @property
    def delta(self) -> Cyclotomic:
        return self._delta

    @property
    def t_sign(self) -> int:
        """t as a plain integer, +1 or -1."""
        return 1 if self.t == 1 else -1

    def __eq__(self, other):
        return isinstance(other, RootContext) and other.N == self.N

    def __hash__(self):
        return hash(("root", self.N))

    def __repr__(self):
        return f"RootContext(N={self.N}, n={self.n}, t={self.t_sign})"


Context = Union[GenericContext, RootContext]

_ctx_cache: dict[int, RootContext] = {}


def derive_root_context(N: int) -> RootContext:
    ctx = _ctx_cache.get(N)
    if ctx is None:
        ctx = _ctx_cache.setdefault(N, RootContext(N))
    return ctx


def scalar_arithmetic(a: CycScalar, b: CycScalar, op: str) -> CycScalar:
    if type(a) is not type(b):
        raise ModeMismatch(f"{type(a).__name__} vs {type(b).__name__}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        # generic mode divides only when the quotient stays a Laurent polynomial
        return a.exact_div(b) if isinstance(a, RationalFunction) else a / b
    raise ValueError(f"unknown op {op!r}")
