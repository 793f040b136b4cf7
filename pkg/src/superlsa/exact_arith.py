"""Exact scalars: rationals and reduced rational functions in one parameter ``a``.

Rationals are :class:`fractions.Fraction`.  A :class:`RatFun` is a quotient of
univariate polynomials over the rationals with a monic denominator and no
common factor.  Arithmetic on :class:`RatFun` returns a plain ``Fraction``
whenever the result is constant, so algebras without a formal parameter never
pay for polynomial arithmetic.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Union


class DivisionByZero(ZeroDivisionError):
    pass


class EvaluationPole(ZeroDivisionError):
    pass


class ScalarSyntaxError(ValueError):
    pass


SYMBOL = "a"


def _trim(coeffs: Iterable) -> tuple:
    c = [Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class Poly:
    """Univariate polynomial over Q, coefficients stored low degree first."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable = ()):
        self.c = _trim(coeffs)

    @classmethod
    def const(cls, q) -> "Poly":
        return cls((q,))

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.c) - 1  # zero polynomial has degree -1

    def is_zero(self) -> bool:
        return not self.c

    def lead(self) -> Fraction:
        return self.c[-1] if self.c else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.c == other.c
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] += v
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly(-v for v in self.c)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if not self.c or not other.c:
            return Poly()
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, u in enumerate(self.c):
            if u:
                for j, v in enumerate(other.c):
                    out[i + j] += u * v
        return Poly(out)

    def scale(self, q) -> "Poly":
        return Poly(v * q for v in self.c)

    def monic(self) -> "Poly":
        return self.scale(1 / self.lead())

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        rem = list(self.c)
        d = other.degree
        lc = other.lead()
        quo = [Fraction(0)] * max(len(rem) - d, 0)
        for k in range(len(rem) - 1, d - 1, -1):
            q = rem[k] / lc
            if q:
                quo[k - d] = q
                for i, v in enumerate(other.c):
                    rem[k - d + i] -= q * v
        return Poly(quo), Poly(rem[:d] if d > 0 else ())

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic() if not a.is_zero() else a

    def __call__(self, q: Fraction) -> Fraction:
        acc = Fraction(0)
        for v in reversed(self.c):
            acc = acc * q + v
        return acc

    def derivative(self) -> "Poly":
        return Poly(i * v for i, v in enumerate(self.c) if i)

    def __repr__(self):
        return f"Poly({format_poly(self)})"


def format_poly(p: Poly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        v = p.c[k]
        if not v:
            continue
        sign = "-" if v < 0 else "+"
        mag = -v if v < 0 else v
        if k == 0:
            body = str(mag)
        else:
            mono = SYMBOL if k == 1 else f"{SYMBOL}^{k}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f"{sign}{body}"
    return out


class RatFun:
    """Reduced quotient ``num/den`` of polynomials in ``a``; ``den`` monic."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Poly, den: Poly | None = None):
        # trusted constructor; use normalize() for raw input
        self.num = num
        self.den = den if den is not None else Poly((1,))
        self._hash = None

    @classmethod
    def normalize(cls, raw_num: Poly, raw_den: Poly | None = None) -> "RatFun":
        if raw_den is None:
            raw_den = Poly((1,))
        if raw_den.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        if raw_num.is_zero():
            return cls(Poly(), Poly((1,)))
        if raw_den.degree == 0:  # polynomial: no gcd needed
            return cls(raw_num.scale(1 / raw_den.c[0]), Poly((1,)))
        g = raw_num.gcd(raw_den)
        num = raw_num.divmod(g)[0]
        den = raw_den.divmod(g)[0]
        lc = den.lead()
        return cls(num.scale(1 / lc), den.scale(1 / lc))

    @classmethod
    def param(cls) -> "RatFun":
        return cls(Poly.x())

    def is_constant(self) -> bool:
        return self.den.degree == 0 and self.num.degree <= 0

    def to_scalar(self) -> "Scalar":
        if self.is_constant():
            return self.num.c[0] if self.num.c else Fraction(0)
        return self

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def eval(self, q) -> Fraction:
        q = Fraction(q)
        d = self.den(q)
        if d == 0:
            raise EvaluationPole(f"{self} has a pole at a = {q}")
        return self.num(q) / d

    def compose(self, g) -> "Scalar":
        """Substitute ``a = g`` where g is itself a scalar."""
        def horner(p: Poly):
            acc = Fraction(0)
            for c in reversed(p.c):
                acc = acc * g + c
            return acc
        d = horner(self.den)
        if d == 0:
            raise EvaluationPole(f"{self} has a pole at a = {g}")
        return as_scalar(horner(self.num) / d)

    # arithmetic ---------------------------------------------------------
    @staticmethod
    def _lift(x) -> "RatFun":
        if isinstance(x, RatFun):
            return x
        if isinstance(x, (int, Fraction)):
            return RatFun(Poly.const(x))
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RatFun.normalize(self.num + o.num, self.den).to_scalar()
        return RatFun.normalize(self.num * o.den + o.num * self.den,
                                self.den * o.den).to_scalar()

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if o.is_constant():
            if o.is_zero():
                return Fraction(0)
            return RatFun(self.num.scale(o.num.c[0]), self.den)
        return RatFun.normalize(self.num * o.num, self.den * o.den).to_scalar()

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if o.is_zero():
            raise DivisionByZero("division by the zero rational function")
        return RatFun.normalize(self.num * o.den, self.den * o.num).to_scalar()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, k: int):
        if k < 0:
            return 1 / (self ** (-k))
        out: Scalar = Fraction(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, RatFun):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.to_scalar() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.to_scalar()) if self.is_constant() else hash((self.num, self.den))
        return self._hash

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"RatFun({format_scalar(self)})"


Scalar = Union[Fraction, RatFun]

ALPHA = RatFun.param()


def ratfun_normalize(raw_num: Poly, raw_den: Poly) -> RatFun:
    return RatFun.normalize(raw_num, raw_den)


def ratfun_eval(f, q) -> Fraction:
    if isinstance(f, RatFun):
        return f.eval(q)
    return Fraction(f)


def ratfun_is_zero(f) -> bool:
    return f == 0


def as_scalar(x) -> Scalar:
    if isinstance(x, RatFun):
        return x.to_scalar()
    if isinstance(x, str):
        return parse_scalar(x)
    return Fraction(x)


def specialize(x, q) -> Fraction:
    """Substitute ``a = q``; constants pass through."""
    return x.eval(q) if isinstance(x, RatFun) else x


def substitute_param(x, g) -> Scalar:
    """Substitute ``a = g`` for a scalar g (for instance ``-a``)."""
    return x.compose(g) if isinstance(x, RatFun) else x


def numerator_poly(x) -> Poly:
    if isinstance(x, RatFun):
        return x.num
    return Poly.const(x)


def format_scalar(x) -> str:
    if isinstance(x, RatFun):
        if x.is_constant():
            return str(x.to_scalar())
        if x.den.degree == 0:
            return format_poly(x.num)
        return f"({format_poly(x.num)})/({format_poly(x.den)})"
    return str(Fraction(x))


# parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        num, ident, op = m.groups()
        if num is not None:
            tokens.append(num)
        elif ident is not None:
            if ident != SYMBOL:
                raise ScalarSyntaxError(f"unknown symbol {ident!r} in {text!r}")
            tokens.append(ident)
        elif op is not None and not op.isspace():
            if op not in "+-*/^()":
                raise ScalarSyntaxError(f"unexpected character {op!r} in {text!r}")
            tokens.append(op)
        pos = m.end()
    return tokens


class _Parser:
    # expr := term (('+'|'-') term)*
    # term := unary (('*'|'/')? unary)*     juxtaposition multiplies
    # unary := '-' unary | power
    # power := atom ('^' int)?
    def __init__(self, tokens, text):
        self.t = tokens
        self.i = 0
        self.text = text

    def peek(self):
        return self.t[self.i] if self.i < len(self.t) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ScalarSyntaxError(f"malformed scalar {self.text!r}")
        self.i += 1
        return tok

    def expr(self):
        val = self.term()
        while self.peek() in ("+", "-"):
            if self.take() == "+":
                val = val + self.term()
            else:
                val = val - self.term()
        return val

    def term(self):
        val = self.unary()
        while True:
            tok = self.peek()
            if tok == "*":
                self.take()
                val = val * self.unary()
            elif tok == "/":
                self.take()
                den = self.unary()
                if den == 0:
                    raise DivisionByZero(f"zero denominator in {self.text!r}")
                val = val / den
            elif tok is not None and (tok == "(" or tok == SYMBOL or tok.isdigit()):
                val = val * self.unary()
            else:
                return val

    def unary(self):
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            tok = self.take()
            if not tok.isdigit():
                raise ScalarSyntaxError(f"exponent must be a non-negative integer in {self.text!r}")
            return _pow(base, int(tok))
        return base

    def atom(self):
        tok = self.take()
        if tok == "(":
            val = self.expr()
            self.take(")")
            return val
        if tok == SYMBOL:
            return ALPHA
        if tok.isdigit():
            return Fraction(int(tok))
        raise ScalarSyntaxError(f"malformed scalar {self.text!r}")


def _pow(base, k: int):
    out = Fraction(1)
    for _ in range(k):
        out = out * base
    return out


def parse_scalar(text: str) -> Scalar:
    """Parse ``p``, ``p/q`` or a rational expression in ``a`` such as ``(a^2-1)/(2)``."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    tokens = _tokenize(str(text))
    if not tokens:
        raise ScalarSyntaxError("empty scalar")
    p = _Parser(tokens, text)
    val = p.expr()
    if p.peek() is not None:
        raise ScalarSyntaxError(f"trailing input in {text!r}")
    return as_scalar(val) if isinstance(val, RatFun) else Fraction(val)
