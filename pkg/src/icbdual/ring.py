"""
Exact arithmetic in Z[v, v^-1] (with rational coefficients allowed) and Q(v).

Both types are immutable value objects. ``LaurentPoly`` stores a sparse map
exponent -> coefficient; ``RatFunc`` stores a Laurent numerator over a
polynomial denominator in canonical form, so structural equality is value
equality.

>>> v = LaurentPoly.v()
>>> str((v + 1) * (v - 1))
'-1 + v^2'
>>> str(RatFunc(v * v - 1, v - 1))
'1 + v'
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Union

__all__ = [
    "LaurentPoly", "RatFunc", "RingError", "DivisionByZero", "NotLaurent",
    "PoleAtPoint", "to_ratfunc", "ZERO", "ONE", "V",
]

Number = Union[int, Fraction]


class RingError(ArithmeticError):
    pass


class DivisionByZero(RingError, ZeroDivisionError):
    pass


class NotLaurent(RingError):
    pass


class PoleAtPoint(RingError):
    pass


def _norm_coeff(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class LaurentPoly:
    """A Laurent polynomial in ``v`` with exact rational coefficients."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, Number] | None = None):
        c = {}
        if coeffs:
            for e, a in coeffs.items():
                if a:
                    c[int(e)] = _norm_coeff(a)
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c: dict) -> "LaurentPoly":
        obj = object.__new__(cls)
        obj._c = c
        obj._hash = None
        return obj

    @classmethod
    def const(cls, a: Number) -> "LaurentPoly":
        return cls._raw({0: _norm_coeff(a)} if a else {})

    @classmethod
    def monomial(cls, e: int, a: Number = 1) -> "LaurentPoly":
        return cls._raw({e: _norm_coeff(a)} if a else {})

    @classmethod
    def v(cls) -> "LaurentPoly":
        return cls._raw({1: 1})

    @property
    def coeffs(self) -> dict[int, Number]:
        return dict(self._c)

    def items(self):
        return sorted(self._c.items())

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def min_exp(self) -> int:
        return min(self._c)

    def max_exp(self) -> int:
        return max(self._c)

    def coeff(self, e: int) -> Number:
        return self._c.get(e, 0)

    def is_integral(self) -> bool:
        return all(isinstance(a, int) for a in self._c.values())

    def is_constant(self) -> bool:
        return not self._c or (len(self._c) == 1 and 0 in self._c)

    # arithmetic

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            if isinstance(other, (int, Fraction)):
                other = LaurentPoly.const(other)
            else:
                return NotImplemented
        if not other._c:
            return self
        if not self._c:
            return other
        c = dict(self._c)
        for e, a in other._c.items():
            s = c.get(e, 0) + a
            if s:
                c[e] = _norm_coeff(s)
            else:
                c.pop(e, None)
        return LaurentPoly._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -a for e, a in self._c.items()})

    def __sub__(self, other):
        if not isinstance(other, LaurentPoly):
            if isinstance(other, (int, Fraction)):
                other = LaurentPoly.const(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            if isinstance(other, (int, Fraction)):
                if not other:
                    return ZERO
                return LaurentPoly._raw({e: _norm_coeff(a * other) for e, a in self._c.items()})
            return NotImplemented
        if not self._c or not other._c:
            return ZERO
        c: dict[int, Number] = {}
        for e1, a1 in self._c.items():
            for e2, a2 in other._c.items():
                e = e1 + e2
                c[e] = c.get(e, 0) + a1 * a2
        return LaurentPoly._raw({e: _norm_coeff(a) for e, a in c.items() if a})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._c) == 1:
                (e, a), = self._c.items()
                return LaurentPoly.monomial(e * n, Fraction(1) / Fraction(a) ** (-n))
            raise NotLaurent(f"{self} is not a unit")
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``v^k``."""
        return LaurentPoly._raw({e + k: a for e, a in self._c.items()})

    def bar(self) -> "LaurentPoly":
        return LaurentPoly._raw({-e: a for e, a in self._c.items()})

    def in_vZv(self) -> bool:
        """True iff every exponent is >= 1 and every coefficient is an integer."""
        return all(e >= 1 and isinstance(a, int) for e, a in self._c.items())

    def positive_part(self) -> "LaurentPoly":
        return LaurentPoly._raw({e: a for e, a in self._c.items() if e > 0})

    def evaluate(self, x: Number) -> Number:
        x = Fraction(x)
        if not self._c:
            return 0
        if x == 0 and self.min_exp() < 0:
            raise PoleAtPoint("negative power at v = 0")
        return _norm_coeff(sum(a * x ** e for e, a in self._c.items()))

    # comparison / hashing

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == ({0: other} if other else {})
        if isinstance(other, RatFunc):
            return other == self
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self._c.get(0, 0))
            else:
                self._hash = hash(frozenset(self._c.items()))
        return self._hash

    # text form

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for i, (e, a) in enumerate(self.items()):
            neg = a < 0
            mag = -a if neg else a
            if e == 0:
                body = str(mag)
            else:
                mono = "v" if e == 1 else f"v^{e}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            if i == 0:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"LaurentPoly('{self}')"

    _TOKEN = re.compile(r"\s*([+-])?\s*(\d+(?:/\d+)?)?\s*(\*?\s*v(?:\^\s*(-?\d+))?)?")

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        """Inverse of ``str``.

        >>> LaurentPoly.parse("1 - v^2 + 3*v^5") == LaurentPoly({0: 1, 2: -1, 5: 3})
        True
        """
        s = text.strip()
        if s in ("", "0"):
            return ZERO
        out: dict[int, Number] = {}
        pos = 0
        first = True
        while pos < len(s):
            m = cls._TOKEN.match(s, pos)
            if not m or m.end() == pos or not (m.group(2) or m.group(3)):
                raise ValueError(f"cannot parse {text!r} at position {pos}")
            if not first and not m.group(1):
                raise ValueError(f"missing sign in {text!r} at position {pos}")
            a = Fraction(m.group(2)) if m.group(2) else Fraction(1)
            if m.group(1) == "-":
                a = -a
            e = 0
            if m.group(3):
                e = int(m.group(4)) if m.group(4) is not None else 1
            out[e] = out.get(e, 0) + a
            pos = m.end()
            first = False
        return LaurentPoly(out)


ZERO = LaurentPoly._raw({})
ONE = LaurentPoly._raw({0: 1})
V = LaurentPoly._raw({1: 1})


# dense polynomial helpers over Q (lists, index = degree)

def _dense(p: LaurentPoly) -> list:
    lo = p.min_exp()
    hi = p.max_exp()
    out = [Fraction(0)] * (hi - lo + 1)
    for e, a in p._c.items():
        out[e - lo] = Fraction(a)
    return out


def _trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _divmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] / lead
        k = len(a) - len(b)
        q[k] = c
        for i, bi in enumerate(b):
            a[k + i] -= c * bi
        a.pop()
        _trim(a)
    return _trim(q), a


def _pgcd(a: list, b: list) -> list:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = _divmod(a, b)
        a, b = b, r
    return a


def _from_dense(a: list, shift: int = 0) -> LaurentPoly:
    return LaurentPoly({i + shift: c for i, c in enumerate(a) if c})


def _primitive_positive(den: LaurentPoly) -> Fraction:
    """Scalar s such that s*den has coprime integer coefficients and positive leading term."""
    vals = [Fraction(a) for a in den._c.values()]
    lcm = 1
    for a in vals:
        lcm = lcm * a.denominator // gcd(lcm, a.denominator)
    ints = [int(a * lcm) for a in vals]
    g = 0
    for x in ints:
        g = gcd(g, x)
    s = Fraction(lcm, g)
    if den._c[den.max_exp()] * s < 0:
        s = -s
    return s


class RatFunc:
    """
    An element of Q(v) as ``num / den``.

    ``den`` is a polynomial with nonzero constant term, coprime integer
    coefficients and positive leading coefficient; all powers of ``v`` live in
    ``num``. ``den == 1`` exactly when the value is a Laurent polynomial.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly | Number = 0, den: LaurentPoly | Number = 1):
        if not isinstance(num, LaurentPoly):
            num = LaurentPoly.const(num)
        if not isinstance(den, LaurentPoly):
            den = LaurentPoly.const(den)
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        self.num, self.den = self._normalize(num, den)

    @classmethod
    def _raw(cls, num: LaurentPoly, den: LaurentPoly = None) -> "RatFunc":
        obj = object.__new__(cls)
        obj.num = num
        obj.den = ONE if den is None else den
        return obj

    @staticmethod
    def _normalize(num: LaurentPoly, den: LaurentPoly):
        if num.is_zero():
            return ZERO, ONE
        s = den.min_exp()
        den = den.shift(-s)
        num = num.shift(-s)
        if len(den._c) == 1:
            return num * (Fraction(1) / Fraction(den._c[0])), ONE
        t = num.min_exp()
        nd = _dense(num)
        dd = _dense(den)
        g = _pgcd(nd, dd)
        if len(g) > 1:
            nd, _ = _divmod(nd, g)
            dd, _ = _divmod(dd, g)
        num = _from_dense(nd, t)
        den = _from_dense(dd)
        if len(den._c) == 1:
            return num * (Fraction(1) / Fraction(den._c[0])), ONE
        sc = _primitive_positive(den)
        return num * sc, den * sc

    @staticmethod
    def coerce(x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, LaurentPoly):
            return RatFunc._raw(x)
        if isinstance(x, (int, Fraction)):
            return RatFunc._raw(LaurentPoly.const(x))
        raise TypeError(f"cannot coerce {type(x).__name__} to RatFunc")

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_laurent(self) -> bool:
        return self.den._c == {0: 1}

    def to_laurent(self) -> LaurentPoly:
        if not self.is_laurent():
            raise NotLaurent(f"{self} is not a Laurent polynomial")
        return self.num

    def __add__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_laurent() and other.is_laurent():
            return RatFunc._raw(self.num + other.num)
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_laurent() and other.is_laurent():
            return RatFunc._raw(self.num * other.num)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZero(f"division of {self} by zero")
        if len(other.num._c) == 1 and other.is_laurent():
            (e, a), = other.num._c.items()
            return RatFunc._raw(self.num.shift(-e) * (Fraction(1) / Fraction(a)), self.den) \
                if self.is_laurent() else RatFunc(self.num.shift(-e) * (Fraction(1) / Fraction(a)), self.den)
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return RatFunc.coerce(1) / (self ** (-n))
        out = RatFunc.coerce(1)
        for _ in range(n):
            out = out * self
        return out

    def bar(self) -> "RatFunc":
        if self.is_laurent():
            return RatFunc._raw(self.num.bar())
        return RatFunc(self.num.bar(), self.den.bar())

    def evaluate(self, x: Number) -> Number:
        d = self.den.evaluate(x)
        if d == 0:
            raise PoleAtPoint(f"{self} has a pole at v = {x}")
        return _norm_coeff(Fraction(self.num.evaluate(x)) / d)

    def __eq__(self, other):
        if isinstance(other, (LaurentPoly, int, Fraction)):
            return self.is_laurent() and self.num == other
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self):
        if self.is_laurent():
            return hash(self.num)
        return hash((self.num, self.den))

    def __str__(self):
        if self.is_laurent():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RatFunc('{self}')"

    @classmethod
    def parse(cls, text: str) -> "RatFunc":
        text = text.strip()
        m = re.fullmatch(r"\((.*)\)/\((.*)\)", text)
        if m:
            return cls(LaurentPoly.parse(m.group(1)), LaurentPoly.parse(m.group(2)))
        return cls(LaurentPoly.parse(text))


def to_ratfunc(x) -> RatFunc:
    return RatFunc.coerce(x)


def vpow(e: int) -> RatFunc:
    """``v^e`` as a RatFunc."""
    return RatFunc._raw(LaurentPoly.monomial(e))


def rf_sum(items: Iterable) -> RatFunc:
    out = RatFunc._raw(ZERO)
    for x in items:
        out = out + x
    return out
