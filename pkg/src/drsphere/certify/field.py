"""Exact arithmetic in Q(sqrt 2) and in its quadratic extension by eta.

``eta = 5/2 - sqrt2 - sqrt(29 - 20 sqrt2)/2`` is a root of
``t^2 - (5 - 2 sqrt2) t + 1`` (the other root is ``gamma = 1/eta``), so
elements ``p + q*eta`` with ``p, q`` in Q(sqrt2) form a field where products
reduce with ``eta^2 = (5 - 2 sqrt2) eta - 1``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, Rational)):
        return Fraction(v)
    raise TypeError(f"cannot coerce {type(v).__name__} to an exact rational")


class QSqrt2:
    """The number ``a + b*sqrt(2)`` with rational ``a`` and ``b``."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = _frac(a)
        self.b = _frac(b)

    @classmethod
    def coerce(cls, v) -> QSqrt2:
        if isinstance(v, QSqrt2):
            return v
        return cls(_frac(v), 0)

    def __repr__(self):
        return f"QSqrt2({self.a}, {self.b})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt2"
        sign = "-" if self.b < 0 else "+"
        return f"{self.a} {sign} {abs(self.b)}*sqrt2"

    def __hash__(self):
        return hash(self.a) if self.b == 0 else hash((self.a, self.b))

    def __eq__(self, other):
        try:
            o = QSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __neg__(self):
        return QSqrt2(-self.a, -self.b)

    def __pos__(self):
        return self

    def __add__(self, other):
        try:
            o = QSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        return QSqrt2(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = QSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        return QSqrt2(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        try:
            o = QSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        return QSqrt2(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Field norm ``a^2 - 2 b^2``."""
        return self.a * self.a - 2 * self.b * self.b

    def conjugate(self) -> QSqrt2:
        return QSqrt2(self.a, -self.b)

    def inverse(self) -> QSqrt2:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt2)")
        return QSqrt2(self.a / n, -self.b / n)

    def __truediv__(self, other):
        try:
            o = QSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return QSqrt2.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out, base = QSqrt2(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def sign(self) -> int:
        """Exact sign, by cases on the signs of a, b and on a^2 versus 2 b^2."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: the larger magnitude wins; a^2 = 2b^2 impossible
        return sa if self.a * self.a > 2 * self.b * self.b else sb

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(2.0)


SQRT2 = QSqrt2(0, 1)
ALPHA_EXACT = QSqrt2(0, Fraction(1, 2))

# eta^2 = ETA_TRACE * eta - 1
ETA_TRACE = QSqrt2(5, -2)


class QEta:
    """``p + q*eta`` with ``p, q`` in Q(sqrt2)."""

    __slots__ = ("p", "q")

    def __init__(self, p=0, q=0):
        self.p = QSqrt2.coerce(p)
        self.q = QSqrt2.coerce(q)

    @classmethod
    def coerce(cls, v) -> QEta:
        return v if isinstance(v, QEta) else cls(QSqrt2.coerce(v), 0)

    def __repr__(self):
        return f"QEta({self.p!s}, {self.q!s})"

    def __eq__(self, other):
        try:
            o = QEta.coerce(other)
        except TypeError:
            return NotImplemented
        return self.p == o.p and self.q == o.q

    def __hash__(self):
        return hash((self.p, self.q))

    def __bool__(self):
        return bool(self.p) or bool(self.q)

    def __neg__(self):
        return QEta(-self.p, -self.q)

    def __add__(self, other):
        try:
            o = QEta.coerce(other)
        except TypeError:
            return NotImplemented
        return QEta(self.p + o.p, self.q + o.q)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = QEta.coerce(other)
        except TypeError:
            return NotImplemented
        return QEta(self.p - o.p, self.q - o.q)

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        try:
            o = QEta.coerce(other)
        except TypeError:
            return NotImplemented
        qq = self.q * o.q
        return QEta(self.p * o.p - qq, self.p * o.q + self.q * o.p + qq * ETA_TRACE)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out, base = QEta(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out


ETA = QEta(0, 1)
