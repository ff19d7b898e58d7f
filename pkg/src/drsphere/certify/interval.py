"""Outward-rounded interval arithmetic on dyadic rationals.

Endpoints are integers ``n`` standing for ``n / 2**PREC``.  Every operation
rounds its lower endpoint down and its upper endpoint up, so the true result
of the real operation is always enclosed.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from .field import QSqrt2

PREC = 160
ONE = 1 << PREC


def _floor_div(a: int, b: int) -> int:
    return a // b


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _iroot_floor(n: int, k: int) -> int:
    """Largest r with r**k <= n, for n >= 0."""
    if n < 2:
        return n
    if k == 2:
        return isqrt(n)
    r = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        s = ((k - 1) * r + n // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    while r ** k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


class Interval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo: int, hi: int):
        if lo > hi:
            raise ValueError("interval with lo > hi")
        self.lo = lo
        self.hi = hi

    @classmethod
    def exact(cls, v) -> Interval:
        """Tightest enclosure of a rational (or int/float) value."""
        if isinstance(v, Interval):
            return v
        if isinstance(v, QSqrt2):
            return cls.exact(v.a) + cls.exact(v.b) * SQRT2
        f = Fraction(v)
        num = f.numerator << PREC
        return cls(_floor_div(num, f.denominator), _ceil_div(num, f.denominator))

    @classmethod
    def hull(cls, lo, hi) -> Interval:
        a, b = cls.exact(lo), cls.exact(hi)
        return cls(min(a.lo, b.lo), max(a.hi, b.hi))

    @property
    def lower(self) -> Fraction:
        return Fraction(self.lo, ONE)

    @property
    def upper(self) -> Fraction:
        return Fraction(self.hi, ONE)

    @property
    def width(self) -> Fraction:
        return Fraction(self.hi - self.lo, ONE)

    def mid(self) -> float:
        return float(Fraction(self.lo + self.hi, 2 * ONE))

    def __float__(self):
        return self.mid()

    def __repr__(self):
        return f"[{float(self.lower)!r}, {float(self.upper)!r}]"

    def as_pair(self) -> tuple[float, float]:
        """Float endpoints rounded outward by at most one ulp."""
        import math

        lo, hi = float(self.lower), float(self.upper)
        if Fraction(lo) > self.lower:
            lo = math.nextafter(lo, -math.inf)
        if Fraction(hi) < self.upper:
            hi = math.nextafter(hi, math.inf)
        return lo, hi

    def contains(self, v) -> bool:
        f = Fraction(v)
        return self.lower <= f <= self.upper

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def is_negative(self) -> bool:
        return self.hi < 0

    def is_positive(self) -> bool:
        return self.lo > 0

    def _co(self, other) -> Interval:
        return other if isinstance(other, Interval) else Interval.exact(other)

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __add__(self, other):
        o = self._co(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._co(other)
        return Interval(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other):
        return self._co(other) - self

    def __mul__(self, other):
        o = self._co(other)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(ps) >> PREC, -((-max(ps)) >> PREC))

    __rmul__ = __mul__

    def sq(self) -> Interval:
        """Square, using that the result is nonnegative."""
        a, b = abs(self.lo), abs(self.hi)
        hi = max(a, b)
        lo = 0 if self.lo <= 0 <= self.hi else min(a, b)
        return Interval((lo * lo) >> PREC, -((-(hi * hi)) >> PREC))

    def __truediv__(self, other):
        o = self._co(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("interval divisor contains zero")
        nums = (self.lo << PREC, self.hi << PREC)
        lows = [_floor_div(n, d) for n in nums for d in (o.lo, o.hi)]
        highs = [_ceil_div(n, d) for n in nums for d in (o.lo, o.hi)]
        return Interval(min(lows), max(highs))

    def __rtruediv__(self, other):
        return self._co(other) / self

    def sqrt(self) -> Interval:
        if self.lo < 0:
            raise ValueError(f"sqrt of interval with negative part {self!r}")
        return self.root(2)

    def root(self, k: int) -> Interval:
        """k-th root of a nonnegative interval."""
        if self.lo < 0:
            raise ValueError("root of a negative interval")
        shift = PREC * (k - 1)
        lo = _iroot_floor(self.lo << shift, k)
        m = self.hi << shift
        hi = _iroot_floor(m, k)
        if hi ** k < m:
            hi += 1
        return Interval(lo, hi)

    def __pow__(self, n: int):
        if n == 2:
            return self.sq()
        out = Interval(ONE, ONE)
        for _ in range(n):
            out = out * self
        return out


SQRT2 = Interval.exact(2).sqrt()
