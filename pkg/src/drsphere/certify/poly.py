"""Dense univariate polynomials with exact coefficients.

Coefficients are stored lowest degree first and may be ``int``,
``Fraction``, :class:`QSqrt2` or :class:`QEta`; mixed lists are fine as long
as the coefficient types know how to combine.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

MAX_DEGREE = 16


class ZeroPolynomial(ValueError):
    pass


def _is_zero(c) -> bool:
    return not c


class Polynomial:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) if isinstance(c, int) else c for c in coeffs]
        while cs and _is_zero(cs[-1]):
            cs.pop()
        if len(cs) - 1 > MAX_DEGREE:
            raise ValueError(f"degree {len(cs) - 1} exceeds {MAX_DEGREE}")
        self.coeffs = tuple(cs)

    @classmethod
    def from_high(cls, coeffs: Sequence) -> Polynomial:
        """Build from coefficients listed highest degree first."""
        return cls(reversed(list(coeffs)))

    @classmethod
    def monomial(cls, c=1, n: int = 1) -> Polynomial:
        return cls([0] * n + [c])

    X: Polynomial  # set below

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if _is_zero(c):
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            terms.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(terms)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial([other])
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(_is_zero(a - b) for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def _coerce(self, other) -> Polynomial:
        return other if isinstance(other, Polynomial) else Polynomial([other])

    def __add__(self, other):
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(o.coeffs) + [0] * (n - len(o.coeffs))
        return Polynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        if not self.coeffs or not o.coeffs:
            return Polynomial()
        out = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Polynomial([1])
        for _ in range(n):
            out = out * self
        return out

    def __call__(self, t):
        """Horner evaluation; exact for exact arguments."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def deriv(self) -> Polynomial:
        return Polynomial(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def divmod(self, other: Polynomial) -> tuple[Polynomial, Polynomial]:
        """Euclidean division; the divisor's leading coefficient must be invertible."""
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lc = other.lc
        quot = [0] * max(0, len(rem) - dq)
        for k in range(len(rem) - 1 - dq, -1, -1):
            c = rem[k + dq]
            if _is_zero(c):
                continue
            f = c if lc == 1 else c / lc
            quot[k] = f
            for j, oc in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - f * oc
        return Polynomial(quot), Polynomial(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> Polynomial:
        lc = self.lc
        return Polynomial(c / lc for c in self.coeffs)

    def gcd(self, other: Polynomial) -> Polynomial:
        a, b = self, other
        while b:
            a, b = b, a % b
        return a.monic() if a else a

    def squarefree(self) -> Polynomial:
        """``p / gcd(p, p')``: same distinct roots, all simple."""
        if not self:
            raise ZeroPolynomial("square-free part of the zero polynomial")
        g = self.gcd(self.deriv())
        return self // g if g.degree > 0 else self

    def is_rational(self) -> bool:
        return all(isinstance(c, (int, Fraction)) for c in self.coeffs)

    def positive_normal(self) -> Polynomial:
        """Rescale by a positive constant: primitive integer form over Q,
        unit-magnitude leading coefficient otherwise.  Signs are preserved."""
        if not self:
            return self
        if self.is_rational():
            den = lcm(*(Fraction(c).denominator for c in self.coeffs))
            ints = [int(Fraction(c) * den) for c in self.coeffs]
            g = gcd(*ints)
            return Polynomial(Fraction(v, g) for v in ints)
        lc = abs(self.lc)
        return Polynomial(c / lc for c in self.coeffs)


Polynomial.X = Polynomial([0, 1])
