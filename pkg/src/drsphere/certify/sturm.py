"""Sturm sequences, exact real-root counting and bisection isolation."""

from __future__ import annotations

from fractions import Fraction

from .field import QSqrt2
from .poly import Polynomial, ZeroPolynomial


class NotExactlyOneRoot(ValueError):
    pass


def sign(v) -> int:
    if isinstance(v, QSqrt2):
        return v.sign()
    return (v > 0) - (v < 0)


def sturm_sequence(p: Polynomial) -> list[Polynomial]:
    """Sturm chain of the square-free part of ``p``.

    Each remainder is negated and rescaled by a positive constant, which
    keeps coefficients small without changing any sign pattern.
    """
    if not p:
        raise ZeroPolynomial("Sturm sequence of the zero polynomial")
    q = p.squarefree().positive_normal()
    seq = [q]
    if q.degree > 0:
        seq.append(q.deriv().positive_normal())
    while seq[-1].degree > 0:
        r = -(seq[-2] % seq[-1])
        if not r:
            break
        seq.append(r.positive_normal())
    return seq


def _sign_at_infinity(p: Polynomial, direction: int) -> int:
    s = sign(p.lc)
    if direction < 0 and p.degree % 2 == 1:
        s = -s
    return s


def sign_variations(seq: list[Polynomial], t) -> int:
    """Sign changes of the chain at ``t``; ``t=None`` is not allowed, use
    ``float('inf')``/``-inf`` for the ends of the line."""
    if t == float("inf") or t == float("-inf"):
        d = 1 if t > 0 else -1
        signs = [_sign_at_infinity(p, d) for p in seq]
    else:
        signs = [sign(p(t)) for p in seq]
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(p: Polynomial, lo, hi, lo_open: bool = True, hi_open: bool = True,
                seq: list[Polynomial] | None = None) -> int:
    """Number of distinct real roots of ``p`` between ``lo`` and ``hi``.

    Endpoints may be rationals, :class:`QSqrt2` values or infinities.  The
    chain difference ``V(lo) - V(hi)`` counts roots in ``(lo, hi]``; the
    endpoint flags adjust for roots sitting exactly on ``lo`` or ``hi``.
    """
    if seq is None:
        seq = sturm_sequence(p)
    if lo > hi:
        raise ValueError("empty interval")
    q = seq[0]
    finite = lambda t: t not in (float("inf"), float("-inf"))
    lo_root = finite(lo) and sign(q(lo)) == 0
    hi_root = finite(hi) and sign(q(hi)) == 0
    if lo == hi:
        return int(lo_root and not lo_open and not hi_open)
    n = sign_variations(seq, lo) - sign_variations(seq, hi)
    if lo_root and not lo_open:
        n += 1
    if hi_root and hi_open:
        n -= 1
    return n


def count_real_roots(p: Polynomial) -> int:
    return sturm_count(p, float("-inf"), float("inf"))


def isolate_root(p: Polynomial, lo, hi, width=Fraction(1, 10**12)) -> tuple:
    """Bisect ``(lo, hi)`` around its single root until ``hi - lo <= width``.

    Returns an interval ``(a, b)`` with the root in ``[a, b]`` (``a == b``
    when a midpoint lands exactly on it).
    """
    seq = sturm_sequence(p)
    if sturm_count(p, lo, hi, seq=seq) != 1:
        raise NotExactlyOneRoot(f"expected one root in ({lo}, {hi})")
    q = seq[0]
    while hi - lo > width:
        mid = (lo + hi) / 2
        if sign(q(mid)) == 0:
            return mid, mid
        if sturm_count(p, lo, mid, seq=seq) == 1:
            hi = mid
        else:
            lo = mid
    return lo, hi
