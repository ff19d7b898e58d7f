"""Branch-and-bound sign certification for the two quadratic-in-rho functions.

Both functions are evaluated with ``w = sin(theta)`` and
``c = cos(theta) = sqrt(1 - w^2)``:

* ``EQ3(rho, w)   = (2w^2 - 1) rho^2 - (4w^2 - sqrt2 (w + c)) rho - 2 sqrt2 c + 2``
* ``F_ETA(rho, w) = (eta w^2 - 1) rho^2 - (2 eta w^2 - sqrt2 (w + c)) rho
  - (sqrt2 c - 3/2) eta - 1``

Both are rewritten around ``r = rho - 1`` and the angle ``phi`` between
``theta`` and the diagonal, where all three coefficients vanish at the same
rate as the function itself (see :func:`coefficients`).  Only the w-range of
a box is enclosed; the dependence on r is maximized exactly.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .interval import SQRT2, Interval

GAMMA = Fraction(5, 2) - SQRT2 + (29 - 20 * SQRT2).sqrt() / 2
ETA = 1 / GAMMA
MAX_BOXES = 1_000_000
MAX_DEPTH = 80


class FunctionId(enum.Enum):
    EQ3 = "EQ3"
    F_ETA = "F_ETA"


class Status(enum.Enum):
    PROVED = "PROVED"
    PROVED_NEGATIVE = "PROVED_NEGATIVE"
    PROVED_NONPOSITIVE = "PROVED_NONPOSITIVE"
    INCONCLUSIVE = "INCONCLUSIVE"
    FAILED = "FAILED"

    @property
    def proved(self) -> bool:
        return self.value.startswith("PROVED")


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class IntervalBox:
    rho: tuple[Fraction, Fraction]
    w: tuple[Fraction, Fraction]
    function: FunctionId

    def __post_init__(self):
        for lo, hi in (self.rho, self.w):
            if lo > hi:
                raise ValueError("box with lo > hi")
        if self.rho[0] < 0 or self.rho[1] > 1 or self.w[0] < 0 or self.w[1] > 1:
            raise ValueError("box outside 0 <= rho <= 1, 0 <= w <= 1")

    def split(self) -> tuple[IntervalBox, IntervalBox]:
        # the rho-dependence is handled exactly by the bound, so only w is cut
        w0, w1 = self.w
        m = (w0 + w1) / 2
        return (IntervalBox(self.rho, (w0, m), self.function),
                IntervalBox(self.rho, (m, w1), self.function))


def coefficients(fid: FunctionId, w: Interval) -> tuple[Interval, Interval, Interval]:
    """Enclosures of ``a, b, c`` with ``f = a r^2 + b r + c`` and ``r = rho - 1``.

    With ``phi`` the angle from the diagonal, ``v = sin(phi)``,
    ``k = cos(phi)`` and ``u = 1 - k = v^2 / (1 + k)``:

    * EQ3:   ``a = -2 v k``,     ``b = -2 u``, ``c = -2 u v``
    * F_ETA: ``a = eta w^2 - 1``, ``b = -2 u``, ``c = u (eta (1 + v) - 2)``

    ``v`` is a difference of a decreasing and an increasing function of w,
    so its enclosure is tight; ``u`` is formed from ``v^2`` to avoid the
    cancellation in ``1 - k``.
    """
    c = (1 - w.sq()).sqrt()
    half = SQRT2 / 2
    k = half * (w + c)
    if fid is FunctionId.EQ3:
        v = half * (c - w)
        u = v.sq() / (1 + k)
        return -2 * v * k, -2 * u, -2 * u * v
    v = half * (w - c)
    u = v.sq() / (1 + k)
    return ETA * w.sq() - 1, -2 * u, u * (ETA * (1 + v) - 2)


def _quad_max(a: Fraction, b: Fraction, c: Fraction, r0: Fraction, r1: Fraction) -> Fraction:
    vals = [a * r0 * r0 + b * r0 + c, a * r1 * r1 + b * r1 + c]
    if a < 0:
        v = -b / (2 * a)
        if r0 < v < r1:
            vals.append(c - b * b / (4 * a))
    return max(vals)


def _quad_min(a: Fraction, b: Fraction, c: Fraction, r0: Fraction, r1: Fraction) -> Fraction:
    vals = [a * r0 * r0 + b * r0 + c, a * r1 * r1 + b * r1 + c]
    if a > 0:
        v = -b / (2 * a)
        if r0 < v < r1:
            vals.append(c - b * b / (4 * a))
    return min(vals)


def enclose(box: IntervalBox) -> tuple[Fraction, Fraction]:
    """Rigorous lower and upper bounds of the function over the box.

    ``r = rho - 1 <= 0`` on every box, so ``a r^2 + b r + c`` is bounded
    above by ``a.hi r^2 + b.lo r + c.hi`` and below by
    ``a.lo r^2 + b.hi r + c.lo``; both are maximized/minimized exactly in r.
    """
    a, b, c = coefficients(box.function, Interval.hull(*box.w))
    r0, r1 = box.rho[0] - 1, box.rho[1] - 1
    upper = _quad_max(a.upper, b.lower, c.upper, r0, r1)
    lower = _quad_min(a.lower, b.upper, c.lower, r0, r1)
    return lower, upper


def evaluate_float(fid: FunctionId, rho, w):
    """Plain double-precision evaluation (numpy arrays or floats)."""
    import numpy as np

    r2 = math.sqrt(2.0)
    c = np.sqrt(1.0 - w * w)
    if fid is FunctionId.EQ3:
        return (2 * w * w - 1) * rho ** 2 - (4 * w * w - r2 * (w + c)) * rho - 2 * r2 * c + 2
    eta = float(ETA)
    return ((eta * w * w - 1) * rho ** 2 - (2 * eta * w * w - r2 * (w + c)) * rho
            - (r2 * c - 1.5) * eta - 1)


@dataclass
class SignCertificate:
    status: Status
    box: IntervalBox
    boxes: int
    depth: int
    worst_upper: Fraction | None = None
    offending: IntervalBox | None = None
    leaves: list[IntervalBox] = field(default_factory=list, repr=False)


def certify_negative(box: IntervalBox, max_boxes: int = MAX_BOXES,
                     keep_leaves: bool = False) -> SignCertificate:
    """Adaptive bisection until every sub-box has a negative upper bound.

    Boxes are processed breadth-first in a fixed order, so the refinement
    tree (and the reported counts) are deterministic.
    """
    queue = deque([(box, 0)])
    count = 0
    depth = 0
    worst = None
    leaves = []
    while queue:
        b, d = queue.popleft()
        count += 1
        if count > max_boxes:
            raise BudgetExceeded(f"more than {max_boxes} boxes")
        depth = max(depth, d)
        lower, upper = enclose(b)
        if upper < 0:
            worst = upper if worst is None else max(worst, upper)
            if keep_leaves:
                leaves.append(b)
            continue
        if lower >= 0 or d >= MAX_DEPTH:
            return SignCertificate(Status.INCONCLUSIVE, box, count, depth, worst, b)
        for child in b.split():
            queue.append((child, d + 1))
    return SignCertificate(Status.PROVED_NEGATIVE, box, count, depth, worst, None, leaves)
