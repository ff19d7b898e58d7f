"""Partition of the right half-plane into the regions P0..P6 and the
per-region step contracts of the iteration with ``alpha = 1/sqrt(2)``.

Region predicates (boundaries exactly as written, no fattening)::

    P0: y <= 0 < x
    P1: x^2 + y^2 <= 1  and 0 < y <= x
    P2: x^2 + y^2 >  1  and 0 < y <= alpha
    P3: alpha < y <= x
    P4: x^2 + y^2 >  1  and 0 < x < y
    P5: x^2 + y^2 <= 1, x > 0 and y > alpha
    P6: 0 < x < y <= alpha
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import ALPHA, State2D, dist_sq_to_solution, dr_step_2d


class UncertifiedRegime(ValueError):
    """Region contracts only hold for alpha = 1/sqrt(2) in the plane."""


class BudgetExceeded(RuntimeError):
    pass


class Region(enum.IntEnum):
    P0 = 0
    P1 = 1
    P2 = 2
    P3 = 3
    P4 = 4
    P5 = 5
    P6 = 6
    LEFT = 7
    AXIS = 8

    @property
    def label(self) -> str:
        return {Region.LEFT: "LeftHalf", Region.AXIS: "SingularAxis"}.get(self, self.name)

    @classmethod
    def from_label(cls, label: str) -> Region:
        for r in cls:
            if r.label == label or r.name == label:
                return r
        raise KeyError(label)


ALL_REGIONS = frozenset(Region)


@dataclass(frozen=True)
class RegionConstants:
    alpha: float
    epsilon: float
    gamma: float
    eta: float
    delta_cap: float
    upsilon: float

    @property
    def upsilon_next(self) -> float:
        """Lower bound for x two steps after the P5 -> P6 entry."""
        return self.upsilon / math.sqrt(self.alpha ** 2 + self.upsilon ** 2)


def _constants() -> RegionConstants:
    r2 = math.sqrt(2.0)
    gamma = 2.5 - r2 + 0.5 * math.sqrt(29.0 - 20.0 * r2)
    delta_cap = ALPHA - math.sqrt(gamma) / 2.0
    return RegionConstants(
        alpha=ALPHA,
        epsilon=(1.0 - 2.0 ** (-1.0 / 3.0)) ** 1.5,
        gamma=gamma,
        eta=1.0 / gamma,
        delta_cap=delta_cap,
        upsilon=delta_cap / math.sqrt(ALPHA ** 2 + delta_cap ** 2),
    )


CONSTANTS = _constants()
EPSILON = CONSTANTS.epsilon
GAMMA = CONSTANTS.gamma
RATIO_TOL = 1e-12


def classify(x: float, y: float) -> Region:
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError(f"non-finite point ({x}, {y})")
    if x < 0:
        return Region.LEFT
    if x == 0:
        return Region.AXIS
    r2 = x * x + y * y
    if y <= 0:
        return Region.P0
    if y <= x:
        # 0 < y <= x
        if r2 <= 1:
            return Region.P1
        return Region.P2 if y <= ALPHA else Region.P3
    # 0 < x < y
    if y <= ALPHA:
        return Region.P6
    return Region.P5 if r2 <= 1 else Region.P4


def classify_array(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Vectorized :func:`classify`, returning ``Region`` integer codes."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r2 = x * x + y * y
    inside = r2 <= 1
    below = y <= x
    conds = [
        x < 0,
        x == 0,
        y <= 0,
        below & inside,
        below & (y <= ALPHA),
        below,
        y <= ALPHA,
        inside,
    ]
    codes = [Region.LEFT, Region.AXIS, Region.P0, Region.P1, Region.P2, Region.P3,
             Region.P6, Region.P5]
    return np.select(conds, [int(c) for c in codes], default=int(Region.P4)).astype(np.int8)


def membership(x: float, y: float) -> list[Region]:
    """Every P-region whose printed predicate holds; used to check the partition."""
    r2 = x * x + y * y
    preds = {
        Region.P0: y <= 0 < x,
        Region.P1: r2 <= 1 and 0 < y <= x,
        Region.P2: r2 > 1 and 0 < y <= ALPHA,
        Region.P3: ALPHA < y <= x,
        Region.P4: r2 > 1 and 0 < x < y,
        Region.P5: r2 <= 1 and x > 0 and y > ALPHA,
        Region.P6: 0 < x < y <= ALPHA,
    }
    return [r for r, ok in preds.items() if ok]


def boundary_distance(x, y):
    """Distance-like gap to the nearest region boundary (works on arrays)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    gaps = np.stack([
        np.abs(x),
        np.abs(y),
        np.abs(y - x),
        np.abs(y - ALPHA),
        np.abs(np.sqrt(x * x + y * y) - 1.0),
    ])
    return gaps.min(axis=0)


def contraction_factor(label: Region) -> float | None:
    if label in (Region.P1, Region.P2, Region.P3):
        return 0.5
    if label is Region.P4:
        return 1.0
    if label in (Region.P5, Region.P6):
        return GAMMA
    return None


_TRANSITIONS = {
    Region.P1: frozenset({Region.P1, Region.P2}),
    Region.P2: frozenset({Region.P3, Region.P4}),
    Region.P3: frozenset({Region.P4}),
    Region.P4: frozenset({Region.P4, Region.P5}),
    Region.P5: frozenset({Region.P6}),
    # valid when x >= epsilon; y = 0 exits land on P0 and jump to P2 next
    Region.P6: frozenset({Region.P6, Region.P1, Region.P2}),
}


def require_certified(alpha: float) -> None:
    if alpha != ALPHA:
        raise UncertifiedRegime(f"region contracts hold only for alpha = 1/sqrt(2), got {alpha}")


def allowed_transitions(label: Region, alpha: float = ALPHA) -> frozenset[Region]:
    require_certified(alpha)
    return _TRANSITIONS.get(label, ALL_REGIONS)


def transition_ok(src: Region, dst: Region, src_x: float, dst_y: float) -> bool:
    """One-step membership test, including the two special cases of P6.

    From P6 with ``x < epsilon`` nothing is claimed.  A landing exactly on
    ``y = 0`` from P6 is the boundary exit that continues through P2.
    """
    if src is Region.P6:
        if src_x < EPSILON:
            return True
        if dst is Region.P0 and dst_y == 0.0:
            return True
    return dst in _TRANSITIONS.get(src, ALL_REGIONS)


@dataclass(frozen=True)
class StepReport:
    src: State2D
    src_region: Region
    dst: State2D
    dst_region: Region
    ratio: float | None
    allowed: bool
    bound_satisfied: bool


def check_step(s: State2D, alpha: float = ALPHA) -> StepReport:
    """Apply one step and audit it against the region contracts.

    The P1 rule is the one-step refinement ``P1 -> P1 or P2``; the two-step
    consequence is checked by :func:`return_map_audit`.
    """
    require_certified(alpha)
    if not s.x > 0:
        raise ValueError(f"check_step needs x > 0, got {s.x}")
    t = dr_step_2d(s, alpha)
    src_r, dst_r = classify(s.x, s.y), classify(t.x, t.y)
    d0 = dist_sq_to_solution(s)
    d1 = dist_sq_to_solution(t)
    ratio = d1 / d0 if d0 > 0 else None
    factor = contraction_factor(src_r)
    if ratio is None or factor is None:
        bound_ok = True
    elif src_r in (Region.P5, Region.P6):
        bound_ok = ratio < factor + RATIO_TOL
    else:
        bound_ok = ratio <= factor + RATIO_TOL
    return StepReport(s, src_r, t, dst_r, ratio, transition_ok(src_r, dst_r, s.x, t.y), bound_ok)


@dataclass(frozen=True)
class ReturnAudit:
    m: int
    ratio: float
    path: tuple[Region, ...]


def return_map_audit(s0: State2D, max_iter: int = 10_000, alpha: float = ALPHA) -> ReturnAudit:
    """Iterate from a P1 point until the orbit re-enters P1.

    Returns the return index ``m >= 1`` and the largest squared-distance
    quotient ``dist^2(s_k) / dist^2(s_0)`` for ``k <= m``.  Starting exactly at
    the solution gives ``m = 1`` and ratio 0.
    """
    require_certified(alpha)
    if classify(s0.x, s0.y) is not Region.P1:
        raise ValueError(f"return_map_audit needs a P1 start, got {classify(s0.x, s0.y).label}")
    d0 = dist_sq_to_solution(s0)
    worst = 0.0
    path = [Region.P1]
    s = s0
    for m in range(1, max_iter + 1):
        s = dr_step_2d(s, alpha)
        r = classify(s.x, s.y)
        path.append(r)
        if d0 > 0:
            worst = max(worst, dist_sq_to_solution(s) / d0)
        if r is Region.P1:
            return ReturnAudit(m, worst, tuple(path))
    raise BudgetExceeded(f"no return to P1 within {max_iter} steps from ({s0.x}, {s0.y})")


def g_margin(theta):
    """``alpha + epsilon*tan(theta) - sin(theta)``; nonnegative on (pi/4, pi/2)."""
    return ALPHA + EPSILON * np.tan(theta) - np.sin(theta)


G_ARGMIN = math.asin(2.0 ** (-1.0 / 6.0))
