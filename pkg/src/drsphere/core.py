"""Projections, reflections and the Douglas-Rachford operator for a sphere and a line.

The sphere is ``S = {x : |x| = 1}`` and the line is ``L = {t*a + alpha*b}``,
with ``a`` and ``b`` the first two vectors of the coordinate basis.  The
iteration is ``x -> (R_L R_S x + x) / 2``.

Scalar operations work on :class:`PointN` / :class:`State2D`; the ``*_array``
variants apply the same formulas elementwise to numpy arrays and are used by
the samplers and grid runners.  All arithmetic is IEEE double.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

ALPHA = 1.0 / math.sqrt(2.0)


class SingularPoint(ValueError):
    """Raised when the sphere projection is requested at the origin."""


class DimensionMismatch(ValueError):
    pass


class Target(enum.Enum):
    SPHERE = "sphere"
    LINE = "line"


@dataclass(frozen=True)
class Params:
    alpha: float = ALPHA
    dim: int = 2

    def __post_init__(self):
        if not math.isfinite(self.alpha) or self.alpha < 0:
            raise ValueError(f"alpha must be finite and >= 0, got {self.alpha!r}")
        if self.dim < 2:
            raise ValueError(f"dimension must be >= 2, got {self.dim}")

    @property
    def certified(self) -> bool:
        """True only for the regime covered by the region contracts."""
        return self.dim == 2 and self.alpha == ALPHA


@dataclass(frozen=True)
class PointN:
    coords: tuple[float, ...]

    def __init__(self, coords: Sequence[float]):
        c = tuple(float(v) for v in coords)
        if len(c) < 2:
            raise DimensionMismatch(f"need at least 2 coordinates, got {len(c)}")
        if not all(math.isfinite(v) for v in c):
            raise ValueError(f"non-finite coordinate in {c}")
        object.__setattr__(self, "coords", c)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def norm(self) -> float:
        return math.sqrt(math.fsum(v * v for v in self.coords))

    def __getitem__(self, k: int) -> float:
        return self.coords[k]

    def __iter__(self):
        return iter(self.coords)

    def __add__(self, other: PointN) -> PointN:
        _check_dim(self, other.dim)
        return PointN([u + v for u, v in zip(self.coords, other.coords)])

    def __sub__(self, other: PointN) -> PointN:
        _check_dim(self, other.dim)
        return PointN([u - v for u, v in zip(self.coords, other.coords)])

    def scale(self, s: float) -> PointN:
        return PointN([s * v for v in self.coords])


@dataclass(frozen=True)
class State2D:
    """A planar iterate ``(x, y)``; radius and argument are derived on demand."""

    x: float
    y: float

    @property
    def rho(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y)

    @property
    def theta(self) -> float:
        return math.atan2(self.y, self.x)

    def mirror(self) -> State2D:
        return State2D(-self.x, self.y)

    def as_point(self) -> PointN:
        return PointN((self.x, self.y))


def _check_dim(p: PointN, dim: int) -> None:
    if p.dim != dim:
        raise DimensionMismatch(f"point has dimension {p.dim}, expected {dim}")


def project_line(p: PointN, params: Params) -> PointN:
    _check_dim(p, params.dim)
    return PointN((p[0], params.alpha) + (0.0,) * (p.dim - 2))


def project_sphere(p: PointN) -> PointN:
    rho = p.norm()
    if rho == 0.0:
        raise SingularPoint("projection onto the sphere is set-valued at the origin")
    return PointN([v / rho for v in p.coords])


def reflect(p: PointN, target: Target, params: Params) -> PointN:
    """``2 P(p) - p`` for the sphere or the line."""
    _check_dim(p, params.dim)
    if target is Target.SPHERE:
        proj = project_sphere(p)
    else:
        proj = project_line(p, params)
    return PointN([2.0 * u - v for u, v in zip(proj.coords, p.coords)])


def dr_step(p: PointN, params: Params) -> PointN:
    """Closed-form Douglas-Rachford step in any dimension."""
    _check_dim(p, params.dim)
    rho = math.sqrt(math.fsum(v * v for v in p.coords))
    if rho == 0.0:
        raise SingularPoint("Douglas-Rachford step undefined at the origin")
    shrink = 1.0 - 1.0 / rho
    rest = [shrink * v for v in p.coords[2:]]
    return PointN([p[0] / rho, params.alpha + shrink * p[1], *rest])


def dr_step_composed(p: PointN, params: Params) -> PointN:
    """The same step assembled from the two reflections; used as a cross-check."""
    q = reflect(reflect(p, Target.SPHERE, params), Target.LINE, params)
    return PointN([(u + v) / 2.0 for u, v in zip(q.coords, p.coords)])


def dr_step_2d(s: State2D, alpha: float = ALPHA) -> State2D:
    rho = math.sqrt(s.x * s.x + s.y * s.y)
    if rho == 0.0:
        raise SingularPoint("Douglas-Rachford step undefined at the origin")
    return State2D(s.x / rho, alpha + (1.0 - 1.0 / rho) * s.y)


def dr_step_2d_polar(s: State2D, alpha: float = ALPHA) -> State2D:
    """Polar form of the planar step: ``(cos t, alpha + (rho - 1) sin t)``."""
    rho, theta = s.rho, s.theta
    if rho == 0.0:
        raise SingularPoint("Douglas-Rachford step undefined at the origin")
    return State2D(math.cos(theta), alpha + (rho - 1.0) * math.sin(theta))


def dist_sq_to_solution(s: State2D, sign: int = 1, alpha: float = ALPHA) -> float:
    """Squared distance to ``(sign * sqrt(1 - alpha^2), alpha)``.

    For the default ``alpha = 1/sqrt(2)`` the target is ``(+-alpha, alpha)``.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    xs = sign * (ALPHA if alpha == ALPHA else math.sqrt(max(0.0, 1.0 - alpha * alpha)))
    return (s.x - xs) ** 2 + (s.y - alpha) ** 2


def solution_point(sign: int = 1, alpha: float = ALPHA) -> State2D | None:
    """Intersection point of S and L on the given side, or None when alpha > 1."""
    if alpha > 1.0:
        return None
    xs = ALPHA if alpha == ALPHA else math.sqrt(1.0 - alpha * alpha)
    return State2D(sign * xs, alpha)


# -- vectorized forms -------------------------------------------------------

def dr_step_array(points: np.ndarray, alpha: float = ALPHA) -> np.ndarray:
    """Closed-form step applied row-wise to an ``(n, N)`` array."""
    pts = np.asarray(points, dtype=float)
    rho = np.sqrt(np.sum(pts * pts, axis=1))
    if np.any(rho == 0.0):
        raise SingularPoint("Douglas-Rachford step undefined at the origin")
    shrink = 1.0 - 1.0 / rho
    out = pts * shrink[:, None]
    out[:, 0] = pts[:, 0] / rho
    out[:, 1] += alpha
    return out


def dr_step_composed_array(points: np.ndarray, alpha: float = ALPHA) -> np.ndarray:
    """Row-wise ``(R_L R_S + I) / 2`` built from explicit projections."""
    pts = np.asarray(points, dtype=float)
    rho = np.sqrt(np.sum(pts * pts, axis=1))
    if np.any(rho == 0.0):
        raise SingularPoint("Douglas-Rachford step undefined at the origin")
    r_sphere = 2.0 * (pts / rho[:, None]) - pts
    p_line = np.zeros_like(r_sphere)
    p_line[:, 0] = r_sphere[:, 0]
    p_line[:, 1] = alpha
    r_line = 2.0 * p_line - r_sphere
    return (r_line + pts) / 2.0


def dr_step_2d_array(x: np.ndarray, y: np.ndarray, alpha: float = ALPHA):
    """Planar step on coordinate arrays; same operation order as :func:`dr_step_2d`."""
    rho = np.sqrt(x * x + y * y)
    return x / rho, alpha + (1.0 - 1.0 / rho) * y
