"""Trajectory runner, convergence-box grid check and basin-of-attraction sampler.

``run_trajectory`` follows one orbit with full bookkeeping (region log,
P0 visits, ratio audit).  ``run_batch`` advances many orbits at once with
numpy using the same floating-point operation order, so a cell computed in
a grid is bit-identical to the scalar run from the same start.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .core import ALPHA, SingularPoint, State2D, dr_step_2d
from .regions import (EPSILON, RATIO_TOL, Region, classify, classify_array,
                      contraction_factor)

DIVERGENCE_RADIUS = 1e8
# roundoff allowance on audited ratios: one step perturbs the iterate by a
# few ulps, which moves a squared-distance quotient by ~ulp / distance
AUDIT_SLACK = 8 * np.finfo(float).eps


class Outcome(enum.Enum):
    CONVERGED_RIGHT = "ConvergedRight"
    CONVERGED_LEFT = "ConvergedLeft"
    SINGULAR = "Singular"
    DIVERGED = "Diverged"
    UNDECIDED = "Undecided"

    @property
    def code(self) -> int:
        return list(Outcome).index(self)

    @classmethod
    def from_code(cls, code: int) -> Outcome:
        return list(Outcome)[code]


@dataclass(frozen=True)
class TrajectoryConfig:
    start: State2D
    alpha: float = ALPHA
    tol: float = 1e-12
    max_iter: int = 10_000
    record_orbit: bool = False

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not (math.isfinite(self.start.x) and math.isfinite(self.start.y)):
            raise ValueError("start must be finite")


@dataclass
class RatioViolation:
    index: int
    region: str
    ratio: float
    factor: float


@dataclass
class TrajectoryResult:
    start: State2D
    alpha: float
    outcome: Outcome
    iterations: int
    p0_visits: int
    last_p0_visit: Optional[int]
    first_p1_hit: Optional[int]
    region_log: list[tuple[str, int]]
    final: State2D
    violations: int = 0
    max_ratio_violation: Optional[RatioViolation] = None
    certified: bool = True
    orbit: Optional[list[tuple[float, float]]] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["outcome"] = self.outcome.value
        d["start"] = [self.start.x, self.start.y]
        d["final"] = [self.final.x, self.final.y]
        d["region_log"] = [[lab, n] for lab, n in self.region_log]
        if self.orbit is not None:
            d["orbit"] = [list(p) for p in self.orbit]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> TrajectoryResult:
        mv = d.get("max_ratio_violation")
        orbit = d.get("orbit")
        return cls(
            start=State2D(*d["start"]),
            alpha=d["alpha"],
            outcome=Outcome(d["outcome"]),
            iterations=d["iterations"],
            p0_visits=d["p0_visits"],
            last_p0_visit=d["last_p0_visit"],
            first_p1_hit=d["first_p1_hit"],
            region_log=[(lab, n) for lab, n in d["region_log"]],
            final=State2D(*d["final"]),
            violations=d.get("violations", 0),
            max_ratio_violation=RatioViolation(**mv) if mv else None,
            certified=d.get("certified", True),
            orbit=[tuple(p) for p in orbit] if orbit is not None else None,
        )


def targets(alpha: float) -> Optional[float]:
    """x-coordinate of the right intersection point, or None without one."""
    if alpha > 1.0:
        return None
    return ALPHA if alpha == ALPHA else math.sqrt(1.0 - alpha * alpha)


def _sq_dist(x: float, y: float, xs: float, alpha: float) -> float:
    dx, dy = x - xs, y - alpha
    return dx * dx + dy * dy


def run_trajectory(cfg: TrajectoryConfig) -> TrajectoryResult:
    """Iterate until convergence, divergence, a singular step or ``max_iter``.

    ``p0_visits`` and ``first_p1_hit`` are measured on ``(|x|, y)`` so that
    left-half orbits are tracked through the mirrored regions; the region
    log keeps the raw labels.
    """
    alpha = cfg.alpha
    certified = alpha == ALPHA
    xs = targets(alpha)
    tol_sq = cfg.tol * cfg.tol
    s = cfg.start
    orbit = [(s.x, s.y)] if cfg.record_orbit else None
    log: list[list] = []
    p0 = 0
    last_p0 = None
    first_p1 = None
    violations = 0
    worst: Optional[RatioViolation] = None
    outcome = Outcome.UNDECIDED
    k = 0

    def note(k: int, st: State2D) -> None:
        nonlocal p0, last_p0, first_p1
        if st.x != 0:
            if st.y <= 0:
                p0 += 1
                last_p0 = k
            if first_p1 is None and certified and classify(abs(st.x), st.y) is Region.P1:
                first_p1 = k
        if certified:
            lab = classify(st.x, st.y).label
            if log and log[-1][0] == lab:
                log[-1][1] += 1
            else:
                log.append([lab, 1])

    if s.x == 0:
        note(0, s)
        outcome = Outcome.SINGULAR
    else:
        while True:
            note(k, s)
            if xs is not None:
                if _sq_dist(s.x, s.y, xs, alpha) <= tol_sq:
                    outcome = Outcome.CONVERGED_RIGHT
                    break
                if _sq_dist(s.x, s.y, -xs, alpha) <= tol_sq:
                    outcome = Outcome.CONVERGED_LEFT
                    break
            if math.sqrt(s.x * s.x + s.y * s.y) > DIVERGENCE_RADIUS:
                outcome = Outcome.DIVERGED
                break
            if k >= cfg.max_iter:
                break
            try:
                t = dr_step_2d(s, alpha)
            except SingularPoint:
                outcome = Outcome.SINGULAR
                break
            if certified and s.x != 0:
                mx = abs(s.x)
                factor = contraction_factor(classify(mx, s.y))
                d0 = _sq_dist(mx, s.y, ALPHA, ALPHA)
                if factor is not None and d0 > 0:
                    ratio = _sq_dist(abs(t.x), t.y, ALPHA, ALPHA) / d0
                    excess = ratio - factor
                    if excess > RATIO_TOL + AUDIT_SLACK / math.sqrt(d0):
                        violations += 1
                        if worst is None or excess > worst.ratio - worst.factor:
                            worst = RatioViolation(k, classify(mx, s.y).label, ratio, factor)
            s = t
            k += 1
            if orbit is not None:
                orbit.append((s.x, s.y))
    return TrajectoryResult(
        start=cfg.start, alpha=alpha, outcome=outcome, iterations=k,
        p0_visits=p0, last_p0_visit=last_p0, first_p1_hit=first_p1,
        region_log=[(lab, n) for lab, n in log], final=s,
        violations=violations, max_ratio_violation=worst, certified=certified,
        orbit=orbit,
    )


# -- batch runner -----------------------------------------------------------

_FACTORS = np.full(len(Region), np.nan)
for _r in Region:
    _f = contraction_factor(_r)
    if _f is not None:
        _FACTORS[int(_r)] = _f


@dataclass
class BatchResult:
    x0: np.ndarray
    y0: np.ndarray
    outcome: np.ndarray
    iterations: np.ndarray
    p0_visits: np.ndarray
    last_p0_visit: np.ndarray     # -1 when never visited
    first_p1_hit: np.ndarray      # -1 when never hit
    final_x: np.ndarray
    final_y: np.ndarray
    violations: np.ndarray

    def __len__(self):
        return len(self.x0)

    @classmethod
    def concat(cls, parts: list[BatchResult]) -> BatchResult:
        return cls(*[np.concatenate([getattr(p, f) for p in parts])
                     for f in cls.__dataclass_fields__])


def run_batch(x0, y0, alpha: float = ALPHA, tol: float = 1e-12,
              max_iter: int = 10_000) -> BatchResult:
    """Vectorized :func:`run_trajectory` without the orbit and region log."""
    x0 = np.asarray(x0, dtype=float).ravel()
    y0 = np.asarray(y0, dtype=float).ravel()
    n = len(x0)
    certified = alpha == ALPHA
    xs = targets(alpha)
    tol_sq = tol * tol
    outcome = np.full(n, Outcome.UNDECIDED.code, dtype=np.int8)
    iters = np.zeros(n, dtype=np.int64)
    p0 = np.zeros(n, dtype=np.int64)
    last_p0 = np.full(n, -1, dtype=np.int64)
    first_p1 = np.full(n, -1, dtype=np.int64)
    viol = np.zeros(n, dtype=np.int64)
    fx, fy = x0.copy(), y0.copy()

    singular = x0 == 0
    outcome[singular] = Outcome.SINGULAR.code
    idx = np.flatnonzero(~singular)
    x, y = x0[idx], y0[idx]
    k = 0
    while idx.size:
        # bookkeeping on the current states
        in_p0 = y <= 0
        p0[idx[in_p0]] += 1
        last_p0[idx[in_p0]] = k
        labels = classify_array(np.abs(x), y)
        if certified:
            newp1 = (labels == int(Region.P1)) & (first_p1[idx] < 0)
            first_p1[idx[newp1]] = k
        done = np.zeros(idx.size, dtype=bool)
        if xs is not None:
            dxr, dxl, dy = x - xs, x + xs, y - alpha
            right = dxr * dxr + dy * dy <= tol_sq
            left = ~right & (dxl * dxl + dy * dy <= tol_sq)
            outcome[idx[right]] = Outcome.CONVERGED_RIGHT.code
            outcome[idx[left]] = Outcome.CONVERGED_LEFT.code
            done |= right | left
        rho = np.sqrt(x * x + y * y)
        div = ~done & (rho > DIVERGENCE_RADIUS)
        outcome[idx[div]] = Outcome.DIVERGED.code
        done |= div
        if k >= max_iter:
            done[:] = True
        zero = ~done & (rho == 0.0)
        outcome[idx[zero]] = Outcome.SINGULAR.code
        done |= zero
        if done.any():
            fin = idx[done]
            iters[fin] = k
            fx[fin], fy[fin] = x[done], y[done]
            keep = ~done
            idx, x, y, rho, labels = idx[keep], x[keep], y[keep], rho[keep], labels[keep]
        if not idx.size:
            break
        nx = x / rho
        ny = alpha + (1.0 - 1.0 / rho) * y
        if certified:
            factor = _FACTORS[labels]
            dx0, dy0 = np.abs(x) - ALPHA, y - ALPHA
            dx1, dy1 = np.abs(nx) - ALPHA, ny - ALPHA
            d0 = dx0 * dx0 + dy0 * dy0
            d1 = dx1 * dx1 + dy1 * dy1
            with np.errstate(divide="ignore", invalid="ignore"):
                excess = d1 / d0 - factor
                bad = (~np.isnan(factor)) & (d0 > 0) & (
                    excess > RATIO_TOL + AUDIT_SLACK / np.sqrt(d0))
            viol[idx[bad]] += 1
        x, y = nx, ny
        k += 1
    return BatchResult(x0, y0, outcome, iters, p0, last_p0, first_p1, fx, fy, viol)


# -- convergence box --------------------------------------------------------

@dataclass
class GridReport:
    step: float
    tol: float
    max_iter: int
    total: int
    converged: int
    max_iterations: int
    worst_final_distance: float
    violations: int
    failures: list[tuple[float, float, str]]

    @property
    def all_converged(self) -> bool:
        return self.converged == self.total

    def to_dict(self) -> dict:
        return asdict(self)


def axis_points(lo: float, hi: float, step: float) -> np.ndarray:
    """``lo, lo + step, ...`` up to ``hi``, with ``hi`` itself always included."""
    n = int(math.floor((hi - lo) / step + 1e-9))
    pts = lo + step * np.arange(n + 1)
    if hi - pts[-1] > 1e-12:
        pts = np.append(pts, hi)
    return pts


def theorem_grid(step: float) -> tuple[np.ndarray, np.ndarray]:
    xs = axis_points(EPSILON, 1.0, step)
    ys = axis_points(0.0, 1.0, step)
    gx, gy = np.meshgrid(xs, ys)
    return gx.ravel(), gy.ravel()


def verify_theorem_main(step: float = 0.01, tol: float = 1e-9, max_iter: int = 1000) -> GridReport:
    """Run every grid point of ``[epsilon, 1] x [0, 1]``; all must reach (alpha, alpha)."""
    if not step > 0:
        raise ValueError("step must be positive")
    gx, gy = theorem_grid(step)
    res = run_batch(gx, gy, ALPHA, tol, max_iter)
    ok = res.outcome == Outcome.CONVERGED_RIGHT.code
    dist = np.sqrt((res.final_x - ALPHA) ** 2 + (res.final_y - ALPHA) ** 2)
    fails = [(float(a), float(b), Outcome.from_code(int(o)).value)
             for a, b, o in zip(gx[~ok], gy[~ok], res.outcome[~ok])]
    return GridReport(step, tol, max_iter, len(gx), int(ok.sum()),
                      int(res.iterations.max()), float(dist.max()),
                      int(res.violations.sum()), fails[:20])


# -- basin sampling ---------------------------------------------------------

@dataclass
class BasinGrid:
    x_range: tuple[float, float]
    y_range: tuple[float, float]
    nx: int
    ny: int
    alpha: float = ALPHA
    tol: float = 1e-12
    max_iter: int = 10_000
    cells: Optional[BatchResult] = field(default=None, repr=False)

    def __post_init__(self):
        for lo, hi in (self.x_range, self.y_range):
            if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
                raise ValueError(f"bad range ({lo}, {hi})")
        if self.nx < 1 or self.ny < 1:
            raise ValueError("grid needs nx, ny >= 1")

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        return (np.linspace(*self.x_range, self.nx), np.linspace(*self.y_range, self.ny))

    def points(self) -> tuple[np.ndarray, np.ndarray]:
        """Row-major grid points: rows are y values, columns x values."""
        xs, ys = self.axes()
        gx, gy = np.meshgrid(xs, ys)
        return gx.ravel(), gy.ravel()

    def outcome_counts(self) -> dict[str, int]:
        codes, counts = np.unique(self.cells.outcome, return_counts=True)
        out = {o.value: 0 for o in Outcome}
        for c, n in zip(codes, counts):
            out[Outcome.from_code(int(c)).value] = int(n)
        return out

    def outcome_image(self) -> np.ndarray:
        return self.cells.outcome.reshape(self.ny, self.nx)


def _batch_job(args):
    x, y, alpha, tol, max_iter = args
    return run_batch(x, y, alpha, tol, max_iter)


def sample_basin(grid: BasinGrid, workers: int = 1, chunk: int = 4096) -> BasinGrid:
    """Fill every cell of ``grid``.  Chunks are merged by index, so the result
    does not depend on ``workers``."""
    gx, gy = grid.points()
    jobs = [(gx[i:i + chunk], gy[i:i + chunk], grid.alpha, grid.tol, grid.max_iter)
            for i in range(0, len(gx), chunk)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_batch_job, jobs))
    else:
        parts = [_batch_job(j) for j in jobs]
    grid.cells = BatchResult.concat(parts)
    return grid
