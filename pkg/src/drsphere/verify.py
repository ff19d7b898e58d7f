"""Seeded, vectorized property suites for the region contracts.

Each suite draws points with ``numpy.random.default_rng(seed)``, keeps only
those at least ``MARGIN`` away from every region boundary, applies one step
(or iterates) and checks the contract.  A failing suite carries the first
offending start point as its witness.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np

from .core import ALPHA, dr_step_2d_array
from .regions import (EPSILON, GAMMA, RATIO_TOL, Region, _TRANSITIONS, boundary_distance,
                      classify_array, g_margin, require_certified)

MARGIN = 1e-9
BOX = 3.0


@dataclass
class SuiteResult:
    name: str
    passed: bool
    samples: int
    stats: dict = field(default_factory=dict)
    witness: Optional[dict] = None

    def to_dict(self) -> dict:
        return asdict(self)


def sample_regions(rng: np.random.Generator, regions, n: int, box: float = BOX,
                   y_low: float = -BOX) -> tuple[np.ndarray, np.ndarray]:
    """Rejection-sample ``n`` points of ``(0, box] x [y_low, box]`` in ``regions``."""
    codes = np.array([int(r) for r in regions])
    xs, ys = [], []
    got = 0
    while got < n:
        m = max(1024, 2 * (n - got))
        x = rng.uniform(0.0, box, m)
        y = rng.uniform(y_low, box, m)
        keep = np.isin(classify_array(x, y), codes) & (boundary_distance(x, y) >= MARGIN) & (x > 0)
        xs.append(x[keep])
        ys.append(y[keep])
        got += int(keep.sum())
    return np.concatenate(xs)[:n], np.concatenate(ys)[:n]


def _dist_sq(x, y):
    dx, dy = x - ALPHA, y - ALPHA
    return dx * dx + dy * dy


def _witness(mask, x, y, **extra) -> Optional[dict]:
    bad = np.flatnonzero(mask)
    if not bad.size:
        return None
    i = bad[0]
    w = {"x": float(x[i]), "y": float(y[i])}
    w.update({k: (float(v[i]) if np.ndim(v) else v) for k, v in extra.items()})
    return w


def _allowed(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    ok = np.zeros(src.shape, dtype=bool)
    for r, targets in _TRANSITIONS.items():
        sel = src == int(r)
        ok[sel] = np.isin(dst[sel], [int(t) for t in targets])
    return ok


def _one_step(rng, regions, n, factor, strict=False, y_low=0.0):
    x, y = sample_regions(rng, regions, n, y_low=y_low)
    nx, ny = dr_step_2d_array(x, y)
    ratio = _dist_sq(nx, ny) / _dist_sq(x, y)
    src, dst = classify_array(x, y), classify_array(nx, ny)
    over = ratio >= factor if strict else ratio > factor + RATIO_TOL
    return x, y, nx, ny, ratio, src, dst, over


def contract_p123(n: int, rng: np.random.Generator) -> SuiteResult:
    x, y, nx, ny, ratio, src, dst, over = _one_step(
        rng, (Region.P1, Region.P2, Region.P3), n, 0.5)
    trans = ~_allowed(src, dst)
    bad = over | trans
    return SuiteResult("p1-p2-p3", not bad.any(), n,
                       {"max_ratio": float(ratio.max()), "ratio_bound": 0.5,
                        "transition_violations": int(trans.sum()),
                        "ratio_violations": int(over.sum())},
                       _witness(bad, x, y, ratio=ratio, next_x=nx, next_y=ny))


def contract_p4(n: int, rng: np.random.Generator, reach: int = 1000,
                max_iter: int = 10_000) -> SuiteResult:
    x, y, nx, ny, ratio, src, dst, over = _one_step(rng, (Region.P4,), n, 1.0)
    trans = ~_allowed(src, dst)
    # iterate the first `reach` points until they enter P5
    k = min(reach, n)
    px, py = x[:k].copy(), y[:k].copy()
    steps = np.full(k, -1)
    active = np.arange(k)
    for it in range(1, max_iter + 1):
        if not active.size:
            break
        px[active], py[active] = dr_step_2d_array(px[active], py[active])
        hit = classify_array(px[active], py[active]) == int(Region.P5)
        steps[active[hit]] = it
        active = active[~hit]
    unreached = steps < 0
    bad = over | trans
    bad[:k] |= unreached
    return SuiteResult("p4", not bad.any(), n,
                       {"max_ratio": float(ratio.max()), "ratio_bound": 1.0,
                        "transition_violations": int(trans.sum()),
                        "ratio_violations": int(over.sum()),
                        "reach_checked": k, "reach_failures": int(unreached.sum()),
                        "max_steps_to_p5": int(steps.max()) if k else 0},
                       _witness(bad, x, y, ratio=ratio))


def contract_p56(n: int, rng: np.random.Generator) -> SuiteResult:
    x, y, nx, ny, ratio, src, dst, over = _one_step(
        rng, (Region.P5, Region.P6), n, GAMMA, strict=True)
    from5 = src == int(Region.P5)
    bad5 = from5 & (dst != int(Region.P6))
    from6 = (src == int(Region.P6)) & (x >= EPSILON)
    grow = from6 & ~(nx > x)
    exit6 = from6 & ~(np.isin(dst, [int(Region.P6), int(Region.P1), int(Region.P2)])
                      | ((dst == int(Region.P0)) & (ny == 0.0)))
    bad = over | bad5 | grow | exit6
    return SuiteResult("p5-p6", not bad.any(), n,
                       {"max_ratio": float(ratio.max()), "gamma": GAMMA,
                        "gamma_cubed_over_4": GAMMA ** 3 / 4,
                        "ratio_violations": int(over.sum()),
                        "p5_not_to_p6": int(bad5.sum()),
                        "p6_x_not_increasing": int(grow.sum()),
                        "p6_bad_exit": int(exit6.sum()),
                        "from_p6_x_ge_eps": int(from6.sum())},
                       _witness(bad, x, y, ratio=ratio, next_x=nx, next_y=ny))


def contract_p0(n: int, rng: np.random.Generator, max_iter: int = 10_000) -> SuiteResult:
    x, y = sample_regions(rng, (Region.P0,), n)
    px, py = x.copy(), y.copy()
    steps = np.full(n, -1)
    active = np.arange(n)
    for it in range(1, max_iter + 1):
        if not active.size:
            break
        px[active], py[active] = dr_step_2d_array(px[active], py[active])
        out = py[active] > 0
        steps[active[out]] = it
        active = active[~out]
    bad = steps < 0
    return SuiteResult("p0-exit", not bad.any(), n,
                       {"max_steps_to_leave": int(steps.max()), "stuck": int(bad.sum())},
                       _witness(bad, x, y))


def prop_no_long_runs(n: int, rng: np.random.Generator, limit: int = 10_000,
                      tol: float = 1e-12) -> SuiteResult:
    """Runs of consecutive iterates with ``x < y`` stay shorter than ``limit``.

    Runs are counted until the orbit is within ``tol`` of the fixed point,
    where the side of the diagonal is decided by roundoff alone.
    """
    x, y = sample_regions(rng, tuple(Region)[:7], n)
    px, py = x.copy(), y.copy()
    run = np.zeros(n, dtype=np.int64)
    longest = np.zeros(n, dtype=np.int64)
    active = np.arange(n)
    for _ in range(4 * limit):
        if not active.size:
            break
        ax, ay = px[active], py[active]
        near = _dist_sq(ax, ay) <= tol * tol
        above = (ax < ay) & ~near
        run[active] = np.where(above, run[active] + 1, 0)
        longest[active] = np.maximum(longest[active], run[active])
        keep = ~near
        active = active[keep]
        px[active], py[active] = dr_step_2d_array(px[active], py[active])
    bad = longest >= limit
    return SuiteResult("no-long-runs", not bad.any(), n,
                       {"longest_run": int(longest.max()), "limit": limit,
                        "unfinished": int(active.size)},
                       _witness(bad, x, y, longest=longest))


def return_map(n: int, rng: np.random.Generator, bound: float = 0.86,
               max_iter: int = 10_000) -> SuiteResult:
    x, y = sample_regions(rng, (Region.P1,), n, box=1.0, y_low=0.0)
    d0 = _dist_sq(x, y)
    worst = np.zeros(n)
    m = np.full(n, -1)
    px, py = x.copy(), y.copy()
    active = np.arange(n)
    for it in range(1, max_iter + 1):
        if not active.size:
            break
        px[active], py[active] = dr_step_2d_array(px[active], py[active])
        worst[active] = np.maximum(worst[active], _dist_sq(px[active], py[active]) / d0[active])
        back = classify_array(px[active], py[active]) == int(Region.P1)
        m[active[back]] = it
        active = active[~back]
    bad = (m < 0) | (worst > bound)
    return SuiteResult("return-map", not bad.any(), n,
                       {"max_ratio": float(worst.max()), "bound": bound,
                        "max_return_steps": int(m.max()), "no_return": int((m < 0).sum())},
                       _witness(bad, x, y, ratio=worst))


def g_margin_grid(n: int = 10_000) -> SuiteResult:
    theta = np.linspace(np.pi / 4, np.pi / 2, n + 2)[1:-1]
    g = g_margin(theta)
    bad = g < -1e-12
    return SuiteResult("g-margin", not bad.any(), n,
                       {"min_g": float(g.min()), "argmin": float(theta[np.argmin(g)])},
                       _witness(bad, theta, g))


def partition(n: int, rng: np.random.Generator) -> SuiteResult:
    """Every right-half-plane point satisfies exactly one region predicate."""
    x = rng.uniform(0.0, BOX, n)
    y = rng.uniform(-BOX, BOX, n)
    x = x[x > 0]
    y = y[: len(x)]
    r2 = x * x + y * y
    preds = np.stack([
        y <= 0,
        (r2 <= 1) & (0 < y) & (y <= x),
        (r2 > 1) & (0 < y) & (y <= ALPHA),
        (ALPHA < y) & (y <= x),
        (r2 > 1) & (x < y),
        (r2 <= 1) & (y > ALPHA),
        (x < y) & (0 < y) & (y <= ALPHA),
    ])
    hits = preds.sum(axis=0)
    bad = hits != 1
    return SuiteResult("partition", not bad.any(), len(x),
                       {"non_unique": int(bad.sum())}, _witness(bad, x, y))


SUITES: dict[str, Callable[[int, np.random.Generator], SuiteResult]] = {
    "partition": partition,
    "p1-p2-p3": contract_p123,
    "p4": contract_p4,
    "p5-p6": contract_p56,
    "p0-exit": contract_p0,
    "no-long-runs": prop_no_long_runs,
    "return-map": return_map,
}

# per-suite sample caps relative to --samples (iterated suites are costlier)
_SCALE = {"p0-exit": 0.1, "no-long-runs": 0.1, "return-map": 0.01}


def run_contract_suites(samples: int = 100_000, seed: int = 0, alpha: float = ALPHA,
                     names=None) -> list[SuiteResult]:
    """Run every suite with its own child generator, so adding or dropping
    one suite does not change the draws of the others."""
    require_certified(alpha)
    names = list(SUITES) if names is None else list(names)
    children = np.random.SeedSequence(seed).spawn(len(SUITES))
    seeds = dict(zip(SUITES, children))
    out = []
    for name in names:
        n = max(1, int(round(samples * _SCALE.get(name, 1.0))))
        out.append(SUITES[name](n, np.random.default_rng(seeds[name])))
    out.append(g_margin_grid())
    return out
