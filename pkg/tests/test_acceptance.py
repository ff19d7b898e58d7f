"""The ten acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line, shown in the terminal summary.
"""

import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from drsphere.basin import (BasinGrid, Outcome, TrajectoryConfig, run_trajectory,
                            sample_basin, verify_theorem_main)
from drsphere.certify.claims import run_claims
from drsphere.core import ALPHA, State2D, dr_step_2d, dr_step_array, dr_step_composed_array
from drsphere.regions import GAMMA, Region, classify, return_map_audit
from drsphere.verify import contract_p4, contract_p56, contract_p123, sample_regions


def record(n, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] #{n} {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_1_theorem_grid():
    t = time.perf_counter()
    rep = verify_theorem_main(step=0.01, tol=1e-9, max_iter=1000)
    dt = time.perf_counter() - t
    ok = rep.all_converged and rep.worst_final_distance <= 1e-9 and dt < 5
    record(1, ok, f"theorem grid: {rep.converged}/{rep.total} converged, worst distance "
                  f"{rep.worst_final_distance:.2e}, max iterations {rep.max_iterations}, {dt:.2f}s")


def test_2_p123_contraction():
    t = time.perf_counter()
    res = contract_p123(100_000, np.random.default_rng(20240601))
    dt = time.perf_counter() - t
    s = res.stats
    ok = res.passed and s["max_ratio"] <= 0.5 + 1e-12 and dt < 2
    record(2, ok, f"P1-P3 contraction: max ratio {s['max_ratio']:.15f}, "
                  f"{s['transition_violations']} transition violations, {dt:.2f}s")


def test_3_p4():
    res = contract_p4(100_000, np.random.default_rng(3), reach=1000, max_iter=10_000)
    s = res.stats
    ok = (res.passed and s["max_ratio"] <= 1 + 1e-12 and s["transition_violations"] == 0
          and s["reach_checked"] == 1000 and s["reach_failures"] == 0)
    record(3, ok, f"P4: max ratio {s['max_ratio']:.6f}, successors in P4/P5, "
                  f"{s['reach_checked'] - s['reach_failures']}/1000 reach P5 "
                  f"(max {s['max_steps_to_p5']} steps)")


def test_4_p5_p6():
    res = contract_p56(100_000, np.random.default_rng(4))
    s = res.stats
    gamma_ok = abs(GAMMA - 1.508790) < 1e-6 and GAMMA ** 3 / 4 <= 0.86
    ok = res.passed and s["max_ratio"] < GAMMA and gamma_ok
    record(4, ok, f"P5/P6: max ratio {s['max_ratio']:.6f} < gamma {GAMMA:.6f}, "
                  f"gamma^3/4 = {GAMMA ** 3 / 4:.4f}, P5->P6 failures {s['p5_not_to_p6']}, "
                  f"P6 x-growth failures {s['p6_x_not_increasing']}")


def test_5_return_map():
    rng = np.random.default_rng(5)
    x, y = sample_regions(rng, (Region.P1,), 1000, box=1.0, y_low=0.0)
    worst, longest = 0.0, 0
    for a, b in zip(x, y):
        audit = return_map_audit(State2D(float(a), float(b)))
        worst = max(worst, audit.ratio)
        longest = max(longest, audit.m)
    record(5, worst <= 0.86, f"return map: 1000 P1 starts, max ratio {worst:.6f}, max m {longest}")


def test_6_certificates():
    t = time.perf_counter()
    certs = {c.claim_id: c for c in run_claims()}
    dt = time.perf_counter() - t
    q = certs["quintic-root"].witness["root_interval"]
    u = certs["upsilon-chain"].witness["upsilon_next"]
    g = certs["g-minimum"].witness
    checks = {
        "all proved": all(c.proved for c in certs.values()),
        "quintic root": q[0] <= 0.186012649543 + 1e-10 and q[1] >= 0.186012649543 - 1e-10
        and q[1] - q[0] <= 2e-10,
        "upsilon": u[0] - 1e-9 <= 0.18124764381 <= u[1] + 1e-9,
        "g minimum": max(abs(v) for v in g["g"]) <= 1e-12,
        "eq3 sign": certs["eq3-nonpositive"].status.value == "PROVED_NONPOSITIVE",
        "f_eta sign": certs["f-eta-negative"].status.value == "PROVED_NEGATIVE",
        "cor-p2 note": bool(certs["cor-p2-geometry"].notes),
        "runtime": dt < 60,
    }
    bad = [k for k, v in checks.items() if not v]
    record(6, not bad, f"certificates: {sum(c.proved for c in certs.values())}/{len(certs)} "
                       f"proved in {dt:.2f}s" + (f"; failing: {bad}" if bad else ""))


AXIS_STARTS = (0.1, 0.5, 1.0, 2.0)


def _axis_orbit(x0, n=7):
    s, out = State2D(x0, 0.0), []
    for _ in range(n):
        s = dr_step_2d(s)
        out.append(s)
    return out


def test_7a_axis_start_first_step():
    ok = all(abs(o[0].x - 1.0) <= 1e-15 and abs(o[0].y - ALPHA) <= 1e-15
             for o in map(_axis_orbit, AXIS_STARTS))
    record("7a", ok, "step 1 from (x0, 0) is (1, alpha) for x0 in {0.1, 0.5, 1.0, 2.0}")


@pytest.mark.xfail(strict=True, reason="iterate 6 lies in P6; P1 is first reached at iterate 7")
def test_7b_axis_start_sixth_step_in_p1():
    labels = [classify(o[5].x, o[5].y) for o in map(_axis_orbit, AXIS_STARTS)]
    seventh = [classify(o[6].x, o[6].y) for o in map(_axis_orbit, AXIS_STARTS)]
    ok = all(r is Region.P1 for r in labels)
    line = (f"[{'PASS' if ok else 'FAIL'}] #7b step 6 in P1: observed "
            f"{sorted({r.label for r in labels})}, step 7 {sorted({r.label for r in seventh})}")
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def test_8_symmetry_and_singular_axis():
    rng = np.random.default_rng(8)
    worst = 0.0
    for x0, y0 in zip(rng.uniform(0.01, 3, 200), rng.uniform(-3, 3, 200)):
        a = run_trajectory(TrajectoryConfig(State2D(x0, y0), record_orbit=True))
        b = run_trajectory(TrajectoryConfig(State2D(-x0, y0), record_orbit=True))
        assert len(a.orbit) == len(b.orbit)
        for (x1, y1), (x2, y2) in zip(a.orbit, b.orbit):
            worst = max(worst, abs(x1 + x2), abs(y1 - y2))
    axis_ok = True
    for y0 in (0.3, -0.2, 1.7, 1e-8, -5.0):
        s = State2D(0.0, y0)
        for _ in range(1000):
            if s.rho == 0:
                break
            s = dr_step_2d(s)
            axis_ok &= s.x == 0.0
    record(8, worst <= 1e-12 and axis_ok,
           f"mirror orbits agree to {worst:.1e}; x0 = 0 orbits keep x = 0 exactly: {axis_ok}")


def test_9_operator_consistency():
    rng = np.random.default_rng(9)
    n = 1_000_000
    rho = 10 ** rng.uniform(-6, 1, n)
    t = rng.uniform(0, 2 * np.pi, n)
    pts = np.column_stack([rho * np.cos(t), rho * np.sin(t)])
    a, b = dr_step_array(pts), dr_step_composed_array(pts)
    rel = np.linalg.norm(a - b, axis=1) / np.maximum(np.linalg.norm(a, axis=1), 1.0)
    record(9, rel.max() <= 1e-12, f"closed form vs composed reflections on 10^6 points: "
                                  f"max relative difference {rel.max():.2e}")


def test_10_basin_probe():
    spec = dict(x_range=(-2.0, 2.0), y_range=(-2.0, 2.0), nx=200, ny=200)
    g1 = sample_basin(BasinGrid(**spec))
    g2 = sample_basin(BasinGrid(**spec), workers=2, chunk=5000)
    same = all(np.array_equal(getattr(g1.cells, k), getattr(g2.cells, k))
               for k in g1.cells.__dataclass_fields__)
    c = g1.cells
    right_bad = int(((c.outcome == Outcome.CONVERGED_RIGHT.code) & ~(c.x0 > 0)).sum())
    left_bad = int(((c.outcome == Outcome.CONVERGED_LEFT.code) & ~(c.x0 < 0)).sum())
    anomalies = int(((c.outcome == Outcome.UNDECIDED.code) & (c.p0_visits > 0)).sum())
    counts = g1.outcome_counts()
    record(10, same and right_bad == 0 and left_bad == 0 and int(c.violations.sum()) == 0,
           f"basin 200x200: {counts}, deterministic across workers: {same}, "
           f"anomalies (Undecided with P0 visits): {anomalies}, ratio violations {int(c.violations.sum())}")
