"""CSV / JSON / SVG writers for trajectories and basin grids, plus JSON import."""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from pathlib import Path
from typing import Union

import numpy as np

from .basin import BasinGrid, BatchResult, Outcome, TrajectoryResult

CSV_FIELDS = ["x0", "y0", "outcome", "iterations", "p0_visits", "first_p1_hit",
              "final_x", "final_y"]

OUTCOME_COLORS = {
    Outcome.CONVERGED_RIGHT: "#2b6cb0",
    Outcome.CONVERGED_LEFT: "#c05621",
    Outcome.SINGULAR: "#1a202c",
    Outcome.DIVERGED: "#9b2c2c",
    Outcome.UNDECIDED: "#d69e2e",
}


class Format(enum.Enum):
    CSV = "csv"
    JSON = "json"
    SVG = "svg"


class ExportError(OSError):
    pass


Result = Union[TrajectoryResult, BasinGrid]


# -- CSV --------------------------------------------------------------------

def _opt(v):
    return "" if v is None or v < 0 else int(v)


def csv_rows(result: Result) -> list[list]:
    if isinstance(result, BasinGrid):
        c = result.cells
        return [[repr(float(c.x0[i])), repr(float(c.y0[i])),
                 Outcome.from_code(int(c.outcome[i])).value, int(c.iterations[i]),
                 int(c.p0_visits[i]), _opt(c.first_p1_hit[i]),
                 repr(float(c.final_x[i])), repr(float(c.final_y[i]))]
                for i in range(len(c))]
    # one row per iterate; orbit-level counters go on the final row only
    orbit = result.orbit or [(result.start.x, result.start.y)]
    rows = []
    last = len(orbit) - 1
    for n, (x, y) in enumerate(orbit):
        fin = n == last
        rows.append([repr(result.start.x), repr(result.start.y),
                     result.outcome.value if fin else "", n,
                     result.p0_visits if fin else "",
                     _opt(result.first_p1_hit) if fin else "",
                     repr(x), repr(y)])
    return rows


def to_csv(result: Result) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    w.writerows(csv_rows(result))
    return buf.getvalue()


# -- JSON -------------------------------------------------------------------

def grid_to_dict(grid: BasinGrid) -> dict:
    c = grid.cells
    return {
        "kind": "basin",
        "x_range": list(grid.x_range), "y_range": list(grid.y_range),
        "nx": grid.nx, "ny": grid.ny, "alpha": grid.alpha,
        "tol": grid.tol, "max_iter": grid.max_iter,
        "counts": grid.outcome_counts(),
        "cells": {name: getattr(c, name).tolist() for name in BatchResult.__dataclass_fields__},
    }


def grid_from_dict(d: dict) -> BasinGrid:
    g = BasinGrid(tuple(d["x_range"]), tuple(d["y_range"]), d["nx"], d["ny"],
                  d["alpha"], d["tol"], d["max_iter"])
    cols = d["cells"]
    dtypes = {"outcome": np.int8, "x0": float, "y0": float, "final_x": float, "final_y": float}
    g.cells = BatchResult(**{k: np.asarray(cols[k], dtype=dtypes.get(k, np.int64))
                             for k in BatchResult.__dataclass_fields__})
    return g


def to_json(result: Result) -> str:
    if isinstance(result, BasinGrid):
        d = grid_to_dict(result)
    else:
        d = {"kind": "trajectory", **result.to_dict()}
    return json.dumps(d, indent=2) + "\n"


def from_json(text: str) -> Result:
    d = json.loads(text)
    kind = d.pop("kind", "trajectory")
    if kind == "basin":
        return grid_from_dict(d)
    return TrajectoryResult.from_dict(d)


def load_json(path) -> Result:
    path = Path(path)
    try:
        return from_json(path.read_text())
    except OSError as e:
        raise ExportError(f"{path}: {e.strerror or e}") from e
    except (ValueError, KeyError, TypeError) as e:
        raise ExportError(f"{path}: not a drsphere JSON record ({e})") from e


# -- SVG --------------------------------------------------------------------

def _f(v: float) -> str:
    return f"{v:.6g}"


def _guides(x0: float, x1: float, y0: float, y1: float, stroke: float, alpha: float) -> list[str]:
    lo, hi = min(x0, y0), max(x1, y1)
    sw = _f(stroke)
    out = [
        f'<g fill="none" stroke="#718096" stroke-width="{sw}" stroke-dasharray="{_f(4 * stroke)}">',
        f'<circle cx="0" cy="0" r="1"/>',
        f'<line x1="{_f(lo)}" y1="{_f(lo)}" x2="{_f(hi)}" y2="{_f(hi)}"/>',
        f'<line x1="{_f(x0)}" y1="{_f(alpha)}" x2="{_f(x1)}" y2="{_f(alpha)}"/>',
        "</g>",
    ]
    return out


def _frame(x0, x1, y0, y1, body: list[str]) -> str:
    w, h = x1 - x0, y1 - y0
    # math orientation: flip y so that up is +y
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_f(x0)} {_f(-y1)} {_f(w)} {_f(h)}" '
            f'width="600" height="{max(1, round(600 * h / w)) if w > 0 else 600}">')
    return "\n".join([head, '<g transform="scale(1,-1)">', *body, "</g>", "</svg>"]) + "\n"


def basin_svg(grid: BasinGrid, guides: bool = False) -> str:
    xs, ys = grid.axes()
    dx = (xs[-1] - xs[0]) / (grid.nx - 1) if grid.nx > 1 else 1.0
    dy = (ys[-1] - ys[0]) / (grid.ny - 1) if grid.ny > 1 else 1.0
    x0, x1 = xs[0] - dx / 2, xs[-1] + dx / 2
    y0, y1 = ys[0] - dy / 2, ys[-1] + dy / 2
    img = grid.outcome_image()
    body = []
    for j in range(grid.ny):
        for i in range(grid.nx):
            color = OUTCOME_COLORS[Outcome.from_code(int(img[j, i]))]
            body.append(f'<rect x="{_f(xs[i] - dx / 2)}" y="{_f(ys[j] - dy / 2)}" '
                        f'width="{_f(dx)}" height="{_f(dy)}" fill="{color}"/>')
    if guides:
        body += _guides(x0, x1, y0, y1, min(dx, dy) / 4, grid.alpha)
    return _frame(x0, x1, y0, y1, body)


def orbit_svg(result: TrajectoryResult, guides: bool = True) -> str:
    pts = result.orbit or [(result.start.x, result.start.y), (result.final.x, result.final.y)]
    xs = [p[0] for p in pts] + [0.0, 1.0, -1.0]
    ys = [p[1] for p in pts] + [0.0, 1.0, -1.0]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    pad = 0.05 * max(x1 - x0, y1 - y0, 1e-9)
    x0, x1, y0, y1 = x0 - pad, x1 + pad, y0 - pad, y1 + pad
    stroke = max(x1 - x0, y1 - y0) / 300
    body = _guides(x0, x1, y0, y1, stroke, result.alpha) if guides else []
    finite = [(x, y) for x, y in pts if math.isfinite(x) and math.isfinite(y)]
    line = " ".join(f"{_f(x)},{_f(y)}" for x, y in finite)
    body.append(f'<polyline fill="none" stroke="#2b6cb0" stroke-width="{_f(stroke)}" points="{line}"/>')
    sx, sy = finite[0]
    body.append(f'<circle cx="{_f(sx)}" cy="{_f(sy)}" r="{_f(3 * stroke)}" fill="#c05621"/>')
    return _frame(x0, x1, y0, y1, body)


def to_svg(result: Result, guides: bool = True) -> str:
    if isinstance(result, BasinGrid):
        return basin_svg(result, guides)
    return orbit_svg(result, guides)


# -- dispatch ---------------------------------------------------------------

def render(result: Result, fmt: Format, guides: bool = True) -> str:
    if fmt is Format.CSV:
        return to_csv(result)
    if fmt is Format.JSON:
        return to_json(result)
    return to_svg(result, guides)


def export(result: Result, fmt: Format | str, path, guides: bool = True) -> None:
    """Write ``result`` to ``path``; I/O failures name the offending path."""
    fmt = Format(fmt) if isinstance(fmt, str) else fmt
    text = render(result, fmt, guides)
    path = Path(path)
    try:
        path.write_text(text)
    except OSError as e:
        raise ExportError(f"cannot write {fmt.value.upper()} to {path}: {e.strerror or e}") from e


__all__ = ["CSV_FIELDS", "ExportError", "Format", "export", "load_json",
           "render", "to_csv", "to_json", "from_json", "to_svg"]
