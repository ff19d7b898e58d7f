import csv
import io
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from drsphere.basin import BasinGrid, TrajectoryConfig, run_trajectory, sample_basin
from drsphere.core import ALPHA, State2D
from drsphere.export import (CSV_FIELDS, ExportError, Format, export, from_json, load_json,
                             to_csv, to_json, to_svg)

SVG = "{http://www.w3.org/2000/svg}"


@pytest.fixture(scope="module")
def grid():
    return sample_basin(BasinGrid((-2, 2), (-2, 2), 10, 10))


@pytest.fixture(scope="module")
def orbit():
    return run_trajectory(TrajectoryConfig(State2D(0.5, 0.0), record_orbit=True))


def test_basin_csv_rows(grid):
    rows = list(csv.reader(io.StringIO(to_csv(grid))))
    assert rows[0] == CSV_FIELDS
    assert len(rows) == 101
    assert float(rows[1][0]) == -2.0 and float(rows[1][1]) == -2.0


def test_orbit_csv_one_row_per_iterate(orbit):
    rows = list(csv.DictReader(io.StringIO(to_csv(orbit))))
    assert len(rows) == orbit.iterations + 1
    assert rows[-1]["outcome"] == "ConvergedRight"
    assert (float(rows[1]["final_x"]), float(rows[1]["final_y"])) == (1.0, ALPHA)


def test_json_round_trip(grid, orbit):
    assert from_json(to_json(orbit)) == orbit
    g2 = from_json(to_json(grid))
    assert (g2.x_range, g2.y_range, g2.nx, g2.ny) == (grid.x_range, grid.y_range, grid.nx, grid.ny)
    for k in grid.cells.__dataclass_fields__:
        a, b = getattr(grid.cells, k), getattr(g2.cells, k)
        assert np.array_equal(a, b) and a.dtype == b.dtype


def test_orbit_svg(orbit):
    root = ET.fromstring(to_svg(orbit))
    line = root.find(f".//{SVG}polyline")
    pts = [tuple(map(float, p.split(","))) for p in line.get("points").split()]
    assert pts[0] == (0.5, 0.0)
    assert abs(pts[-1][0] - ALPHA) < 1e-5 and abs(pts[-1][1] - ALPHA) < 1e-5
    assert root.find(f".//{SVG}circle[@r='1']") is not None


def test_basin_svg(grid):
    root = ET.fromstring(to_svg(grid, guides=False))
    assert len(root.findall(f".//{SVG}rect")) == 100
    x0, y0, w, h = map(float, root.get("viewBox").split())
    step = 4 / 9
    assert x0 == pytest.approx(-2 - step / 2, abs=1e-5) and w == pytest.approx(4 + step, abs=1e-5)
    assert root.find(f".//{SVG}circle") is None
    assert ET.fromstring(to_svg(grid, guides=True)).find(f".//{SVG}circle") is not None


def test_export_files(tmp_path, orbit):
    for fmt in Format:
        p = tmp_path / f"o.{fmt.value}"
        export(orbit, fmt, p)
        assert p.stat().st_size > 0
    assert load_json(tmp_path / "o.json") == orbit


def test_errors_carry_path(tmp_path, orbit):
    bad = tmp_path / "missing" / "x.csv"
    with pytest.raises(ExportError, match="missing"):
        export(orbit, "csv", bad)
    junk = tmp_path / "junk.json"
    junk.write_text("{}")
    with pytest.raises(ExportError, match="junk.json"):
        load_json(junk)


def test_figures(tmp_path, grid, orbit):
    from drsphere.plotting import plot
    plot(grid, tmp_path / "b.png")
    plot(orbit, tmp_path / "o.png")
    for name in ("b.png", "o.png"):
        assert (tmp_path / name).read_bytes()[:4] == b"\x89PNG"
