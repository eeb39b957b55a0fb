import csv
import io
import json
import math
import subprocess
import sys

import pytest

from nilgeo.cli import EXIT_OK, EXIT_SOLVER, EXIT_USAGE, run
from nilgeo.flow import GeodesicDirection, geodesic_point

from table_data import CELLS, TABLES


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def rows_of(text):
    return list(csv.reader(io.StringIO(text)))


def test_distance_plain():
    assert call("distance", "--from", "0,0,0", "--to", "0,0,0.5") == (EXIT_OK, "0.500000\n", "")


def test_distance_formats():
    code, out, _ = call("distance", "--from", "0,0,0", "--to", "0.5,3,0", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["distance"] == pytest.approx(3.09310, abs=1e-3)
    assert doc["solutions"][0]["length"] == doc["distance"]
    code, out, _ = call("distance", "--from", "1,1,1", "--to", "1,1,1", "--format", "csv")
    assert rows_of(out) == [["distance"], ["0.000000"]]


def test_triangle_json():
    code, out, _ = call("triangle", "--a1", "0,0,0", "--a2", "0.5,-1,1", "--a3", "0.333333,2,1",
                        "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["angle_sum"] == pytest.approx(3.45294, abs=1e-3)


def test_triangle_accepts_fractions():
    _, out, _ = call("triangle", "--a1", "0,0,0", "--a2", "1/2,-1,1", "--a3", "1/3,2,1",
                     "--format", "csv")
    (header, row), = [rows_of(out)]
    assert float(row[header.index("angle_sum")]) == pytest.approx(3.45294, abs=1e-3)


@pytest.mark.parametrize("name", sorted(TABLES))
def test_preset_fidelity(name):
    code, out, _ = call("table", "--preset", name, "--format", "csv")
    assert code == EXIT_OK
    rows = rows_of(out)
    assert rows[0][1:] == list(CELLS)
    assert len(rows) == 7
    for row, ref in zip(rows[1:], TABLES[name]):
        assert float(row[0]) == pytest.approx(ref[0], abs=5e-7)
        assert [float(v) for v in row[1:]] == pytest.approx(ref[1:], abs=1e-3)
        assert all(len(v.split(".")[1]) == 6 for v in row)


def test_table_spot_values():
    rows = rows_of(call("table", "--preset", "table2")[1])
    y20 = dict(zip(rows[0], rows[5]))
    assert float(y20["y"]) == 20
    assert [float(y20[k]) for k in ("omega1", "omega3", "angle_sum")] == pytest.approx(
        [0.04828, 1.47308, 3.09216], abs=1e-3)
    rows = rows_of(call("table", "--preset", "table3")[1])
    x6 = dict(zip(rows[0], rows[4]))
    assert [float(x6[k]) for k in ("d13", "angle_sum")] == pytest.approx([6.02995, 3.04215],
                                                                        abs=1e-3)


def test_custom_scan_matches_preset_row():
    code, out, _ = call("table", "--family", "fibre", "--fixed", "z=0.5", "--vary", "1:1:1")
    assert code == EXIT_OK
    custom = rows_of(out)[1]
    assert custom == rows_of(call("table", "--preset", "table1")[1])[3]


def test_table_with_limits_and_json():
    rows = rows_of(call("table", "--preset", "table3", "--with-limits")[1])
    assert len(rows) == 9
    assert rows[1][0] == "->0" and rows[-1][0] == "->inf"
    code, out, _ = call("table", "--preset", "table1", "--format", "json")
    doc = json.loads(out)
    assert doc["preset"] == "table1" and len(doc["rows"]) == 6


def test_table_failures_marked_in_row():
    code, out, err = call("table", "--family", "fibre", "--fixed", "z=0.5", "--vary", "1,4",
                          "--solver-max-iter", "1")
    assert code == EXIT_SOLVER
    assert all(row[1:] == ["FAIL"] * 5 for row in rows_of(out)[1:])
    assert "failed" in err


@pytest.mark.parametrize("argv", [
    ["bogus"], [], ["distance", "--from", "0,0", "--to", "1,1,1"],
    ["distance", "--from", "0,0,x", "--to", "1,1,1"],
    ["table", "--preset", "table1", "--family", "fibre"], ["table", "--family", "fibre"],
    ["table", "--family", "fibre", "--fixed", "y=1", "--vary", "1:2:2"],
    ["table", "--family", "fibre", "--fixed", "z=-1", "--vary", "1:2:2"],
    ["geodesic", "--alpha", "0", "--theta", "0", "--length", "1", "--samples", "0"],
    ["geodesic", "--alpha", "0", "--theta", "2", "--length", "1"],
    ["geodesic", "--alpha", "0", "--theta", "zero", "--length", "1"],
    ["find-pi", "--hyperbolic", "0.5,3", "--fibre", "1,0.5", "--tol", "0"],
    ["find-pi", "--hyperbolic", "1,0.5", "--fibre", "0.5,-3"],
    ["distance", "--from", "0,0,0", "--to", "1,1,1", "--solver-tol", "-1"],
])
def test_usage_errors(argv):
    code, out, err = call(*argv)
    assert code == EXIT_USAGE
    assert out == "" and err


def test_find_pi_without_straddle_exits_1():
    # so far out the fibre-like sum rounds to exactly pi, so nothing is crossed
    code, out, err = call("find-pi", "--hyperbolic", "0.5,3", "--fibre", "1e6,0.5")
    assert code == EXIT_USAGE and "straddle" in err and out == ""


def test_find_pi_near_limit_pair_still_straddles():
    # both ends have sums within 2e-3 of pi, on opposite sides
    code, out, _ = call("find-pi", "--hyperbolic", "0.5,0.01", "--fibre", "0.001,0.5")
    assert code == EXIT_OK


def test_solver_failure_exit_code():
    code, _, err = call("distance", "--from", "0,0,0", "--to", "1,2,0.3", "--solver-max-iter", "1")
    assert code == EXIT_SOLVER and "solver failure" in err


def test_geodesic_export():
    code, out, _ = call("geodesic", "--alpha", "0", "--theta", "0", "--length", "1",
                        "--samples", "2")
    rows = rows_of(out)
    assert rows[0] == ["t", "x", "y", "z"]
    assert [[float(v) for v in r] for r in rows[1:]] == [[0, 0, 0, 0], [0.5, 0.5, 0, 0],
                                                           [1, 1, 0, 0]]
    rows = rows_of(call("geodesic", "--alpha", "0", "--theta", str(math.pi / 2),
                        "--length", "0.5", "--samples", "5")[1])
    assert [float(r[3]) for r in rows[1:]] == pytest.approx([0, 0.1, 0.2, 0.3, 0.4, 0.5],
                                                            abs=1e-15)
    rows = rows_of(call("geodesic", "--alpha", "0.7", "--theta", "0.4", "--length", "2",
                        "--samples", "10")[1])
    end = geodesic_point(GeodesicDirection(0.7, 0.4), 2.0)
    assert [float(v) for v in rows[-1][1:]] == pytest.approx(tuple(end), abs=1e-9)


def test_find_pi_and_triangle_round_trip():
    code, out, _ = call("find-pi", "--hyperbolic", "0.5,3", "--fibre", "1,0.5", "--tol", "1e-6",
                        "--format", "json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert abs(doc["angle_sum"] - math.pi) <= 1e-6
    verts = [",".join(repr(v) for v in p) for p in doc["vertices"]]
    code, out, _ = call("triangle", "--a1", verts[0], "--a2", verts[1], "--a3", verts[2],
                        "--format", "json")
    assert json.loads(out)["angle_sum"] == pytest.approx(doc["angle_sum"], abs=1e-9)
    # the plain report prints vertices at full precision too
    text = call("find-pi", "--hyperbolic", "0.5,3", "--fibre", "1,0.5")[1]
    pts = [line.split()[1] for line in text.splitlines() if line.startswith("A")]
    out = call("triangle", "--a1", pts[0], "--a2", pts[1], "--a3", pts[2], "--format", "json")[1]
    assert json.loads(out)["angle_sum"] == pytest.approx(doc["angle_sum"], abs=1e-9)


def test_find_pi_coarse_tolerance():
    code, out, _ = call("find-pi", "--hyperbolic", "0.5,3", "--fibre", "1,0.5", "--tol", "1e-2")
    assert code == EXIT_OK
    gap = float(out.splitlines()[-1].split()[-1])
    assert gap <= 1e-2


def test_classify():
    code, out, _ = call("classify", "--format", "csv")
    rows = rows_of(out)
    assert code == EXIT_OK and [r[0] for r in rows[1:]] == ["greater", "less", "equal"]


def test_out_file(tmp_path):
    target = tmp_path / "poly.csv"
    code, out, _ = call("geodesic", "--alpha", "1", "--theta", "0.2", "--length", "3",
                        "--out", str(target))
    assert code == EXIT_OK and out == ""
    assert target.read_text() == call("geodesic", "--alpha", "1", "--theta", "0.2",
                                      "--length", "3")[1]


def test_byte_determinism():
    argv = ["table", "--preset", "table2", "--format", "json"]
    outs = {call(*argv)[1] for _ in range(2)}
    assert len(outs) == 1
    # also across processes and backends
    cmd = [sys.executable, "-m", "nilgeo", "triangle", "--a1", "0,0,0", "--a2", "1/2,-1,1",
           "--a3", "1/3,2,1", "--format", "json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b


def test_help_exits_zero():
    assert call("--help")[0] == 0
