import json

import numpy as np
import pytest

from bellthresh.bell import ch_qubit_functional, ch_qutrit_functional
from bellthresh.optim import OptimOptions, maximize
from bellthresh.scan import ScanGrid, export_grid, load_grid_json, scan_ab, scan_eta_a
from bellthresh.scenarios import qubit_scenario, tritter_scenario

FAST = OptimOptions(multistarts=8, rng_seed=0)


def tiny_grid():
    return scan_ab(tritter_scenario(), ch_qutrit_functional(), 0.9,
                   (0.8, 1.2), (0.8, 1.2), resolution=2, opts=FAST)


def test_grid_validation():
    with pytest.raises(ValueError):
        ScanGrid("a", "b", np.arange(3.0), np.arange(2.0), np.zeros((3, 3)), {})
    with pytest.raises(ValueError):
        ScanGrid("a", "b", np.arange(2.0), np.arange(2.0), np.full((2, 2), np.nan), {})
    with pytest.raises(ValueError):
        scan_ab(qubit_scenario(), ch_qubit_functional(), 1.0, (0, 1), (0, 1))
    with pytest.raises(ValueError):
        scan_eta_a(tritter_scenario(), ch_qutrit_functional(), (0.5, 1), (0, 1))
    with pytest.raises(ValueError):
        scan_ab(tritter_scenario(), ch_qutrit_functional(), 1.0, (1, 1), (0, 1),
                resolution=2, opts=FAST)


def test_grid_values_match_direct_maximize(tmp_path):
    grid = tiny_grid()
    from bellthresh.scan import _node_seed
    iy, ix = 1, 0
    opts = FAST.replace(rng_seed=_node_seed(FAST.rng_seed, iy, ix))
    direct = maximize(tritter_scenario(), ch_qutrit_functional(), eta=0.9,
                      fix_params=(grid.x_values[ix], grid.y_values[iy]), opts=opts)
    assert abs(grid.values[iy, ix] - direct.total) < 1e-9


def test_grid_metadata_records_rerun_info():
    grid = tiny_grid()
    md = grid.metadata
    assert md["scenario"] == "tritter"
    assert md["functional"] == "ch-qutrit"
    assert md["eta"] == 0.9
    assert md["seed"] == FAST.rng_seed
    assert md["multistarts"] == FAST.multistarts


def test_csv_export_shape(tmp_path):
    grid = tiny_grid()
    path = tmp_path / "grid.csv"
    export_grid(grid, "csv", path)
    lines = path.read_text().strip().split("\n")
    assert len(lines) == 5  # header + 4 nodes
    assert lines[0] == "a,b,ch"
    x, y, v = (float(t) for t in lines[1].split(","))
    assert (x, y) == (0.8, 0.8)
    assert v == grid.values[0, 0]


def test_csv_export_is_byte_stable(tmp_path):
    g1, g2 = tiny_grid(), tiny_grid()
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    export_grid(g1, "csv", p1)
    export_grid(g2, "csv", p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_json_round_trip_bitwise(tmp_path):
    grid = tiny_grid()
    path = tmp_path / "grid.json"
    export_grid(grid, "json", path)
    again = load_grid_json(path)
    assert np.array_equal(again.values, grid.values)
    assert np.array_equal(again.x_values, grid.x_values)
    assert again.metadata == grid.metadata
    doc = json.loads(path.read_text())
    assert doc["values"][1][0] == grid.values[1, 0]


def test_export_errors(tmp_path):
    grid = tiny_grid()
    with pytest.raises(ValueError):
        export_grid(grid, "xml", tmp_path / "grid.xml")
    with pytest.raises(OSError):
        export_grid(grid, "csv", tmp_path / "missing" / "grid.csv")


def test_parallel_matches_serial():
    serial = tiny_grid()
    parallel = scan_ab(tritter_scenario(), ch_qutrit_functional(), 0.9,
                       (0.8, 1.2), (0.8, 1.2), resolution=2, opts=FAST, threads=2)
    assert np.array_equal(serial.values, parallel.values)


def test_tritter_grid_is_ab_symmetric():
    sc, f = tritter_scenario(), ch_qutrit_functional()
    opts = OptimOptions(multistarts=24, rng_seed=0)
    v1 = maximize(sc, f, eta=0.9, fix_params=(1.2, 0.8), opts=opts).total
    v2 = maximize(sc, f, eta=0.9, fix_params=(0.8, 1.2), opts=opts).total
    assert abs(v1 - v2) < 1e-6
