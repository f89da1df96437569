import json
import math

import numpy as np
import pytest

from realtele.bases import bell_basis, partial_basis
from realtele.beamsplitter import BeamsplitterParams
from realtele.information import info_gain
from realtele.povm import check_x
from realtele.sweep import (
    Axis,
    ConfigError,
    InfoGainObjective,
    SweepGrid,
    refine,
    surface_csv,
    surface_dict,
    surface_from_dict,
    surface_json,
    sweep_fidelity,
    sweep_info_gain,
    sweep_tradeoff,
    tradeoff_csv,
    tradeoff_x_values,
)
from realtele.teleport import averaged_fidelity

R = 1 / math.sqrt(2)


def test_corner_grid_matches_pointwise():
    s = sweep_info_gain(SweepGrid.square(2), "partial", math.sqrt(0.1))
    for i, th in enumerate((0.0, 1.0)):
        for j, tv in enumerate((0.0, 1.0)):
            p = BeamsplitterParams.from_transmission(th, tv)
            assert s.values[i, j] == info_gain(partial_basis(math.sqrt(0.1)), p)


def test_axis_nodes_include_endpoints():
    nodes = Axis("t_h", 0.0, 1.0, 41).nodes()
    assert nodes[0] == 0.0 and nodes[-1] == 1.0 and len(nodes) == 41


def test_nested_refinement_is_bit_exact():
    coarse = sweep_info_gain(SweepGrid.square(6), "bell")
    fine = sweep_info_gain(SweepGrid.square(11), "bell")
    np.testing.assert_array_equal(fine.values[::2, ::2], coarse.values)


def test_workers_do_not_change_results():
    grid = SweepGrid.square(7)
    a = sweep_fidelity(grid, workers=1)
    b = sweep_fidelity(grid, workers=3)
    np.testing.assert_array_equal(a.values, b.values)
    assert surface_csv(a) == surface_csv(b)


def test_bell_surface_extrema():
    s = sweep_info_gain(SweepGrid.square(41), "bell")
    best = s.argmax
    assert best.value <= 1.5 + 1e-9
    assert best.index == s.nearest_index(R, R)
    assert s.values.max() <= 2.0


def test_missing_x_rejected():
    with pytest.raises(ConfigError):
        sweep_info_gain(SweepGrid.square(3), "partial")


@pytest.mark.parametrize(
    "kw",
    [dict(name="t_h", n=1), dict(name="t_h", lo=0.5, hi=0.4), dict(name="t_v", hi=1.5), dict(name="foo")],
)
def test_bad_axes(kw):
    with pytest.raises(ConfigError):
        Axis(**kw)


def test_same_axis_twice_rejected():
    with pytest.raises(ConfigError):
        SweepGrid(Axis("t_h"), Axis("t_h"))


def test_fidelity_surface_diagonal_symmetry():
    s = sweep_fidelity(SweepGrid.square(11))
    np.testing.assert_allclose(s.values, s.values.T, atol=1e-9)
    assert np.all(s.values <= 1.0)


def test_phase_axes_sweep():
    grid = SweepGrid(Axis("phi_h", 0, 2 * math.pi, 5), Axis("chi_h", 0, 2 * math.pi, 5), {"t_h": R, "t_v": R})
    s = sweep_info_gain(grid, "bell")
    p = BeamsplitterParams(math.pi / 4, math.pi / 4, phi_h=math.pi / 2, chi_h=math.pi)
    assert s.values[1, 2] == pytest.approx(info_gain(bell_basis(), p), abs=1e-12)


def test_refine_improves_or_keeps():
    obj = InfoGainObjective("partial", math.sqrt(0.1))
    coarse = sweep_info_gain(SweepGrid.square(11), "partial", math.sqrt(0.1))
    fine = refine(coarse, obj)
    assert fine.argmax.value >= coarse.argmax.value
    assert fine.grid.axis1.step == pytest.approx(coarse.grid.axis1.step / 3)


def test_csv_format():
    s = sweep_info_gain(SweepGrid.square(2), "bell")
    lines = surface_csv(s).split("\n")
    assert lines[0] == "axis1,axis2,value"
    assert lines[1:5] == ["0,0,1", "0,1,1", "1,0,1", "1,1,1"]
    assert lines[-1] == ""


def test_json_round_trip():
    s = sweep_fidelity(SweepGrid.square(3))
    text = surface_json(s)
    data = json.loads(text)
    assert set(data) == {"grid", "values", "argmax", "argmin"}
    back = surface_from_dict(data)
    np.testing.assert_array_equal(back.values, s.values)
    assert surface_dict(back) == data


def test_tradeoff_rows():
    xs = tradeoff_x_values(5)
    rows = sweep_tradeoff(xs, grid_n=11)
    assert rows[0].success_probability == pytest.approx(1.0, abs=1e-12)
    assert rows[-1].success_probability == pytest.approx(0.0, abs=1e-12)
    assert rows[-1].max_info_gain == pytest.approx(2.0, abs=1e-12)
    assert info_gain(partial_basis(1.0), BeamsplitterParams(0.0, 0.0)) == pytest.approx(2.0, abs=1e-12)
    succ = [r.success_probability for r in rows]
    assert all(a >= b - 1e-12 for a, b in zip(succ, succ[1:]))
    text = tradeoff_csv(rows)
    assert text.startswith("x,x2,max_info_gain,argmax_t_h,argmax_t_v,success_probability,paper_formula_1_over_2x2\n")
    with pytest.raises(ValueError):
        check_x(0.5)


def test_fidelity_surface_value_matches_pointwise():
    s = sweep_fidelity(SweepGrid.square(5))
    p = BeamsplitterParams.from_transmission(0.25, 0.75)
    assert s.values[1, 3] == averaged_fidelity(p)
