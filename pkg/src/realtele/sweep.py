"""Grid sweeps over beamsplitter settings, extremum reporting and output formats."""

from __future__ import annotations

import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from realtele.bases import BELL_X, make_basis
from realtele.beamsplitter import BeamsplitterParams, ParameterError
from realtele.fock import PolarizationQubit
from realtele.information import info_gain
from realtele.povm import check_x, paper_formula, success_probability
from realtele.teleport import DEFAULT_NODES, averaged_fidelity

TRANSMISSION_AXES = ("t_h", "t_v")
ANGLE_AXES = ("theta_h", "theta_v")
PHASE_AXES = ("phi_h", "phi_v", "chi_h", "chi_v")
AXES = TRANSMISSION_AXES + ANGLE_AXES + PHASE_AXES


class ConfigError(ValueError):
    """Inconsistent sweep configuration."""


@dataclass(frozen=True)
class Axis:
    name: str = "t_h"
    lo: float = 0.0
    hi: float = 1.0
    n: int = 41

    def __post_init__(self):
        if self.name not in AXES:
            raise ConfigError(f"unknown axis {self.name!r}; choose from {AXES}")
        if int(self.n) != self.n or self.n < 2:
            raise ConfigError(f"axis {self.name} needs n >= 2, got {self.n}")
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or self.hi <= self.lo:
            raise ConfigError(f"axis {self.name} needs finite lo < hi, got [{self.lo}, {self.hi}]")
        if self.name in TRANSMISSION_AXES and (self.lo < 0.0 or self.hi > 1.0):
            raise ConfigError(f"transmission axis {self.name} must stay inside [0, 1]")
        if self.name in ANGLE_AXES and (self.lo < 0.0 or self.hi > math.pi / 2):
            raise ConfigError(f"angle axis {self.name} must stay inside [0, pi/2]")

    def node(self, i: int) -> float:
        # i/(n-1) is correctly rounded, so nested grids share nodes bit-for-bit
        return float(self.lo + (self.hi - self.lo) * (int(i) / (self.n - 1)))

    def nodes(self) -> np.ndarray:
        return np.array([self.node(i) for i in range(self.n)])

    @property
    def step(self) -> float:
        return (self.hi - self.lo) / (self.n - 1)


@dataclass(frozen=True)
class SweepGrid:
    """Two swept axes; every other splitter parameter is pinned in ``fixed``.

    ``fixed`` holds transmission (t_h, t_v) and phases for whichever
    parameters are not swept.
    """

    axis1: Axis = field(default_factory=lambda: Axis("t_h"))
    axis2: Axis = field(default_factory=lambda: Axis("t_v"))
    fixed: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.axis1.name == self.axis2.name:
            raise ConfigError("the two sweep axes must differ")
        names = {self.axis1.name, self.axis2.name}
        for pol in ("h", "v"):
            if {f"t_{pol}", f"theta_{pol}"} <= names:
                raise ConfigError(f"cannot sweep t_{pol} and theta_{pol} together")
        for k in self.fixed:
            if k not in AXES:
                raise ConfigError(f"unknown fixed parameter {k!r}")

    @classmethod
    def square(cls, n: int = 41, **fixed) -> "SweepGrid":
        return cls(Axis("t_h", 0.0, 1.0, n), Axis("t_v", 0.0, 1.0, n), dict(fixed))

    @property
    def shape(self) -> tuple[int, int]:
        return self.axis1.n, self.axis2.n

    def params_at(self, v1: float, v2: float) -> BeamsplitterParams:
        vals = {"t_h": 1.0, "t_v": 1.0, "phi_h": 0.0, "phi_v": 0.0, "chi_h": 0.0, "chi_v": 0.0}
        vals.update(self.fixed)
        vals[self.axis1.name] = v1
        vals[self.axis2.name] = v2
        theta = {}
        for pol in ("h", "v"):
            if f"theta_{pol}" in vals:
                theta[pol] = vals[f"theta_{pol}"]
            else:
                t = vals[f"t_{pol}"]
                if t < 0.0 or t > 1.0:
                    raise ParameterError(f"transmission t_{pol} must lie in [0, 1], got {t}")
                theta[pol] = math.acos(t)
        return BeamsplitterParams(
            theta["h"], theta["v"], vals["phi_h"], vals["phi_v"], vals["chi_h"], vals["chi_v"]
        )

    def to_dict(self) -> dict:
        return {"axis1": asdict(self.axis1), "axis2": asdict(self.axis2), "fixed": dict(sorted(self.fixed.items()))}


@dataclass(frozen=True)
class InfoGainObjective:
    basis_kind: str = "bell"
    x: float | None = None

    def __post_init__(self):
        if self.basis_kind == "partial" and self.x is None:
            raise ConfigError("the partial basis needs x")
        # validates x early
        make_basis(self.basis_kind, self.x)

    def __call__(self, params: BeamsplitterParams) -> float:
        return info_gain(make_basis(self.basis_kind, self.x), params)


@dataclass(frozen=True)
class FidelityObjective:
    tie_break: str = "lowest-index"
    nodes: tuple[int, int] = DEFAULT_NODES
    measure: str = "uniform-angle"

    def __call__(self, params: BeamsplitterParams) -> float:
        return averaged_fidelity(params, self.tie_break, self.nodes, self.measure)


@dataclass(frozen=True)
class Extremum:
    index: tuple[int, int]
    axis1: float
    axis2: float
    value: float

    def to_dict(self) -> dict:
        return {"index": list(self.index), "axis1": self.axis1, "axis2": self.axis2, "value": self.value}


@dataclass(frozen=True, eq=False)
class Surface:
    grid: SweepGrid
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != self.grid.shape:
            raise ConfigError("surface values do not match the grid")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("surface contains non-finite values")

    def _extremum(self, flat: int) -> Extremum:
        i, j = np.unravel_index(flat, self.values.shape)
        return Extremum((int(i), int(j)), self.grid.axis1.node(i), self.grid.axis2.node(j), float(self.values[i, j]))

    @property
    def argmax(self) -> Extremum:
        return self._extremum(int(np.argmax(self.values)))

    @property
    def argmin(self) -> Extremum:
        return self._extremum(int(np.argmin(self.values)))

    def nearest_index(self, v1: float, v2: float) -> tuple[int, int]:
        i = int(np.argmin(np.abs(self.grid.axis1.nodes() - v1)))
        j = int(np.argmin(np.abs(self.grid.axis2.nodes() - v2)))
        return i, j

    def is_local_min(self, i: int, j: int) -> bool:
        """True if node (i, j) lies strictly below all of its (up to 4) axis neighbours."""
        v = self.values
        nbrs = [(i + di, j + dj) for di, dj in ((-1, 0), (1, 0), (0, -1), (0, 1))]
        return all(v[i, j] < v[a, b] for a, b in nbrs if 0 <= a < v.shape[0] and 0 <= b < v.shape[1])

    def is_local_max(self, i: int, j: int) -> bool:
        return Surface(self.grid, -self.values).is_local_min(i, j)


def _row(task):
    objective, grid, i = task
    v1 = grid.axis1.node(i)
    return [objective(grid.params_at(v1, grid.axis2.node(j))) for j in range(grid.axis2.n)]


def evaluate(grid: SweepGrid, objective, workers: int = 1) -> Surface:
    """Evaluate ``objective`` on every node; output does not depend on ``workers``."""
    tasks = [(objective, grid, i) for i in range(grid.axis1.n)]
    if workers <= 1:
        rows = [_row(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            # map() yields in submission order, so rows land by index
            rows = list(pool.map(_row, tasks))
    return Surface(grid, np.array(rows, dtype=float))


def sweep_info_gain(
    grid: SweepGrid, basis_kind: str = "bell", x: float | None = None, workers: int = 1
) -> Surface:
    return evaluate(grid, InfoGainObjective(basis_kind, x), workers)


def sweep_fidelity(
    grid: SweepGrid,
    tie_break: str = "lowest-index",
    nodes: tuple[int, int] = DEFAULT_NODES,
    measure: str = "uniform-angle",
    workers: int = 1,
) -> Surface:
    return evaluate(grid, FidelityObjective(tie_break, nodes, measure), workers)


def refine(surface: Surface, objective, which: str = "max", workers: int = 1) -> Surface:
    """Re-sweep a 3x finer local grid (one coarse step either side) around the incumbent."""
    ext = surface.argmax if which == "max" else surface.argmin
    axes = []
    for axis, centre in ((surface.grid.axis1, ext.axis1), (surface.grid.axis2, ext.axis2)):
        lo = max(axis.lo, centre - axis.step)
        hi = min(axis.hi, centre + axis.step)
        n = int(round((hi - lo) / axis.step)) * 3 + 1
        axes.append(Axis(axis.name, lo, hi, n))
    return evaluate(SweepGrid(axes[0], axes[1], surface.grid.fixed), objective, workers)


@dataclass(frozen=True)
class TradeoffRow:
    x: float
    max_info_gain: float
    argmax_t_h: float
    argmax_t_v: float
    success_probability: float
    paper_formula_1_over_2x2: float

    @property
    def x2(self) -> float:
        return self.x * self.x


_GENERIC_TAU = PolarizationQubit.from_bloch(1.0, 0.5)


def sweep_tradeoff(x_values, grid_n: int = 41, workers: int = 1) -> list[TradeoffRow]:
    """Best grid information gain and total filter success probability, side by side."""
    rows = []
    grid = SweepGrid.square(grid_n)
    for x in x_values:
        x = check_x(x)
        surf = sweep_info_gain(grid, "partial", x, workers)
        best = surf.argmax
        _, total = success_probability(_GENERIC_TAU, x)
        rows.append(TradeoffRow(x, best.value, best.axis1, best.axis2, total, paper_formula(x)))
    return rows


def tradeoff_x_values(n: int, lo: float = BELL_X, hi: float = 1.0) -> list[float]:
    if n < 2:
        raise ConfigError("need at least 2 x values")
    return [lo + (hi - lo) * (i / (n - 1)) for i in range(n)]


# --- output formats -------------------------------------------------------

def fmt(v: float) -> str:
    """12 significant digits, plain decimal where possible."""
    s = f"{v:.12g}"
    return "0" if s == "-0" else s


def surface_csv(surface: Surface) -> str:
    buf = io.StringIO()
    buf.write("axis1,axis2,value\n")
    g = surface.grid
    for i in range(g.axis1.n):
        a = fmt(g.axis1.node(i))
        for j in range(g.axis2.n):
            buf.write(f"{a},{fmt(g.axis2.node(j))},{fmt(surface.values[i, j])}\n")
    return buf.getvalue()


def surface_dict(surface: Surface) -> dict:
    return {
        "grid": surface.grid.to_dict(),
        "values": [float(v) for v in surface.values.ravel()],
        "argmax": surface.argmax.to_dict(),
        "argmin": surface.argmin.to_dict(),
    }


def surface_json(surface: Surface) -> str:
    return json.dumps(surface_dict(surface), indent=2) + "\n"


def surface_from_dict(data: dict) -> Surface:
    g = data["grid"]
    grid = SweepGrid(Axis(**g["axis1"]), Axis(**g["axis2"]), dict(g["fixed"]))
    return Surface(grid, np.array(data["values"], dtype=float).reshape(grid.shape))


TRADEOFF_COLUMNS = ("x", "x2", "max_info_gain", "argmax_t_h", "argmax_t_v", "success_probability", "paper_formula_1_over_2x2")


def tradeoff_csv(rows: list[TradeoffRow]) -> str:
    lines = [",".join(TRADEOFF_COLUMNS)]
    for r in rows:
        vals = (r.x, r.x2, r.max_info_gain, r.argmax_t_h, r.argmax_t_v, r.success_probability, r.paper_formula_1_over_2x2)
        lines.append(",".join(fmt(v) for v in vals))
    return "\n".join(lines) + "\n"


def tradeoff_json(rows: list[TradeoffRow]) -> str:
    data = [{c: getattr(r, c) for c in TRADEOFF_COLUMNS} for r in rows]
    return json.dumps({"columns": list(TRADEOFF_COLUMNS), "rows": data}, indent=2) + "\n"
