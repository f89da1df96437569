"""Command-line front end.

Subcommands: infogain, fidelity, povm, lookup, tradeoff. Data goes to stdout
(or ``--out``); diagnostics go to stderr. Exit codes: 0 success, 2 bad
configuration, 1 internal error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, dataclass
from importlib import resources

import numpy as np

from realtele import __version__
from realtele.bases import LABELS, make_basis
from realtele.beamsplitter import BeamsplitterParams
from realtele.information import TIE_BREAK_RULES, conditional_table, describe_lookup, info_gain, lookup_table
from realtele.povm import (
    check_x,
    filter_for_outcome,
    normalize_x,
    paper_formula,
    success_probability,
)
from realtele.sweep import (
    AXES,
    PHASE_AXES,
    Axis,
    FidelityObjective,
    InfoGainObjective,
    SweepGrid,
    fmt,
    refine,
    surface_csv,
    surface_dict,
    evaluate,
    sweep_tradeoff,
    tradeoff_csv,
    tradeoff_json,
    tradeoff_x_values,
)
from realtele.fock import PolarizationQubit
from realtele.teleport import CLASSICAL_BOUND, MEASURES, averaged_fidelity

SUBCOMMANDS = ("infogain", "fidelity", "povm", "lookup", "tradeoff")
WORKERS_ENV = "REALTELE_WORKERS"


def load_defaults() -> dict:
    text = resources.files("realtele").joinpath("defaults.json").read_text()
    return json.loads(text)


class ConfigError(Exception):
    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


@dataclass
class RunConfig:
    subcommand: str
    transmission: list | None
    theta: list | None
    phases: list
    basis: str
    x2: float | None
    sweep: int | None
    sweep_axes: list
    tie_break: str
    quadrature: list
    measure: str
    format: str
    out: str | None
    workers: int
    refine: bool
    compare_classical: bool
    tradeoff: bool
    normalize_x: bool
    x_points: int
    tradeoff_grid: int

    @property
    def x(self) -> float | None:
        if self.x2 is None:
            return None
        x = math.sqrt(self.x2)
        return normalize_x(x) if self.normalize_x else x

    def params(self) -> BeamsplitterParams:
        ph = self.phases
        if self.theta is not None:
            return BeamsplitterParams(self.theta[0], self.theta[1], *ph)
        return BeamsplitterParams.from_transmission(self.transmission[0], self.transmission[1], *ph)

    def grid(self) -> SweepGrid:
        a1, a2 = self.sweep_axes
        axes = []
        for name in (a1, a2):
            hi = 2 * math.pi if name in PHASE_AXES else (math.pi / 2 if name.startswith("theta") else 1.0)
            axes.append(Axis(name, 0.0, hi, self.sweep))
        fixed = dict(zip(PHASE_AXES, self.phases))
        if self.theta is not None:
            fixed.update(theta_h=self.theta[0], theta_v=self.theta[1])
        else:
            fixed.update(t_h=self.transmission[0], t_v=self.transmission[1])
        for name in (a1, a2):
            fixed.pop(name, None)
            # sweeping an angle replaces the matching transmission and vice versa
            pol = name[-1]
            if name.startswith("theta"):
                fixed.pop(f"t_{pol}", None)
            if name.startswith("t_"):
                fixed.pop(f"theta_{pol}", None)
        return SweepGrid(axes[0], axes[1], fixed)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("common options")
    g.add_argument("--transmission", nargs=2, type=float, metavar=("TH", "TV"), help="transmission coefficients cos(theta)")
    g.add_argument("--theta", nargs=2, type=float, metavar=("TH", "TV"), help="mixing angles in radians (instead of --transmission)")
    g.add_argument("--phases", nargs=4, type=float, metavar=("PH", "PV", "CH", "CV"), help="transmitted/reflected phases")
    g.add_argument("--basis", choices=("bell", "partial"))
    g.add_argument("--x2", type=float, help="squared entanglement parameter x^2 of the partial basis")
    g.add_argument("--sweep", type=int, metavar="N", help="sweep an N x N grid instead of one setting")
    g.add_argument("--sweep-axes", nargs=2, choices=AXES, metavar=("A1", "A2"), help="axes to sweep (default t_h t_v)")
    g.add_argument("--refine", action="store_true", help="rerun a 3x finer grid around the sweep extremum")
    g.add_argument("--tie-break", choices=TIE_BREAK_RULES)
    g.add_argument("--quadrature", nargs=2, type=int, metavar=("NP", "NA"), help="polar and azimuthal node counts")
    g.add_argument("--measure", choices=MEASURES, help="weighting of input states in the averaged fidelity")
    g.add_argument("--format", choices=("csv", "json"))
    g.add_argument("--out", metavar="PATH")
    g.add_argument("--workers", type=int, metavar="N")
    g.add_argument("--show-config", action="store_true", help="print the resolved configuration and exit")
    g.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="realtele", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"realtele {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("infogain", parents=[common], help="information gain of a beamsplitter measurement")
    p = sub.add_parser("fidelity", parents=[common], help="averaged teleportation fidelity")
    p.add_argument("--compare-classical", action="store_true")
    p = sub.add_parser("povm", parents=[common], help="filter POVM and success probability")
    p.add_argument("--tradeoff", action="store_true", help="run the x trade-off sweep")
    p.add_argument("--normalize-x", action="store_true", help="relabel x < 1/sqrt(2) to the equivalent x >= y")
    p.add_argument("--x-points", type=int)
    p.add_argument("--tradeoff-grid", type=int)
    sub.add_parser("lookup", parents=[common], help="posterior look-up table")
    p = sub.add_parser("tradeoff", parents=[common], help="max information gain vs. success probability over x")
    p.add_argument("--x-points", type=int)
    p.add_argument("--tradeoff-grid", type=int)
    return parser


def resolve(args: argparse.Namespace, defaults: dict | None = None) -> RunConfig:
    d = defaults or load_defaults()

    def pick(name, key=None):
        val = getattr(args, name, None)
        return d[key or name] if val is None else val

    if args.transmission is not None and args.theta is not None:
        raise ConfigError("--theta", "give either --transmission or --theta, not both")
    workers = args.workers
    if workers is None and os.environ.get(WORKERS_ENV):
        try:
            workers = int(os.environ[WORKERS_ENV])
        except ValueError:
            raise ConfigError(WORKERS_ENV, "must be an integer") from None
    cfg = RunConfig(
        subcommand=args.subcommand,
        transmission=list(args.transmission) if args.transmission is not None else (None if args.theta is not None else list(d["transmission"])),
        theta=list(args.theta) if args.theta is not None else None,
        phases=list(pick("phases")),
        basis=pick("basis"),
        x2=args.x2,
        sweep=args.sweep,
        sweep_axes=list(pick("sweep_axes")),
        tie_break=pick("tie_break"),
        quadrature=list(pick("quadrature")),
        measure=pick("measure"),
        format=pick("format"),
        out=args.out,
        workers=d["workers"] if workers is None else workers,
        refine=args.refine,
        compare_classical=getattr(args, "compare_classical", False),
        tradeoff=getattr(args, "tradeoff", False),
        normalize_x=getattr(args, "normalize_x", False),
        x_points=pick("x_points"),
        tradeoff_grid=pick("tradeoff_grid"),
    )
    validate(cfg)
    return cfg


def validate(cfg: RunConfig) -> None:
    if cfg.transmission is not None:
        for t in cfg.transmission:
            if not math.isfinite(t) or not 0.0 <= t <= 1.0:
                raise ConfigError("--transmission", f"values must lie in [0, 1], got {t}")
    if cfg.theta is not None:
        for t in cfg.theta:
            if not math.isfinite(t) or not 0.0 <= t <= math.pi / 2:
                raise ConfigError("--theta", f"values must lie in [0, pi/2], got {t}")
    if not all(math.isfinite(p) for p in cfg.phases):
        raise ConfigError("--phases", "phases must be finite")
    if cfg.x2 is not None and (not math.isfinite(cfg.x2) or not 0.0 <= cfg.x2 <= 1.0):
        raise ConfigError("--x2", f"must lie in [0, 1], got {cfg.x2}")
    sc = cfg.subcommand
    if sc in ("infogain", "lookup") and cfg.basis == "partial" and cfg.x2 is None:
        raise ConfigError("--x2", "the partial basis needs --x2")
    if sc == "povm" and not cfg.tradeoff:
        if cfg.x2 is None:
            raise ConfigError("--x2", "povm needs --x2")
        if not cfg.normalize_x and not 0.5 - 1e-12 <= cfg.x2 <= 1.0:
            raise ConfigError("--x2", f"must lie in [1/2, 1] (x >= y), got {cfg.x2}; see --normalize-x")
    if cfg.sweep is not None and cfg.sweep < 2:
        raise ConfigError("--sweep", f"needs N >= 2, got {cfg.sweep}")
    if cfg.sweep_axes[0] == cfg.sweep_axes[1]:
        raise ConfigError("--sweep-axes", "axes must differ")
    for pol in ("h", "v"):
        if {f"t_{pol}", f"theta_{pol}"} <= set(cfg.sweep_axes):
            raise ConfigError("--sweep-axes", f"cannot sweep t_{pol} and theta_{pol} together")
    if cfg.quadrature[0] < 3 or cfg.quadrature[1] < 8:
        raise ConfigError("--quadrature", f"needs NP >= 3 and NA >= 8, got {cfg.quadrature}")
    if cfg.workers < 1:
        raise ConfigError("--workers", f"needs N >= 1, got {cfg.workers}")
    if cfg.x_points < 2:
        raise ConfigError("--x-points", f"needs at least 2, got {cfg.x_points}")
    if cfg.tradeoff_grid < 2:
        raise ConfigError("--tradeoff-grid", f"needs at least 2, got {cfg.tradeoff_grid}")
    if sc in ("lookup", "povm") and cfg.sweep is not None and not cfg.tradeoff:
        raise ConfigError("--sweep", f"{sc} has no sweep mode")


# --- subcommands ------------------------------------------------------------

def _params_dict(p: BeamsplitterParams) -> dict:
    return {**asdict(p), "t_h": math.cos(p.theta_h), "t_v": math.cos(p.theta_v)}


def _surface_output(cfg: RunConfig, objective) -> str:
    surface = evaluate(cfg.grid(), objective, cfg.workers)
    refined = refine(surface, objective, "max", cfg.workers) if cfg.refine else None
    if cfg.format == "json":
        data = surface_dict(surface)
        if refined is not None:
            data["refined_argmax"] = refined.argmax.to_dict()
        return json.dumps(data, indent=2) + "\n"
    if refined is not None:
        r = refined.argmax
        print(f"refined argmax: axis1={fmt(r.axis1)} axis2={fmt(r.axis2)} value={fmt(r.value)}", file=sys.stderr)
    return surface_csv(surface)


def cmd_infogain(cfg: RunConfig) -> str:
    objective = InfoGainObjective(cfg.basis, cfg.x)
    if cfg.sweep is not None:
        return _surface_output(cfg, objective)
    params = cfg.params()
    value = info_gain(make_basis(cfg.basis, cfg.x), params)
    if cfg.format == "json":
        data = {"basis": cfg.basis, "x": cfg.x, "params": _params_dict(params), "info_gain": value}
        return json.dumps(data, indent=2) + "\n"
    return f"{value:.12f}\n"


def cmd_fidelity(cfg: RunConfig) -> str:
    objective = FidelityObjective(cfg.tie_break, tuple(cfg.quadrature), cfg.measure)
    if cfg.sweep is not None:
        return _surface_output(cfg, objective)
    params = cfg.params()
    value = averaged_fidelity(params, cfg.tie_break, tuple(cfg.quadrature), cfg.measure)
    if cfg.format == "json":
        data = {
            "params": _params_dict(params),
            "tie_break": cfg.tie_break,
            "quadrature": cfg.quadrature,
            "measure": cfg.measure,
            "averaged_fidelity": value,
        }
        if cfg.compare_classical:
            data["classical_bound"] = CLASSICAL_BOUND
        return json.dumps(data, indent=2) + "\n"
    out = f"{value:.12f}\n"
    if cfg.compare_classical:
        out += f"classical_bound,{fmt(CLASSICAL_BOUND)}\n"
    return out


def _tradeoff(cfg: RunConfig) -> str:
    rows = sweep_tradeoff(tradeoff_x_values(cfg.x_points), cfg.tradeoff_grid, cfg.workers)
    return tradeoff_json(rows) if cfg.format == "json" else tradeoff_csv(rows)


def cmd_povm(cfg: RunConfig) -> str:
    if cfg.tradeoff:
        return _tradeoff(cfg)
    x = check_x(cfg.x)
    # total is input independent; any fixed input will do
    per, total = success_probability(PolarizationQubit.from_bloch(1.0, 0.5), x)
    filters = {label: filter_for_outcome(x, label) for label in LABELS}
    if cfg.format == "json":
        data = {
            "x": x,
            "x2": x * x,
            "y": math.sqrt(max(0.0, 1 - x * x)),
            "success": dict(zip(LABELS, map(float, per))),
            "success_total": total,
            "paper_formula_1_over_2x2": paper_formula(x),
            "filters": {
                label: {
                    "attenuation_ratio": f.attenuation_ratio,
                    "kraus": np.real(f.kraus).tolist(),
                    "A1": np.real(f.a1).tolist(),
                    "A2": np.real(f.a2).tolist(),
                }
                for label, f in filters.items()
            },
        }
        return json.dumps(data, indent=2) + "\n"
    rows = [("x", x), ("x2", x * x), ("y", math.sqrt(max(0.0, 1 - x * x)))]
    rows += [(f"success_{l}", p) for l, p in zip(LABELS, per)]
    rows += [("success_total", total), ("paper_formula_1_over_2x2", paper_formula(x))]
    for label, f in filters.items():
        rows.append((f"attenuation_ratio_{label}", f.attenuation_ratio))
        for name, mat in (("A1", f.a1), ("A2", f.a2)):
            rows.append((f"{name}_{label}_00", mat[0, 0].real))
            rows.append((f"{name}_{label}_11", mat[1, 1].real))
    return "quantity,value\n" + "".join(f"{k},{fmt(v)}\n" for k, v in rows)


def cmd_lookup(cfg: RunConfig) -> str:
    basis = make_basis(cfg.basis, cfg.x)
    params = cfg.params()
    table = conditional_table(basis, params)
    lut = lookup_table(table, cfg.tie_break)
    rows = describe_lookup(table, lut, basis.labels)
    if cfg.format == "json":
        data = {"basis": cfg.basis, "x": cfg.x, "params": _params_dict(params), "tie_break": cfg.tie_break, "rows": rows}
        return json.dumps(data, indent=2) + "\n"
    head = "outcome,p_outcome," + ",".join(f"post_{l}" for l in basis.labels) + ",argmax\n"
    lines = []
    for r in rows:
        post = ",".join("" if v is None else fmt(v) for v in r["posterior"])
        lines.append(f"{r['outcome']},{fmt(r['p_outcome'])},{post},{r['argmax'] or 'undefined'}\n")
    return head + "".join(lines)


def cmd_tradeoff(cfg: RunConfig) -> str:
    return _tradeoff(cfg)


COMMANDS = {
    "infogain": cmd_infogain,
    "fidelity": cmd_fidelity,
    "povm": cmd_povm,
    "lookup": cmd_lookup,
    "tradeoff": cmd_tradeoff,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
    except (ConfigError, ValueError) as exc:
        print(f"realtele {args.subcommand}: error: {exc}", file=sys.stderr)
        return 2
    if args.verbose:
        print(f"realtele {__version__}", file=sys.stderr)
    if args.show_config:
        print(json.dumps(asdict(cfg), indent=2))
        return 0
    try:
        text = COMMANDS[cfg.subcommand](cfg)
    except Exception as exc:  # noqa: BLE001
        print(f"realtele {cfg.subcommand}: internal error: {exc!r}", file=sys.stderr)
        return 1
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
