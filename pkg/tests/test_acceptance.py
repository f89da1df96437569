"""Exit criteria, each at its pinned tolerance. One summary line per criterion."""

import math
import time

import numpy as np
import pytest

from acceptance_report import record
from oracles import haar_qubit, mutual_information, povm_brute_force
from realtele.bases import bell_basis, partial_basis
from realtele.beamsplitter import (
    IDENTITY_PARAMS,
    BeamsplitterParams,
    build_transform,
    outcome_distribution,
)
from realtele.bases import LABELS
from realtele.fock import PolarizationQubit, TwoPhotonState
from realtele.information import conditional_table, info_gain, info_gain_from_table
from realtele.povm import filter_for_outcome, paper_formula, post_success_states, success_probability
from realtele.sweep import SweepGrid, sweep_fidelity, sweep_info_gain
from realtele.teleport import CLASSICAL_BOUND, averaged_fidelity, bell_lookup, fidelity_for_input

R = 1 / math.sqrt(2)
TRIALS = 1000


def _random_params(rng, phases=True):
    ph = rng.uniform(-math.pi, math.pi, 4) if phases else np.zeros(4)
    return BeamsplitterParams(*rng.uniform(0, math.pi / 2, 2), *ph)


def test_c1_bell_gain_balanced():
    t0 = time.perf_counter()
    gain = info_gain(bell_basis(), BeamsplitterParams.from_transmission(R, R))
    dt = time.perf_counter() - t0
    ok = abs(gain - 1.5) <= 1e-9 and dt < 0.1
    record("C1 Bell dS at 50/50 = 1.5 (1e-9)", ok, f"dS={gain:.15f}, {dt * 1e3:.2f} ms")
    assert ok


def test_c2_bell_sweep_maximum():
    t0 = time.perf_counter()
    s = sweep_info_gain(SweepGrid.square(41), "bell")
    dt = time.perf_counter() - t0
    best = s.argmax
    ok = best.value <= 1.5 + 1e-9 and best.index == s.nearest_index(R, R) and dt < 1.0
    record(
        "C2 Bell 41x41 max <= 1.5 at node nearest (1/sqrt2, 1/sqrt2)",
        ok,
        f"max={best.value:.12f} at ({best.axis1}, {best.axis2}), {dt:.2f} s",
    )
    assert ok


@pytest.fixture(scope="module")
def partial_surface():
    t0 = time.perf_counter()
    s = sweep_info_gain(SweepGrid.square(41), "partial", math.sqrt(0.1))
    return s, time.perf_counter() - t0


def test_c3_partial_sweep_minimum_at_balanced(partial_surface):
    s, dt = partial_surface
    i, j = s.nearest_index(R, R)
    ok = s.is_local_min(i, j) and dt < 1.0
    record(
        "C3a x^2=0.1 node (1/sqrt2, 1/sqrt2) is a local minimum over its 4 neighbours",
        ok,
        f"dS={s.values[i, j]:.12f} at ({s.grid.axis1.node(i)}, {s.grid.axis2.node(j)}), {dt:.2f} s",
    )
    assert ok


def test_c3_partial_sweep_maximum_value(partial_surface):
    s, dt = partial_surface
    best = s.argmax
    ok = abs(best.value - 1.52) <= 0.01 and dt < 1.0
    record(
        "C3b x^2=0.1 41x41 max = 1.52 (+-0.01)",
        ok,
        f"max={best.value:.12f} at ({best.axis1}, {best.axis2}), {dt:.2f} s",
    )
    assert ok


def test_c4_product_basis_identity():
    gain = info_gain(partial_basis(1.0), IDENTITY_PARAMS)
    ok = abs(gain - 2.0) <= 1e-9
    record("C4 partial x=1 at identity: dS = 2 (1e-9)", ok, f"dS={gain:.15f}")
    assert ok


def test_c5_fidelity():
    t0 = time.perf_counter()
    s = sweep_fidelity(SweepGrid.square(41))
    dt = time.perf_counter() - t0
    f_bal = averaged_fidelity(BeamsplitterParams.from_transmission(R, R))
    best = s.argmax
    ok = (
        abs(f_bal - 0.88) <= 0.01
        and f_bal > CLASSICAL_BOUND
        and best.index == s.nearest_index(R, R)
        and s.values.max() <= f_bal + 1e-12
        and dt < 30.0
    )
    record(
        "C5 F(50/50) = 0.88 (+-0.01), > 2/3, maximum of 41x41 sweep",
        ok,
        f"F(50/50)={f_bal:.12f}, sweep max={best.value:.12f} at ({best.axis1}, {best.axis2}), {dt:.2f} s",
    )
    assert ok


def test_c6_property_suite():
    rng = np.random.default_rng(6)
    worst = {}

    def track(name, val):
        worst[name] = max(worst.get(name, 0.0), val)

    bell = bell_basis()
    for _ in range(TRIALS):
        p = _random_params(rng)
        u = build_transform(p)
        track("unitarity", np.max(np.abs(u.conj().T @ u - np.eye(4))))
        state = TwoPhotonState.normalized(rng.normal(size=10) + 1j * rng.normal(size=10))
        track("distribution sum", abs(outcome_distribution(state, u).sum() - 1.0))
        x = rng.uniform(0, 1)
        basis = partial_basis(x)
        track("orthonormality", np.max(np.abs(basis.gram() - np.eye(4))))
        table = conditional_table(basis, p)
        gain = info_gain_from_table(table)
        track("dS range violation", max(0.0, -gain, gain - 2.0))
        track("mutual information identity", abs(gain - mutual_information(np.array(table.likelihoods))))
        p0 = _random_params(rng, phases=False)
        track("dS diagonal symmetry", abs(info_gain(bell, p0) - info_gain(bell, p0.swapped())))
        tau = PolarizationQubit.from_vector(haar_qubit(rng))
        lut = bell_lookup(p)
        g = np.exp(1j * rng.uniform(0, 2 * math.pi))
        track(
            "fidelity global phase",
            abs(fidelity_for_input(PolarizationQubit(g * tau.alpha, g * tau.beta), p, lut) - fidelity_for_input(tau, p, lut)),
        )
        track("quadrature doubling", abs(averaged_fidelity(p) - averaged_fidelity(p, nodes=(32, 64))))
    limits = {
        "unitarity": 1e-12,
        "distribution sum": 1e-10,
        "orthonormality": 1e-12,
        "dS range violation": 0.0,
        "dS diagonal symmetry": 1e-10,
        "mutual information identity": 1e-10,
        "quadrature doubling": 1e-10,
        "fidelity global phase": 1e-12,
    }
    failing = [k for k, lim in limits.items() if not worst[k] <= lim]
    detail = ", ".join(f"{k}={worst[k]:.1e}" for k in limits)
    record(f"C6 property suite ({TRIALS} trials)", not failing, detail)
    assert not failing, failing


def test_c7_povm_suite():
    rng = np.random.default_rng(7)
    xs = np.linspace(R, 1.0, 50)
    worst_povm = 0.0
    min_eig = 1.0
    for x in xs:
        for lab in LABELS:
            f = filter_for_outcome(x, lab)
            worst_povm = max(worst_povm, np.max(np.abs(f.a1 + f.a2 - np.eye(2))))
            for m in (f.a1, f.a2):
                ev = np.linalg.eigvalsh(m)
                min_eig = min(min_eig, ev.min(), 1.0 - ev.max())
    worst_fid = 0.0
    for _ in range(TRIALS):
        v = haar_qubit(rng)
        x = rng.uniform(R, 1.0)
        for state in post_success_states(PolarizationQubit.from_vector(v), x):
            if state is not None:
                worst_fid = max(worst_fid, 1.0 - abs(np.vdot(v, state)) ** 2)
    spread, oracle_gap = 0.0, 0.0
    taus = [haar_qubit(rng) for _ in range(20)]
    for x in xs:
        totals = []
        for v in taus:
            _, total = success_probability(PolarizationQubit.from_vector(v), x)
            oracle_total, _ = povm_brute_force(v[0], v[1], x)
            oracle_gap = max(oracle_gap, abs(total - oracle_total))
            totals.append(total)
        spread = max(spread, max(totals) - min(totals))
    at_bell = success_probability(PolarizationQubit.from_vector(taus[0]), R)[1]
    ok = (
        worst_povm <= 1e-12
        and min_eig >= -1e-12
        and worst_fid <= 1e-12
        and spread < 1e-10
        and abs(at_bell - 1.0) <= 1e-12
        and abs(paper_formula(R) - 1.0) <= 1e-12
        and oracle_gap <= 1e-10
    )
    record(
        "C7 POVM suite",
        ok,
        f"|A1+A2-1|={worst_povm:.1e}, min eig margin={min_eig:.1e}, 1-F={worst_fid:.1e}, "
        f"spread={spread:.1e}, p(1/sqrt2)={at_bell:.15f}, oracle gap={oracle_gap:.1e}",
    )
    assert ok


def test_c8_determinism():
    from test_cli import CASES, GOLDEN, run

    mismatches = []
    for name, args in sorted(CASES.items()):
        golden = (GOLDEN / name).read_text()
        outs = {run([*args, "--workers", str(w)]).stdout for w in (1, 4)}
        outs.add(run(args).stdout)
        if outs != {golden}:
            mismatches.append(name)
    ok = not mismatches
    record(
        "C8 byte-identical CLI output across runs/workers, golden CSV+JSON per subcommand",
        ok,
        f"{len(CASES)} golden files checked" + (f", mismatched: {mismatches}" if mismatches else ""),
    )
    assert ok
