"""Bayesian information gain of a beamsplitter measurement and look-up tables."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from realtele.bases import MeasurementBasis
from realtele.beamsplitter import BeamsplitterParams, build_transform, transform_amplitudes
from realtele.fock import N_OUTCOMES, OUTCOMES

ZERO_PROB = 1e-14
TIE_TOL = 1e-12
TIE_BREAK_RULES = ("lowest-index", "posterior-then-index")


def shannon_entropy(p) -> float:
    """Entropy in bits, with 0 log 0 = 0.

    Raises:
        ValueError: if the entries do not sum to 1 within 1e-6 or an entry
            is below -1e-12.
    """
    p = np.asarray(p, dtype=float)
    if np.any(p < -1e-12):
        raise ValueError(f"negative probability in {p}")
    if abs(p.sum() - 1.0) > 1e-6:
        raise ValueError(f"probabilities sum to {p.sum()}, not 1")
    p = np.clip(p, 0.0, None)
    nz = p[p > 0]
    return float(-(nz * np.log2(nz)).sum()) + 0.0


@dataclass(frozen=True, eq=False)
class ConditionalTable:
    """Likelihoods p(k|i), joints p(i,k), marginals p(k) and posteriors p(i|k).

    Rows index basis states, columns detection outcomes. Posterior columns for
    outcomes with p(k) = 0 are NaN.
    """

    likelihoods: np.ndarray
    joints: np.ndarray
    outcome_marginals: np.ndarray
    posteriors: np.ndarray
    priors: np.ndarray

    @property
    def defined(self) -> np.ndarray:
        return self.outcome_marginals > ZERO_PROB


def likelihood_matrix(basis: MeasurementBasis, u: np.ndarray) -> np.ndarray:
    out = transform_amplitudes(basis.matrix(), u)
    return np.abs(out) ** 2


def conditional_table(basis: MeasurementBasis, params: BeamsplitterParams | np.ndarray) -> ConditionalTable:
    u = params if isinstance(params, np.ndarray) else build_transform(params)
    like = likelihood_matrix(basis, u)
    priors = basis.priors
    joints = priors[:, None] * like
    marg = joints.sum(axis=0)
    post = np.full_like(joints, np.nan)
    ok = marg > ZERO_PROB
    post[:, ok] = joints[:, ok] / marg[ok]
    for arr in (like, joints, marg, post):
        arr.flags.writeable = False
    return ConditionalTable(like, joints, marg, post, priors)


def final_entropy(table: ConditionalTable) -> float:
    """-sum p(i,k) log2 p(i|k) over outcomes that can occur."""
    ok = table.defined
    joints = table.joints[:, ok]
    post = table.posteriors[:, ok]
    mask = joints > 0
    return float(-(joints[mask] * np.log2(post[mask])).sum()) + 0.0


def info_gain_from_table(table: ConditionalTable) -> float:
    gain = shannon_entropy(table.priors) - final_entropy(table)
    return max(gain, 0.0)


def info_gain(basis: MeasurementBasis, params: BeamsplitterParams | np.ndarray) -> float:
    """Initial minus final entropy of the basis-state label, in bits."""
    return info_gain_from_table(conditional_table(basis, params))


@dataclass(frozen=True)
class LookupTable:
    """Most likely basis index per outcome (None where the outcome cannot occur)."""

    best: tuple[int | None, ...]
    best_posterior: tuple[float, ...]
    rule: str = "lowest-index"

    def __getitem__(self, outcome_index: int) -> int | None:
        return self.best[outcome_index]


def _argmax(col: np.ndarray, rule: str) -> int:
    if rule == "lowest-index":
        # near-equal posteriors count as a tie
        return int(np.flatnonzero(col >= col.max() - TIE_TOL)[0])
    if rule == "posterior-then-index":
        # strict float comparison; only exact ties fall back to index order
        return int(np.argmax(col))
    raise ValueError(f"unknown tie-break rule {rule!r}; choose from {TIE_BREAK_RULES}")


def lookup_table(table: ConditionalTable, rule: str = "lowest-index") -> LookupTable:
    best: list[int | None] = []
    vals: list[float] = []
    for j in range(N_OUTCOMES):
        if not table.defined[j]:
            best.append(None)
            vals.append(float("nan"))
            continue
        i = _argmax(table.posteriors[:, j], rule)
        best.append(i)
        vals.append(float(table.posteriors[i, j]))
    return LookupTable(tuple(best), tuple(vals), rule)


def describe_lookup(table: ConditionalTable, lut: LookupTable, labels) -> list[dict]:
    rows = []
    for j, o in enumerate(OUTCOMES):
        rows.append(
            {
                "outcome": o.label,
                "p_outcome": float(table.outcome_marginals[j]),
                "posterior": [None if np.isnan(v) else float(v) for v in table.posteriors[:, j]],
                "argmax": None if lut.best[j] is None else labels[lut.best[j]],
            }
        )
    return rows
