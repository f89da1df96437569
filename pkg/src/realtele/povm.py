"""Probabilistic teleportation through a partially entangled measurement basis.

Alice measures the input qubit and her half of (|01> + |10>)/sqrt(2) in the
basis x|01> - y|10>, y|01> + x|10>, x|00> - y|11>, y|00> + x|11>
(y = sqrt(1 - x^2), x >= y). Bob's conditional state has unequal weights on
|0> and |1>; a two-outcome filter attenuates the heavier slot and, on
success, leaves a Pauli-rotated copy of the input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from realtele.bases import BELL_X, LABELS, DomainError
from realtele.fock import PolarizationQubit
from realtele.teleport import standard_corrections

_X_TOL = 1e-12


def check_x(x: float) -> float:
    x = float(x)
    if not math.isfinite(x) or x < BELL_X - _X_TOL or x > 1.0 + _X_TOL:
        raise DomainError(f"x must lie in [1/sqrt(2), 1], got {x}")
    return min(max(x, BELL_X), 1.0)


def normalize_x(x: float) -> float:
    """Map x in [0, 1] onto the equivalent x >= y by swapping the roles of x and y."""
    x = float(x)
    if not math.isfinite(x) or x < 0.0 or x > 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x}")
    return max(x, math.sqrt(1.0 - x * x))


@dataclass(frozen=True, eq=False)
class PartialQubitBasis:
    x: float

    def __post_init__(self):
        object.__setattr__(self, "x", check_x(self.x))

    @property
    def y(self) -> float:
        return math.sqrt(max(0.0, 1.0 - self.x**2))

    @property
    def states(self) -> np.ndarray:
        """Rows over |00>, |01>, |10>, |11> in label order (psi-, psi+, phi-, phi+)."""
        x, y = self.x, self.y
        return np.array(
            [
                [0, x, -y, 0],
                [0, y, x, 0],
                [x, 0, 0, -y],
                [y, 0, 0, x],
            ],
            dtype=complex,
        )


@dataclass(frozen=True, eq=False)
class BranchDecomposition:
    """Bob's unnormalized conditional amplitudes per Alice outcome."""

    labels: tuple[str, ...]
    bob: np.ndarray  # (4, 2)

    @property
    def weights(self) -> np.ndarray:
        return (np.abs(self.bob) ** 2).sum(axis=1)


def total_state(tau: PolarizationQubit) -> np.ndarray:
    """tau (x) (|01> + |10>)/sqrt(2) as a (4, 2) array: (qubits 1-2) x Bob."""
    channel = np.array([[0, 1], [1, 0]], dtype=complex) / math.sqrt(2.0)
    return np.einsum("a,bc->abc", tau.vector, channel).reshape(4, 2)


def branch_kernels(x: float) -> np.ndarray:
    """Linear maps tau -> Bob amplitudes for each outcome, shape (4, 2, 2)."""
    basis = PartialQubitBasis(x).states
    cols = [total_state(PolarizationQubit(1, 0)), total_state(PolarizationQubit(0, 1))]
    return np.stack([basis.conj() @ c for c in cols], axis=-1)


def expand_total_state(tau: PolarizationQubit, x: float) -> BranchDecomposition:
    """Change of basis of qubits 1-2 onto the partially entangled basis."""
    basis = PartialQubitBasis(x).states
    bob = basis.conj() @ total_state(tau)
    return BranchDecomposition(LABELS, bob)


@dataclass(frozen=True, eq=False)
class FilterPovm:
    """Two-element filter on Bob's qubit; success Kraus operator ``kraus``.

    ``a1 = kraus^dag kraus`` and ``a2 = 1 - a1``.
    """

    label: str
    kraus: np.ndarray

    @property
    def a1(self) -> np.ndarray:
        return self.kraus.conj().T @ self.kraus

    @property
    def a2(self) -> np.ndarray:
        return np.eye(2) - self.a1

    @property
    def attenuation_ratio(self) -> float:
        """Amplitude factor applied to the heavier slot (y/x)."""
        return float(np.min(np.abs(np.diag(self.kraus))))


def filter_for_outcome(x: float, outcome_label: str) -> FilterPovm:
    """Filter that equalizes the branch's two slot weights by attenuating the larger one."""
    x = check_x(x)
    idx = LABELS.index(outcome_label)
    kernel = branch_kernels(x)[idx]
    row_norms = np.linalg.norm(kernel, axis=1)
    low = row_norms.min()
    # an empty slot (x = 1) is left alone; never amplify
    ratios = np.array([1.0 if n == 0.0 else low / n for n in row_norms])
    kraus = np.diag(ratios).astype(complex)
    return FilterPovm(outcome_label, kraus)


def post_success_states(tau: PolarizationQubit, x: float) -> list[np.ndarray | None]:
    """Bob's normalized state after filter success and Pauli correction, per branch."""
    corr = standard_corrections()
    branches = expand_total_state(tau, x)
    out = []
    for i, label in enumerate(LABELS):
        v = corr[i] @ filter_for_outcome(x, label).kraus @ branches.bob[i]
        n = np.linalg.norm(v)
        out.append(None if n == 0.0 else v / n)
    return out


def success_probability(tau: PolarizationQubit, x: float) -> tuple[np.ndarray, float]:
    """Joint probability of each Alice outcome and filter success, and their sum.

    The sum is 2(1 - x^2) for every input.
    """
    branches = expand_total_state(tau, x)
    per = np.array(
        [
            np.linalg.norm(filter_for_outcome(x, label).kraus @ branches.bob[i]) ** 2
            for i, label in enumerate(LABELS)
        ]
    )
    return per, float(per.sum())


def paper_formula(x: float) -> float:
    """The closed form 1/(2x^2), kept for side-by-side comparison only."""
    return 1.0 / (2.0 * x * x)
