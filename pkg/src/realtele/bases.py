"""Bell and partially entangled measurement bases on the modes a, b."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from realtele.fock import InvalidStateError, Mode, TwoPhotonState, from_operator_pairs

LABELS = ("psi-", "psi+", "phi-", "phi+")
BELL_X = 1.0 / math.sqrt(2.0)


class DomainError(ValueError):
    """Entanglement parameter outside its domain."""


@dataclass(frozen=True, eq=False)
class MeasurementBasis:
    states: tuple[TwoPhotonState, ...]
    x: float
    priors: np.ndarray = field(default_factory=lambda: np.full(4, 0.25))
    labels: tuple[str, ...] = LABELS

    def __post_init__(self):
        if len(self.states) != 4 or len(self.labels) != 4:
            raise InvalidStateError("a measurement basis has exactly four states")
        priors = np.array(self.priors, dtype=float)
        if priors.shape != (4,) or np.any(priors < 0) or abs(priors.sum() - 1.0) > 1e-12:
            raise InvalidStateError(f"priors must be a probability vector, got {priors}")
        priors.flags.writeable = False
        object.__setattr__(self, "priors", priors)
        object.__setattr__(self, "states", tuple(self.states))

    def gram(self) -> np.ndarray:
        vecs = self.matrix()
        return vecs.conj() @ vecs.T

    def matrix(self) -> np.ndarray:
        """Rows are the basis states' occupation amplitudes."""
        return np.array([s.amplitudes for s in self.states])

    def with_priors(self, priors) -> "MeasurementBasis":
        return MeasurementBasis(self.states, self.x, np.asarray(priors, float), self.labels)

    def __getitem__(self, label: str) -> TwoPhotonState:
        return self.states[self.labels.index(label)]


def _family(x: float, y: float) -> tuple[TwoPhotonState, ...]:
    aH, aV, bH, bV = Mode.aH, Mode.aV, Mode.bH, Mode.bV
    return (
        from_operator_pairs([(aH, bV, x), (aV, bH, -y)]),
        from_operator_pairs([(aH, bV, y), (aV, bH, x)]),
        from_operator_pairs([(aH, bH, x), (aV, bV, -y)]),
        from_operator_pairs([(aH, bH, y), (aV, bV, x)]),
    )


def bell_basis() -> MeasurementBasis:
    """(psi-, psi+, phi-, phi+) with coefficients +-1/sqrt(2)."""
    aH, aV, bH, bV = Mode.aH, Mode.aV, Mode.bH, Mode.bV
    r = BELL_X
    states = (
        from_operator_pairs([(aH, bV, r), (aV, bH, -r)]),
        from_operator_pairs([(aH, bV, r), (aV, bH, r)]),
        from_operator_pairs([(aH, bH, r), (aV, bV, -r)]),
        from_operator_pairs([(aH, bH, r), (aV, bV, r)]),
    )
    return MeasurementBasis(states, BELL_X)


def partial_basis(x: float) -> MeasurementBasis:
    """Partially entangled basis; ``x = 1/sqrt(2)`` is the Bell basis up to phases.

    Raises:
        DomainError: if ``x`` is not in [0, 1].
    """
    x = float(x)
    if not math.isfinite(x) or x < 0.0 or x > 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x}")
    y = math.sqrt(max(0.0, 1.0 - x * x))
    return MeasurementBasis(_family(x, y), x)


def make_basis(kind: str, x: float | None = None) -> MeasurementBasis:
    if kind == "bell":
        return bell_basis()
    if kind == "partial":
        if x is None:
            raise DomainError("the partial basis needs x")
        return partial_basis(x)
    raise DomainError(f"unknown basis kind {kind!r}")
