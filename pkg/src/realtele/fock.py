"""Two-photon states of the four modes aH, aV, bH, bV.

States are stored in the normalized occupation-number basis. A doubly
occupied mode m is the vector (m^dag)^2 |0> / sqrt(2); a mixed pair is
m^dag n^dag |0>. Internally a state can also be viewed as a symmetric 4x4
coefficient matrix C with |s> = sum_kl C[k, l] m_k^dag m_l^dag |0>, which is
the form the beamsplitter acts on.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

NORM_TOL = 1e-12


class InvalidStateError(ValueError):
    """Raised when a state cannot be normalized."""


class Mode(enum.IntEnum):
    aH = 0
    aV = 1
    bH = 2
    bV = 3

    @property
    def polarization(self) -> str:
        return self.name[1]

    @property
    def port(self) -> str:
        return self.name[0]


@dataclass(frozen=True, order=True)
class DetectionOutcome:
    """Unordered pair of modes, i.e. one two-photon counting pattern."""

    first: Mode
    second: Mode

    def __post_init__(self):
        lo, hi = sorted((Mode(self.first), Mode(self.second)))
        object.__setattr__(self, "first", lo)
        object.__setattr__(self, "second", hi)

    @property
    def index(self) -> int:
        return OUTCOME_INDEX[(int(self.first), int(self.second))]

    @property
    def label(self) -> str:
        return f"{self.first.name}{self.second.name}"

    @property
    def bunched(self) -> bool:
        return self.first == self.second

    def __str__(self) -> str:
        return "{" + f"{self.first.name},{self.second.name}" + "}"


# canonical outcome order: lexicographic on the sorted mode pair
_PAIRS = [(i, j) for i in range(4) for j in range(i, 4)]
OUTCOME_INDEX = {pair: k for k, pair in enumerate(_PAIRS)}
OUTCOMES: tuple[DetectionOutcome, ...] = tuple(
    DetectionOutcome(Mode(i), Mode(j)) for i, j in _PAIRS
)
N_OUTCOMES = len(OUTCOMES)

_ROWS = np.array([i for i, _ in _PAIRS])
_COLS = np.array([j for _, j in _PAIRS])
_DIAG = _ROWS == _COLS
_SQRT2 = math.sqrt(2.0)


def outcome(m1: Mode | str, m2: Mode | str) -> DetectionOutcome:
    """Look up an outcome by mode names, e.g. ``outcome("aH", "bV")``."""
    m1 = Mode[m1] if isinstance(m1, str) else Mode(m1)
    m2 = Mode[m2] if isinstance(m2, str) else Mode(m2)
    return DetectionOutcome(m1, m2)


def amplitudes_to_matrix(amps: np.ndarray) -> np.ndarray:
    """Symmetric coefficient matrix(es) for occupation amplitudes.

    Works on the last axis, so ``amps`` may be (..., 10).
    """
    amps = np.asarray(amps, dtype=complex)
    vals = np.where(_DIAG, amps / _SQRT2, amps / 2.0)
    mat = np.zeros(amps.shape[:-1] + (4, 4), dtype=complex)
    mat[..., _ROWS, _COLS] = vals
    mat[..., _COLS, _ROWS] = vals
    return mat


def matrix_to_amplitudes(mat: np.ndarray) -> np.ndarray:
    """Inverse of :func:`amplitudes_to_matrix` (symmetrizes first)."""
    mat = np.asarray(mat, dtype=complex)
    sym = 0.5 * (mat + np.swapaxes(mat, -1, -2))
    upper = sym[..., _ROWS, _COLS]
    return np.where(_DIAG, upper * _SQRT2, upper * 2.0)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class TwoPhotonState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (N_OUTCOMES,):
            raise InvalidStateError(f"expected 10 amplitudes, got shape {amps.shape}")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @classmethod
    def normalized(cls, amps: Sequence[complex] | np.ndarray) -> "TwoPhotonState":
        amps = np.asarray(amps, dtype=complex)
        norm = np.linalg.norm(amps)
        if not np.isfinite(norm) or norm == 0.0:
            raise InvalidStateError("state has zero norm")
        return cls(amps / norm)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def amplitude(self, m1: Mode | str, m2: Mode | str) -> complex:
        return complex(self.amplitudes[outcome(m1, m2).index])

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def coefficient_matrix(self) -> np.ndarray:
        return amplitudes_to_matrix(self.amplitudes)

    def allclose(self, other: "TwoPhotonState", atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.amplitudes, other.amplitudes, atol=atol, rtol=0))

    def __repr__(self) -> str:
        terms = [
            f"{a:.4g}|{o.label}>" for a, o in zip(self.amplitudes, OUTCOMES) if abs(a) > 1e-14
        ]
        return "TwoPhotonState(" + " + ".join(terms) + ")"


def operator_pairs_matrix(terms: Iterable[tuple[Mode, Mode, complex]]) -> np.ndarray:
    """Coefficient matrix of sum c m^dag n^dag |0>, unnormalized."""
    mat = np.zeros((4, 4), dtype=complex)
    for m, n, c in terms:
        m, n = int(Mode(m)), int(Mode(n))
        # creation operators commute; split the coefficient symmetrically
        mat[m, n] += c / 2.0
        mat[n, m] += c / 2.0
    return mat


def from_operator_pairs(terms: Iterable[tuple[Mode, Mode, complex]]) -> TwoPhotonState:
    """Build sum c m^dag n^dag |0> and normalize it.

    A repeated mode m^dag m^dag |0> has norm sqrt(2), so it contributes
    ``c * sqrt(2)`` to the doubly-occupied basis vector before normalizing.

    Raises:
        InvalidStateError: if every coefficient is zero.
    """
    terms = list(terms)
    if not terms or all(c == 0 for _, _, c in terms):
        raise InvalidStateError("at least one nonzero operator-pair coefficient required")
    return TwoPhotonState.normalized(matrix_to_amplitudes(operator_pairs_matrix(terms)))


def inner_product(s1: TwoPhotonState, s2: TwoPhotonState) -> complex:
    """<s1|s2>, conjugate-linear in ``s1``."""
    return complex(np.vdot(s1.amplitudes, s2.amplitudes))


@dataclass(frozen=True)
class PolarizationQubit:
    """Single-photon polarization state alpha|H> + beta|V> (|0> = H, |1> = V)."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        a, b = complex(self.alpha), complex(self.beta)
        norm2 = abs(a) ** 2 + abs(b) ** 2
        if not math.isfinite(norm2) or abs(norm2 - 1.0) > NORM_TOL:
            raise InvalidStateError(f"qubit not normalized: |alpha|^2+|beta|^2 = {norm2}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @classmethod
    def from_vector(cls, vec: Sequence[complex]) -> "PolarizationQubit":
        v = np.asarray(vec, dtype=complex)
        v = v / np.linalg.norm(v)
        return cls(v[0], v[1])

    @classmethod
    def from_bloch(cls, polar: float, azimuth: float) -> "PolarizationQubit":
        return cls(math.cos(polar / 2), math.sin(polar / 2) * complex(math.cos(azimuth), math.sin(azimuth)))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=complex)


H = PolarizationQubit(1.0, 0.0)
V = PolarizationQubit(0.0, 1.0)
