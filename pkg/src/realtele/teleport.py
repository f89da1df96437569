"""Teleportation with a beamsplitter "Bell measurement" and a most-likely-state strategy.

Alice holds the input photon in mode a and one half of the channel
(b_H c_V + b_V c_H)/sqrt(2) in mode b; Bob holds mode c. Alice sends both of
her photons through the splitter, reads off a detection outcome, looks up the
most likely Bell state and Bob applies the matching Pauli correction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from realtele.bases import LABELS, bell_basis
from realtele.beamsplitter import BeamsplitterParams, build_transform, transform_amplitudes
from realtele.fock import N_OUTCOMES, Mode, PolarizationQubit, matrix_to_amplitudes, operator_pairs_matrix
from realtele.information import ZERO_PROB, LookupTable, conditional_table, lookup_table

CLASSICAL_BOUND = 2.0 / 3.0
MEASURES = ("uniform-angle", "haar")
DEFAULT_NODES = (16, 32)

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True, eq=False)
class JointState:
    """Amplitudes over (Alice's detection outcome) x (Bob's H, V)."""

    amplitudes: np.ndarray

    @property
    def outcome_probabilities(self) -> np.ndarray:
        return (np.abs(self.amplitudes) ** 2).sum(axis=1)

    def bob_state(self, outcome_index: int) -> np.ndarray | None:
        """Bob's normalized conditional state, or None if the outcome cannot occur."""
        v = self.amplitudes[outcome_index]
        n = np.linalg.norm(v)
        if n**2 <= ZERO_PROB:
            return None
        return v / n


@dataclass(frozen=True, eq=False)
class CorrectionSet:
    """Bob's unitaries, indexed like the basis labels."""

    unitaries: tuple[np.ndarray, ...]
    labels: tuple[str, ...] = LABELS

    def __getitem__(self, idx: int | None) -> np.ndarray:
        return I2 if idx is None else self.unitaries[idx]

    def stacked(self, lut: LookupTable) -> np.ndarray:
        return np.array([self[i] for i in lut.best])


def standard_corrections() -> CorrectionSet:
    """Pauli corrections for the channel (|01> + |10>)/sqrt(2).

    psi+ -> I, psi- -> Z, phi+ -> X, phi- -> Z X (X applied first).
    """
    by_label = {"psi-": SZ, "psi+": I2, "phi-": SZ @ SX, "phi+": SX}
    return CorrectionSet(tuple(by_label[l] for l in LABELS))


def _channel_matrices() -> np.ndarray:
    """Coefficient matrices of Alice's two photons, shape (bob 2, tau 2, 4, 4).

    Bob's c_H pairs with b_V and c_V with b_H in the channel.
    """
    out = np.zeros((2, 2, 4, 4), dtype=complex)
    r = 1.0 / math.sqrt(2.0)
    for tau_idx, a_mode in enumerate((Mode.aH, Mode.aV)):
        out[0, tau_idx] = operator_pairs_matrix([(a_mode, Mode.bV, r)])
        out[1, tau_idx] = operator_pairs_matrix([(a_mode, Mode.bH, r)])
    return out


_CHANNEL = _channel_matrices()


def joint_kernel(params: BeamsplitterParams | np.ndarray) -> np.ndarray:
    """Linear map tau -> joint amplitudes, shape (10 outcomes, 2 bob, 2 tau)."""
    u = params if isinstance(params, np.ndarray) else build_transform(params)
    amps = matrix_to_amplitudes(_CHANNEL)  # (bob, tau, 10)
    out = transform_amplitudes(amps, u)
    return np.transpose(out, (2, 0, 1))


def prepare_joint(tau: PolarizationQubit, params: BeamsplitterParams | np.ndarray) -> JointState:
    amps = joint_kernel(params) @ tau.vector
    return JointState(amps)


def bell_lookup(params: BeamsplitterParams | np.ndarray, tie_break: str = "lowest-index") -> LookupTable:
    return lookup_table(conditional_table(bell_basis(), params), tie_break)


def fidelity_for_input(
    tau: PolarizationQubit,
    params: BeamsplitterParams | np.ndarray,
    lut: LookupTable,
    corr: CorrectionSet | None = None,
) -> float:
    """Outcome-averaged fidelity of Bob's corrected state with ``tau``."""
    corr = corr or standard_corrections()
    joint = prepare_joint(tau, params).amplitudes
    total = 0.0
    for j in range(N_OUTCOMES):
        v = joint[j]
        if np.vdot(v, v).real <= 0.0:
            continue
        # p_j * |<tau|U b_j>|^2 with b_j normalized == |<tau|U v>|^2
        total += abs(np.vdot(tau.vector, corr[lut[j]] @ v)) ** 2
    return float(min(max(total, 0.0), 1.0))


def sphere_quadrature(
    n_polar: int = DEFAULT_NODES[0], n_azimuth: int = DEFAULT_NODES[1], measure: str = "uniform-angle"
) -> tuple[np.ndarray, np.ndarray]:
    """Input qubits and weights for averaging over pure states.

    ``uniform-angle`` gives every input state (cos(t/2), sin(t/2) e^{i phi})
    the same weight in (t, phi); ``haar`` is the rotation-invariant area
    measure on the Bloch sphere. Polar direction uses Gauss-Legendre nodes,
    azimuth uses equally spaced nodes.
    """
    if n_polar < 3 or n_azimuth < 8:
        raise ValueError("need at least 3 polar and 8 azimuthal nodes")
    x, w = np.polynomial.legendre.leggauss(n_polar)
    if measure == "haar":
        cos_t = x
    elif measure == "uniform-angle":
        cos_t = np.cos(0.5 * math.pi * (x + 1.0))
    else:
        raise ValueError(f"unknown measure {measure!r}; choose from {MEASURES}")
    w = w / 2.0
    phi = 2.0 * math.pi * np.arange(n_azimuth) / n_azimuth
    alpha = np.sqrt(np.clip((1.0 + cos_t) / 2.0, 0.0, 1.0))
    beta_mag = np.sqrt(np.clip((1.0 - cos_t) / 2.0, 0.0, 1.0))
    states = np.empty((n_polar, n_azimuth, 2), dtype=complex)
    states[..., 0] = alpha[:, None]
    states[..., 1] = beta_mag[:, None] * np.exp(1j * phi)[None, :]
    weights = np.repeat(w[:, None] / n_azimuth, n_azimuth, axis=1)
    return states.reshape(-1, 2), weights.reshape(-1)


def fidelity_profile(
    params: BeamsplitterParams | np.ndarray,
    taus: np.ndarray,
    tie_break: str = "lowest-index",
    corr: CorrectionSet | None = None,
) -> np.ndarray:
    """F(tau) for each row of ``taus`` (shape (n, 2))."""
    corr = corr or standard_corrections()
    u = params if isinstance(params, np.ndarray) else build_transform(params)
    lut = bell_lookup(u, tie_break)
    kernel = corr.stacked(lut) @ joint_kernel(u)  # (10, 2, 2)
    amps = np.einsum("qa,jab,qb->qj", taus.conj(), kernel, taus)
    return np.clip((np.abs(amps) ** 2).sum(axis=1), 0.0, 1.0)


def averaged_fidelity(
    params: BeamsplitterParams | np.ndarray,
    tie_break: str = "lowest-index",
    nodes: tuple[int, int] = DEFAULT_NODES,
    measure: str = "uniform-angle",
) -> float:
    """Fidelity averaged over all pure inputs, each weighted equally."""
    taus, weights = sphere_quadrature(nodes[0], nodes[1], measure)
    return float(np.sum(weights * fidelity_profile(params, taus, tie_break)))
