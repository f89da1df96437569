"""Polarization-preserving beamsplitter acting on the modes (aH, aV, bH, bV)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from realtele.fock import (
    N_OUTCOMES,
    TwoPhotonState,
    amplitudes_to_matrix,
    matrix_to_amplitudes,
)

UNITARY_TOL = 1e-12


class ParameterError(ValueError):
    """Invalid beamsplitter parameters."""


@dataclass(frozen=True)
class BeamsplitterParams:
    """Mixing angles and phases; cos(theta) is the transmission coefficient.

    ``phi_*`` are the transmitted-beam phases and ``chi_*`` the reflected-beam
    phases for each polarization.
    """

    theta_h: float
    theta_v: float
    phi_h: float = 0.0
    phi_v: float = 0.0
    chi_h: float = 0.0
    chi_v: float = 0.0

    def __post_init__(self):
        for name in ("theta_h", "theta_v", "phi_h", "phi_v", "chi_h", "chi_v"):
            val = float(getattr(self, name))
            if not math.isfinite(val):
                raise ParameterError(f"{name} must be finite, got {val}")
            object.__setattr__(self, name, val)
        for name in ("theta_h", "theta_v"):
            val = getattr(self, name)
            if val < -1e-15 or val > math.pi / 2 + 1e-15:
                raise ParameterError(f"{name} must lie in [0, pi/2], got {val}")
            object.__setattr__(self, name, min(max(val, 0.0), math.pi / 2))

    @classmethod
    def from_transmission(
        cls,
        t_h: float,
        t_v: float,
        phi_h: float = 0.0,
        phi_v: float = 0.0,
        chi_h: float = 0.0,
        chi_v: float = 0.0,
    ) -> "BeamsplitterParams":
        for name, t in (("t_h", t_h), ("t_v", t_v)):
            if not math.isfinite(t) or t < 0.0 or t > 1.0:
                raise ParameterError(f"transmission {name} must lie in [0, 1], got {t}")
        return cls(math.acos(t_h), math.acos(t_v), phi_h, phi_v, chi_h, chi_v)

    @property
    def transmission(self) -> tuple[float, float]:
        return math.cos(self.theta_h), math.cos(self.theta_v)

    def swapped(self) -> "BeamsplitterParams":
        """Same splitter with the roles of H and V exchanged."""
        return BeamsplitterParams(
            self.theta_v, self.theta_h, self.phi_v, self.phi_h, self.chi_v, self.chi_h
        )


IDENTITY_PARAMS = BeamsplitterParams(0.0, 0.0)
BALANCED_PARAMS = BeamsplitterParams(math.pi / 4, math.pi / 4)


def build_transform(p: BeamsplitterParams) -> np.ndarray:
    """The 4x4 mode matrix in canonical order; H and V blocks never mix.

    The lower-left entry of each block carries the phase e^{i(phi - chi)},
    which keeps the matrix unitary when phi != chi. With phi = chi (all
    figure presets use zero phases) it is just -sin(theta).
    """
    ch, sh = math.cos(p.theta_h), math.sin(p.theta_h)
    cv, sv = math.cos(p.theta_v), math.sin(p.theta_v)
    u = np.zeros((4, 4), dtype=complex)
    u[0, 0] = ch * np.exp(1j * p.phi_h)
    u[0, 2] = sh * np.exp(1j * p.chi_h)
    u[2, 0] = -sh * np.exp(1j * (p.phi_h - p.chi_h))
    u[2, 2] = ch
    u[1, 1] = cv * np.exp(1j * p.phi_v)
    u[1, 3] = sv * np.exp(1j * p.chi_v)
    u[3, 1] = -sv * np.exp(1j * (p.phi_v - p.chi_v))
    u[3, 3] = cv
    u.flags.writeable = False
    return u


def transform_amplitudes(amps: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Push (possibly unnormalized, batched) occupation amplitudes through ``u``.

    The single-photon amplitude vector transforms as v -> u @ v, i.e. column k
    of ``u`` is the image of the k-th creation operator, so the coefficient
    matrix transforms as C -> u C u^T. This makes sequential splitters
    compose as ``u2 @ u1``.
    """
    mat = amplitudes_to_matrix(amps)
    out = np.einsum("ak,...kl,bl->...ab", u, mat, u)
    return matrix_to_amplitudes(out)


def transmit(state: TwoPhotonState, u: np.ndarray) -> TwoPhotonState:
    return TwoPhotonState(transform_amplitudes(state.amplitudes, u))


def outcome_distribution(state: TwoPhotonState, u: np.ndarray) -> np.ndarray:
    """Probabilities of the 10 detection outcomes after the splitter.

    Detectors are assumed photon-number and polarization resolving, so every
    outcome is distinguishable.
    """
    probs = np.abs(transform_amplitudes(state.amplitudes, u)) ** 2
    assert probs.shape == (N_OUTCOMES,)
    return probs
