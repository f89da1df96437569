"""Beamsplitter Bell measurements, information gain and realistic teleportation."""

from realtele.bases import MeasurementBasis, bell_basis, partial_basis
from realtele.beamsplitter import (
    BeamsplitterParams,
    build_transform,
    outcome_distribution,
    transmit,
)
from realtele.fock import (
    OUTCOMES,
    DetectionOutcome,
    Mode,
    PolarizationQubit,
    TwoPhotonState,
    from_operator_pairs,
    inner_product,
)
from realtele.information import conditional_table, info_gain, lookup_table
from realtele.teleport import averaged_fidelity, fidelity_for_input

__version__ = "0.1.0"

__all__ = [
    "BeamsplitterParams",
    "DetectionOutcome",
    "MeasurementBasis",
    "Mode",
    "OUTCOMES",
    "PolarizationQubit",
    "TwoPhotonState",
    "averaged_fidelity",
    "bell_basis",
    "build_transform",
    "conditional_table",
    "fidelity_for_input",
    "from_operator_pairs",
    "info_gain",
    "inner_product",
    "lookup_table",
    "outcome_distribution",
    "partial_basis",
    "transmit",
]
