"""Numerical thresholds for Clauser-Horne-type Bell tests.

Maximal violations, critical detection efficiencies and white-noise
thresholds for entangled qubit and qutrit states measured with
multiport beam splitters or biphoton polarization analyzers.
"""
from .qcore import (
    ATOL,
    CLAMP_TOL,
    InternalConsistencyError,
    Operator,
    StateVector,
    basis_state,
    partial_projection_probability,
    probability,
    projector_onto,
    tensor,
)
from .scenarios import (
    Scenario,
    biphoton_projectors,
    biphoton_scenario,
    joint_probability,
    mix_with_noise,
    probability_tables,
    qubit_projectors,
    qubit_scenario,
    qubit_state,
    single_probability,
    tritter_scenario,
    tritter_state,
    tritter_unitary,
)
from .bell import (
    BellFunctional,
    BellValue,
    ch_qubit_functional,
    ch_qutrit_functional,
    evaluate,
    format_functional,
    functional_preset,
    lhv_max,
    load_functional,
    parse_functional,
    value_at_efficiency,
    value_at_noise,
)
from .optim import (
    VIOLATION_CUTOFF,
    OptimOptions,
    OptimizationError,
    ViolationResult,
    closed_form_efficiency,
    critical_efficiency,
    maximize,
    noise_threshold,
)
from .scan import ScanGrid, export_grid, load_grid_json, scan_ab, scan_eta_a

__version__ = "0.1.0"

__all__ = [
    "ATOL",
    "CLAMP_TOL",
    "InternalConsistencyError",
    "Operator",
    "StateVector",
    "basis_state",
    "partial_projection_probability",
    "probability",
    "projector_onto",
    "tensor",
    "Scenario",
    "biphoton_projectors",
    "biphoton_scenario",
    "joint_probability",
    "mix_with_noise",
    "probability_tables",
    "qubit_projectors",
    "qubit_scenario",
    "qubit_state",
    "single_probability",
    "tritter_scenario",
    "tritter_state",
    "tritter_unitary",
    "BellFunctional",
    "BellValue",
    "ch_qubit_functional",
    "ch_qutrit_functional",
    "evaluate",
    "format_functional",
    "functional_preset",
    "lhv_max",
    "load_functional",
    "parse_functional",
    "value_at_efficiency",
    "value_at_noise",
    "VIOLATION_CUTOFF",
    "OptimOptions",
    "OptimizationError",
    "ViolationResult",
    "closed_form_efficiency",
    "critical_efficiency",
    "maximize",
    "noise_threshold",
    "ScanGrid",
    "export_grid",
    "load_grid_json",
    "scan_ab",
    "scan_eta_a",
]
