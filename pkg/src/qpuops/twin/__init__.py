from .calibration import DriftParams, drifted_fidelity
from .circuits import Circuit, CircuitError, Gate, ghz_chain_circuit
from .statevector import (
    apply_cz,
    apply_prx,
    ideal_probabilities,
    prx_matrix,
    simulate_ideal,
)
from .topology import QpuTopology
from .twin import ExecutionResult, QpuTwin, TwinConfig

__all__ = [
    "Circuit",
    "CircuitError",
    "DriftParams",
    "ExecutionResult",
    "Gate",
    "QpuTopology",
    "QpuTwin",
    "TwinConfig",
    "apply_cz",
    "apply_prx",
    "drifted_fidelity",
    "ghz_chain_circuit",
    "ideal_probabilities",
    "prx_matrix",
    "simulate_ideal",
]
