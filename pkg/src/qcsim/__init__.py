"""Quantum circuit simulation with dense state-vector and MPS backends."""

from .circuit import Circuit, Operation, execute, execute_on_backend
from .dense import DenseState
from .errors import (
    BoundsError,
    CapabilityError,
    CorrectnessError,
    DimensionError,
    GateConstructionError,
    HamiltonianParseError,
    InputError,
    NumericalError,
    OptimizerError,
    QsimError,
    SizeError,
)
from .gates import Gate, standard_gate
from .mps import MpsConfig, MpsState
from .observables import PauliObservable, PauliString, expectation

__version__ = "0.1.0"

__all__ = [
    "BoundsError",
    "CapabilityError",
    "Circuit",
    "CorrectnessError",
    "DenseState",
    "DimensionError",
    "Gate",
    "GateConstructionError",
    "HamiltonianParseError",
    "InputError",
    "MpsConfig",
    "MpsState",
    "NumericalError",
    "Operation",
    "OptimizerError",
    "PauliObservable",
    "PauliString",
    "QsimError",
    "SizeError",
    "execute",
    "execute_on_backend",
    "expectation",
    "standard_gate",
]
