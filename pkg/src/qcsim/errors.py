"""Exception hierarchy shared by every backend and driver."""

from __future__ import annotations


class QsimError(Exception):
    """Base class for all errors raised by qcsim."""


class SizeError(QsimError, ValueError):
    """Qubit count is zero, negative, or above a configured cap."""


class DimensionError(QsimError, ValueError):
    """Operands disagree on width or vector length."""


class BoundsError(QsimError, IndexError):
    """A qubit or basis index lies outside the register."""


class GateConstructionError(QsimError, ValueError):
    """A gate was requested with bad qubits, a bad parameter, or a bad matrix."""


class CapabilityError(QsimError):
    """The requested operation is not supported by the chosen backend."""


class NumericalError(QsimError, ArithmeticError):
    """A linear-algebra routine failed or produced a non-finite value."""


class OptimizerError(NumericalError):
    """Non-finite gradient or energy encountered during optimization."""


class HamiltonianParseError(QsimError, ValueError):
    """Malformed Hamiltonian text. ``lineno`` is 1-based."""

    def __init__(self, message: str, lineno: int | None = None) -> None:
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class CorrectnessError(QsimError):
    """A benchmark self-check failed before timings were reported."""


class InputError(QsimError, ValueError):
    """Caller-supplied values are malformed (wrong length, NaN, out of domain)."""
