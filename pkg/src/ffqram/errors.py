"""Exception types shared across the package."""


class FFQRAMError(Exception):
    """Base class for all package errors."""


class ValidationError(FFQRAMError, ValueError):
    """Malformed input: non-unitary matrix, length mismatch, mixed modes."""


class QubitBoundsError(FFQRAMError, IndexError):
    """Qubit index outside the register."""


class PostSelectionError(FFQRAMError, RuntimeError):
    """Post-selection on an outcome of (numerically) zero probability."""


class ResourceError(FFQRAMError, RuntimeError):
    """Not enough ancilla qubits for a decomposition."""


class CircuitParseError(FFQRAMError, ValueError):
    """Malformed circuit text; carries the offending line number."""

    def __init__(self, line_no: int, reason: str):
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"line {line_no}: {reason}")


class NormalFormError(FFQRAMError, ValueError):
    """Circuit is not in the layered flip/rotate/flip form the noise
    counter expects."""


class DegenerateDatasetError(FFQRAMError, ValueError):
    """Dataset has no usable content (e.g. all-zero amplitudes)."""


class UnsupportedConfigurationError(FFQRAMError, ValueError):
    """Valid input, but a combination this implementation does not handle
    (e.g. non-uniform bus amplitudes in the amplitude-to-angle map)."""
