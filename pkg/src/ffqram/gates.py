"""Gate types for the circuit IR, plus their defining matrices.

Rotation convention: roty(theta)|0> = cos(theta)|0> + sin(theta)|1>, the
plane rotation [[c, -s], [s, c]]. All angles are radians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ValidationError

SQRT1_2 = 1.0 / math.sqrt(2.0)


def _check_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value!r}")


def _check_distinct(*indices: int) -> None:
    if len(set(indices)) != len(indices):
        raise ValidationError(f"qubit indices must be distinct: {indices}")


@dataclass(frozen=True)
class ClassicalXLayer:
    """Flip qubits[k] iff bits[k] == '0' (classically controlled X layer)."""
    bits: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))
        if len(self.bits) != len(self.qubits):
            raise ValidationError(
                f"{len(self.bits)} bits for {len(self.qubits)} qubits")
        if set(self.bits) - {"0", "1"}:
            raise ValidationError(f"not a bitstring: {self.bits!r}")
        _check_distinct(*self.qubits)


@dataclass(frozen=True)
class H:
    qubit: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.qubit,)


@dataclass(frozen=True)
class RotY:
    qubit: int
    theta: float

    def __post_init__(self):
        _check_finite("theta", self.theta)

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.qubit,)


@dataclass(frozen=True)
class Phase:
    qubit: int
    phi: float

    def __post_init__(self):
        _check_finite("phi", self.phi)

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.qubit,)


@dataclass(frozen=True)
class X:
    qubit: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.qubit,)


@dataclass(frozen=True)
class CnRotY:
    """RotY(theta) on target when all controls are |1>."""
    controls: tuple[int, ...]
    target: int
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "controls", tuple(sorted(self.controls)))
        _check_finite("theta", self.theta)
        _check_distinct(*self.controls, self.target)

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + (self.target,)


@dataclass(frozen=True)
class CnRotArbitrary:
    """Controlled RotY(theta) followed by Phase(phi) on the same target,
    used to write complex amplitudes: |0> -> cos(theta)|0> +
    e^(i phi) sin(theta)|1> on the controlled subspace."""
    controls: tuple[int, ...]
    target: int
    theta: float
    phi: float

    def __post_init__(self):
        object.__setattr__(self, "controls", tuple(sorted(self.controls)))
        _check_finite("theta", self.theta)
        _check_finite("phi", self.phi)
        _check_distinct(*self.controls, self.target)

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + (self.target,)


@dataclass(frozen=True)
class CnNot:
    controls: tuple[int, ...]
    target: int

    def __post_init__(self):
        object.__setattr__(self, "controls", tuple(sorted(self.controls)))
        if not self.controls:
            raise ValidationError("CnNot needs at least one control")
        _check_distinct(*self.controls, self.target)

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + (self.target,)


@dataclass(frozen=True)
class Toffoli:
    c1: int
    c2: int
    target: int

    def __post_init__(self):
        _check_distinct(self.c1, self.c2, self.target)

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.c1, self.c2, self.target)


@dataclass(frozen=True)
class Swap:
    a: int
    b: int

    def __post_init__(self):
        _check_distinct(self.a, self.b)

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.a, self.b)


@dataclass(frozen=True)
class CSwap:
    control: int
    a: int
    b: int

    def __post_init__(self):
        _check_distinct(self.control, self.a, self.b)

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.control, self.a, self.b)


@dataclass(frozen=True)
class SubspaceH3:
    """Three-point DFT on the span of |00>, |01>, |10> of a qubit pair,
    identity on |11> (the embedded qutrit Hadamard)."""
    qa: int
    qb: int

    def __post_init__(self):
        _check_distinct(self.qa, self.qb)

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.qa, self.qb)


Gate = Union[ClassicalXLayer, H, RotY, Phase, X, CnRotY, CnRotArbitrary,
             CnNot, Toffoli, Swap, CSwap, SubspaceH3]


# Defining matrices -------------------------------------------------------

H_MATRIX = np.array([[SQRT1_2, SQRT1_2], [SQRT1_2, -SQRT1_2]],
                    dtype=np.complex128)
X_MATRIX = np.array([[0, 1], [1, 0]], dtype=np.complex128)


def roty_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def phase_matrix(phi: float) -> np.ndarray:
    return np.array([[1, 0], [0, np.exp(1j * phi)]], dtype=np.complex128)


def rot_arbitrary_matrix(theta: float, phi: float) -> np.ndarray:
    return phase_matrix(phi) @ roty_matrix(theta)


SWAP_MATRIX = np.array([[1, 0, 0, 0],
                        [0, 0, 1, 0],
                        [0, 1, 0, 0],
                        [0, 0, 0, 1]], dtype=np.complex128)


def h3_matrix(dagger: bool = False) -> np.ndarray:
    """4x4 embedding of the 3-point DFT; |11> is left untouched."""
    w = np.exp((-2j if dagger else 2j) * np.pi / 3)
    f = np.array([[1, 1, 1], [1, w, w * w], [1, w * w, w]],
                 dtype=np.complex128) / math.sqrt(3)
    out = np.eye(4, dtype=np.complex128)
    out[:3, :3] = f
    return out
