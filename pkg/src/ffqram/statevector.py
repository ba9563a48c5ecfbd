"""Exact dense state-vector simulation.

Bit order convention: bitstring character k <-> qubit k <-> bit of weight
2**(q-1-k) in the amplitude index, so qubit 0 is the most significant bit
and written bitstrings read left to right.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import PostSelectionError, QubitBoundsError, ValidationError

NORM_ATOL = 1e-10
UNITARY_ATOL = 1e-10
ZERO_PROBABILITY = 1e-12


class StateVector:
    """Dense complex amplitude array over ``num_qubits`` qubits.

    Amplitudes always have length 2**num_qubits and unit 2-norm (checked on
    construction). A zero-qubit state (a single scalar amplitude) is allowed
    so post-selection can consume the last qubit.
    """

    __slots__ = ("num_qubits", "amplitudes")

    def __init__(self, num_qubits: int, amplitudes, *, _validate: bool = True):
        amps = np.asarray(amplitudes, dtype=np.complex128)
        if _validate:
            if num_qubits < 0:
                raise ValidationError("num_qubits must be >= 0")
            if amps.ndim != 1 or amps.shape[0] != (1 << num_qubits):
                raise ValidationError(
                    f"expected {1 << num_qubits} amplitudes for "
                    f"{num_qubits} qubits, got {amps.shape}")
            norm = np.linalg.norm(amps)
            if abs(norm - 1.0) > NORM_ATOL:
                raise ValidationError(f"state not normalized: |norm-1| = "
                                      f"{abs(norm - 1.0):.3e}")
        self.num_qubits = num_qubits
        self.amplitudes = amps

    @classmethod
    def zero_state(cls, num_qubits: int) -> "StateVector":
        amps = np.zeros(1 << num_qubits, dtype=np.complex128)
        amps[0] = 1.0
        return cls(num_qubits, amps, _validate=False)

    @classmethod
    def from_bits(cls, bits: str) -> "StateVector":
        """Computational basis state |bits>."""
        if bits and set(bits) - {"0", "1"}:
            raise ValidationError(f"not a bitstring: {bits!r}")
        amps = np.zeros(1 << len(bits), dtype=np.complex128)
        amps[int(bits, 2) if bits else 0] = 1.0
        return cls(len(bits), amps, _validate=False)

    @classmethod
    def uniform(cls, num_qubits: int) -> "StateVector":
        """The H^(x)n bus state |+...+>."""
        dim = 1 << num_qubits
        return cls(num_qubits,
                   np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128),
                   _validate=False)

    def copy(self) -> "StateVector":
        return StateVector(self.num_qubits, self.amplitudes.copy(),
                           _validate=False)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def __repr__(self) -> str:
        return f"StateVector(num_qubits={self.num_qubits})"


def bit_position(num_qubits: int, qubit: int) -> int:
    """Bit weight position of a qubit index (MSB-first convention)."""
    return num_qubits - 1 - qubit


def qubit_mask(num_qubits: int, qubits: Iterable[int]) -> int:
    mask = 0
    for k in qubits:
        mask |= 1 << bit_position(num_qubits, k)
    return mask


def check_qubit(state: StateVector, qubit: int) -> None:
    if not 0 <= qubit < state.num_qubits:
        raise QubitBoundsError(
            f"qubit {qubit} out of range for {state.num_qubits}-qubit state")


def check_unitary(u: np.ndarray, dim: int = 2) -> np.ndarray:
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (dim, dim):
        raise ValidationError(f"expected {dim}x{dim} matrix, got {u.shape}")
    if np.max(np.abs(u.conj().T @ u - np.eye(dim))) > UNITARY_ATOL:
        raise ValidationError("matrix is not unitary within 1e-10")
    return u


def apply_single_qubit(state: StateVector, qubit: int, u) -> StateVector:
    """Apply a 2x2 unitary to one qubit."""
    check_qubit(state, qubit)
    u = check_unitary(u)
    amps = state.amplitudes.copy()
    kernels.apply_1q(amps, bit_position(state.num_qubits, qubit),
                     u[0, 0], u[0, 1], u[1, 0], u[1, 1], 0, 0)
    return StateVector(state.num_qubits, amps, _validate=False)


def apply_controlled(state: StateVector, controls: Iterable[int],
                     qubit: int, u) -> StateVector:
    """Apply a 2x2 unitary to the target on the all-controls-|1> subspace.

    An empty control set is identical to apply_single_qubit.
    """
    controls = set(controls)
    check_qubit(state, qubit)
    for c in controls:
        check_qubit(state, c)
    if qubit in controls:
        raise ValidationError(f"target {qubit} overlaps controls")
    u = check_unitary(u)
    cmask = qubit_mask(state.num_qubits, controls)
    amps = state.amplitudes.copy()
    kernels.apply_1q(amps, bit_position(state.num_qubits, qubit),
                     u[0, 0], u[0, 1], u[1, 0], u[1, 1], cmask, cmask)
    return StateVector(state.num_qubits, amps, _validate=False)


def apply_classical_x_layer(state: StateVector, bits: str,
                            qubits: Sequence[int]) -> StateVector:
    """Flip qubit k iff its classical control bit is 0.

    Equivalent to the basis relabeling |j> -> |j xor ~bits>, so |bits>
    maps to |1...1>. Applying the same layer twice is the identity.
    """
    if len(bits) != len(qubits):
        raise ValidationError(
            f"{len(bits)} bits for {len(qubits)} qubits")
    if set(bits) - {"0", "1"}:
        raise ValidationError(f"not a bitstring: {bits!r}")
    if len(set(qubits)) != len(qubits):
        raise ValidationError("duplicate qubits in layer")
    mask = 0
    for b, k in zip(bits, qubits):
        check_qubit(state, k)
        if b == "0":
            mask |= 1 << bit_position(state.num_qubits, k)
    amps = state.amplitudes.copy()
    kernels.apply_xor_mask(amps, mask)
    return StateVector(state.num_qubits, amps, _validate=False)


def probability_of(state: StateVector, qubit: int, outcome: int) -> float:
    """Total probability of measuring `outcome` on one qubit."""
    check_qubit(state, qubit)
    if outcome not in (0, 1):
        raise ValidationError(f"outcome must be 0 or 1, got {outcome}")
    tbit = 1 << bit_position(state.num_qubits, qubit)
    return kernels.prob_match(state.amplitudes, tbit, tbit if outcome else 0)


def probability_of_bits(state: StateVector, qubits: Sequence[int],
                        outcomes: Sequence[int]) -> float:
    """Joint probability that each listed qubit reads its given bit."""
    mask = 0
    val = 0
    for k, b in zip(qubits, outcomes):
        check_qubit(state, k)
        bit = 1 << bit_position(state.num_qubits, k)
        mask |= bit
        if b:
            val |= bit
    return kernels.prob_match(state.amplitudes, mask, val)


def post_select(state: StateVector, qubit: int,
                outcome: int) -> tuple[StateVector, float]:
    """Project onto an outcome, renormalize, and drop the measured qubit.

    Returns (reduced state, selection probability). Raises
    PostSelectionError when the outcome has probability <= 1e-12.
    """
    check_qubit(state, qubit)
    if outcome not in (0, 1):
        raise ValidationError(f"outcome must be 0 or 1, got {outcome}")
    q = state.num_qubits
    t = state.amplitudes.reshape((2,) * q)
    kept = np.moveaxis(t, qubit, 0)[outcome].ravel().copy()
    prob = float(np.real(np.vdot(kept, kept)))
    if prob <= ZERO_PROBABILITY:
        raise PostSelectionError(
            f"outcome {outcome} on qubit {qubit} has probability "
            f"{prob:.3e}; post-selection impossible")
    kept /= np.sqrt(prob)
    return StateVector(q - 1, kept, _validate=False), prob


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>; conjugate-symmetric under exchange."""
    if a.num_qubits != b.num_qubits:
        raise ValidationError(
            f"dimension mismatch: {a.num_qubits} vs {b.num_qubits} qubits")
    return kernels.inner(a.amplitudes, b.amplitudes)


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2."""
    return abs(inner_product(a, b)) ** 2


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """|a> (x) |b>, with a's qubits first."""
    return StateVector(a.num_qubits + b.num_qubits,
                       np.kron(a.amplitudes, b.amplitudes), _validate=False)
