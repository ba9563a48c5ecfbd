"""Load a real training matrix into amplitudes of a two-register state.

Row i, column k of the matrix becomes the amplitude of |k>|i> (feature
index first, sample index second, register qubit last), normalized over
the whole matrix. Built as one flip-register-flop block per entry over a
Hadamard-prepared bus, then post-selected on the register reading 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import statevector as sv
from .circuits import Circuit, simulate
from .errors import DegenerateDatasetError, ValidationError
from .gates import H
from .statevector import StateVector
from .synthesis import ANGLE_MODE, DataRecord, Dataset, SynthesisOptions, synthesize


@dataclass(frozen=True)
class TrainingSet:
    """M training vectors of N real features, both padded up to powers of
    two (zero rows/columns add rotation-free blocks)."""

    x: np.ndarray
    orig_shape: tuple[int, int]

    @classmethod
    def from_matrix(cls, rows) -> "TrainingSet":
        x = np.asarray(rows, dtype=float)
        if x.ndim == 1:
            x = x.reshape(1, -1)
        if x.ndim != 2 or x.size == 0:
            raise ValidationError("training data must be a non-empty matrix")
        if not np.all(np.isfinite(x)):
            raise ValidationError("training data must be finite")
        if not np.any(x):
            raise DegenerateDatasetError("training matrix is all zeros")
        orig = (x.shape[0], x.shape[1])
        padded = np.zeros((_next_pow2(x.shape[0]), _next_pow2(x.shape[1])))
        padded[:x.shape[0], :x.shape[1]] = x
        padded.setflags(write=False)
        return cls(padded, orig)

    @property
    def M(self) -> int:
        return self.x.shape[0]

    @property
    def N(self) -> int:
        return self.x.shape[1]


def _next_pow2(v: int) -> int:
    return 1 << max(v - 1, 0).bit_length()


def _bus_width(t: TrainingSet) -> tuple[int, int]:
    return int(math.log2(t.N)), int(math.log2(t.M))


def _bits(value: int, width: int) -> str:
    return format(value, f"0{width}b") if width else ""


def training_dataset(t: TrainingSet) -> Dataset:
    """One angle record per matrix entry, addressed |k>|i>, sample-major."""
    k_bits, i_bits = _bus_width(t)
    scale = float(np.max(np.abs(t.x)))
    records = []
    for i in range(t.M):
        for k in range(t.N):
            bits = _bits(k, k_bits) + _bits(i, i_bits)
            records.append(DataRecord(bits, math.asin(t.x[i, k] / scale)))
    return Dataset(tuple(records), k_bits + i_bits, ANGLE_MODE)


def synthesize_chi_circuit(t: TrainingSet,
                           opts: SynthesisOptions = SynthesisOptions()
                           ) -> Circuit:
    """Hadamards on the bus, then M*N write blocks (merged flips by
    default, so the mutually cancelling inter-block gates never appear)."""
    ds = training_dataset(t)
    body = synthesize(ds, opts)
    bus = ds.n
    gates = tuple(H(k) for k in range(bus)) + body.gates
    return Circuit(body.num_qubits, gates, body.ancilla_qubits)


def prepare_chi(t: TrainingSet) -> tuple[StateVector, float]:
    """Simulate the loader and post-select the register on 1.

    Returns the normalized training state (amplitude of |k>|i>
    proportional to x[i, k], signs preserved) and the selection
    probability sum(|x/c|^2) / (M N).
    """
    circuit = synthesize_chi_circuit(t)
    ds_width = _bus_width(t)
    register = ds_width[0] + ds_width[1]
    final = simulate(circuit)
    chi, p_success = sv.post_select(final, register, 1)
    return chi, p_success


def target_chi(t: TrainingSet) -> StateVector:
    """The normalized matrix flattened in |k>|i> order (direct formula)."""
    amps = np.zeros(t.N * t.M, dtype=np.complex128)
    for i in range(t.M):
        for k in range(t.N):
            amps[k * t.M + i] = t.x[i, k]
    amps /= np.linalg.norm(amps)
    return StateVector(int(math.log2(t.N * t.M)) if t.N * t.M > 1 else 0,
                       amps, _validate=False)
