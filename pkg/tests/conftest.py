"""Shared fixtures and random-circuit machinery for the suite."""

import math

import numpy as np
import pytest

from ffqram.circuits import Circuit
from ffqram.gates import (ClassicalXLayer, CnNot, CnRotArbitrary, CnRotY,
                          CSwap, H, Phase, RotY, SubspaceH3, Swap, Toffoli, X)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_gate(q, rng):
    """One random gate over q >= 3 qubits, any kind."""
    kind = rng.integers(0, 12)
    qubits = rng.permutation(q)
    a, b, c = int(qubits[0]), int(qubits[1]), int(qubits[2])
    theta = float(rng.uniform(-math.pi, math.pi))
    phi = float(rng.uniform(-math.pi, math.pi))
    n_ctl = int(rng.integers(1, q))
    controls = tuple(int(v) for v in qubits[:n_ctl])
    target = int(qubits[n_ctl])
    if kind == 0:
        width = int(rng.integers(1, q + 1))
        layer_qubits = tuple(int(v) for v in qubits[:width])
        bits = "".join(rng.choice(["0", "1"]) for _ in range(width))
        return ClassicalXLayer(bits, layer_qubits)
    if kind == 1:
        return H(a)
    if kind == 2:
        return RotY(a, theta)
    if kind == 3:
        return Phase(a, phi)
    if kind == 4:
        return X(a)
    if kind == 5:
        return CnRotY(controls, target, theta)
    if kind == 6:
        return CnRotArbitrary(controls, target, theta, phi)
    if kind == 7:
        return CnNot(controls, target)
    if kind == 8:
        return Toffoli(a, b, c)
    if kind == 9:
        return Swap(a, b)
    if kind == 10:
        return CSwap(a, b, c)
    return SubspaceH3(a, b)


def random_circuit(rng, min_qubits=3, max_qubits=5, max_gates=10):
    q = int(rng.integers(min_qubits, max_qubits + 1))
    gates = tuple(random_gate(q, rng)
                  for _ in range(int(rng.integers(1, max_gates + 1))))
    return Circuit(q, gates)
