"""Circuit container, dense simulation, depth scheduling, and the
controlled-rotation / multi-controlled-NOT lowering passes."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ResourceError, ValidationError
from .gates import (H_MATRIX, SWAP_MATRIX, X_MATRIX, ClassicalXLayer, CnNot,
                    CnRotArbitrary, CnRotY, CSwap, Gate, H, Phase, RotY,
                    SubspaceH3, Swap, Toffoli, X, h3_matrix, phase_matrix,
                    rot_arbitrary_matrix, roty_matrix)
from .statevector import StateVector, bit_position


@dataclass(frozen=True)
class Circuit:
    """Ordered gate sequence over a fixed register.

    ``ancilla_qubits`` documents which qubits are scratch space prepared in
    |0>. Circuits are immutable; passes return new circuits.
    """

    num_qubits: int
    gates: tuple[Gate, ...]
    ancilla_qubits: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "ancilla_qubits",
                           frozenset(self.ancilla_qubits))
        if self.num_qubits < 1:
            raise ValidationError("circuit needs at least one qubit")
        for g in self.gates:
            for k in g.qubits:
                if not 0 <= k < self.num_qubits:
                    raise ValidationError(
                        f"gate {g} touches qubit {k} outside register of "
                        f"size {self.num_qubits}")
        for k in self.ancilla_qubits:
            if not 0 <= k < self.num_qubits:
                raise ValidationError(f"ancilla {k} out of range")

    def counts_by_kind(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for g in self.gates:
            name = type(g).__name__
            out[name] = out.get(name, 0) + 1
        return out


# Gate application ---------------------------------------------------------

Condition = tuple[int, int]  # (qubit, required bit)


def _mask_val(num_qubits: int, conditions: Sequence[Condition]) -> tuple[int, int]:
    mask = 0
    val = 0
    for qubit, bit in conditions:
        b = 1 << bit_position(num_qubits, qubit)
        mask |= b
        if bit:
            val |= b
    return mask, val


def apply_gate(amps: np.ndarray, num_qubits: int, gate: Gate,
               offset: int = 0,
               conditions: Sequence[Condition] = ()) -> None:
    """Apply one gate in place to a flat amplitude array.

    ``offset`` shifts every qubit index in the gate (used to embed circuit
    fragments into a larger register); ``conditions`` adds extra control
    requirements on global qubits, each a (qubit, required_bit) pair.
    """

    def pos(local: int) -> int:
        return bit_position(num_qubits, offset + local)

    def one_q(target: int, u: np.ndarray, controls: Sequence[int] = ()) -> None:
        conds = list(conditions) + [(offset + c, 1) for c in controls]
        mask, val = _mask_val(num_qubits, conds)
        kernels.apply_1q(amps, pos(target), u[0, 0], u[0, 1], u[1, 0],
                         u[1, 1], mask, val)

    def two_q(qa: int, qb: int, u4: np.ndarray,
              controls: Sequence[int] = ()) -> None:
        conds = list(conditions) + [(offset + c, 1) for c in controls]
        mask, val = _mask_val(num_qubits, conds)
        kernels.apply_2q(amps, pos(qa), pos(qb),
                         np.ascontiguousarray(u4.reshape(-1)), mask, val)

    if isinstance(gate, ClassicalXLayer):
        if conditions:
            # Controlled embedding: the pure relabeling shortcut no longer
            # applies, so flip each zero-bit qubit as a controlled X.
            for b, k in zip(gate.bits, gate.qubits):
                if b == "0":
                    one_q(k, X_MATRIX)
            return
        mask = 0
        for b, k in zip(gate.bits, gate.qubits):
            if b == "0":
                mask |= 1 << pos(k)
        kernels.apply_xor_mask(amps, mask)
    elif isinstance(gate, H):
        one_q(gate.qubit, H_MATRIX)
    elif isinstance(gate, RotY):
        one_q(gate.qubit, roty_matrix(gate.theta))
    elif isinstance(gate, Phase):
        one_q(gate.qubit, phase_matrix(gate.phi))
    elif isinstance(gate, X):
        one_q(gate.qubit, X_MATRIX)
    elif isinstance(gate, CnRotY):
        one_q(gate.target, roty_matrix(gate.theta), gate.controls)
    elif isinstance(gate, CnRotArbitrary):
        one_q(gate.target, rot_arbitrary_matrix(gate.theta, gate.phi),
              gate.controls)
    elif isinstance(gate, CnNot):
        one_q(gate.target, X_MATRIX, gate.controls)
    elif isinstance(gate, Toffoli):
        one_q(gate.target, X_MATRIX, (gate.c1, gate.c2))
    elif isinstance(gate, Swap):
        two_q(gate.a, gate.b, SWAP_MATRIX)
    elif isinstance(gate, CSwap):
        two_q(gate.a, gate.b, SWAP_MATRIX, (gate.control,))
    elif isinstance(gate, SubspaceH3):
        two_q(gate.qa, gate.qb, h3_matrix())
    else:
        raise ValidationError(f"unknown gate kind: {type(gate).__name__}")


def simulate(circuit: Circuit, initial: StateVector | None = None) -> StateVector:
    """Run the circuit on |0...0> (or a caller-supplied initial state)."""
    if initial is None:
        initial = StateVector.zero_state(circuit.num_qubits)
    elif initial.num_qubits != circuit.num_qubits:
        raise ValidationError(
            f"initial state has {initial.num_qubits} qubits, circuit has "
            f"{circuit.num_qubits}")
    amps = initial.amplitudes.copy()
    for gate in circuit.gates:
        apply_gate(amps, circuit.num_qubits, gate)
    return StateVector(circuit.num_qubits, amps, _validate=False)


# Scheduling ----------------------------------------------------------------

@dataclass(frozen=True)
class Schedule:
    """Greedy earliest-possible layering; gates within a layer act on
    pairwise-disjoint qubits."""

    layers: tuple[tuple[Gate, ...], ...]

    @property
    def depth(self) -> int:
        return len(self.layers)


def schedule(circuit: Circuit) -> Schedule:
    last_layer: dict[int, int] = {}
    layers: list[list[Gate]] = []
    for gate in circuit.gates:
        at = max((last_layer.get(k, -1) for k in gate.qubits), default=-1) + 1
        if at == len(layers):
            layers.append([])
        layers[at].append(gate)
        for k in gate.qubits:
            last_layer[k] = at
    return Schedule(tuple(tuple(layer) for layer in layers))


# Lowering passes -----------------------------------------------------------

def decompose_cn_roty(gate: CnRotY) -> tuple[Gate, ...]:
    """Rewrite a controlled y-rotation as two rotations and two CnNots.

    Execution order RotY(+theta/2), CnNot, RotY(-theta/2), CnNot: on the
    control-satisfied subspace X RotY(-t/2) X RotY(t/2) = RotY(t), and the
    rotations cancel elsewhere.
    """
    return (RotY(gate.target, gate.theta / 2),
            CnNot(gate.controls, gate.target),
            RotY(gate.target, -gate.theta / 2),
            CnNot(gate.controls, gate.target))


def decompose_cn_not(controls: Sequence[int], target: int,
                     ancilla_pool: Sequence[int]) -> tuple[Gate, ...]:
    """Lower an n-control NOT to Toffoli gates over a balanced AND-tree.

    For n >= 3 this uses exactly 2n-3 Toffolis and n-2 ancillae from the
    pool (all returned to |0>), and schedules to depth 2*ceil(log2 n) - 1.
    n = 1 and n = 2 bypass the ladder.
    """
    controls = list(controls)
    n = len(controls)
    if n == 0:
        raise ValidationError("need at least one control")
    if n == 1:
        return (CnNot((controls[0],), target),)
    if n == 2:
        return (Toffoli(controls[0], controls[1], target),)
    need = n - 2
    if len(ancilla_pool) < need:
        raise ResourceError(
            f"C^{n}NOT needs {need} ancillae, pool has {len(ancilla_pool)}")
    pool = iter(ancilla_pool)
    levels: list[list[Toffoli]] = []
    wires = controls
    while len(wires) > 2:
        level: list[Toffoli] = []
        nxt: list[int] = []
        for i in range(0, len(wires) - 1, 2):
            anc = next(pool)
            level.append(Toffoli(wires[i], wires[i + 1], anc))
            nxt.append(anc)
        if len(wires) % 2:
            nxt.append(wires[-1])
        levels.append(level)
        wires = nxt
    root = Toffoli(wires[0], wires[1], target)
    compute = [g for level in levels for g in level]
    uncompute = [g for level in reversed(levels) for g in reversed(level)]
    return tuple(compute + [root] + uncompute)


def lower_to_toffoli(circuit: Circuit) -> Circuit:
    """Lower every CnRotY and CnNot to {RotY, Toffoli, CnNot(1 control)}.

    Ancillae are appended after the existing register and shared between
    blocks (each ladder uncomputes them back to |0>). Gate kinds outside
    the two passes are left untouched.
    """
    max_controls = 0
    for g in circuit.gates:
        if isinstance(g, (CnRotY, CnNot)):
            max_controls = max(max_controls, len(g.controls))
    need = max(max_controls - 2, 0)
    pool = list(range(circuit.num_qubits, circuit.num_qubits + need))

    out: list[Gate] = []
    for g in circuit.gates:
        if isinstance(g, CnRotY):
            for part in decompose_cn_roty(g):
                if isinstance(part, CnNot):
                    out.extend(decompose_cn_not(part.controls, part.target,
                                                pool))
                else:
                    out.append(part)
        elif isinstance(g, CnNot):
            out.extend(decompose_cn_not(g.controls, g.target, pool))
        else:
            out.append(g)
    return Circuit(circuit.num_qubits + need, tuple(out),
                   circuit.ancilla_qubits | frozenset(pool))


def cn_not_depth(n: int) -> int:
    """Scheduled depth of the lowered C^nNOT block (n=1 counts as 1)."""
    if n <= 2:
        return 1
    return 2 * math.ceil(math.log2(n)) - 1
