"""Control-conditioned branch evolution ("forking") circuits and the
modified swap tests built on them.

A prepared n-qubit state is entangled with a control so each control value
routes it through a different unitary; measuring the control after a second
swap layer and an (inverse) transform reveals signed real or imaginary
parts of inner products, not just magnitudes. One preparation serves every
branch, which is the point of the construction.

Register layouts: two branches use [control, block1, block2]; three
branches use [control pair, block1, block2, block3] with the qutrit
control embedded in basis states |00>, |01>, |10> (|11> stays dark).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from . import circuits as circ
from . import kernels
from . import statevector as sv
from .circuits import Circuit
from .errors import ValidationError
from .gates import CSwap, H, Phase, RotY, SubspaceH3, Swap, X, h3_matrix
from .statevector import StateVector, bit_position

BranchUnitary = Union[Circuit, np.ndarray]


@dataclass
class QueryCounter:
    """Counts how many prepared copies of the data state a procedure
    consumes (the bookkeeping behind the query-reduction claim)."""

    preparations: int = 0

    def record(self, count: int = 1) -> None:
        self.preparations += count


@dataclass(frozen=True)
class ForkSpec:
    """Data state, branch unitaries, and the (arbitrary) ancilla state."""

    phi: StateVector
    branch_unitaries: tuple[BranchUnitary, ...]
    ancilla: StateVector | None = None

    def __post_init__(self):
        object.__setattr__(self, "branch_unitaries",
                           tuple(self.branch_unitaries))
        if self.d not in (2, 3):
            raise ValidationError(f"branch count must be 2 or 3, "
                                  f"got {self.d}")
        n = self.phi.num_qubits
        for u in self.branch_unitaries:
            _check_branch(u, n)
        if self.ancilla is not None and self.ancilla.num_qubits != n:
            raise ValidationError(
                f"ancilla has {self.ancilla.num_qubits} qubits, data state "
                f"has {n}")

    @property
    def d(self) -> int:
        return len(self.branch_unitaries)


def _check_branch(u: BranchUnitary, n: int) -> None:
    if isinstance(u, Circuit):
        if u.num_qubits != n:
            raise ValidationError(
                f"branch circuit is {u.num_qubits} qubits wide, data state "
                f"is {n}")
    else:
        u = np.asarray(u)
        if u.shape != (1 << n, 1 << n):
            raise ValidationError(
                f"branch matrix shape {u.shape} does not fit {n} qubits")


def _apply_branch(amps: np.ndarray, num_qubits: int, u: BranchUnitary,
                  offset: int, block_width: int,
                  conditions: tuple[tuple[int, int], ...]) -> None:
    if isinstance(u, Circuit):
        for g in u.gates:
            circ.apply_gate(amps, num_qubits, g, offset, conditions)
        return
    # Matrix escape hatch (verification use): contract the full block
    # unitary against the control-selected subcube in place.
    u = np.asarray(u, dtype=np.complex128)
    sv.check_unitary(u, 1 << block_width)
    t = amps.reshape((2,) * num_qubits)
    ctrl_axes = [qubit for qubit, _ in conditions]
    block_axes = list(range(offset, offset + block_width))
    moved = np.moveaxis(t, ctrl_axes + block_axes,
                        range(len(ctrl_axes) + block_width))
    sub = moved[tuple(bit for _, bit in conditions)]
    u_tensor = u.reshape((2,) * (2 * block_width))
    sub[...] = np.tensordot(u_tensor, sub,
                            axes=(list(range(block_width, 2 * block_width)),
                                  list(range(block_width))))


def _ancilla_or_zero(ancilla: StateVector | None, n: int) -> StateVector:
    if ancilla is None:
        return StateVector.zero_state(n)
    if ancilla.num_qubits != n:
        raise ValidationError(
            f"ancilla has {ancilla.num_qubits} qubits, expected {n}")
    return ancilla


def build_fork_state(spec: ForkSpec,
                     counter: QueryCounter | None = None) -> StateVector:
    """(|0> U1|phi> |a> + |1> |a> U2|phi>) / sqrt(2), built from a Hadamard
    on the control, a controlled-swap layer, and branch-conditioned
    unitaries."""
    if spec.d != 2:
        raise ValidationError("build_fork_state takes exactly 2 branches")
    n = spec.phi.num_qubits
    anc = _ancilla_or_zero(spec.ancilla, n)
    state = sv.tensor(sv.tensor(StateVector.zero_state(1), spec.phi), anc)
    q = state.num_qubits
    amps = state.amplitudes
    circ.apply_gate(amps, q, H(0))
    for k in range(n):
        circ.apply_gate(amps, q, CSwap(0, 1 + k, 1 + n + k))
    _apply_branch(amps, q, spec.branch_unitaries[0], 1, n, ((0, 0),))
    _apply_branch(amps, q, spec.branch_unitaries[1], 1 + n, n, ((0, 1),))
    if counter is not None:
        counter.record(1)
    return StateVector(q, amps, _validate=False)


def _merged_control_state(phi: StateVector, u1: BranchUnitary,
                          u2: BranchUnitary, ancilla: StateVector | None,
                          counter: QueryCounter | None) -> StateVector:
    """Fork state after the second controlled-swap layer: control |0>
    carries U1|phi>, control |1> carries U2|phi>, ancilla factored out."""
    state = build_fork_state(ForkSpec(phi, (u1, u2), ancilla), counter)
    n = phi.num_qubits
    amps = state.amplitudes
    for k in range(n):
        circ.apply_gate(amps, state.num_qubits, CSwap(0, 1 + k, 1 + n + k))
    return state


class SwapTestResult(NamedTuple):
    p0: float
    estimate: float


def swap_test_real(phi: StateVector, u1: BranchUnitary, u2: BranchUnitary,
                   ancilla: StateVector | None = None,
                   counter: QueryCounter | None = None) -> SwapTestResult:
    """P(control=0) = [1 + Re<U1 phi|U2 phi>] / 2; the estimate 2 p0 - 1
    is the signed real part. Independent of the ancilla state."""
    state = _merged_control_state(phi, u1, u2, ancilla, counter)
    circ.apply_gate(state.amplitudes, state.num_qubits, H(0))
    p0 = sv.probability_of(state, 0, 0)
    return SwapTestResult(p0, 2.0 * p0 - 1.0)


def swap_test_imag(phi: StateVector, u1: BranchUnitary, u2: BranchUnitary,
                   ancilla: StateVector | None = None,
                   counter: QueryCounter | None = None) -> SwapTestResult:
    """Same circuit with e^(-i pi/2) on the control's |1> before the final
    Hadamard, giving P(0) = [1 + Im<U1 phi|U2 phi>] / 2."""
    state = _merged_control_state(phi, u1, u2, ancilla, counter)
    amps = state.amplitudes
    circ.apply_gate(amps, state.num_qubits, Phase(0, -math.pi / 2))
    circ.apply_gate(amps, state.num_qubits, H(0))
    p0 = sv.probability_of(state, 0, 0)
    return SwapTestResult(p0, 2.0 * p0 - 1.0)


def conventional_swap_test(phi1: StateVector, phi2: StateVector,
                           counter: QueryCounter | None = None) -> float:
    """Reference two-state swap test: P(0) = [1 + |<phi1|phi2>|^2] / 2.

    Needs both states prepared, so it costs two preparations where the
    fork-based test costs one; it also loses the sign.
    """
    if phi1.num_qubits != phi2.num_qubits:
        raise ValidationError("states must have equal width")
    n = phi1.num_qubits
    state = sv.tensor(sv.tensor(StateVector.zero_state(1), phi1), phi2)
    q = state.num_qubits
    amps = state.amplitudes
    circ.apply_gate(amps, q, H(0))
    for k in range(n):
        circ.apply_gate(amps, q, CSwap(0, 1 + k, 1 + n + k))
    circ.apply_gate(amps, q, H(0))
    if counter is not None:
        counter.record(2)
    return sv.probability_of(StateVector(q, amps, _validate=False), 0, 0)


class ShotEstimate(NamedTuple):
    estimate: float
    stderr: float


def sample_control(p0: float, shots: int, seed: int | None = None
                   ) -> ShotEstimate:
    """Finite-shot binomial estimate of a control-measurement probability."""
    if shots < 1:
        raise ValidationError("shots must be >= 1")
    if not -1e-12 <= p0 <= 1.0 + 1e-12:
        raise ValidationError(f"p0 must be a probability, got {p0}")
    p0 = min(max(p0, 0.0), 1.0)
    rng = np.random.default_rng(seed)
    hits = int(rng.binomial(shots, p0))
    est = hits / shots
    return ShotEstimate(est, math.sqrt(est * (1.0 - est) / shots))


# Three-branch forking ---------------------------------------------------------

# Control-pair values addressing each branch: |00>, |01>, |10>.
_QUTRIT_VALUES = (((0, 0), (1, 0)), ((0, 0), (1, 1)), ((0, 1), (1, 0)))


def _qutrit_swap_layer(amps: np.ndarray, q: int, n: int) -> None:
    for k in range(n):
        circ.apply_gate(amps, q, Swap(2 + k, 2 + n + k),
                        conditions=_QUTRIT_VALUES[1])
    for k in range(n):
        circ.apply_gate(amps, q, Swap(2 + k, 2 + 2 * n + k),
                        conditions=_QUTRIT_VALUES[2])


def qutrit_fork(phi: StateVector, u1: BranchUnitary, u2: BranchUnitary,
                u3: BranchUnitary, ancilla: StateVector | None = None,
                counter: QueryCounter | None = None) -> StateVector:
    """(|0>|phi1>|a>|a> + |1>|a>|phi2>|a> + |2>|a>|a>|phi3>) / sqrt(3) with
    the three-level control embedded in two qubits; the |11> control
    component stays exactly dark."""
    n = phi.num_qubits
    for u in (u1, u2, u3):
        _check_branch(u, n)
    anc = _ancilla_or_zero(ancilla, n)
    state = sv.tensor(sv.tensor(sv.tensor(
        StateVector.zero_state(2), phi), anc), anc)
    q = state.num_qubits
    amps = state.amplitudes
    circ.apply_gate(amps, q, SubspaceH3(0, 1))
    _qutrit_swap_layer(amps, q, n)
    for i, u in enumerate((u1, u2, u3)):
        _apply_branch(amps, q, u, 2 + i * n, n, _QUTRIT_VALUES[i])
    if counter is not None:
        counter.record(1)
    return StateVector(q, amps, _validate=False)


def pairwise_sum(phi: StateVector, branch_unitaries,
                 ancilla: StateVector | None = None,
                 counter: QueryCounter | None = None) -> float:
    """Sum over all branch pairs of Re<phi_i|phi_j>, read off one control
    measurement: P(control=0) = sum / d^2 after the second swap layer and
    the inverse transform on the control."""
    branch_unitaries = tuple(branch_unitaries)
    d = len(branch_unitaries)
    n = phi.num_qubits
    if d == 2:
        state = _merged_control_state(phi, branch_unitaries[0],
                                      branch_unitaries[1], ancilla, counter)
        # The 2-point inverse transform is the Hadamard itself.
        circ.apply_gate(state.amplitudes, state.num_qubits, H(0))
        return 4.0 * sv.probability_of(state, 0, 0)
    if d == 3:
        state = qutrit_fork(phi, *branch_unitaries, ancilla=ancilla,
                            counter=counter)
        q = state.num_qubits
        amps = state.amplitudes
        _qutrit_swap_layer(amps, q, n)
        inv = np.ascontiguousarray(h3_matrix(dagger=True).reshape(-1))
        kernels.apply_2q(amps, bit_position(q, 0), bit_position(q, 1),
                         inv, 0, 0)
        p0 = sv.probability_of_bits(StateVector(q, amps, _validate=False),
                                    (0, 1), (0, 0))
        return 9.0 * p0
    raise ValidationError(f"pairwise_sum supports 2 or 3 branches, got {d}")


# Named branch presets ----------------------------------------------------------

def preset_fragment(name: str, num_qubits: int) -> Circuit:
    """Branch-unitary presets; parameterized forms are Phase(x) and
    RotY(x) with x in radians. Single-qubit presets act on block qubit 0;
    minusI applies a global -1 to the whole block."""
    if num_qubits < 1:
        raise ValidationError("preset fragments need at least one qubit")
    stripped = name.strip()
    base = stripped.split("(", 1)[0]
    arg = None
    if "(" in stripped:
        if not stripped.endswith(")"):
            raise ValidationError(f"malformed preset {name!r}")
        try:
            arg = float(stripped[stripped.index("(") + 1:-1])
        except ValueError:
            raise ValidationError(f"bad preset argument in {name!r}") from None
    gates = {
        "I": (),
        "X": (X(0),),
        "Y": (RotY(0, math.pi / 2), Phase(0, math.pi / 2), X(0),
              Phase(0, math.pi / 2), X(0)),
        "Z": (Phase(0, math.pi),),
        "H": (H(0),),
        "S": (Phase(0, math.pi / 2),),
        "Sdg": (Phase(0, -math.pi / 2),),
        "minusI": (RotY(0, math.pi),),
        "Phase": (Phase(0, arg),) if arg is not None else None,
        "RotY": (RotY(0, arg),) if arg is not None else None,
    }.get(base, None)
    if gates is None:
        raise ValidationError(f"unknown branch preset {name!r}")
    return Circuit(num_qubits, gates)


PRESET_NAMES = ("I", "X", "Y", "Z", "H", "S", "Sdg", "minusI",
                "Phase(phi)", "RotY(theta)")
