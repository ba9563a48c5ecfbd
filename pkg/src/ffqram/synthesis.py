"""Compile classical datasets into flip-register-flop write circuits and
simulate/analyze the states they produce.

Register layout is fixed: bus qubits 0..n-1 (data bits first, then label
bits when labels are used), the register qubit at index n, ancillae after
that. A write block for record l is: X layer addressing d(l), a controlled
rotation of the register, X layer again. Merging fuses each adjacent
flop/flip pair into one layer that flips qubit j iff d_j(l) != d_j(l+1),
leaving M+1 full-width layers.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import circuits as circ
from . import statevector as sv
from .circuits import Circuit, lower_to_toffoli
from .errors import (DegenerateDatasetError, UnsupportedConfigurationError,
                     ValidationError)
from .gates import (ClassicalXLayer, CnNot, CnRotArbitrary, CnRotY, Gate,
                    Phase, RotY, X)
from .statevector import StateVector

AMPLITUDE_MODE = "amplitude"
ANGLE_MODE = "angle"
BINARY_MODE = "binary"
_MODES = (AMPLITUDE_MODE, ANGLE_MODE, BINARY_MODE)


@dataclass(frozen=True)
class DataRecord:
    """One classical entry: an n-bit address and its attribute.

    The attribute is read per dataset mode: a rotation angle in radians
    (angle), a real/complex amplitude (amplitude), or a target bit value,
    possibly an r-bit string (binary).
    """

    bits: str
    value: complex | float | int | str
    label: int | None = None

    def __post_init__(self):
        if set(self.bits) - {"0", "1"}:
            raise ValidationError(f"not a bitstring: {self.bits!r}")
        if self.label is not None and self.label < 0:
            raise ValidationError("label must be non-negative")


@dataclass(frozen=True)
class Dataset:
    records: tuple[DataRecord, ...]
    n: int
    mode: str

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        if self.mode not in _MODES:
            raise ValidationError(f"unknown mode {self.mode!r}")
        if not self.records:
            raise ValidationError("dataset is empty")
        for r in self.records:
            if len(r.bits) != self.n:
                raise ValidationError(
                    f"record {r.bits!r} has {len(r.bits)} bits, dataset "
                    f"declares n={self.n}")
            self._check_value(r)
        labeled = [r for r in self.records if r.label is not None]
        if labeled and len(labeled) != len(self.records):
            raise ValidationError("either all records carry labels or none")
        if labeled:
            labels = [r.label for r in labeled]
            if len(set(labels)) != len(labels):
                raise ValidationError("labels must be unique")

    def _check_value(self, r: DataRecord) -> None:
        if self.mode == BINARY_MODE:
            if isinstance(r.value, str):
                if set(r.value) - {"0", "1"} or not r.value:
                    raise ValidationError(
                        f"binary value must be bits, got {r.value!r}")
            elif r.value not in (0, 1):
                raise ValidationError(
                    f"binary value must be 0 or 1, got {r.value!r}")
        elif self.mode == ANGLE_MODE:
            try:
                theta = complex(r.value)
            except (TypeError, ValueError):
                raise ValidationError(f"angle must be a number, "
                                      f"got {r.value!r}") from None
            if theta.imag != 0 or not math.isfinite(theta.real):
                raise ValidationError(f"angle must be a finite real, "
                                      f"got {r.value!r}")
        else:
            try:
                b = complex(r.value)
            except (TypeError, ValueError):
                raise ValidationError(f"amplitude must be a number, "
                                      f"got {r.value!r}") from None
            if not (math.isfinite(b.real) and math.isfinite(b.imag)):
                raise ValidationError(f"amplitude must be finite, "
                                      f"got {r.value!r}")

    @property
    def M(self) -> int:
        return len(self.records)

    def has_labels(self) -> bool:
        return self.records[0].label is not None

    def duplicate_addresses(self) -> list[str]:
        seen: set[str] = set()
        dups: list[str] = []
        for r in self.records:
            if r.bits in seen and r.bits not in dups:
                dups.append(r.bits)
            seen.add(r.bits)
        return dups


def _label_bits(ds: Dataset) -> int:
    return math.ceil(math.log2(ds.M)) if ds.M > 1 else 0


def address_bits(ds: Dataset) -> list[str]:
    """Synthesized bitstrings: data bits, with the label appended in
    ceil(log2 M) bits when labels are present."""
    if not ds.has_labels():
        return [r.bits for r in ds.records]
    m = _label_bits(ds)
    for r in ds.records:
        if r.label >= (1 << m):
            raise ValidationError(
                f"label {r.label} does not fit the {m} label bits implied "
                f"by M={ds.M}")
    return [r.bits + format(r.label, f"0{m}b") if m else r.bits
            for r in ds.records]


def address_width(ds: Dataset) -> int:
    return ds.n + (_label_bits(ds) if ds.has_labels() else 0)


@dataclass(frozen=True)
class BusSpec:
    """How the bus register is prepared: the uniform |+...+> state, a few
    weighted basis states, or an explicit StateVector."""

    kind: str
    weights: tuple[tuple[str, complex], ...] | None = None
    state: StateVector | None = None

    @classmethod
    def uniform(cls) -> "BusSpec":
        return cls("uniform")

    @classmethod
    def basis_list(cls, weights: dict[str, complex]) -> "BusSpec":
        if not weights:
            raise ValidationError("basis_list needs at least one entry")
        return cls("basis_list", weights=tuple(sorted(weights.items())))

    @classmethod
    def explicit(cls, state: StateVector) -> "BusSpec":
        return cls("explicit", state=state)

    def realize(self, n: int) -> StateVector:
        if self.kind == "uniform":
            return StateVector.uniform(n)
        if self.kind == "basis_list":
            amps = np.zeros(1 << n, dtype=np.complex128)
            for bits, w in self.weights:
                if len(bits) != n:
                    raise ValidationError(
                        f"bus entry {bits!r} does not have {n} bits")
                amps[int(bits, 2)] += w
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise ValidationError("bus state is zero")
            return StateVector(n, amps / norm, _validate=False)
        if self.state.num_qubits != n:
            raise ValidationError(
                f"bus state has {self.state.num_qubits} qubits, need {n}")
        return self.state.copy()


@dataclass(frozen=True)
class SynthesisOptions:
    merge_flips: bool = True
    decompose: str = "none"           # none | toffoli
    include_gray_gates: bool = False  # only relevant when merge_flips=False

    def __post_init__(self):
        if self.decompose not in ("none", "toffoli"):
            raise ValidationError(f"unknown decompose option "
                                  f"{self.decompose!r}")


# Amplitude -> angle conversion ---------------------------------------------

def _check_equal_bus_weights(bus: BusSpec, ds: Dataset) -> None:
    state = bus.realize(address_width(ds))
    amps = state.amplitudes
    addresses = address_bits(ds)
    ref = amps[int(addresses[0], 2)]
    for bits in addresses[1:]:
        if abs(amps[int(bits, 2)] - ref) > 1e-10:
            raise UnsupportedConfigurationError(
                "amplitude-to-angle conversion needs equal bus amplitude "
                f"on every data address; {bits!r} differs")


def angles_from_amplitudes(ds: Dataset, bus: BusSpec) -> Dataset:
    """Map amplitudes b to angles arcsin(b / max|b|).

    The scale puts the largest entry at +-pi/2, which maximizes the
    post-selection probability under a uniform bus. Real amplitudes only;
    complex data goes through complex_amplitude_write.
    """
    if ds.mode != AMPLITUDE_MODE:
        raise ValidationError("dataset is not in amplitude mode")
    values = [complex(r.value) for r in ds.records]
    if any(v.imag != 0 for v in values):
        raise ValidationError("complex amplitudes: use "
                              "complex_amplitude_write")
    scale = max(abs(v.real) for v in values)
    if scale == 0:
        raise DegenerateDatasetError("all amplitudes are zero")
    _check_equal_bus_weights(bus, ds)
    records = tuple(
        DataRecord(r.bits, math.asin(v.real / scale), r.label)
        for r, v in zip(ds.records, values))
    return Dataset(records, ds.n, ANGLE_MODE)


def _angles_and_phases(ds: Dataset) -> list[tuple[str, float, float]]:
    """(bits, theta, phi) per record for the complex-amplitude path."""
    values = [complex(r.value) for r in ds.records]
    scale = max(abs(v) for v in values)
    if scale == 0:
        raise DegenerateDatasetError("all amplitudes are zero")
    out = []
    for bits, v in zip(address_bits(ds), values):
        theta = math.asin(abs(v) / scale)
        phi = cmath.phase(v) if abs(v) > 0 else 0.0
        out.append((bits, theta, phi))
    return out


# Circuit synthesis ---------------------------------------------------------

def _register_op(n: int, record: DataRecord, mode: str) -> Gate | None:
    """Gate acting on the register qubit (index n) for one record; None
    when the record writes nothing (binary 0)."""
    controls = tuple(range(n))
    if mode == BINARY_MODE:
        value = record.value
        if isinstance(value, str) and len(value) > 1:
            raise ValidationError(
                "synthesized circuits have one register qubit; multi-bit "
                "values go through write_binary")
        if not (value == 1 or value == "1"):
            return None
        return CnNot(controls, n) if controls else X(n)
    theta = float(np.real(complex(record.value)))
    return CnRotY(controls, n, theta) if controls else RotY(n, theta)


def _merged_layers(addresses: list[str], n: int) -> list[str]:
    """Bits of the M+1 fused flip layers ('0' = flip that qubit)."""
    layers = [addresses[0]]
    for prev, cur in zip(addresses, addresses[1:]):
        layers.append("".join("1" if a == b else "0"
                              for a, b in zip(prev, cur)))
    layers.append(addresses[-1])
    return layers


def _thinned_pair(prev: str, cur: str, n: int) -> list[Gate]:
    """Flop for prev and flip for cur with the cancelling X pairs dropped
    (the gray gates); X's on disjoint qubits commute, so this is exact."""
    out = []
    flop = [j for j in range(n) if prev[j] == "0" and cur[j] == "1"]
    flip = [j for j in range(n) if cur[j] == "0" and prev[j] == "1"]
    if flop:
        out.append(ClassicalXLayer("0" * len(flop), tuple(flop)))
    if flip:
        out.append(ClassicalXLayer("0" * len(flip), tuple(flip)))
    return out


def synthesize(ds: Dataset, opts: SynthesisOptions = SynthesisOptions()) -> Circuit:
    """Build the write circuit over n bus qubits plus one register qubit.

    Angle mode emits one controlled RotY per record; binary mode emits a
    CnNot for records writing 1 and nothing for records writing 0.
    Amplitude datasets must be converted first.
    """
    if ds.mode == AMPLITUDE_MODE:
        raise ValidationError(
            "amplitude dataset: convert with angles_from_amplitudes first")
    n = address_width(ds)
    addresses = address_bits(ds)
    all_bus = tuple(range(n))
    gates: list[Gate] = []

    if opts.merge_flips:
        layer_bits = _merged_layers(addresses, n)
        for l, record in enumerate(ds.records):
            if n:
                gates.append(ClassicalXLayer(layer_bits[l], all_bus))
            op = _register_op(n, record, ds.mode)
            if op is not None:
                gates.append(op)
        if n:
            gates.append(ClassicalXLayer(layer_bits[-1], all_bus))
    elif opts.include_gray_gates:
        for l, record in enumerate(ds.records):
            if n:
                gates.append(ClassicalXLayer(addresses[l], all_bus))
            op = _register_op(n, record, ds.mode)
            if op is not None:
                gates.append(op)
            if n:
                gates.append(ClassicalXLayer(addresses[l], all_bus))
    else:
        # Unmerged but with gray (mutually cancelling) flips omitted.
        first = [j for j in range(n) if addresses[0][j] == "0"]
        if first:
            gates.append(ClassicalXLayer("0" * len(first), tuple(first)))
        for l, record in enumerate(ds.records):
            op = _register_op(n, record, ds.mode)
            if op is not None:
                gates.append(op)
            if l + 1 < ds.M:
                gates.extend(_thinned_pair(addresses[l], addresses[l + 1], n))
        last = [j for j in range(n) if addresses[-1][j] == "0"]
        if last:
            gates.append(ClassicalXLayer("0" * len(last), tuple(last)))

    circuit = Circuit(n + 1, tuple(gates))
    if opts.decompose == "toffoli":
        circuit = lower_to_toffoli(circuit)
    return circuit


def synthesize_complex(ds: Dataset, opts: SynthesisOptions = SynthesisOptions()) -> Circuit:
    """Write circuit for complex amplitudes: controlled rotation plus a
    controlled phase per record (merged flip layers)."""
    if ds.mode != AMPLITUDE_MODE:
        raise ValidationError("complex synthesis expects amplitude mode")
    entries = _angles_and_phases(ds)
    n = address_width(ds)
    all_bus = tuple(range(n))
    addresses = [bits for bits, _, _ in entries]
    layer_bits = _merged_layers(addresses, n)
    gates: list[Gate] = []
    for l, (_, theta, phi) in enumerate(entries):
        if n:
            gates.append(ClassicalXLayer(layer_bits[l], all_bus))
        if phi and n:
            gates.append(CnRotArbitrary(all_bus, n, theta, phi))
        elif phi:
            gates.extend((RotY(n, theta), Phase(n, phi)))
        elif n:
            gates.append(CnRotY(all_bus, n, theta))
        else:
            gates.append(RotY(n, theta))
    if n:
        gates.append(ClassicalXLayer(layer_bits[-1], all_bus))
    circuit = Circuit(n + 1, tuple(gates))
    if opts.decompose == "toffoli":
        circuit = lower_to_toffoli(circuit)
    return circuit


# Simulation-level operations ------------------------------------------------

def _require_angle(ds: Dataset) -> None:
    if ds.mode != ANGLE_MODE:
        raise ValidationError(f"expected an angle dataset, got {ds.mode}")


def simulate_write(bus: BusSpec, ds: Dataset) -> StateVector:
    """Run the flip-register-flop writes on bus (x) |0>_R.

    Repeated addresses accumulate their rotations. Addresses outside the
    dataset keep the register exactly |0>.
    """
    _require_angle(ds)
    n = address_width(ds)
    state = sv.tensor(bus.realize(n), StateVector.zero_state(1))
    amps = state.amplitudes
    all_bus = tuple(range(n))
    for bits, record in zip(address_bits(ds), ds.records):
        layer = ClassicalXLayer(bits, all_bus)
        circ.apply_gate(amps, n + 1, layer)
        circ.apply_gate(amps, n + 1,
                        CnRotY(all_bus, n, float(np.real(complex(record.value)))))
        circ.apply_gate(amps, n + 1, layer)
    return StateVector(n + 1, amps, _validate=False)


def postselection_probability(bus: BusSpec, ds: Dataset) -> float:
    """Analytic P(register = 1): sum over addresses of
    |psi_d * sin(theta_d)|^2, with repeated addresses accumulated."""
    _require_angle(ds)
    n = address_width(ds)
    psi = bus.realize(n).amplitudes
    accumulated: dict[str, float] = {}
    for bits, record in zip(address_bits(ds), ds.records):
        accumulated[bits] = accumulated.get(bits, 0.0) + float(
            np.real(complex(record.value)))
    return float(sum(abs(psi[int(bits, 2)] * math.sin(theta)) ** 2
                     for bits, theta in accumulated.items()))


def zero_amplitude_addresses(bus: BusSpec, ds: Dataset) -> list[str]:
    """Addresses whose bus amplitude is zero: those records cannot be
    written (diagnostic, not an error)."""
    n = address_width(ds)
    psi = bus.realize(n).amplitudes
    return [bits for bits in address_bits(ds)
            if abs(psi[int(bits, 2)]) <= 1e-12]


def write_binary(state: StateVector, ds: Dataset,
                 initial: dict[str, str] | None = None) -> StateVector:
    """Flip register bits so each addressed |j> carries its new value.

    ``state`` holds n bus qubits followed by r >= 1 register qubits.
    ``initial`` maps addresses to the r-bit values currently stored there
    (default: all zeros); a record addressing a basis state missing from a
    supplied map is an error. No measurement happens: the result has unit
    norm without projection.
    """
    if ds.mode != BINARY_MODE:
        raise ValidationError(f"expected a binary dataset, got {ds.mode}")
    n = ds.n
    r = state.num_qubits - n
    if r < 1:
        raise ValidationError(
            f"state has {state.num_qubits} qubits; need more than n={n}")
    amps = state.amplitudes.copy()
    all_bus = tuple(range(n))
    for record in ds.records:
        value = record.value if isinstance(record.value, str) \
            else str(int(record.value))
        if len(value) != r:
            raise ValidationError(
                f"record {record.bits!r} writes {len(value)} bits into an "
                f"{r}-bit register")
        if initial is not None:
            if record.bits not in initial:
                raise ValidationError(
                    f"record addresses {record.bits!r}, absent from the "
                    "declared initial register map")
            old = initial[record.bits]
            if len(old) != r:
                raise ValidationError(
                    f"initial value {old!r} for {record.bits!r} is not "
                    f"{r} bits")
        else:
            old = "0" * r
        flips = [j for j in range(r) if old[j] != value[j]]
        if not flips:
            continue
        layer = ClassicalXLayer(record.bits, all_bus)
        circ.apply_gate(amps, state.num_qubits, layer)
        for j in flips:
            circ.apply_gate(amps, state.num_qubits, CnNot(all_bus, n + j))
        circ.apply_gate(amps, state.num_qubits, layer)
    return StateVector(state.num_qubits, amps, _validate=False)


def update_qdb(qdb: StateVector, updates: Dataset, bus_width: int) -> StateVector:
    """Rotate the register component attached to each updated address by
    an additional delta-theta; everything else is untouched."""
    _require_angle(updates)
    if updates.n != bus_width:
        raise ValidationError(
            f"update records have {updates.n} bits, bus width is {bus_width}")
    if qdb.num_qubits < bus_width + 1:
        raise ValidationError("state does not include a register qubit")
    amps = qdb.amplitudes.copy()
    all_bus = tuple(range(bus_width))
    for record in updates.records:
        layer = ClassicalXLayer(record.bits, all_bus)
        circ.apply_gate(amps, qdb.num_qubits, layer)
        circ.apply_gate(amps, qdb.num_qubits,
                        CnRotY(all_bus, bus_width,
                               float(np.real(complex(record.value)))))
        circ.apply_gate(amps, qdb.num_qubits, layer)
    return StateVector(qdb.num_qubits, amps, _validate=False)


def complex_amplitude_write(bus: BusSpec, ds: Dataset) -> StateVector:
    """Write complex amplitudes: theta from |b|, a controlled phase for
    arg(b). Reduces exactly to simulate_write when every b is real >= 0."""
    if ds.mode != AMPLITUDE_MODE:
        raise ValidationError("complex write expects an amplitude dataset")
    entries = _angles_and_phases(ds)
    n = address_width(ds)
    state = sv.tensor(bus.realize(n), StateVector.zero_state(1))
    amps = state.amplitudes
    all_bus = tuple(range(n))
    for bits, theta, phi in entries:
        layer = ClassicalXLayer(bits, all_bus)
        circ.apply_gate(amps, n + 1, layer)
        if phi:
            circ.apply_gate(amps, n + 1, CnRotArbitrary(all_bus, n, theta, phi))
        else:
            circ.apply_gate(amps, n + 1, CnRotY(all_bus, n, theta))
        circ.apply_gate(amps, n + 1, layer)
    return StateVector(n + 1, amps, _validate=False)
