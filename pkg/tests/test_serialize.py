"""Text and JSON round-trips for circuits."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffqram import (Circuit, CircuitParseError, parse, parse_json, serialize,
                    serialize_json, simulate)
from ffqram.gates import CnRotY, Toffoli

from conftest import random_circuit


def test_single_toffoli_line():
    circuit = Circuit(3, (Toffoli(0, 1, 2),))
    text = serialize(circuit)
    assert "TOFFOLI 0 1 2" in text.splitlines()
    assert parse(text) == circuit


def test_angle_round_trips_bit_exactly():
    theta = 1.5
    circuit = Circuit(3, (CnRotY((0, 1), 2, theta),))
    text = serialize(circuit)
    line = [l for l in text.splitlines() if l.startswith("CNRY")][0]
    printed = line.split()[-1]
    assert len(printed.replace(".", "").replace("-", "")) >= 15 or \
        float(printed) == theta
    assert parse(text).gates[0].theta == theta
    # an angle that needs all 17 digits
    ugly = 0.1 + 0.2 + 1e-17
    circuit2 = Circuit(3, (CnRotY((0, 1), 2, ugly),))
    assert parse(serialize(circuit2)).gates[0].theta == ugly


def test_adversarial_floats_round_trip():
    import math
    from ffqram.gates import Phase, RotY
    uglies = [-0.0, 1e-300, 5e-324, math.pi, -math.pi * 1e15, 0.1 + 0.2]
    circuit = Circuit(2, tuple(RotY(0, u) for u in uglies)
                      + tuple(Phase(1, u) for u in uglies))
    back = parse(serialize(circuit))
    for sent, got in zip(circuit.gates, back.gates):
        v_in = sent.theta if isinstance(sent, RotY) else sent.phi
        v_out = got.theta if isinstance(got, RotY) else got.phi
        assert v_in == v_out
        assert math.copysign(1, v_in) == math.copysign(1, v_out)


def test_malformed_line_reports_line_number():
    text = "QUBITS 3 ANCILLA\nTOFFOLI 0 1\n"
    with pytest.raises(CircuitParseError) as err:
        parse(text)
    assert err.value.line_no == 2
    assert "target" in str(err.value)


def test_missing_header():
    with pytest.raises(CircuitParseError):
        parse("TOFFOLI 0 1 2\n")


def test_unknown_opcode_names_line():
    with pytest.raises(CircuitParseError) as err:
        parse("QUBITS 2 ANCILLA\n\nFROB 0\n")
    assert err.value.line_no == 3


def test_bad_qubit_index_from_gate_validation():
    with pytest.raises(CircuitParseError):
        parse("QUBITS 2 ANCILLA\nTOFFOLI 0 0 1\n")


def test_header_with_ancillae_round_trips():
    circuit = Circuit(5, (Toffoli(0, 1, 3),), frozenset({3, 4}))
    assert parse(serialize(circuit)) == circuit


def test_comments_and_blank_lines_ignored():
    text = "QUBITS 2 ANCILLA\n# a comment\n\nSWAP 0 1  # trailing\n"
    circuit = parse(text)
    assert len(circuit.gates) == 1


def test_json_mirror_round_trip():
    circuit = Circuit(4, (Toffoli(0, 1, 2), CnRotY((0, 2), 3, 0.25)),
                      frozenset({2}))
    assert parse_json(serialize_json(circuit)) == circuit


def test_json_rejects_garbage():
    with pytest.raises(CircuitParseError):
        parse_json("{not json")
    with pytest.raises(CircuitParseError):
        parse_json('{"qubits": 2, "gates": [{"kind": "NOPE"}]}')


def test_random_circuits_round_trip_both_formats(rng):
    for _ in range(40):
        circuit = random_circuit(rng)
        back_text = parse(serialize(circuit))
        back_json = parse_json(serialize_json(circuit))
        assert back_text == circuit
        assert back_json == circuit
        reference = simulate(circuit).amplitudes
        assert np.max(np.abs(simulate(back_text).amplitudes
                             - reference)) < 1e-12
        assert np.max(np.abs(simulate(back_json).amplitudes
                             - reference)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_round_trip_property(seed):
    rng = np.random.default_rng(seed)
    circuit = random_circuit(rng)
    assert parse(serialize(circuit)) == circuit
    assert parse_json(serialize_json(circuit)) == circuit
