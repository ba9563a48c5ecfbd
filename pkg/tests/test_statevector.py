"""State-vector operation contracts and invariants."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffqram import (PostSelectionError, QubitBoundsError, StateVector,
                    ValidationError, apply_classical_x_layer,
                    apply_controlled, apply_single_qubit, inner_product,
                    post_select, probability_of, tensor)
from ffqram.gates import roty_matrix

from oracles import H2, X2, embed_1q, random_state_vector, random_unitary_2x2, xlayer_permutation

SQ2 = 1.0 / math.sqrt(2.0)


def test_x_flips_basis():
    out = apply_single_qubit(StateVector.from_bits("0"), 0, X2)
    assert np.allclose(out.amplitudes, [0, 1])


def test_hadamard_definition():
    out = apply_single_qubit(StateVector.from_bits("0"), 0, H2)
    assert np.allclose(out.amplitudes, [SQ2, SQ2])


def test_roty_quarter_on_second_qubit():
    # |00> -> cos(pi/4)|00> + sin(pi/4)|01>
    out = apply_single_qubit(StateVector.from_bits("00"), 1,
                             roty_matrix(math.pi / 4))
    expected = [math.cos(math.pi / 4), math.sin(math.pi / 4), 0, 0]
    assert np.allclose(out.amplitudes, expected)


def test_controlled_rotation_fires_when_all_controls_set():
    out = apply_controlled(StateVector.from_bits("110"), {0, 1}, 2,
                           roty_matrix(math.pi / 2))
    assert np.allclose(out.amplitudes, StateVector.from_bits("111").amplitudes)


def test_controlled_rotation_idle_when_control_unset():
    out = apply_controlled(StateVector.from_bits("100"), {0, 1}, 2,
                           roty_matrix(math.pi / 2))
    assert np.allclose(out.amplitudes, StateVector.from_bits("100").amplitudes)


def test_toffoli_truth_table():
    out = apply_controlled(StateVector.from_bits("110"), {0, 1}, 2, X2)
    assert np.allclose(out.amplitudes, StateVector.from_bits("111").amplitudes)


def test_x_layer_maps_pattern_to_all_ones():
    out = apply_classical_x_layer(StateVector.from_bits("10"), "10", [0, 1])
    assert np.allclose(out.amplitudes, StateVector.from_bits("11").amplitudes)


def test_x_layer_against_permutation_oracle():
    # |00> with bits "10": j xor ~d = 00 xor 01 = 01
    state = StateVector.from_bits("00")
    out = apply_classical_x_layer(state, "10", [0, 1])
    oracle = xlayer_permutation(2, "10", (0, 1)) @ state.amplitudes
    assert np.allclose(out.amplitudes, oracle)
    assert np.allclose(out.amplitudes, StateVector.from_bits("01").amplitudes)


def test_x_layer_all_ones_is_identity(rng):
    state = StateVector(3, random_state_vector(3, rng), _validate=False)
    out = apply_classical_x_layer(state, "111", [0, 1, 2])
    assert np.allclose(out.amplitudes, state.amplitudes)


def test_probability_of_plus_state():
    plus = StateVector.uniform(1)
    assert probability_of(plus, 0, 1) == pytest.approx(0.5, abs=1e-12)


def test_probability_of_basis_state():
    assert probability_of(StateVector.from_bits("1"), 0, 1) == 1.0


def test_probabilities_sum_to_one(rng):
    state = StateVector(4, random_state_vector(4, rng), _validate=False)
    for k in range(4):
        total = probability_of(state, k, 0) + probability_of(state, k, 1)
        assert total == pytest.approx(1.0, abs=1e-12)


def test_post_select_entangled_pair():
    amps = np.zeros(4, dtype=complex)
    amps[0b01] = SQ2
    amps[0b10] = SQ2
    state = StateVector(2, amps)
    selected, prob = post_select(state, 1, 1)
    assert prob == pytest.approx(0.5, abs=1e-12)
    assert selected.num_qubits == 1
    assert np.allclose(selected.amplitudes, [1, 0])


def test_post_select_product_state(rng):
    psi = StateVector(2, random_state_vector(2, rng), _validate=False)
    state = tensor(psi, StateVector.from_bits("1"))
    selected, prob = post_select(state, 2, 1)
    assert prob == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(selected.amplitudes, psi.amplitudes)


def test_post_select_impossible_outcome():
    state = tensor(StateVector.uniform(1), StateVector.from_bits("0"))
    with pytest.raises(PostSelectionError):
        post_select(state, 1, 1)


def test_inner_product_orthogonal_and_self():
    zero, one = StateVector.from_bits("0"), StateVector.from_bits("1")
    assert inner_product(zero, one) == 0
    assert inner_product(one, one) == pytest.approx(1)
    plus = apply_single_qubit(zero, 0, H2)
    assert inner_product(zero, plus) == pytest.approx(SQ2)


def test_inner_product_conjugate_symmetry(rng):
    a = StateVector(3, random_state_vector(3, rng), _validate=False)
    b = StateVector(3, random_state_vector(3, rng), _validate=False)
    assert inner_product(a, b) == pytest.approx(
        np.conj(inner_product(b, a)), abs=1e-12)


def test_inner_product_dimension_mismatch():
    with pytest.raises(ValidationError):
        inner_product(StateVector.from_bits("0"), StateVector.from_bits("00"))


def test_non_unitary_matrix_rejected():
    with pytest.raises(ValidationError):
        apply_single_qubit(StateVector.from_bits("0"), 0,
                           np.array([[1, 0], [0, 2.0]]))


def test_qubit_out_of_range():
    with pytest.raises(QubitBoundsError):
        apply_single_qubit(StateVector.from_bits("0"), 1, X2)


def test_control_overlapping_target_rejected():
    with pytest.raises(ValidationError):
        apply_controlled(StateVector.from_bits("00"), {0}, 0, X2)


def test_unnormalized_state_rejected():
    with pytest.raises(ValidationError):
        StateVector(1, [1.0, 1.0])


def test_wrong_length_rejected():
    with pytest.raises(ValidationError):
        StateVector(2, [1.0, 0.0])


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_norm_preserved_by_random_gates(seed):
    rng = np.random.default_rng(seed)
    state = StateVector(3, random_state_vector(3, rng), _validate=False)
    for _ in range(4):
        u = random_unitary_2x2(rng)
        controls = set(int(v) for v in
                       rng.permutation(3)[:rng.integers(0, 3)])
        target = int(rng.choice([k for k in range(3) if k not in controls]))
        state = apply_controlled(state, controls, target, u)
        assert abs(state.norm() - 1.0) < 1e-12


@settings(max_examples=30, deadline=None)
@given(bits=st.text(alphabet="01", min_size=1, max_size=4),
       seed=st.integers(0, 2 ** 32 - 1))
def test_x_layer_is_involution(bits, seed):
    q = len(bits)
    rng = np.random.default_rng(seed)
    state = StateVector(q, random_state_vector(q, rng), _validate=False)
    qubits = list(range(q))
    twice = apply_classical_x_layer(
        apply_classical_x_layer(state, bits, qubits), bits, qubits)
    assert np.allclose(twice.amplitudes, state.amplitudes, atol=1e-14)


def test_empty_control_set_equals_single_qubit(rng):
    state = StateVector(3, random_state_vector(3, rng), _validate=False)
    u = random_unitary_2x2(rng)
    assert np.allclose(apply_controlled(state, set(), 1, u).amplitudes,
                       apply_single_qubit(state, 1, u).amplitudes)


@pytest.mark.parametrize("q", range(1, 7))
def test_gate_application_agrees_with_dense_oracle(q, rng):
    """Every controlled application matches explicit 2^q x 2^q matvec."""
    for _ in range(6):
        state = StateVector(q, random_state_vector(q, rng), _validate=False)
        u = random_unitary_2x2(rng)
        n_ctl = int(rng.integers(0, q))
        order = rng.permutation(q)
        controls = set(int(v) for v in order[:n_ctl])
        target = int(order[n_ctl])
        out = apply_controlled(state, controls, target, u)
        oracle = embed_1q(q, target, u, tuple(controls)) @ state.amplitudes
        assert np.max(np.abs(out.amplitudes - oracle)) < 1e-10


def test_tensor_stacks_qubits():
    left = StateVector.from_bits("1")
    right = StateVector.from_bits("0")
    assert np.allclose(tensor(left, right).amplitudes,
                       StateVector.from_bits("10").amplitudes)


def test_wide_register_stays_exact():
    # dense path must hold up well past toy sizes (spot check at 20 qubits)
    state = StateVector.zero_state(20)
    state = apply_single_qubit(state, 7, H2)
    state = apply_controlled(state, {7}, 19, X2)
    assert probability_of(state, 19, 1) == pytest.approx(0.5, abs=1e-12)
    assert abs(state.norm() - 1.0) < 1e-12
