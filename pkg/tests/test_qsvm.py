"""Training-matrix loading into two-register amplitudes."""

import math

import numpy as np
import pytest

from ffqram import (DegenerateDatasetError, TrainingSet, ValidationError,
                    fidelity, inner_product, prepare_chi,
                    synthesize_chi_circuit, target_chi)
from ffqram.gates import CnRotY, H, RotY
from ffqram.qsvm import training_dataset

HALF_PI = math.pi / 2


def test_identity_matrix_blocks_and_angles():
    t = TrainingSet.from_matrix([[1.0, 0.0], [0.0, 1.0]])
    ds = training_dataset(t)
    assert ds.M == 4
    assert [r.value for r in ds.records] == pytest.approx(
        [HALF_PI, 0.0, 0.0, HALF_PI])
    # sample-major ordering: (i=0,k=0), (i=0,k=1), (i=1,k=0), (i=1,k=1)
    assert [r.bits for r in ds.records] == ["00", "10", "01", "11"]


def test_identity_matrix_prepares_even_pair_state():
    t = TrainingSet.from_matrix([[1.0, 0.0], [0.0, 1.0]])
    chi, p_success = prepare_chi(t)
    expected = np.zeros(4, dtype=complex)
    expected[0b00] = expected[0b11] = 1 / math.sqrt(2)
    assert np.max(np.abs(chi.amplitudes - expected)) < 1e-10
    assert p_success == pytest.approx(0.5, abs=1e-10)


def test_single_cell_matrix():
    t = TrainingSet.from_matrix([[1.0]])
    circuit = synthesize_chi_circuit(t)
    rotations = [g for g in circuit.gates if isinstance(g, RotY)]
    assert len(rotations) == 1
    assert rotations[0].theta == pytest.approx(HALF_PI)
    chi, p_success = prepare_chi(t)
    assert chi.num_qubits == 0
    assert chi.amplitudes[0] == pytest.approx(1.0)
    assert p_success == pytest.approx(1.0)


def test_qubit_count_is_log2_mn_plus_register():
    t = TrainingSet.from_matrix(np.ones((4, 2)))
    circuit = synthesize_chi_circuit(t)
    assert circuit.num_qubits == int(math.log2(4 * 2)) + 1
    assert len(circuit.ancilla_qubits) == 0
    hadamards = [g for g in circuit.gates if isinstance(g, H)]
    assert len(hadamards) == 3


def test_block_count_is_m_times_n():
    t = TrainingSet.from_matrix(np.ones((2, 4)))
    circuit = synthesize_chi_circuit(t)
    blocks = [g for g in circuit.gates if isinstance(g, CnRotY)]
    assert len(blocks) == 8


def test_single_nonzero_entry_gives_basis_state():
    x = np.zeros((2, 2))
    x[1, 0] = 0.7
    chi, _ = prepare_chi(TrainingSet.from_matrix(x))
    # k=0, i=1 -> |0>|1> -> index 0b01
    expected = np.zeros(4, dtype=complex)
    expected[0b01] = 1.0
    assert np.max(np.abs(chi.amplitudes - expected)) < 1e-10


def test_random_matrices_match_normalized_flattening(rng):
    for _ in range(20):
        m = int(rng.choice([1, 2, 4]))
        n = int(rng.choice([1, 2, 4]))
        x = rng.normal(size=(m, n))
        t = TrainingSet.from_matrix(x)
        chi, p_success = prepare_chi(t)
        assert fidelity(chi, target_chi(t)) > 1 - 1e-10
        # signed amplitudes, not magnitudes
        assert inner_product(chi, target_chi(t)).real > 1 - 1e-10
        scale = np.max(np.abs(x))
        expected_p = float(np.sum((x / scale) ** 2) / (m * n))
        assert p_success == pytest.approx(expected_p, abs=1e-10)


def test_scale_invariance(rng):
    x = rng.normal(size=(2, 2))
    chi_a, p_a = prepare_chi(TrainingSet.from_matrix(x))
    chi_b, p_b = prepare_chi(TrainingSet.from_matrix(3.5 * x))
    assert fidelity(chi_a, chi_b) > 1 - 1e-10
    assert p_a == pytest.approx(p_b, abs=1e-10)


def test_negative_entries_keep_sign():
    t = TrainingSet.from_matrix([[0.5, -0.5], [-0.5, 0.5]])
    chi, _ = prepare_chi(t)
    assert inner_product(chi, target_chi(t)).real > 1 - 1e-10
    signs = np.sign(chi.amplitudes.real)
    assert list(signs) == [1, -1, -1, 1]


def test_non_power_of_two_padded():
    t = TrainingSet.from_matrix([[1.0, 2.0, 3.0]])  # N=3 -> padded to 4
    assert t.M == 1 and t.N == 4
    assert t.orig_shape == (1, 3)
    chi, _ = prepare_chi(t)
    expected = np.array([1, 2, 3, 0], dtype=complex)
    expected /= np.linalg.norm(expected)
    assert fidelity(chi, target_chi(t)) > 1 - 1e-10
    assert np.max(np.abs(chi.amplitudes - expected)) < 1e-10


def test_all_zero_matrix_rejected():
    with pytest.raises(DegenerateDatasetError):
        TrainingSet.from_matrix(np.zeros((2, 2)))


def test_non_finite_matrix_rejected():
    with pytest.raises(ValidationError):
        TrainingSet.from_matrix([[1.0, float("inf")]])
