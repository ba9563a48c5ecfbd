"""Acceptance suite: one test per numbered criterion, each printing a
PASS/FAIL line (run with `pytest tests/test_acceptance.py -v -s`)."""

import math
from contextlib import contextmanager

import numpy as np
import pytest

from ffqram import (BusSpec, Circuit, DataRecord, Dataset, StateVector,
                    count_locations_in_circuit, count_tau,
                    decompose_cn_not, decompose_cn_roty, epsilon_for_target,
                    fidelity, inner_product, monte_carlo_no_error_fraction,
                    pairwise_sum, parse, parse_json, post_select,
                    prepare_chi, probability_of, postselection_probability,
                    schedule, serialize, serialize_json, simulate,
                    simulate_write, success_probability, swap_test_imag,
                    swap_test_real, target_chi, tensor,
                    write_binary, TrainingSet)
from ffqram.gates import CnRotY, Toffoli

from conftest import random_circuit
from oracles import circuit_unitary, embed_1q, random_state_vector, roty2
from test_forking import evolved_by_oracle, random_fragment
from test_noise import write_circuit


@contextmanager
def criterion(number, name):
    try:
        yield
    except Exception:
        print(f"ACCEPTANCE {number} {name}: FAIL")
        raise
    print(f"ACCEPTANCE {number} {name}: PASS")


def test_criterion_1_qdb_oracle_equivalence():
    rng = np.random.default_rng(101)
    with criterion(1, "QDB oracle equivalence"):
        done = 0
        while done < 100:
            n = int(rng.integers(1, 5))
            m = int(rng.integers(1, min(1 << n, 8) + 1))
            addresses = rng.choice(1 << n, size=m, replace=False)
            thetas = (rng.uniform(0.05, math.pi / 2, size=m)
                      * rng.choice([-1.0, 1.0], size=m))
            ds = Dataset(tuple(
                DataRecord(format(a, f"0{n}b"), float(t))
                for a, t in zip(addresses, thetas)), n, "angle")
            bus_state = StateVector(n, random_state_vector(n, rng),
                                    _validate=False)
            bus = BusSpec.explicit(bus_state)

            analytic = postselection_probability(bus, ds)
            written = simulate_write(bus, ds)
            simulated = probability_of(written, n, 1)
            assert abs(analytic - simulated) < 1e-10

            target = np.zeros(1 << n, dtype=complex)
            for a, t in zip(addresses, thetas):
                target[a] = bus_state.amplitudes[a] * math.sin(t)
            norm = np.linalg.norm(target)
            if norm < 1e-4:
                continue  # nothing written; post-selection undefined
            selected, _ = post_select(written, n, 1)
            oracle = StateVector(n, target / norm, _validate=False)
            assert fidelity(selected, oracle) >= 1 - 1e-10
            done += 1


def test_criterion_2_decomposition_exactness():
    rng = np.random.default_rng(202)
    with criterion(2, "decomposition exactness"):
        for n in (2, 3, 4, 5):
            controls = tuple(range(n))
            target = n
            pool = tuple(range(n + 1, n + 1 + max(n - 2, 0)))
            width = n + 1 + len(pool)

            theta = float(rng.uniform(-math.pi, math.pi))
            got = circuit_unitary(n + 1,
                                  decompose_cn_roty(CnRotY(controls, target,
                                                           theta)))
            want = embed_1q(n + 1, target, roty2(theta), controls)
            assert np.max(np.abs(got - want)) < 1e-10

            gates = decompose_cn_not(controls, target, pool)
            if n >= 3:
                assert sum(isinstance(g, Toffoli) for g in gates) == 2 * n - 3
                used = set().union(*(g.qubits for g in gates))
                assert len(used - set(controls) - {target}) == n - 2
            ladder = circuit_unitary(width, gates)
            # restricted to ancilla-|0> inputs: acts as C^nNOT (x) I and
            # returns every ancilla to |0>
            cnnot = embed_1q(n + 1, target, np.array([[0, 1], [1, 0]]),
                             controls)
            for j in range(1 << (n + 1)):
                col = ladder[:, j << len(pool)]
                expected = np.kron(cnnot[:, j],
                                   np.eye(1 << len(pool))[:, 0])
                assert np.max(np.abs(col - expected)) < 1e-10

        c4 = decompose_cn_not((0, 1, 2, 3), 4, (5, 6))
        assert len(c4) == 5
        assert schedule(Circuit(7, c4)).depth == 3


def test_criterion_3_noise_accounting():
    with criterion(3, "noise accounting"):
        for n in (2, 3, 4, 5):
            for m in (1, 2, 4, 8):
                circuit = write_circuit(n, m)
                counted = count_locations_in_circuit(circuit,
                                                     schedule(circuit))
                assert counted == count_tau(n, m, "full")
                for model in ("full", "mild"):
                    for p in (0.3, 0.5, 0.9):
                        eps = epsilon_for_target(p, n, m, model)
                        assert success_probability(
                            eps, count_tau(n, m, model)) == pytest.approx(
                                p, abs=1e-12)
        circuit = write_circuit(2, 4)
        trials = 100_000
        eps = 0.01
        expected = (1 - eps) ** 42
        got = monte_carlo_no_error_fraction(circuit, eps, trials, seed=31)
        sigma = math.sqrt(expected * (1 - expected) / trials)
        assert abs(got - expected) < 4 * sigma


def test_criterion_4_forking_correctness():
    rng = np.random.default_rng(404)
    with criterion(4, "forking correctness"):
        for _ in range(100):
            n = int(rng.integers(1, 3))
            phi = StateVector(n, random_state_vector(n, rng),
                              _validate=False)
            anc = StateVector(n, random_state_vector(n, rng),
                              _validate=False)
            u1 = random_fragment(n, rng)
            u2 = random_fragment(n, rng)
            ip = inner_product(evolved_by_oracle(phi, u1),
                               evolved_by_oracle(phi, u2))
            p0_re, _ = swap_test_real(phi, u1, u2, ancilla=anc)
            assert abs(p0_re - (1 + ip.real) / 2) < 1e-10
            p0_im, _ = swap_test_imag(phi, u1, u2, ancilla=anc)
            assert abs(p0_im - (1 + ip.imag) / 2) < 1e-10
            # invariant to the ancilla state
            p0_default, _ = swap_test_real(phi, u1, u2)
            assert abs(p0_re - p0_default) < 1e-10

        # global sign: U2 = -I against U1 = I
        from ffqram import preset_fragment
        phi = StateVector(2, random_state_vector(2, rng), _validate=False)
        p0_sign, _ = swap_test_real(phi, preset_fragment("I", 2),
                                    preset_fragment("minusI", 2))
        assert abs(p0_sign) <= 1e-12

        # d=3 pairwise sum against the 9-term oracle
        for _ in range(10):
            n = int(rng.integers(1, 3))
            phi = StateVector(n, random_state_vector(n, rng),
                              _validate=False)
            frags = [random_fragment(n, rng) for _ in range(3)]
            states = [evolved_by_oracle(phi, f) for f in frags]
            oracle = sum(inner_product(a, b).real
                         for a in states for b in states)
            assert abs(pairwise_sum(phi, frags) - oracle) < 1e-10


def test_criterion_5_qsvm_loading():
    rng = np.random.default_rng(505)
    with criterion(5, "QSVM training-state loading"):
        for m in (1, 2, 4):
            for n in (1, 2, 4):
                x = rng.normal(size=(m, n))  # signed entries
                t = TrainingSet.from_matrix(x)
                chi, _ = prepare_chi(t)
                assert fidelity(chi, target_chi(t)) >= 1 - 1e-10
                assert inner_product(chi, target_chi(t)).real >= 1 - 1e-10


def test_criterion_6_update_accumulation_and_binary_norm():
    rng = np.random.default_rng(606)
    with criterion(6, "update accumulation and binary writes"):
        for _ in range(20):
            n = int(rng.integers(1, 4))
            address = format(int(rng.integers(0, 1 << n)), f"0{n}b")
            t1, t2 = rng.uniform(-1.5, 1.5, size=2)
            bus = BusSpec.explicit(StateVector(n, random_state_vector(n, rng),
                                               _validate=False))
            stepwise = simulate_write(bus, Dataset(
                (DataRecord(address, float(t1)),
                 DataRecord(address, float(t2))), n, "angle"))
            direct = simulate_write(bus, Dataset(
                (DataRecord(address, float(t1 + t2)),), n, "angle"))
            assert np.max(np.abs(stepwise.amplitudes
                                 - direct.amplitudes)) < 1e-10

            start = tensor(StateVector(n, random_state_vector(n, rng),
                                       _validate=False),
                           StateVector.zero_state(1))
            addresses = rng.choice(1 << n,
                                   size=int(rng.integers(1, 1 << n) if n > 0
                                            else 1),
                                   replace=False)
            ds = Dataset(tuple(
                DataRecord(format(a, f"0{n}b"), int(rng.integers(0, 2)))
                for a in addresses), n, "binary")
            written = write_binary(start, ds)
            assert abs(written.norm() - 1.0) < 1e-12


def test_criterion_7_serialization_round_trip():
    rng = np.random.default_rng(707)
    with criterion(7, "serialization round-trip"):
        for _ in range(100):
            circuit = random_circuit(rng)
            reference = simulate(circuit).amplitudes
            for back in (parse(serialize(circuit)),
                         parse_json(serialize_json(circuit))):
                assert back == circuit
                assert np.max(np.abs(simulate(back).amplitudes
                                     - reference)) < 1e-12
