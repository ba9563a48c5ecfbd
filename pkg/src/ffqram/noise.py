"""Depolarizing-location accounting for write circuits.

Each (qubit, time step) location fails independently with probability
epsilon, so a run succeeds with probability (1 - epsilon)^tau where tau
counts the locations. A lowered C^nNOT block is charged as a full
(2n-1) x depth rectangle; every standalone single-qubit gate position is
one location, including all n positions of each flip layer (a qubit whose
control bit is 1 still idles through the layer).
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .circuits import Circuit, Schedule, cn_not_depth, schedule
from .errors import NormalFormError, ValidationError
from .gates import ClassicalXLayer, CnNot, RotY, Toffoli

FULL = "full"
MILD = "mild"
_MODELS = (FULL, MILD)


@dataclass(frozen=True)
class NoiseBudget:
    """A consistent (n, M, model, epsilon, tau, p_s) tuple."""

    n: int
    M: int
    model: str
    epsilon: float
    tau: int
    p_s: float

    def __post_init__(self):
        if self.model not in _MODELS:
            raise ValidationError(f"unknown model {self.model!r}")
        expected = (1.0 - self.epsilon) ** self.tau
        if abs(self.p_s - expected) > 1e-12:
            raise ValidationError(
                f"inconsistent budget: p_s={self.p_s} but "
                f"(1-eps)^tau={expected}")

    @classmethod
    def for_target(cls, p_s: float, n: int, M: int, model: str = FULL
                   ) -> "NoiseBudget":
        tau = tau_for(n, M, model)
        eps = epsilon_for_target(p_s, n, M, model)
        return cls(n, M, model, eps, tau, (1.0 - eps) ** tau)

    @classmethod
    def for_epsilon(cls, epsilon: float, n: int, M: int, model: str = FULL
                    ) -> "NoiseBudget":
        tau = tau_for(n, M, model)
        return cls(n, M, model, epsilon, tau, (1.0 - epsilon) ** tau)


def count_tau(n: int, M: int, model: str = FULL) -> int:
    """Closed-form location count for writing M records of n bits.

    full: 2M[(2n-1)(2 ceil(log2 n) - 1) + 1] + n(M+1), valid for n >= 2
    (use count_tau_single_bit for n = 1). mild: (n+1)M + n(M+1), treating
    each controlled rotation as n+1 independent error sites.
    """
    if model not in _MODELS:
        raise ValidationError(f"unknown model {model!r}")
    if M < 1:
        raise ValidationError("M must be >= 1")
    if n < 1:
        raise ValidationError("n must be >= 1")
    if model == MILD:
        return (n + 1) * M + n * (M + 1)
    if n < 2:
        raise ValidationError(
            "the full-model formula is degenerate at n=1; use "
            "count_tau_single_bit(M)")
    depth = 2 * math.ceil(math.log2(n)) - 1
    return 2 * M * ((2 * n - 1) * depth + 1) + n * (M + 1)


def count_tau_single_bit(M: int) -> int:
    """Full-model extension for n = 1: each controlled rotation costs two
    1-location CNOT blocks plus two rotations, i.e. 2M*2 + (M+1)."""
    if M < 1:
        raise ValidationError("M must be >= 1")
    return 2 * M * 2 + (M + 1)


def tau_for(n: int, M: int, model: str = FULL) -> int:
    """count_tau with the n = 1 full-model extension folded in, so curves
    over M = 2 (n = log2 M = 1) work."""
    if model == FULL and n == 1:
        return count_tau_single_bit(M)
    return count_tau(n, M, model)


def success_probability(epsilon: float, tau: int) -> float:
    """(1 - epsilon)^tau."""
    if not 0.0 <= epsilon <= 1.0:
        raise ValidationError(f"epsilon must be in [0, 1], got {epsilon}")
    if tau < 0:
        raise ValidationError("tau must be >= 0")
    return (1.0 - epsilon) ** tau


def epsilon_for_target(p_s: float, n: int, M: int, model: str = FULL) -> float:
    """Per-location error rate that yields success probability p_s."""
    if not 0.0 < p_s <= 1.0:
        raise ValidationError(f"p_s must be in (0, 1], got {p_s}")
    return 1.0 - p_s ** (1.0 / tau_for(n, M, model))


# Structural count on lowered circuits ---------------------------------------

def _block_locations(run: list, sched_depth: int) -> int:
    """Charge one lowered C^nNOT block: (2n-1) qubits over its depth."""
    qubits = set()
    for g in run:
        qubits.update(g.qubits)
    width = len(qubits)
    if width % 2 == 0:
        raise NormalFormError(
            f"C^nNOT block touches {width} qubits; expected 2n-1")
    n = (width + 1) // 2
    toffolis = sum(1 for g in run if isinstance(g, Toffoli))
    if n >= 2 and toffolis != max(2 * n - 3, 1):
        raise NormalFormError(
            f"C^{n}NOT block has {toffolis} Toffolis, expected "
            f"{max(2 * n - 3, 1)}")
    if sched_depth != cn_not_depth(n):
        raise NormalFormError(
            f"C^{n}NOT block schedules to depth {sched_depth}, expected "
            f"{cn_not_depth(n)}")
    return width * sched_depth


def _run_depth(run: list) -> int:
    sub = schedule(Circuit(max(q for g in run for q in g.qubits) + 1,
                           tuple(run)))
    return sub.depth


def count_locations_in_circuit(circuit: Circuit,
                               sched: Schedule | None = None) -> int:
    """Count noise locations in a lowered, merged write circuit.

    Expects the normal form produced by synthesize(decompose="toffoli",
    merge_flips=True) on an angle dataset: M+1 full-width flip layers and,
    per record, two rotations each followed by a Toffoli ladder. Anything
    else raises NormalFormError. Matches count_tau(n, M, "full") (or the
    n = 1 extension). Block depths are taken from each block scheduled on
    its own, which is the depth the rearranged ladder achieves.
    """
    if sched is None:
        sched = schedule(circuit)
    if sum(len(layer) for layer in sched.layers) != len(circuit.gates):
        raise NormalFormError("schedule does not match the circuit")
    total = 0
    layer_widths: list[int] = []
    rotations = 0
    blocks = 0
    run: list = []

    def flush_run():
        nonlocal total, blocks
        if run:
            total += _block_locations(run, _run_depth(run))
            blocks += 1
            run.clear()

    for g in circuit.gates:
        if isinstance(g, Toffoli):
            run.append(g)
        elif isinstance(g, CnNot) and len(g.controls) == 1:
            # n = 1 block: a bare CNOT, charged as one location.
            flush_run()
            total += 1
            blocks += 1
        elif isinstance(g, ClassicalXLayer):
            flush_run()
            layer_widths.append(len(g.qubits))
            total += len(g.qubits)
        elif isinstance(g, RotY):
            flush_run()
            rotations += 1
            total += 1
        else:
            raise NormalFormError(
                f"unexpected gate kind {type(g).__name__} in lowered "
                "write circuit")
    flush_run()

    if not layer_widths or len(set(layer_widths)) != 1:
        raise NormalFormError("expected M+1 flip layers of equal width")
    m_records = len(layer_widths) - 1
    if m_records < 1 or rotations != 2 * m_records or blocks != 2 * m_records:
        raise NormalFormError(
            f"expected 2M rotations and 2M C^nNOT blocks for "
            f"M={m_records}; saw {rotations} and {blocks}")
    return total


# Target-error curves ---------------------------------------------------------

class CurveRow(NamedTuple):
    M: int
    p_s: float
    epsilon: float
    model: str
    tau: int


def curve(M_list: Sequence[int], p_s_list: Sequence[float],
          model: str = FULL,
          n_of_M=None) -> list[CurveRow]:
    """Error-rate table over a grid of M and p_s.

    By default n = log2(M) (M must then be a power of two); pass n_of_M
    to override the record length per M.
    """
    if n_of_M is None:
        def n_of_M(M):
            n = M.bit_length() - 1
            if M != 1 << n:
                raise ValidationError(
                    f"M={M} is not a power of two; the default n=log2(M) "
                    "rule needs one (or pass n_of_M)")
            return n
    rows = []
    for M in M_list:
        n = n_of_M(M)
        tau = tau_for(n, M, model)
        for p_s in p_s_list:
            rows.append(CurveRow(M, p_s, epsilon_for_target(p_s, n, M, model),
                                 model, tau))
    return rows


def curve_csv(rows: Iterable[CurveRow]) -> str:
    lines = ["M,p_s,epsilon,model,tau"]
    for r in rows:
        lines.append(f"{r.M},{r.p_s:.12g},{r.epsilon:.12g},{r.model},{r.tau}")
    return "\n".join(lines) + "\n"


# Monte-Carlo cross-check ------------------------------------------------------

def monte_carlo_no_error_fraction(circuit: Circuit, epsilon: float,
                                  trials: int, seed: int) -> float:
    """Fraction of sampled trajectories in which no counted location
    fails; expectation (1 - epsilon)^tau."""
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    if not 0.0 <= epsilon <= 1.0:
        raise ValidationError(f"epsilon must be in [0, 1], got {epsilon}")
    tau = count_locations_in_circuit(circuit)
    rng = np.random.default_rng(seed)
    failures = rng.binomial(tau, epsilon, size=trials)
    return float(np.mean(failures == 0))
