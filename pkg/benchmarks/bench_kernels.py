#!/usr/bin/env python3
"""Benchmark the compiled gate kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [max_qubits]

Times the hot operations (single-qubit gate, multi-controlled gate,
flip layer, marginal probability) per backend on random states and prints
a table with per-call times and the compiled/python speedup.
"""

import sys
import time

import numpy as np

from ffqram import kernels_py

try:
    from ffqram import _kernels
except ImportError:
    _kernels = None

SQ2 = 1.0 / np.sqrt(2.0)
H = (SQ2 + 0j, SQ2 + 0j, SQ2 + 0j, -SQ2 + 0j)


def random_state(q, rng):
    v = rng.normal(size=1 << q) + 1j * rng.normal(size=1 << q)
    return (v / np.linalg.norm(v)).astype(np.complex128)


def make_cases(q):
    mid = q // 2
    cmask = 0
    for p in range(0, q, 2):
        if p != mid:
            cmask |= 1 << p
    swap_flat = np.zeros(16, dtype=np.complex128)
    for r, c in ((0, 0), (1, 2), (2, 1), (3, 3)):
        swap_flat[4 * r + c] = 1.0
    return {
        "1q hadamard": lambda k, a: k.apply_1q(a, mid, *H, 0, 0),
        "1q controlled": lambda k, a: k.apply_1q(a, mid, *H, cmask, cmask),
        "2q swap": lambda k, a: k.apply_2q(a, 0, q - 1, swap_flat, 0, 0),
        "flip layer": lambda k, a: k.apply_xor_mask(a, (1 << q) - 1),
        "probability": lambda k, a: k.prob_one(a, mid),
    }


def time_op(kernel, op, amps, repeats):
    best = float("inf")
    for _ in range(repeats):
        work = amps.copy()
        start = time.perf_counter()
        op(kernel, work)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    max_q = int(sys.argv[1]) if len(sys.argv) > 1 else 20
    rng = np.random.default_rng(0)
    print(f"{'qubits':>6}  {'operation':<14} {'python':>12} "
          f"{'compiled':>12} {'speedup':>8}")
    for q in range(14, max_q + 1, 2):
        amps = random_state(q, rng)
        repeats = 5 if q < 20 else 3
        for name, op in make_cases(q).items():
            t_py = time_op(kernels_py, op, amps, repeats)
            if _kernels is None:
                print(f"{q:>6}  {name:<14} {t_py * 1e3:>10.3f}ms "
                      f"{'n/a':>12} {'n/a':>8}")
                continue
            t_cy = time_op(_kernels, op, amps, repeats)
            print(f"{q:>6}  {name:<14} {t_py * 1e3:>10.3f}ms "
                  f"{t_cy * 1e3:>10.3f}ms {t_py / t_cy:>7.2f}x")
    if _kernels is None:
        print("\ncompiled kernels not built; showing fallback only")


if __name__ == "__main__":
    main()
