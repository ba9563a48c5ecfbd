"""Pure-numpy gate kernels; same surface as the compiled module.

Qubits are addressed by bit position (weight 2**pos, position 0 = least
significant); control conditions are (mask, value) pairs over the flat
index. Kept vectorized so the fallback stays usable at 20+ qubits.
"""

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=8)
def _indices(dim: int) -> np.ndarray:
    return np.arange(dim, dtype=np.uint64)


def apply_1q(amps, tpos, u00, u01, u10, u11, cmask, cval):
    idx = _indices(amps.shape[0])
    tbit = np.uint64(1 << tpos)
    sel = (idx & tbit) == 0
    if cmask:
        sel &= (idx & np.uint64(cmask)) == np.uint64(cval)
    i0 = idx[sel]
    i1 = i0 | tbit
    a0 = amps[i0]
    a1 = amps[i1]
    amps[i0] = u00 * a0 + u01 * a1
    amps[i1] = u10 * a0 + u11 * a1


def apply_2q(amps, pa, pb, u, cmask, cval):
    idx = _indices(amps.shape[0])
    abit = np.uint64(1 << pa)
    bbit = np.uint64(1 << pb)
    sel = ((idx & abit) == 0) & ((idx & bbit) == 0)
    if cmask:
        sel &= (idx & np.uint64(cmask)) == np.uint64(cval)
    i00 = idx[sel]
    rows = (amps[i00], amps[i00 | bbit], amps[i00 | abit], amps[i00 | abit | bbit])
    out = [u[4 * r] * rows[0] + u[4 * r + 1] * rows[1]
           + u[4 * r + 2] * rows[2] + u[4 * r + 3] * rows[3]
           for r in range(4)]
    amps[i00] = out[0]
    amps[i00 | bbit] = out[1]
    amps[i00 | abit] = out[2]
    amps[i00 | abit | bbit] = out[3]


def apply_xor_mask(amps, mask):
    if mask == 0:
        return
    idx = _indices(amps.shape[0])
    amps[:] = amps[idx ^ np.uint64(mask)]


def prob_one(amps, tpos):
    idx = _indices(amps.shape[0])
    sel = (idx & np.uint64(1 << tpos)) != 0
    a = amps[sel]
    return float(np.real(np.vdot(a, a)))


def prob_match(amps, mask, val):
    idx = _indices(amps.shape[0])
    sel = (idx & np.uint64(mask)) == np.uint64(val)
    a = amps[sel]
    return float(np.real(np.vdot(a, a)))


def inner(a, b):
    return complex(np.vdot(a, b))
