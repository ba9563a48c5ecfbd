# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled gate kernels over a flat complex amplitude array.

All kernels address qubits by *bit position* (weight 2**pos in the array
index, position 0 = least significant). Control conditions are given as a
(mask, value) pair: an index i participates iff (i & cmask) == cval, which
covers plain controls, anti-controls, and no controls (0, 0). The target
bit positions must not appear in cmask. Loops are sequential so results
are bit-for-bit reproducible.
"""


def apply_1q(double complex[::1] amps,
             Py_ssize_t tpos,
             double complex u00, double complex u01,
             double complex u10, double complex u11,
             unsigned long long cmask, unsigned long long cval):
    cdef Py_ssize_t dim = amps.shape[0]
    cdef unsigned long long tbit = (<unsigned long long>1) << tpos
    cdef Py_ssize_t i
    cdef double complex a0, a1
    for i in range(dim):
        if (i & tbit) == 0 and (i & cmask) == cval:
            a0 = amps[i]
            a1 = amps[i | tbit]
            amps[i] = u00 * a0 + u01 * a1
            amps[i | tbit] = u10 * a0 + u11 * a1


def apply_2q(double complex[::1] amps,
             Py_ssize_t pa, Py_ssize_t pb,
             double complex[::1] u,
             unsigned long long cmask, unsigned long long cval):
    # u is a 16-entry row-major 4x4; local basis index is 2*bit_a + bit_b.
    cdef Py_ssize_t dim = amps.shape[0]
    cdef unsigned long long abit = (<unsigned long long>1) << pa
    cdef unsigned long long bbit = (<unsigned long long>1) << pb
    cdef Py_ssize_t i, i01, i10, i11
    cdef double complex v0, v1, v2, v3
    for i in range(dim):
        if (i & abit) == 0 and (i & bbit) == 0 and (i & cmask) == cval:
            i01 = i | bbit
            i10 = i | abit
            i11 = i | abit | bbit
            v0 = amps[i]
            v1 = amps[i01]
            v2 = amps[i10]
            v3 = amps[i11]
            amps[i] = u[0] * v0 + u[1] * v1 + u[2] * v2 + u[3] * v3
            amps[i01] = u[4] * v0 + u[5] * v1 + u[6] * v2 + u[7] * v3
            amps[i10] = u[8] * v0 + u[9] * v1 + u[10] * v2 + u[11] * v3
            amps[i11] = u[12] * v0 + u[13] * v1 + u[14] * v2 + u[15] * v3


def apply_xor_mask(double complex[::1] amps, unsigned long long mask):
    # Basis relabeling i -> i ^ mask; an involution, realized by swapping
    # each pair once (j > i exactly once per pair).
    cdef Py_ssize_t dim = amps.shape[0]
    cdef Py_ssize_t i, j
    cdef double complex tmp
    if mask == 0:
        return
    for i in range(dim):
        j = i ^ mask
        if j > i:
            tmp = amps[i]
            amps[i] = amps[j]
            amps[j] = tmp


def prob_one(double complex[::1] amps, Py_ssize_t tpos):
    cdef Py_ssize_t dim = amps.shape[0]
    cdef unsigned long long tbit = (<unsigned long long>1) << tpos
    cdef Py_ssize_t i
    cdef double p = 0.0
    cdef double complex a
    for i in range(dim):
        if i & tbit:
            a = amps[i]
            p += a.real * a.real + a.imag * a.imag
    return p


def prob_match(double complex[::1] amps,
               unsigned long long mask, unsigned long long val):
    cdef Py_ssize_t dim = amps.shape[0]
    cdef Py_ssize_t i
    cdef double p = 0.0
    cdef double complex a
    for i in range(dim):
        if (i & mask) == val:
            a = amps[i]
            p += a.real * a.real + a.imag * a.imag
    return p


def inner(double complex[::1] a, double complex[::1] b):
    cdef Py_ssize_t dim = a.shape[0]
    cdef Py_ssize_t i
    cdef double complex acc = 0
    for i in range(dim):
        acc += a[i].conjugate() * b[i]
    return acc
