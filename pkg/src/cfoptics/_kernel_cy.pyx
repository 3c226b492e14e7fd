# cython: language_level=3
# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled propagation kernel.

Must stay step-for-step identical to ``cfoptics._kernel_py.run_plan``; the
test suite asserts numerical agreement between the two backends.
"""

from libc.math cimport cos, sin

BACKEND = "cython"

# Opcodes mirror cfoptics._kernel_py.
DEF OP_SPLIT = 0
DEF OP_ABSORB = 1


def run_plan(const int[::1] ops, const int[::1] arg_a, const int[::1] arg_b,
             const double[::1] theta, double complex[::1] amps,
             double[::1] absorbed, double complex[:, ::1] snaps):
    """Execute a compiled element plan in place (see the pure kernel)."""
    cdef Py_ssize_t k, j
    cdef Py_ssize_t n_ops = ops.shape[0]
    cdef Py_ssize_t n_modes = amps.shape[0]
    cdef int code, a, b
    cdef double c, s
    cdef double complex za, zb
    cdef double complex I = 1j
    for k in range(n_ops):
        code = ops[k]
        a = arg_a[k]
        if code == OP_SPLIT:
            b = arg_b[k]
            c = cos(theta[k])
            s = sin(theta[k])
            za = amps[a]
            zb = amps[b]
            amps[a] = c * za + I * s * zb
            amps[b] = I * s * za + c * zb
        elif code == OP_ABSORB:
            za = amps[a]
            absorbed[arg_b[k]] += za.real * za.real + za.imag * za.imag
            amps[a] = 0
        else:
            for j in range(n_modes):
                snaps[a, j] = amps[j]
