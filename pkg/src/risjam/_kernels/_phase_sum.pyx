# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled coherent phase-sum kernel (the hot loop of every power measurement)."""

from libc.math cimport cos, sin


def coherent_sum(const double[::1] amp, const double[::1] psi, const double[::1] theta):
    """Return sum_k amp[k] * exp(-1j * (psi[k] + theta[k])) as a complex scalar."""
    cdef Py_ssize_t k, n = amp.shape[0]
    cdef double ph, re = 0.0, im = 0.0
    if psi.shape[0] != n or theta.shape[0] != n:
        raise ValueError("amp, psi, theta must have equal length")
    for k in range(n):
        ph = psi[k] + theta[k]
        re += amp[k] * cos(ph)
        im -= amp[k] * sin(ph)
    return complex(re, im)
