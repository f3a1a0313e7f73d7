# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled power-iteration loop; semantics match kernels._power_log_radius_numpy."""

from libc.math cimport fabs, log
from libc.stdlib cimport free, malloc

DEF WINDOW = 12


def power_log_radius(double[::1] weights, long[::1] in_keys, long[::1] out_keys,
                     long n_keys, double tol, long max_iter):
    cdef Py_ssize_t n = weights.shape[0]
    cdef double *v = <double *> malloc(n * sizeof(double))
    cdef double *s = <double *> malloc(n_keys * sizeof(double))
    if v == NULL or s == NULL:
        if v != NULL:
            free(v)
        if s != NULL:
            free(s)
        raise MemoryError()

    cdef double ratios[WINDOW]
    cdef Py_ssize_t i
    cdef long it
    cdef double norm, est, est_prev, delta, acc
    cdef int have_prev = 0
    cdef int status = 1  # 0 ok, 1 no convergence, 2 collapsed

    for i in range(n):
        v[i] = 1.0 / n
    for i in range(WINDOW):
        ratios[i] = 0.0

    est = 0.0
    est_prev = 0.0
    delta = 0.0
    it = 0
    while it < max_iter:
        it += 1
        for i in range(n_keys):
            s[i] = 0.0
        for i in range(n):
            s[in_keys[i]] += v[i]
        norm = 0.0
        for i in range(n):
            v[i] = weights[i] * s[out_keys[i]]
            norm += v[i]
        if norm <= 0.0:
            if it <= 2:
                free(v)
                free(s)
                return float("-inf"), it, 0.0, 0
            status = 2
            break
        for i in range(n):
            v[i] /= norm
        ratios[it % WINDOW] = log(norm)
        acc = 0.0
        for i in range(WINDOW):
            acc += ratios[i]
        est = acc / WINDOW
        if have_prev and it > 2 * WINDOW:
            delta = fabs(est - est_prev)
            if fabs(est) > 1.0:
                delta /= fabs(est)
            if delta <= tol:
                status = 0
                break
        est_prev = est
        have_prev = 1

    free(v)
    free(s)
    return est, it, delta, status
