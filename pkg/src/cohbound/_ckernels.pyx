# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: xoshiro256++ streams, Box-Muller Gaussians, complex Jacobi.

Mirrors ``_pykernels`` function for function.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt, log, cos, sin, fabs
from libc.stdint cimport uint64_t

cnp.import_array()

cdef double TWO_PI = 6.283185307179586


cdef inline uint64_t _splitmix64(uint64_t* state) noexcept nogil:
    state[0] += 0x9E3779B97F4A7C15ULL
    cdef uint64_t z = state[0]
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline uint64_t _rotl(uint64_t x, int k) noexcept nogil:
    return (x << k) | (x >> (64 - k))


cdef inline uint64_t _next(uint64_t* s) noexcept nogil:
    cdef uint64_t result = _rotl(s[0] + s[3], 23) + s[0]
    cdef uint64_t t = s[1] << 17
    s[2] ^= s[0]
    s[3] ^= s[1]
    s[1] ^= s[2]
    s[0] ^= s[3]
    s[2] ^= t
    s[3] = _rotl(s[3], 45)
    return result


cdef void _seed_state(uint64_t seed, uint64_t stream, uint64_t* s) noexcept nogil:
    cdef uint64_t sm = seed ^ stream
    cdef uint64_t effective = _splitmix64(&sm)
    sm = effective
    cdef int i
    for i in range(4):
        s[i] = _splitmix64(&sm)


def xoshiro_u64(seed, stream, Py_ssize_t count):
    cdef uint64_t s[4]
    _seed_state(<uint64_t>seed, <uint64_t>stream, s)
    out = np.empty(count, dtype=np.uint64)
    cdef uint64_t[::1] view = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(count):
            view[i] = _next(s)
    return out


def complex_gaussians(seed, stream, Py_ssize_t count):
    cdef uint64_t s[4]
    _seed_state(<uint64_t>seed, <uint64_t>stream, s)
    out = np.empty(count, dtype=np.complex128)
    cdef double[::1] flat = out.view(np.float64)
    cdef Py_ssize_t i
    cdef double u1, u2, r, theta
    cdef double scale = 1.0 / 9007199254740992.0
    with nogil:
        for i in range(count):
            u1 = 1.0 - <double>(_next(s) >> 11) * scale
            u2 = <double>(_next(s) >> 11) * scale
            r = sqrt(-2.0 * log(u1))
            theta = TWO_PI * u2
            flat[2 * i] = r * cos(theta)
            flat[2 * i + 1] = r * sin(theta)
    return out


def jacobi_eigenvalues(a, double tol, int max_sweeps):
    cdef double complex[:, ::1] m = np.array(a, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t d = m.shape[0]
    cdef Py_ssize_t p, q, k
    cdef int sweep
    cdef double off, r, app, aqq, theta, t, c, s
    cdef double complex z, ph, akp, akq
    cdef bint converged = False

    with nogil:
        for sweep in range(max_sweeps + 1):
            off = 0.0
            for p in range(d):
                for q in range(d):
                    if p != q:
                        off += m[p, q].real * m[p, q].real + m[p, q].imag * m[p, q].imag
            if sqrt(off) <= tol:
                converged = True
                break
            if sweep == max_sweeps:
                break
            for p in range(d - 1):
                for q in range(p + 1, d):
                    z = m[p, q]
                    r = sqrt(z.real * z.real + z.imag * z.imag)
                    if r == 0.0:
                        continue
                    app = m[p, p].real
                    aqq = m[q, q].real
                    theta = (aqq - app) / (2.0 * r)
                    if fabs(theta) > 1e150:
                        t = 0.5 / theta
                    else:
                        t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                        if theta < 0.0:
                            t = -t
                    c = 1.0 / sqrt(t * t + 1.0)
                    s = t * c
                    ph = (z.real - 1j * z.imag) / r
                    for k in range(d):
                        if k == p or k == q:
                            continue
                        akp = m[k, p]
                        akq = m[k, q]
                        m[k, p] = c * akp - s * ph * akq
                        m[k, q] = s * akp + c * ph * akq
                        m[p, k] = m[k, p].real - 1j * m[k, p].imag
                        m[q, k] = m[k, q].real - 1j * m[k, q].imag
                    m[p, p] = app - t * r
                    m[q, q] = aqq + t * r
                    m[p, q] = 0.0
                    m[q, p] = 0.0

    diag = np.empty(d, dtype=np.float64)
    cdef double[::1] dv = diag
    for k in range(d):
        dv[k] = m[k, k].real
    return diag, (sweep if converged else max_sweeps), bool(converged)
