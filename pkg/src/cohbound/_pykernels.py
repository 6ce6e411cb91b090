"""Pure-Python kernels. Reference semantics for the compiled core in ``_ckernels.pyx``.

Both modules expose the same four functions and must agree bit for bit on the
random streams; the eigensolvers agree to rounding.
"""
import math

import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
TWO_PI = 6.283185307179586


def splitmix64(state):
    """Advance a splitmix64 state once. Returns ``(new_state, output)``."""
    state = (state + GOLDEN_GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def _seed_state(seed, stream):
    _, effective = splitmix64((seed ^ stream) & MASK64)
    sm = effective
    s = []
    for _ in range(4):
        sm, out = splitmix64(sm)
        s.append(out)
    return s


def xoshiro_u64(seed, stream, count):
    s0, s1, s2, s3 = _seed_state(seed, stream)
    out = np.empty(count, dtype=np.uint64)
    for i in range(count):
        x = (s0 + s3) & MASK64
        out[i] = ((((x << 23) | (x >> 41)) & MASK64) + s0) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) | (s3 >> 19)) & MASK64
    return out


def complex_gaussians(seed, stream, count):
    """``count`` standard complex normals, one Box-Muller pair per entry."""
    raw = xoshiro_u64(seed, stream, 2 * count)
    out = np.empty(count, dtype=np.complex128)
    scale = 2.0 ** -53
    for i in range(count):
        u1 = 1.0 - (int(raw[2 * i]) >> 11) * scale
        u2 = (int(raw[2 * i + 1]) >> 11) * scale
        r = math.sqrt(-2.0 * math.log(u1))
        theta = TWO_PI * u2
        out[i] = complex(r * math.cos(theta), r * math.sin(theta))
    return out


def jacobi_eigenvalues(a, tol, max_sweeps):
    """Cyclic complex Jacobi on a Hermitian matrix.

    Returns ``(diagonal, sweeps, converged)``; the diagonal is unsorted.
    """
    a = np.array(a, dtype=np.complex128, copy=True)
    d = a.shape[0]
    for sweep in range(max_sweeps + 1):
        off = a.copy()
        np.fill_diagonal(off, 0.0)
        if math.sqrt(float(np.sum(off.real**2 + off.imag**2))) <= tol:
            return a.diagonal().real.copy(), sweep, True
        if sweep == max_sweeps:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                z = a[p, q]
                r = abs(z)
                if r == 0.0:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * r)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                ph = (z / r).conjugate()
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * ph * col_q
                a[:, q] = s * col_p + c * ph * col_q
                a[p, :] = a[:, p].conj()
                a[q, :] = a[:, q].conj()
                a[p, p] = app - t * r
                a[q, q] = aqq + t * r
                a[p, q] = 0.0
                a[q, p] = 0.0
    return a.diagonal().real.copy(), max_sweeps, False
