"""Seeded test-state generators.

All randomness comes from xoshiro256++ seeded through splitmix64:

* effective seed ``e = splitmix64(seed ^ stream)`` (one step from state ``seed ^ stream``)
* xoshiro state words ``s0..s3`` = the next four splitmix64 outputs from state ``e``
* a uniform double is ``(u >> 11) * 2**-53``
* a complex normal consumes two draws ``u1, u2``:
  ``r = sqrt(-2 log(1 - u1))``, ``z = r cos(2 pi u2) + i r sin(2 pi u2)``

Amplitude and matrix entries are filled in row-major order from a single
stream, so a ``SeedSpec`` fixes the output bit for bit.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InputError
from .qmatrix import DensityMatrix, StateVector, kron

MAX_QUBITS = 10
U64 = 2**64


@dataclass(frozen=True, order=True)
class SeedSpec:
    seed: int
    stream: int = 0

    def __post_init__(self):
        for name in ("seed", "stream"):
            v = getattr(self, name)
            if not 0 <= int(v) < U64:
                raise InputError(f"{name} must be a 64-bit unsigned integer, got {v}")

    def __str__(self):
        return f"{self.seed}:{self.stream}"


def _check_n(n, max_qubits=MAX_QUBITS):
    if not 1 <= n <= max_qubits:
        raise InputError(f"qubit count must lie in [1, {max_qubits}], got {n}")


def _normalized(g):
    return g / math.sqrt(float(np.sum(g.real**2 + g.imag**2)))


def random_pure(n, s):
    _check_n(n)
    g = _kernels.complex_gaussians(s.seed, s.stream, 2**n)
    return StateVector(n, _normalized(g))


def random_density(n, rank, s):
    """Ginibre state ``G G^dag / tr(G G^dag)`` with ``G`` of shape ``2^n x rank``."""
    _check_n(n)
    d = 2**n
    if not 1 <= rank <= d:
        raise InputError(f"rank must lie in [1, {d}], got {rank}")
    g = _kernels.complex_gaussians(s.seed, s.stream, d * rank).reshape(d, rank)
    w = g @ g.conj().T
    w = 0.5 * (w + w.conj().T)
    return DensityMatrix(n, w / np.trace(w).real)


def random_product_pure(n, s):
    _check_n(n)
    g = _kernels.complex_gaussians(s.seed, s.stream, 2 * n).reshape(n, 2)
    psi = np.ones(1, dtype=np.complex128)
    for row in g:
        psi = kron(psi, _normalized(row))
    return StateVector(n, psi)


def paper_example_factors():
    """The three single-qubit factors of the worked three-qubit example."""
    return (
        np.array([1.0, 1.0]) / math.sqrt(2.0),
        np.array([1.0, 0.0]),
        np.array([1.0, 3.0]) / math.sqrt(10.0),
    )


def paper_example_state():
    """``(|0>+|1>)/sqrt2 (x) |0> (x) (|0>+3|1>)/sqrt10``."""
    amps = np.zeros(8, dtype=np.complex128)
    a, b = 1.0 / math.sqrt(20.0), 3.0 / math.sqrt(20.0)
    amps[0b000], amps[0b001], amps[0b100], amps[0b101] = a, b, a, b
    return StateVector(3, amps)
