"""l1-norm of coherence in the computational basis, and coherence profiles."""
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .qmatrix import (
    HERMITIAN_TOL,
    TRACE_TOL,
    StateVector,
    as_density,
    as_state,
    hermiticity_defect,
    partial_trace,
    permute_qubits,
    pure_to_density,
)

ZERO_FLOOR = 1e-13


@dataclass(frozen=True)
class CoherenceProfile:
    """Marginal and tail coherences under one party ordering.

    ``C[i]`` is the coherence of party ``ordering[i]`` alone and ``T[i]`` the
    coherence of the joint marginal of parties ``ordering[i+1:]`` (0-based
    tuples, so ``T[-1] == C[-1]``).
    """

    n: int
    ordering: tuple
    C: tuple
    T: tuple
    full: float

    def __post_init__(self):
        if len(self.C) != self.n or len(self.T) != self.n - 1:
            raise InputError("profile needs n marginal and n-1 tail coherences")
        if min(self.C + self.T + (self.full,)) < 0:
            raise InputError("coherences are nonnegative")

    @classmethod
    def from_values(cls, C, T, full, ordering=None):
        C = tuple(float(c) for c in C)
        n = len(C)
        if ordering is None:
            ordering = tuple(range(1, n + 1))
        return cls(n, tuple(ordering), C, tuple(float(t) for t in T), float(full))


def _offdiag_l1(m):
    a = np.abs(m)
    np.fill_diagonal(a, 0.0)
    return float(a.sum())


def c_l1(rho):
    """Sum of absolute values of the off-diagonal entries of ``rho``.

    Only the cheap invariants (Hermiticity, unit trace) are checked here;
    positivity is left to :func:`cohbound.qmatrix.validate_density`.
    """
    rho = as_density(rho)
    m = rho.matrix
    if hermiticity_defect(m) > HERMITIAN_TOL or abs(np.trace(m) - 1.0) > TRACE_TOL:
        raise InputError("not a density matrix (Hermiticity or trace defect)")
    return _offdiag_l1(m)


def c_l1_pure(psi):
    """Coherence of ``|psi><psi|`` as ``(sum_i |psi_i|)^2 - 1``."""
    psi = as_state(psi)
    s = float(np.sum(np.abs(psi.amplitudes)))
    return max(0.0, s * s - 1.0)


def _floor(value):
    return 0.0 if value < ZERO_FLOOR else value


def coherence_profile(rho, ordering=None):
    if isinstance(rho, StateVector):
        rho = pure_to_density(rho)
    rho = as_density(rho)
    n = rho.n_qubits
    if n < 2:
        raise InputError("a coherence profile needs at least two parties")
    if ordering is None:
        ordering = tuple(range(1, n + 1))
    ordering = tuple(int(o) for o in ordering)
    if ordering != tuple(range(1, n + 1)):
        rho = permute_qubits(rho, ordering)
    full = c_l1(rho)
    C = tuple(_floor(_offdiag_l1(partial_trace(rho, [i]).matrix)) for i in range(1, n + 1))
    T = tuple(
        _floor(_offdiag_l1(partial_trace(rho, range(i + 1, n + 1)).matrix))
        for i in range(1, n)
    )
    return CoherenceProfile(n, ordering, C, T, _floor(full))

