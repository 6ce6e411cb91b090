"""Dense complex matrices for multiqubit states.

Matrices are plain ``numpy.complex128`` arrays. ``StateVector`` and
``DensityMatrix`` are thin immutable wrappers that remember the qubit count.

Qubit 1 is the most significant bit of a basis index, so
``kron(rho_1, rho_2, ..., rho_n)`` lists parties in index order.
Parties are always numbered from 1.
"""
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InputError, NumericError, SizeError

MAX_DIM = 2**12

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
EIG_FLOOR = -1e-9

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100


def _frozen(arr):
    arr = np.array(arr, dtype=np.complex128, copy=True)
    arr.flags.writeable = False
    return arr


def _n_qubits_for(dim):
    n = int(dim).bit_length() - 1
    if dim < 1 or 2**n != dim:
        raise InputError(f"dimension {dim} is not a power of two")
    return n


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state on ``n_qubits`` qubits."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.ndim != 1 or amps.shape[0] != 2**self.n_qubits or self.n_qubits < 1:
            raise InputError(
                f"expected {2**self.n_qubits} amplitudes, got shape {amps.shape}"
            )
        if not np.all(np.isfinite(amps)):
            raise InputError("amplitudes must be finite")
        norm = float(np.sum(amps.real**2 + amps.imag**2))
        if abs(norm - 1.0) > NORM_TOL:
            raise InputError(f"state is not normalized (squared norm {norm!r})")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_array(cls, amplitudes):
        amps = np.asarray(amplitudes, dtype=np.complex128)
        if amps.ndim != 1:
            raise InputError("amplitudes must be a 1-D array")
        return cls(_n_qubits_for(amps.shape[0]), amps)

    @property
    def dim(self):
        return 2**self.n_qubits


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A ``2^n x 2^n`` matrix meant to be a density matrix.

    Only shape and finiteness are enforced here; positivity, trace and
    Hermiticity are checked by :func:`validate_density`.
    """

    n_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        mat = _frozen(self.matrix)
        d = 2**self.n_qubits
        if self.n_qubits < 1 or mat.shape != (d, d):
            raise InputError(f"expected a {d}x{d} matrix, got shape {mat.shape}")
        if not np.all(np.isfinite(mat)):
            raise InputError("matrix entries must be finite")
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def from_array(cls, matrix):
        mat = np.asarray(matrix, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise InputError(f"expected a square matrix, got shape {mat.shape}")
        return cls(_n_qubits_for(mat.shape[0]), mat)

    @property
    def dim(self):
        return 2**self.n_qubits


@dataclass(frozen=True)
class ValidationReport:
    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float
    ok: bool


def as_state(psi):
    if isinstance(psi, StateVector):
        return psi
    return StateVector.from_array(psi)


def as_density(rho):
    if isinstance(rho, DensityMatrix):
        return rho
    return DensityMatrix.from_array(rho)


def _as_matrix(a):
    if isinstance(a, DensityMatrix):
        return a.matrix
    if isinstance(a, StateVector):
        return a.amplitudes
    return np.asarray(a, dtype=np.complex128)


def kron(a, b, max_dim=MAX_DIM):
    """Kronecker product ``a (x) b``; vectors and matrices both work."""
    a = _as_matrix(a)
    b = _as_matrix(b)
    if a.shape[0] * b.shape[0] > max_dim:
        raise SizeError(
            f"kron dimension {a.shape[0] * b.shape[0]} exceeds maximum {max_dim}"
        )
    return np.kron(a, b)


def dagger(a):
    return np.ascontiguousarray(_as_matrix(a).conj().T)


def _check_perm(perm, n):
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(1, n + 1)):
        raise InputError(f"{perm} is not a permutation of 1..{n}")
    return perm


def permute_qubits(rho, perm):
    """Reorder parties: party ``i`` of the result is party ``perm[i-1]`` of ``rho``."""
    rho = as_density(rho)
    n = rho.n_qubits
    axes = [p - 1 for p in _check_perm(perm, n)]
    t = rho.matrix.reshape([2] * (2 * n))
    t = t.transpose(axes + [a + n for a in axes])
    return DensityMatrix(n, t.reshape(rho.dim, rho.dim))


def permute_state(psi, perm):
    psi = as_state(psi)
    n = psi.n_qubits
    axes = [p - 1 for p in _check_perm(perm, n)]
    t = psi.amplitudes.reshape([2] * n).transpose(axes)
    return StateVector(n, t.reshape(-1))


def partial_trace(rho, keep):
    """Reduced state on the parties in ``keep`` (1-based), in increasing order."""
    rho = as_density(rho)
    n = rho.n_qubits
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise InputError("keep must name at least one party")
    if keep[0] < 1 or keep[-1] > n:
        raise InputError(f"keep {keep} outside parties 1..{n}")
    if len(keep) == n:
        return rho
    kept = [k - 1 for k in keep]
    traced = [q for q in range(n) if q not in kept]
    dk = 2 ** len(kept)
    dt = 2 ** len(traced)
    t = rho.matrix.reshape([2] * (2 * n))
    t = t.transpose(kept + traced + [q + n for q in kept] + [q + n for q in traced])
    t = t.reshape(dk, dt, dk, dt)
    return DensityMatrix(len(kept), np.einsum("ijkj->ik", t))


def pure_to_density(psi):
    psi = as_state(psi)
    amps = psi.amplitudes
    return DensityMatrix(psi.n_qubits, np.outer(amps, amps.conj()))


def hermiticity_defect(a):
    a = _as_matrix(a)
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def hermitian_eigenvalues(a, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Eigenvalues of a Hermitian matrix, ascending, by cyclic Jacobi rotations.

    Rotations stop once the off-diagonal Frobenius norm is at most
    ``tol * max(1, ||a||_F)``.
    """
    a = _as_matrix(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputError(f"expected a square matrix, got shape {a.shape}")
    if hermiticity_defect(a) > 1e-8:
        raise InputError("matrix is not Hermitian within 1e-8")
    a = 0.5 * (a + a.conj().T)
    scale = max(1.0, float(np.linalg.norm(a)))
    diag, _, converged = _kernels.jacobi_eigenvalues(a, tol * scale, max_sweeps)
    if not converged:
        raise NumericError(f"Jacobi did not converge in {max_sweeps} sweeps")
    return np.sort(diag)


def validate_density(rho):
    m = _as_matrix(rho)
    herm = hermiticity_defect(m)
    trace_defect = float(abs(np.trace(m) - 1.0))
    eigs = hermitian_eigenvalues(0.5 * (m + m.conj().T))
    min_eig = float(eigs[0])
    ok = herm <= HERMITIAN_TOL and trace_defect <= TRACE_TOL and min_eig >= EIG_FLOOR
    return ValidationReport(herm, trace_defect, min_eig, bool(ok))
