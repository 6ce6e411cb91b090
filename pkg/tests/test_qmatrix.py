import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_c_l1, brute_partial_trace, rand_density_array, rand_pure_array
from cohbound.errors import InputError, NumericError, SizeError
from cohbound.qmatrix import (
    DensityMatrix,
    StateVector,
    dagger,
    hermitian_eigenvalues,
    kron,
    partial_trace,
    permute_qubits,
    pure_to_density,
    validate_density,
)

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)


def valid(m):
    return validate_density(m).ok


# kron


def test_kron_identity():
    assert np.array_equal(kron(I2, I2), np.eye(4))


def test_kron_diagonal():
    assert np.array_equal(kron(np.diag([1, 0]), np.diag([0, 1])), np.diag([0, 1, 0, 0]))


def test_kron_index_rule(rng):
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    r = kron(a, b)
    for i, j, k, l in np.ndindex(2, 2, 4, 4):
        assert abs(r[i * 4 + k, j * 4 + l] - a[i, j] * b[k, l]) < 1e-15


def test_kron_example_factors():
    from cohbound.ensembles import paper_example_factors

    f = [np.outer(v, v.conj()) for v in paper_example_factors()]
    rho = kron(kron(f[0], f[1]), f[2])
    assert rho.shape == (8, 8)
    assert brute_c_l1(rho) == pytest.approx(11 / 5, abs=1e-12)


def test_kron_size_error():
    with pytest.raises(SizeError):
        kron(np.eye(64), np.eye(128))
    assert kron(np.eye(2), np.eye(4), max_dim=8).shape == (8, 8)


gauss_int = st.builds(complex, st.integers(-9, 9), st.integers(-9, 9))


def int_matrix(d):
    return st.lists(gauss_int, min_size=d * d, max_size=d * d).map(
        lambda v: np.array(v, dtype=complex).reshape(d, d)
    )


@given(int_matrix(2), int_matrix(2), int_matrix(3))
def test_kron_associative_exact(a, b, c):
    assert np.array_equal(kron(kron(a, b), c), kron(a, kron(b, c)))


def test_kron_associative_float(rng):
    a, b, c = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(3))
    left, right = kron(kron(a, b), c), kron(a, kron(b, c))
    assert np.max(np.abs(left - right)) <= 1e-15 * np.max(np.abs(left))


# dagger


def test_dagger_examples(rng):
    assert np.array_equal(dagger(np.eye(3)), np.eye(3))
    assert np.array_equal(dagger(np.array([[0, 1], [0, 0]])), np.array([[0, 0], [1, 0]]))
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    assert np.array_equal(dagger(dagger(a)), a)
    assert np.array_equal(dagger(a), a.conj().T)


# permute_qubits


def test_permute_identity_and_involution(rng):
    rho = DensityMatrix(3, rand_density_array(rng, 3))
    assert np.array_equal(permute_qubits(rho, [1, 2, 3]).matrix, rho.matrix)
    twice = permute_qubits(permute_qubits(rho, [2, 1, 3]), [2, 1, 3])
    assert np.array_equal(twice.matrix, rho.matrix)


def test_permute_swaps_product_factors(rng):
    s, t = rand_density_array(rng, 1), rand_density_array(rng, 1)
    swapped = permute_qubits(kron(s, t), [2, 1]).matrix
    # brute-force relabeling: index (b1 b2) -> (b2 b1)
    expect = np.zeros((4, 4), dtype=complex)
    for i, j in np.ndindex(4, 4):
        si = ((i & 1) << 1) | (i >> 1)
        sj = ((j & 1) << 1) | (j >> 1)
        expect[i, j] = kron(s, t)[si, sj]
    assert np.allclose(swapped, expect, atol=0)
    assert np.allclose(swapped, kron(t, s), atol=1e-15)


def test_permute_rejects_non_bijection():
    with pytest.raises(InputError):
        permute_qubits(np.eye(4) / 4, [1, 1])
    with pytest.raises(InputError):
        permute_qubits(np.eye(4) / 4, [1, 3])


def test_permute_preserves_spectrum_trace_coherence(rng):
    for n in (2, 3, 4):
        rho = DensityMatrix(n, rand_density_array(rng, n, rank=2))
        perm = list(rng.permutation(n) + 1)
        p = permute_qubits(rho, perm)
        assert np.allclose(hermitian_eigenvalues(p), hermitian_eigenvalues(rho), atol=1e-10)
        assert abs(np.trace(p.matrix) - np.trace(rho.matrix)) < 1e-14
        assert brute_c_l1(p.matrix) == pytest.approx(brute_c_l1(rho.matrix), abs=1e-12)


# partial_trace


def test_partial_trace_bell():
    bell = StateVector(2, np.array([1, 0, 0, 1]) / math.sqrt(2))
    assert np.allclose(partial_trace(pure_to_density(bell), [1]).matrix, I2 / 2, atol=1e-15)


def test_partial_trace_product(rng):
    s, t = rand_density_array(rng, 1), rand_density_array(rng, 1)
    assert np.allclose(partial_trace(kron(s, t), [1]).matrix, s, atol=1e-15)
    assert np.allclose(partial_trace(kron(s, t), [2]).matrix, t, atol=1e-15)


def test_partial_trace_example_tail():
    from cohbound.ensembles import paper_example_state

    tail = partial_trace(pure_to_density(paper_example_state()), [2, 3])
    assert brute_c_l1(tail.matrix) == pytest.approx(3 / 5, abs=1e-12)


def test_partial_trace_matches_brute_force(rng):
    for n in (2, 3, 4):
        rho = rand_density_array(rng, n)
        for size in range(1, n + 1):
            keep = sorted(rng.choice(np.arange(1, n + 1), size=size, replace=False))
            assert np.allclose(
                partial_trace(rho, keep).matrix, brute_partial_trace(rho, n, keep), atol=1e-14
            )


def test_partial_trace_empty_keep():
    with pytest.raises(InputError):
        partial_trace(np.eye(4) / 4, [])


def test_partial_trace_preserves_validity_random(rng):
    for trial in range(1000):
        n = 2 + trial % 5
        if trial % 2:
            v = rand_pure_array(rng, n)
            rho = np.outer(v, v.conj())
        else:
            rho = rand_density_array(rng, n, rank=1 + trial % 4)
        keep = sorted(rng.choice(np.arange(1, n + 1), size=rng.integers(1, n + 1), replace=False))
        red = partial_trace(rho, keep)
        assert abs(np.trace(red.matrix) - 1) < 1e-12
        assert valid(red)


def test_partial_trace_composition(rng):
    for _ in range(50):
        n = rng.integers(3, 6)
        rho = rand_density_array(rng, n, rank=3)
        s = sorted(rng.choice(np.arange(1, n + 1), size=rng.integers(1, n), replace=False))
        rest = [q for q in range(1, n + 1) if q not in s]
        extra = sorted(rng.choice(rest, size=rng.integers(1, len(rest) + 1), replace=False))
        bigger = sorted(s + extra)
        inner = partial_trace(rho, bigger)
        # positions of s inside the reduced system
        local = [bigger.index(q) + 1 for q in s]
        assert np.allclose(partial_trace(inner, local).matrix, partial_trace(rho, s).matrix, atol=1e-14)


# pure_to_density


def test_pure_to_density_examples():
    assert np.array_equal(pure_to_density([1, 0]).matrix, np.diag([1, 0]))
    plus = pure_to_density(np.array([1, 1]) / math.sqrt(2)).matrix
    assert np.allclose(plus, 0.5, atol=1e-15)


def test_pure_to_density_rank_one(rng):
    rho = pure_to_density(rand_pure_array(rng, 3)).matrix
    assert np.allclose(rho @ rho, rho, atol=1e-14)
    assert np.linalg.matrix_rank(rho, tol=1e-10) == 1


def test_pure_to_density_rejects_unnormalized():
    with pytest.raises(InputError):
        pure_to_density(np.array([1.0, 1.0]))


# hermitian_eigenvalues


def test_eigenvalue_examples(rng):
    assert np.allclose(hermitian_eigenvalues(np.eye(4)), [1, 1, 1, 1])
    assert np.allclose(hermitian_eigenvalues(X), [-1, 1], atol=1e-14)
    rho = pure_to_density(rand_pure_array(rng, 2))
    assert np.allclose(hermitian_eigenvalues(rho), [0, 0, 0, 1], atol=1e-12)


def test_eigenvalues_sorted_sum_to_trace(rng):
    for d in (3, 8, 16, 32):
        g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        h = g + g.conj().T
        ev = hermitian_eigenvalues(h)
        assert np.all(np.diff(ev) >= 0)
        assert abs(ev.sum() - np.trace(h).real) < 1e-9


@settings(max_examples=200)
@given(
    st.floats(-10, 10), st.floats(-10, 10), st.floats(-10, 10), st.floats(-10, 10)
)
def test_eigenvalues_2x2_closed_form(a, c, br, bi):
    h = np.array([[a, br + 1j * bi], [br - 1j * bi, c]])
    disc = math.sqrt(((a - c) / 2) ** 2 + br * br + bi * bi)
    expect = [(a + c) / 2 - disc, (a + c) / 2 + disc]
    assert np.allclose(hermitian_eigenvalues(h), expect, atol=1e-10, rtol=0)


def test_eigenvalues_reject_non_hermitian():
    with pytest.raises(InputError):
        hermitian_eigenvalues(np.array([[0, 1], [0, 0]]))


def test_eigenvalues_nonconvergence():
    with pytest.raises(NumericError):
        hermitian_eigenvalues(X, max_sweeps=0)


# validate_density


def test_validate_examples():
    assert validate_density(I2 / 2).ok
    r = validate_density(np.diag([0.6, 0.6]))
    assert r.trace_defect == pytest.approx(0.2, abs=1e-15) and not r.ok
    r = validate_density(np.array([[0.5, 0.7], [0.7, 0.5]]))
    assert r.min_eigenvalue == pytest.approx(-0.2, abs=1e-12) and not r.ok
    r = validate_density(np.array([[0.5, 0.1], [0.2, 0.5]]))
    assert r.hermiticity_defect == pytest.approx(0.1) and not r.ok


def test_types_are_immutable(rng):
    psi = StateVector.from_array(rand_pure_array(rng, 2))
    with pytest.raises(ValueError):
        psi.amplitudes[0] = 0
    rho = pure_to_density(psi)
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 0


def test_type_shape_checks():
    with pytest.raises(InputError):
        StateVector(2, np.ones(3) / math.sqrt(3))
    with pytest.raises(InputError):
        DensityMatrix.from_array(np.eye(3) / 3)
    with pytest.raises(InputError):
        DensityMatrix(1, np.array([[np.nan, 0], [0, 1]]))
