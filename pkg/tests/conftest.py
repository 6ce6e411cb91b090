"""Independent oracles shared by the test modules.

Everything here uses ``numpy.random.default_rng`` and explicit index loops, never
the package's own generators or reshaping tricks.
"""
import itertools

import numpy as np
import pytest

from cohbound.qmatrix import DensityMatrix


def rand_pure_array(rng, n):
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return v / np.linalg.norm(v)


def rand_density_array(rng, n, rank=None):
    d = 2**n
    g = rng.normal(size=(d, rank or d)) + 1j * rng.normal(size=(d, rank or d))
    w = g @ g.conj().T
    w = 0.5 * (w + w.conj().T)
    return w / np.trace(w).real


def brute_partial_trace(rho, n, keep):
    """Sum over traced-out bits, one matrix entry at a time. ``keep`` is 1-based."""
    keep = sorted(keep)
    traced = [q for q in range(1, n + 1) if q not in keep]
    dk = 2 ** len(keep)
    out = np.zeros((dk, dk), dtype=complex)

    def index(kbits, tbits):
        bits = {}
        for q, b in zip(keep, kbits):
            bits[q] = b
        for q, b in zip(traced, tbits):
            bits[q] = b
        return sum(bits[q] << (n - q) for q in range(1, n + 1))

    for a, kb_a in enumerate(itertools.product((0, 1), repeat=len(keep))):
        for b, kb_b in enumerate(itertools.product((0, 1), repeat=len(keep))):
            for tb in itertools.product((0, 1), repeat=len(traced)):
                out[a, b] += rho[index(kb_a, tb), index(kb_b, tb)]
    return out


def brute_c_l1(rho):
    d = rho.shape[0]
    return sum(abs(rho[i, j]) for i in range(d) for j in range(d) if i != j)


def dephase(rho, strengths):
    """Local dephasing: entries differing in bit ``q`` shrink by ``1 - strengths[q]``."""
    n = rho.n_qubits
    d = 2**n
    m = np.array(rho.matrix)
    for i in range(d):
        for j in range(d):
            for q, lam in enumerate(strengths):
                if ((i >> (n - 1 - q)) & 1) != ((j >> (n - 1 - q)) & 1):
                    m[i, j] *= 1.0 - lam
    return DensityMatrix(n, m)


def dephased_state(rng, n):
    """Random mixed or pure state with strongly dephased trailing qubits."""
    if rng.random() < 0.5:
        v = rand_pure_array(rng, n)
        base = DensityMatrix(n, np.outer(v, v.conj()))
    else:
        base = DensityMatrix(n, rand_density_array(rng, n, rank=2))
    keep = rng.choice([0.3, 0.1, 0.03])
    strengths = [0.0] + list(1.0 - keep * rng.random(n - 1) ** rng.choice([1, 2, 4]))
    return dephase(base, strengths)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    results = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            ok = outcome == "passed" and results.get(name, True)
            results[name] = ok
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(results, key=lambda s: int(s.split("_")[2])):
        terminalreporter.write_line(f"{'PASS' if results[name] else 'FAIL'}  {name}")
