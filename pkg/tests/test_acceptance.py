"""Acceptance suite: one test per criterion.

``conftest.pytest_terminal_summary`` prints a PASS/FAIL line for each.
"""
import io
import subprocess
import sys
import time
import timeit

import numpy as np

from conftest import brute_c_l1
from cohbound import bounds as B
from cohbound import harness as H
from cohbound.cli import run
from cohbound.coherence import CoherenceProfile, coherence_profile
from cohbound.ensembles import paper_example_state
from cohbound.qmatrix import pure_to_density

ALPHAS = (1.0, 1.5, 2.0, 3.0)
SAMPLES = 1000


def test_criterion_1_example_reproduction():
    rho = pure_to_density(paper_example_state())
    p = coherence_profile(rho)
    assert np.max(np.abs(np.array(p.C) - (1, 0, 3 / 5))) <= 1e-12
    assert np.max(np.abs(np.array(p.T) - (3 / 5, 3 / 5))) <= 1e-12
    oracle = brute_c_l1(rho.matrix)
    assert abs(oracle - 11 / 5) <= 1e-12
    assert abs(p.full - oracle) <= 1e-12
    per_call = min(timeit.repeat(lambda: coherence_profile(rho), number=50, repeat=5)) / 50
    assert per_call < 1e-3


def test_criterion_2_fig1_curves():
    start = time.perf_counter()
    rows = H.fig1_sweep(1.0, 3.0, 0.01)
    by = {r.alpha: r for r in rows}
    assert abs(by[1.0].y1 - 1.6) <= 1e-9 and abs(by[1.0].y2 - 1.6) <= 1e-9
    assert abs(by[2.0].y1 - 7.125625) <= 1e-9
    assert abs(by[2.0].y2 - 5.41) <= 1e-9
    assert len(rows) == 201
    # analytically equal at alpha = 1, so compare at the criterion's tolerance
    assert all(r.y1 >= r.y2 - 1e-9 for r in rows)
    assert all(r.y1 > r.y2 for r in rows if r.alpha > 1)
    assert time.perf_counter() - start < 1.0


def test_criterion_3_scalar_lemma():
    start = time.perf_counter()
    rng = np.random.default_rng(31)
    alpha = rng.uniform(1, 5, size=100_000)
    x = 1 - rng.random(100_000)  # (0, 1]
    t = x * rng.random(100_000)
    gaps = np.array([B.scalar_lemma_gap(a, xx, tt) for a, xx, tt in zip(alpha, x, t)])
    assert gaps.min() >= -1e-12
    ends = [abs(B.scalar_lemma_gap(a, xx, tt)) for a, xx in zip(alpha[:10_000], x[:10_000]) for tt in (0.0, xx)]
    assert max(ends) <= 1e-12
    assert time.perf_counter() - start < 5.0


def test_criterion_4_superadditivity_campaign():
    start = time.perf_counter()
    for kind in ("pure", "ginibre"):
        for n in (2, 3, 4, 5):
            rep = H.verify_superadditivity(H.EnsembleSpec(kind, 404), n, SAMPLES).report
            assert rep.total == SAMPLES * (n + 1)
            assert rep.violated == 0, (kind, n, rep.min_residual)
    assert time.perf_counter() - start < 60.0


CHECKED_VARIANTS = ("thm1", "thm3", "thm2_proof_consistent", "thm4_proof_consistent")


def test_criterion_5_theorem_validity():
    # random pure and Ginibre states rarely meet the ratio conditions; the
    # non-vacuous checks live in test_bounds and test_harness
    start = time.perf_counter()
    feasible = 0
    for kind in ("pure", "ginibre"):
        for n in (3, 4, 5):
            camp = H.verify_theorems(H.EnsembleSpec(kind, 505), n, SAMPLES, ALPHAS, betas=(1.0, 2.0))
            for r in camp.records:
                if r.variant not in CHECKED_VARIANTS or r.verdict == "infeasible":
                    continue
                feasible += 1
                assert r.actual >= r.claimed - 1e-9, r
    elapsed = time.perf_counter() - start
    print(f"criterion 5: {feasible} feasible evaluations in {elapsed:.1f}s")
    assert elapsed < 120.0


def random_profile(rng, n):
    return CoherenceProfile.from_values(rng.random(n), rng.random(n - 1), 1 + rng.random())


def test_criterion_6_reduction_identities():
    start = time.perf_counter()
    rng = np.random.default_rng(66)
    for _ in range(100):
        n = int(rng.integers(3, 7))
        p = random_profile(rng, n)
        alpha, beta, x = rng.uniform(1, 4), rng.uniform(1, 3), rng.uniform(0.05, 1)
        m = int(rng.integers(1, n - 1))
        par = B.BoundParams.make(alpha, x=x, m=m)
        t1 = B.thm1_bound(p, par, check=False).value
        assert abs(B.thm3_bound(p, par, check=False).value - t1) <= 1e-12
        for v in ("as_printed", "proof_consistent"):
            t2 = B.thm2_bound(p, par, v, check=False).value
            assert abs(B.thm4_bound(p, par, v, check=False).value - t2) <= 1e-12
        eq4 = B.prior_bound_eq4(p, alpha, m, check=False).value
        assert abs(B.thm1_bound(p, B.BoundParams.make(alpha, x=1.0, m=m), check=False).value - eq4) <= 1e-12
        assert abs(B.prior_bound_eq5(p, alpha, 1.0, m, check=False).value - eq4) <= 1e-12
        one = B.BoundParams.make(1.0, beta=beta, x=x, m=m)
        total = sum(c**beta for c in p.C)
        values = [
            B.thm3_bound(p, one, check=False).value,
            B.thm4_bound(p, one, "as_printed", check=False).value,
            B.thm4_bound(p, one, "proof_consistent", check=False).value,
        ]
        plain = sum(p.C)
        values_b1 = [
            B.thm1_bound(p, B.BoundParams.make(1.0, x=x, m=m), check=False).value,
            B.prior_bound_eq4(p, 1.0, m, check=False).value,
            B.prior_bound_eq5(p, 1.0, x, m, check=False).value,
            B.thm2_bound(p, one, "as_printed", check=False).value,
        ]
        assert max(abs(v - total) for v in values) <= 1e-12
        assert max(abs(v - plain) for v in values_b1) <= 1e-12
    assert time.perf_counter() - start < 1.0


def test_criterion_7_tightness_dominance():
    start = time.perf_counter()
    table = H.tightness_compare(H.EnsembleSpec("product", 77), 3, 300)
    assert table.count > 0
    assert table.min_ratio >= 1 - 1e-12
    example = coherence_profile(paper_example_state())
    for alpha in ALPHAS:
        assert min(H.tightness_ratios(example, alpha)) >= 1 - 1e-12
    ks = np.linspace(1e-3, 1, 1000)
    for alpha in (1.0, 1.5, 2.0, 3.0, 5.0):
        for k in ks:
            assert B.q_coeff(alpha, k * k) >= B.q_coeff(alpha, k) - 1e-12
    assert time.perf_counter() - start < 5.0


def test_criterion_8_discrepancy_audit(tmp_path):
    path = tmp_path / "example.state"
    assert run(["example", str(path)], io.StringIO()) == 0
    start = time.perf_counter()
    out = io.StringIO()
    code = run(["audit", str(path), "--alpha", "2", "--k", "0.8", "--delta", "2"], out)
    elapsed = time.perf_counter() - start
    lines = {l.split()[0]: l for l in out.getvalue().splitlines() if l.startswith("  thm2")}
    printed, proof = lines["thm2_as_printed"], lines["thm2_proof_consistent"]
    assert "claimed=7.125625 " in printed and "actual=4.84 " in printed
    assert "verdict=violated" in printed
    assert "claimed=2.485 " in proof and "verdict=holds" in proof
    assert code == 1
    assert elapsed < 1.0


def test_criterion_9_determinism(tmp_path):
    outputs = []
    for tag in ("a", "b"):
        csv_path = tmp_path / f"{tag}.csv"
        proc = subprocess.run(
            [sys.executable, "-m", "cohbound", "verify", "--ensemble", "ginibre", "--n", "4",
             "--samples", "200", "--seed", "7", "--alphas", "1,2", "--csv", str(csv_path)],
            capture_output=True,
        )
        assert proc.returncode in (0, 1)
        outputs.append((proc.stdout, csv_path.read_bytes()))
    assert outputs[0][0] and outputs[0][1]
    assert outputs[0] == outputs[1]
