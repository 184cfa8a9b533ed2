"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Criteria run at their stated tolerances and time budgets. Two caveats,
each pinned by a counterexample test in test_optimize.TestKnownDefects:
the approximation and ratio-bound checks apply on runs satisfying the
guarantee's own hypothesis (positive summed marginals of the optimal
set), and the admitted-component cap is a false claim kept as a strict
expected failure.
"""

from __future__ import annotations

import os
import statistics
from pathlib import Path

import pytest

from edgebalance import verify
from edgebalance.balance import max_balanced_heuristic
from edgebalance.graph import load_edge_list
from edgebalance.harness import ExperimentConfig, run_experiment_on_graph
from edgebalance.optimize import greedy, min_cep, peripheral_edges, random_baseline


def _report(number: int, result: verify.SuiteResult, cap_seconds: float):
    status = "PASS" if result.passed else "FAIL"
    print(f"criterion {number:02d} {status}: {result.name} "
          f"[{result.checked} checks in {result.seconds:.1f}s / cap {cap_seconds:.0f}s]")
    for failure in result.failures:
        print(f"    {failure}")
    assert result.seconds < cap_seconds, f"criterion {number} exceeded its time cap"
    assert result.passed, result.failures


def test_criterion_01_balance_spectrum_equivalence():
    _report(1, verify.suite_balance_spectrum(max_nodes=5, tol=1e-8), 60)


def test_criterion_02_sandwich_bound():
    _report(2, verify.suite_sandwich(samples=500, tol=1e-8), 120)


def test_criterion_03_switching_invariance():
    _report(3, verify.suite_switching(samples=100, tol=1e-8), 30)


def test_criterion_04_modularity_and_top_b_optimality():
    _report(4, verify.suite_modularity_spectop(samples=200), 60)


def test_criterion_05_edge_removal_bound():
    _report(5, verify.suite_eigenvalue_bound(samples=200, tol=1e-8), 60)


def test_criterion_06_nonmonotone_fixture():
    _report(6, verify.suite_nonmonotone_fixture(), 1)


def test_criterion_07_nonsubmodularity_fixtures():
    _report(7, verify.suite_counterexample_fixtures(), 1)


def test_criterion_08_approximation_guarantee():
    result = verify.suite_approximation(rg_seeds=range(20))
    _report(8, result, 600)


def test_criterion_09_pseudo_submodularity_bound():
    _report(9, verify.suite_pseudo_submodularity(samples=300), 300)


def test_criterion_10_induction_and_gain_bounds():
    fixtures = verify.unbalanced_fixture_family(samples_per_size=5)
    _report(10, verify.suite_induction_bound(fixtures=fixtures), 300)
    _report(10, verify.suite_per_edge_gain_cap(fixtures=fixtures), 300)


@pytest.mark.xfail(
    strict=True,
    reason="the claimed cap of half the balanced subgraph on admitted "
    "components is false: two adjacent blocked nodes admitted together "
    "exceed it (counterexample pinned in test_optimize.TestKnownDefects)",
)
def test_criterion_10_component_cap():
    fixtures = verify.unbalanced_fixture_family(samples_per_size=5)
    result = verify.suite_component_cap(fixtures=fixtures)
    print(f"criterion 10 (component cap) found {len(result.failures)}+ violations")
    assert result.passed


def _find_bitcoin_alpha() -> Path | None:
    candidates = [os.environ.get("EDGEBALANCE_BITCOINALPHA", "")]
    candidates += [
        "data/soc-sign-bitcoinalpha.csv",
        "data/bitcoinalpha.txt",
        "data/out.soc-sign-bitcoinalpha",
    ]
    for cand in candidates:
        if cand and Path(cand).exists():
            return Path(cand)
    return None


def test_criterion_11_medium_scale_smoke():
    path = _find_bitcoin_alpha()
    if path is None:
        print("criterion 11 SKIP: BitcoinAlpha file not present "
              "(set EDGEBALANCE_BITCOINALPHA to enable)")
        pytest.skip("optional dataset not available")
    import time

    text = path.read_text().replace(",", " ")
    g, _ = load_edge_list(text, sign_from_weight=True)
    from edgebalance.harness import select_target

    target = select_target(g, ExperimentConfig(dataset=str(path)))
    assert target.n == 3772
    state = max_balanced_heuristic(target)
    pool = peripheral_edges(target, state)
    t0 = time.time()
    rep_g = greedy(target, state, pool, 50)
    elapsed = time.time() - t0
    assert elapsed < 600
    path_vals = [rep_g.delta_initial] + rep_g.delta_trajectory
    assert all(a <= b for a, b in zip(path_vals, path_vals[1:]))
    rep_m = min_cep(target, state, pool, 50)
    randoms = [
        random_baseline(target, state, pool, 50, seed).delta_final for seed in range(5)
    ]
    assert rep_g.delta_final >= rep_m.delta_final >= statistics.median(randoms)
    print(f"criterion 11 PASS: greedy {rep_g.delta_final} >= min-cep "
          f"{rep_m.delta_final} >= random median {statistics.median(randoms)} "
          f"({elapsed:.0f}s)")


def test_criterion_12_determinism():
    _report(12, verify.suite_determinism(), 120)
