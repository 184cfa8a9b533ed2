"""Cross-module verification suites.

Each suite exercises one relationship between the combinatorial, spectral,
and optimization layers (two independent routes to the same quantity
wherever possible) and reports pass/fail with counterexample dumps. The
acceptance tests and the ``verify`` CLI subcommand both run these.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .balance import (
    OUT,
    BalancedState,
    apply_switching,
    check_balance,
    current_balance_exact,
    frustration_exact,
)
from .graph import SignedGraph, delete_edges
from .optimize import (
    brute_force_opt,
    build_cep_index,
    cascade_state,
    delta_exact_excluding,
    greedy,
    peripheral_edges,
    pseudo_submodularity_check,
    randomized_greedy,
)
from .spectral import LaplacianView, edge_score, smallest_eigenpair, spectral_top, upper_bound_g


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0
    expected_failure: bool = False
    note: str = ""

    def line(self) -> str:
        if self.expected_failure:
            status = "XFAIL (known defect)" if not self.passed else "UNEXPECTED PASS"
        else:
            status = "PASS" if self.passed else "FAIL"
        msg = f"{status:22s} {self.name} ({self.checked} checks, {self.seconds:.1f}s)"
        if self.note:
            msg += f" -- {self.note}"
        return msg


def _finish(result: SuiteResult, start: float, max_failures: int = 5) -> SuiteResult:
    result.seconds = time.time() - start
    result.passed = not result.failures
    result.failures = result.failures[:max_failures]
    return result


# -- fixture generators --------------------------------------------------------


def random_connected_signed(n: int, extra: int, rng: random.Random) -> SignedGraph:
    """Random spanning tree plus ``extra`` chords, signs uniform."""
    nodes = list(range(n))
    rng.shuffle(nodes)
    edges = set()
    for i in range(1, n):
        u, v = nodes[i], nodes[rng.randrange(i)]
        edges.add((min(u, v), max(u, v)))
    pool = [
        (u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in edges
    ]
    rng.shuffle(pool)
    edges.update(pool[:extra])
    return SignedGraph(
        n, [(u, v, rng.choice([-1, 1])) for u, v in sorted(edges)]
    )


def iter_connected_edge_sets(n: int):
    """All edge subsets of K_n that connect all n labelled nodes."""
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    for bits in range(1 << len(pairs)):
        chosen = [pairs[i] for i in range(len(pairs)) if (bits >> i) & 1]
        if n > 1 and len(chosen) < n - 1:
            continue
        adj = {u: set() for u in range(n)}
        for u, v in chosen:
            adj[u].add(v)
            adj[v].add(u)
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        if len(seen) == n:
            yield chosen


def iter_all_signed_connected(max_nodes: int):
    """Every connected signed graph with up to ``max_nodes`` labelled nodes."""
    for n in range(1, max_nodes + 1):
        for edge_set in iter_connected_edge_sets(n):
            m = len(edge_set)
            for signbits in range(1 << m):
                yield SignedGraph(
                    n,
                    [
                        (u, v, 1 if (signbits >> i) & 1 else -1)
                        for i, (u, v) in enumerate(edge_set)
                    ],
                )


def unbalanced_fixture_family(
    seed: int = 20260809,
    exhaustive_max_nodes: int = 4,
    sampled_nodes: tuple[int, ...] = (5, 6, 7, 8),
    samples_per_size: int = 10,
):
    """Connected signed graphs with at least one node outside the largest
    balanced subgraph: exhaustive small ones plus a seeded sample."""
    fixtures = []
    for g in iter_all_signed_connected(exhaustive_max_nodes):
        state = current_balance_exact(g)
        if state.balanced_count < g.n:
            fixtures.append((g, state))
    rng = random.Random(seed)
    for n in sampled_nodes:
        produced = 0
        while produced < samples_per_size:
            g = random_connected_signed(n, rng.randint(0, n), rng)
            state = current_balance_exact(g)
            if state.balanced_count < g.n:
                fixtures.append((g, state))
                produced += 1
    return fixtures


# -- named fixtures from the problem's characterization ------------------------


def balanced_path4() -> SignedGraph:
    """Path a-b-c-d with the middle edge negative: balanced as a whole."""
    return SignedGraph(4, [(0, 1, 1), (1, 2, -1), (2, 3, 1)])


def nonsubmodular_fixture() -> tuple[SignedGraph, dict[str, int]]:
    """Blocked node v tied to one side by two positive edges and to the
    other by a third, plus a redundant interior edge.

    Returns the graph and the edge ids {e1, e2, e3, e4}: e1/e2 to side 1,
    e3 to side 2, e4 interior and removable.
    """
    g = SignedGraph(
        5,
        [
            (0, 1, 1),  # e4: interior, redundant
            (1, 2, 1),
            (0, 2, 1),
            (2, 3, -1),
            (0, 4, 1),  # e1
            (1, 4, 1),  # e2
            (3, 4, 1),  # e3
        ],
    )
    ids = {
        "e1": g.edge_id(0, 4),
        "e2": g.edge_id(1, 4),
        "e3": g.edge_id(3, 4),
        "e4": g.edge_id(0, 1),
    }
    return g, ids


def tightness_fixture() -> tuple[SignedGraph, list[int]]:
    """Instance on which the pseudo-submodularity ratio bound is tight.

    A complete signed 4-node core (sides {0,1} and {2,3}); node 4 is held
    out by two pulls toward each side and carries a pendant node 5; node 6
    is held out by one pull each way. Deleting R = both side-2 pulls of
    node 4 plus one pull of node 6 yields summed single gains 1 and joint
    gain 3.
    """
    g = SignedGraph(
        7,
        [
            (0, 1, 1),
            (2, 3, 1),
            (0, 2, -1),
            (0, 3, -1),
            (1, 2, -1),
            (1, 3, -1),
            (0, 4, 1),
            (1, 4, 1),
            (2, 4, 1),
            (3, 4, 1),
            (4, 5, 1),
            (0, 6, 1),
            (1, 6, -1),
        ],
    )
    r = [g.edge_id(2, 4), g.edge_id(3, 4), g.edge_id(1, 6)]
    return g, r


def component_cap_counterexample() -> tuple[SignedGraph, tuple[int, int]]:
    """Two blocked neighbours whose joint admission forms one component of
    size 2 while the balanced subgraph has only 3 nodes, refuting the
    claimed cap of half the subgraph size."""
    g = SignedGraph(
        5,
        [
            (0, 1, 1),
            (0, 3, -1),
            (0, 4, -1),
            (1, 2, 1),
            (1, 4, 1),
            (2, 3, 1),
            (3, 4, -1),
        ],
    )
    return g, (g.edge_id(0, 3), g.edge_id(1, 4))


# -- suites ---------------------------------------------------------------------


def suite_balance_spectrum(max_nodes: int = 5, tol: float = 1e-8) -> SuiteResult:
    """Smallest eigenvalue is zero exactly on balanced graphs, checked
    exhaustively over all small connected signed graphs."""
    start = time.time()
    res = SuiteResult("balance iff lambda1 == 0 (exhaustive)", True, 0)
    for g in iter_all_signed_connected(max_nodes):
        lam = smallest_eigenpair(LaplacianView(g), tol=tol).lambda1
        balanced = check_balance(g) is not None
        res.checked += 1
        if (abs(lam) <= tol) != balanced:
            res.failures.append(
                f"lam1={lam!r} balanced={balanced} edges={list(g.edges())}"
            )
    return _finish(res, start)


def suite_sandwich(samples: int = 500, seed: int = 11, tol: float = 1e-8) -> SuiteResult:
    """lambda1 <= frustration number <= frustration index."""
    start = time.time()
    res = SuiteResult("lambda1 <= nu <= epsilon sandwich", True, 0)
    rng = random.Random(seed)
    while res.checked < samples:
        n = rng.randint(2, 10)
        g = random_connected_signed(n, rng.randint(0, max(0, 18 - n + 1)), rng)
        if g.m > 18:
            continue
        lam = smallest_eigenpair(LaplacianView(g), tol=tol).lambda1
        fr = frustration_exact(g, max_nodes=10, max_edges=18)
        res.checked += 1
        if lam > fr.nu + tol or fr.nu > fr.epsilon:
            res.failures.append(
                f"lam1={lam} nu={fr.nu} eps={fr.epsilon} edges={list(g.edges())}"
            )
    return _finish(res, start)


def suite_switching(samples: int = 100, seed: int = 12, tol: float = 1e-8) -> SuiteResult:
    """Switching preserves the whole Laplacian spectrum and balance status."""
    start = time.time()
    res = SuiteResult("switching invariance of spectrum and balance", True, 0)
    rng = random.Random(seed)
    np_rng = np.random.default_rng(seed)
    for _ in range(samples):
        n = rng.randint(2, 64)
        g = random_connected_signed(n, rng.randint(0, 2 * n), rng)
        theta = np_rng.choice([-1, 1], size=n)
        h = apply_switching(g, theta)
        spec_g = np.linalg.eigvalsh(LaplacianView(g).to_dense())
        spec_h = np.linalg.eigvalsh(LaplacianView(h).to_dense())
        res.checked += 1
        if np.max(np.abs(spec_g - spec_h)) > tol:
            res.failures.append(f"spectrum moved by {np.max(np.abs(spec_g - spec_h))}")
        if (check_balance(g) is None) != (check_balance(h) is None):
            res.failures.append(f"balance status changed, n={n}")
    return _finish(res, start)


def suite_modularity_spectop(samples: int = 200, seed: int = 13) -> SuiteResult:
    """The eigenvalue-drop bound is modular, so one-shot top-b selection is
    exactly optimal for it. Modularity is checked in exact rational
    arithmetic; the top-b pick is compared against exhaustive search."""
    start = time.time()
    res = SuiteResult("modular bound + one-shot top-b optimality", True, 0)
    rng = random.Random(seed)
    for _ in range(samples):
        n = rng.randint(3, 10)
        g = random_connected_signed(n, rng.randint(0, 6), rng)
        eig = smallest_eigenpair(LaplacianView(g))
        edge_ids = list(range(g.m))
        scores = {e: Fraction(edge_score(eig.v, g.edge(e))) for e in edge_ids}
        x = rng.sample(edge_ids, rng.randint(0, min(3, g.m)))
        rest = [e for e in edge_ids if e not in x]
        y = rng.sample(rest, rng.randint(1, min(3, len(rest)))) if rest else []
        res.checked += 1
        # marginal of Y over X equals the sum of singleton marginals, exactly
        lam = Fraction(eig.lambda1)
        g_of = lambda s: lam - sum(scores[e] for e in s)
        lhs = g_of(set(x) | set(y)) - g_of(x)
        rhs = sum(g_of(set(x) | {e}) - g_of(x) for e in y)
        if lhs != rhs:
            res.failures.append(f"modularity broke: {lhs} != {rhs}")
        b = rng.randint(1, min(3, g.m))
        picked = spectral_top(g, edge_ids, b)
        best = max(
            itertools.combinations(edge_ids, b),
            key=lambda comb: sum(scores[e] for e in comb),
        )
        gap = float(sum(scores[e] for e in best) - sum(scores[e] for e in picked))
        if gap > 1e-9:  # equal bound value up to eigensolver noise
            res.failures.append(
                f"spectral_top suboptimal by {gap}: {picked} vs {best} "
                f"edges={list(g.edges())}"
            )
    return _finish(res, start)


def suite_eigenvalue_bound(samples: int = 200, seed: int = 14, tol: float = 1e-8) -> SuiteResult:
    """Exact lambda1 after deleting X never exceeds the one-solve bound."""
    start = time.time()
    res = SuiteResult("post-deletion lambda1 upper bound", True, 0)
    rng = random.Random(seed)
    for _ in range(samples):
        n = rng.randint(3, 12)
        g = random_connected_signed(n, rng.randint(0, 8), rng)
        eig = smallest_eigenpair(LaplacianView(g))
        x = rng.sample(range(g.m), rng.randint(1, min(4, g.m)))
        bound = upper_bound_g(eig, x, g)
        exact = smallest_eigenpair(LaplacianView(g, x)).lambda1
        res.checked += 1
        if exact > bound + tol:
            res.failures.append(
                f"lam1(H_X)={exact} > bound={bound} X={x} edges={list(g.edges())}"
            )
    return _finish(res, start)


def suite_nonmonotone_fixture() -> SuiteResult:
    """Balanced 4-path: whole graph balanced, any deletion hurts."""
    start = time.time()
    res = SuiteResult("deletions can hurt (4-path fixture)", True, 0)
    g = balanced_path4()
    delta = current_balance_exact(g).balanced_count
    res.checked += 1
    if delta != 4:
        res.failures.append(f"expected delta 4, got {delta}")
    for e in range(g.m):
        after = delta_exact_excluding(g, (e,))
        res.checked += 1
        if after > 3:
            res.failures.append(f"deleting edge {e} gave delta {after} > 3")
    return _finish(res, start)


def suite_counterexample_fixtures() -> SuiteResult:
    """The blocked-node construction breaks submodularity and proportional
    submodularity exactly as claimed."""
    start = time.time()
    res = SuiteResult("non-submodularity witnesses", True, 0)
    g, ids = nonsubmodular_fixture()
    e1, e2, e3, e4 = ids["e1"], ids["e2"], ids["e3"], ids["e4"]
    base = current_balance_exact(g).balanced_count
    f = lambda edges: delta_exact_excluding(g, edges) - base

    expected = {
        (e4,): 0,
        (e1, e4): 0,
        (e2, e4): 0,
        (e1, e2, e4): 1,
    }
    for edges, want in expected.items():
        res.checked += 1
        got = f(edges)
        if got != want:
            res.failures.append(f"f({sorted(edges)}) = {got}, expected {want}")

    # submodularity would need f(S+e)-f(S) >= f(T+e)-f(T) for S subset T
    s, t = (e4,), (e1, e4)
    res.checked += 1
    if not (f((e2, e4)) - f(s) < f((e1, e2, e4)) - f(t)):
        res.failures.append("submodularity violation did not reproduce")
    # proportional submodularity: |T|f(S)+|S|f(T) >= |SnT|f(SuT)+|SuT|f(SnT)
    s2, t2 = (e1, e4), (e2, e4)
    res.checked += 1
    lhs = 2 * f(s2) + 2 * f(t2)
    rhs = 1 * f((e1, e2, e4)) + 3 * f((e4,))
    if not lhs < rhs:
        res.failures.append(f"proportional-submodularity violation missing: {lhs} vs {rhs}")
    return _finish(res, start)


class _DeltaOracle:
    """Memoized exact balance of a fixed graph minus edge subsets."""

    def __init__(self, g: SignedGraph):
        self.g = g
        self.cache: dict[frozenset[int], int] = {}

    def __call__(self, removed) -> int:
        key = frozenset(removed)
        if key not in self.cache:
            self.cache[key] = delta_exact_excluding(self.g, key)
        return self.cache[key]


def _run_hypothesis_holds(
    oracle: _DeltaOracle, base: int, chosen: list[int], opt_set: tuple[int, ...]
) -> bool:
    """The guarantee proofs assume the optimal set keeps a positive summed
    marginal over every prefix of the algorithm's set; check that."""
    for i in range(len(chosen)):
        prefix = frozenset(chosen[:i])
        f_prefix = oracle(prefix) - base
        total = sum(
            oracle(prefix | {e}) - base - f_prefix for e in opt_set if e not in prefix
        )
        if total < 1:
            return False
    return True


def suite_approximation(
    fixtures=None,
    budgets: tuple[int, ...] = (1, 2, 3),
    rg_seeds: range = range(20),
) -> SuiteResult:
    """Greedy and randomized greedy meet the 1-exp(-gamma) guarantee against
    the exhaustive optimum on every run satisfying the guarantee's
    hypothesis (positive summed optimal marginals along the run)."""
    start = time.time()
    res = SuiteResult("greedy / randomized-greedy approximation ratio", True, 0)
    if fixtures is None:
        fixtures = unbalanced_fixture_family()
    inapplicable = 0
    for g, state in fixtures:
        candidates = peripheral_edges(g, state)
        if not candidates:
            continue
        oracle = _DeltaOracle(g)
        base = state.balanced_count
        for b in budgets:
            opt_set, delta_star = brute_force_opt(g, state, candidates, b)
            f_opt = delta_star - base
            if f_opt == 0:
                continue
            gamma = 4.0 / (4.0 + delta_star * (b - 1))
            factor = 1.0 - math.exp(-gamma)
            runs = [greedy(g, state, candidates, b)]
            runs += [randomized_greedy(g, state, candidates, b, s) for s in rg_seeds]
            for rep in runs:
                chosen = rep.deleted_edge_ids()
                if not _run_hypothesis_holds(oracle, base, chosen, opt_set):
                    inapplicable += 1
                    continue
                f_alg = oracle(chosen) - base
                res.checked += 1
                if f_alg + 1e-9 < factor * f_opt:
                    res.failures.append(
                        f"{rep.algorithm} seed={rep.seed} b={b}: f={f_alg} < "
                        f"{factor:.4f}*{f_opt} edges={list(g.edges())}"
                    )
    res.note = f"{inapplicable} runs outside the guarantee's hypothesis skipped"
    return _finish(res, start)


def suite_pseudo_submodularity(samples: int = 300, seed: int = 15) -> SuiteResult:
    """Summed single-edge gains bound the joint gain by the claimed ratio
    (on pairs satisfying the bound's hypothesis of a positive summed
    single gain), and the tightness construction achieves it exactly."""
    start = time.time()
    res = SuiteResult("pseudo-submodularity ratio bound", True, 0)
    rng = random.Random(seed)
    while res.checked < samples:
        n = rng.randint(4, 9)
        g = random_connected_signed(n, rng.randint(0, 6), rng)
        state = current_balance_exact(g)
        if state.balanced_count == g.n:
            continue
        per = peripheral_edges(g, state)
        if len(per) < 2:
            continue
        q = rng.sample(per, rng.randint(0, min(2, len(per) - 1)))
        state_q, _ = cascade_state(g, state, q)
        alive = np.ones(g.m, dtype=bool)
        alive[list(q)] = False
        per_q = [e for e in peripheral_edges(g, state_q, alive) if e not in q]
        if not per_q:
            continue
        r = rng.sample(per_q, rng.randint(1, min(3, len(per_q))))
        chk = pseudo_submodularity_check(g, state, q, r, semantics="exact")
        if chk.lhs < 1:
            continue  # outside the bound's effective hypothesis
        res.checked += 1
        if not chk.holds:
            res.failures.append(
                f"lhs={chk.lhs} rhs={chk.rhs} gamma={chk.gamma_bound} "
                f"Q={q} R={r} edges={list(g.edges())}"
            )

    # tightness construction: summed singles 1, joint 1 + (delta/2)*(|R|-1)/2,
    # measured as the cascading admissions the optimizers see
    g, r = tightness_fixture()
    state = current_balance_exact(g)
    chk = pseudo_submodularity_check(g, state, [], r, semantics="cascade")
    delta_hq = state.balanced_count
    want_rhs = 1 + ((delta_hq - 2) // 2 + 1) * (len(r) - 1) // 2
    res.checked += 1
    if chk.lhs != 1 or chk.rhs != want_rhs:
        res.failures.append(
            f"tightness fixture: lhs={chk.lhs} rhs={chk.rhs}, expected 1 and {want_rhs}"
        )
    res.checked += 1
    if Fraction(chk.lhs, chk.rhs) != Fraction(4, 4 + delta_hq * (len(r) - 1)):
        res.failures.append("tightness fixture is not tight against the ratio bound")
    return _finish(res, start)


def _admitted_max_component(g: SignedGraph, state: BalancedState, deleted) -> int:
    after, _ = cascade_state(g, state, deleted)
    added = {
        u
        for u in range(g.n)
        if state.labels[u] == OUT and after.labels[u] != OUT
    }
    dead = set(deleted)
    best = 0
    seen: set[int] = set()
    for root in sorted(added):
        if root in seen:
            continue
        comp = {root}
        seen.add(root)
        stack = [root]
        while stack:
            u = stack.pop()
            for v, _, eid in g.neighbors(u):
                if eid not in dead and v in added and v not in seen:
                    seen.add(v)
                    comp.add(v)
                    stack.append(v)
        best = max(best, len(comp))
    return best


def _pair_count_after(g: SignedGraph, state: BalancedState, deleted, x: int) -> int:
    alive = np.ones(g.m, dtype=bool)
    for e in deleted:
        alive[e] = False
    after, _ = cascade_state(g, state, deleted)
    if after.labels[x] != OUT:
        return 0
    return build_cep_index(g, after, alive).pair_count(x)


def _alpha(g: SignedGraph, state: BalancedState, deleted: tuple[int, ...]) -> int:
    """Nodes blocked by every single deletion yet freed by some subset."""
    count = 0
    for x in range(g.n):
        if state.labels[x] != OUT:
            continue
        if not all(_pair_count_after(g, state, (e,), x) > 0 for e in deleted):
            continue
        subsets = itertools.chain.from_iterable(
            itertools.combinations(deleted, k) for k in range(1, len(deleted) + 1)
        )
        if any(_pair_count_after(g, state, y, x) == 0 for y in subsets):
            count += 1
    return count


def _construction_valid(g: SignedGraph, state: BalancedState, edges: tuple[int, ...]) -> bool:
    """Some deletion order keeps every edge peripheral at its own step."""
    for order in itertools.permutations(edges):
        ok = True
        for j in range(len(order)):
            st_j, _ = cascade_state(g, state, order[:j])
            u, v, _ = g.edge(order[j])
            if (st_j.labels[u] == OUT) == (st_j.labels[v] == OUT):
                ok = False
                break
        if ok:
            return True
    return False


def _induction_fixture_cases(fixtures, max_set_size: int = 3):
    for g, state in fixtures:
        per = peripheral_edges(g, state)
        if not per:
            continue
        singles = {e: cascade_state(g, state, (e,))[1] for e in per}
        for size in range(1, max_set_size + 1):
            for edges in itertools.combinations(per, size):
                if not _construction_valid(g, state, edges):
                    continue
                yield g, state, edges, singles


def suite_induction_bound(fixtures=None, max_set_size: int = 3) -> SuiteResult:
    """The cascade gain of a deletion set is bounded by its summed single
    gains plus (largest admitted component) x (subset-freed node count);
    and that count stays below half the set size whenever some single gain
    is positive."""
    start = time.time()
    res = SuiteResult("induction bound on joint gains", True, 0)
    if fixtures is None:
        fixtures = unbalanced_fixture_family(samples_per_size=5)
    for g, state, edges, singles in _induction_fixture_cases(fixtures, max_set_size):
        f_joint = cascade_state(g, state, edges)[1]
        single_sum = sum(singles[e] for e in edges)
        maxcomp = _admitted_max_component(g, state, edges)
        alpha = _alpha(g, state, edges)
        res.checked += 1
        if f_joint > single_sum + maxcomp * alpha:
            res.failures.append(
                f"f(B)={f_joint} > {single_sum} + {maxcomp}*{alpha} "
                f"B={edges} edges={list(g.edges())}"
            )
        if single_sum >= 1 and 2 * alpha > len(edges) - 1:
            res.failures.append(
                f"alpha={alpha} exceeds (|B|-1)/2 with positive singles "
                f"B={edges} edges={list(g.edges())}"
            )
    return _finish(res, start)


def suite_component_cap(fixtures=None, max_set_size: int = 3) -> SuiteResult:
    """Claimed cap: largest admitted component <= half the balanced
    subgraph. False in general; two adjacent blocked nodes admitted
    together form one component above the cap. Kept as a documented
    expected failure."""
    start = time.time()
    res = SuiteResult("admitted-component cap (claimed <= delta/2)", True, 0)
    res.expected_failure = True
    if fixtures is None:
        fixtures = unbalanced_fixture_family(samples_per_size=5)
    for g, state, edges, _ in _induction_fixture_cases(fixtures, max_set_size):
        maxcomp = _admitted_max_component(g, state, edges)
        res.checked += 1
        if maxcomp > 0 and 2 * maxcomp > state.balanced_count:
            res.failures.append(
                f"component {maxcomp} > delta/2={state.balanced_count / 2} "
                f"B={edges} edges={list(g.edges())}"
            )
    res.note = f"{len(res.failures)}+ violations found (claim refuted)"
    return _finish(res, start, max_failures=3)


def suite_per_edge_gain_cap(fixtures=None) -> SuiteResult:
    """Single-edge cascade gains never exceed half the balanced subgraph."""
    start = time.time()
    res = SuiteResult("per-edge gain <= delta/2", True, 0)
    if fixtures is None:
        fixtures = unbalanced_fixture_family(samples_per_size=5)
    for g, state in fixtures:
        for e in peripheral_edges(g, state):
            gain = cascade_state(g, state, (e,))[1]
            res.checked += 1
            if 2 * gain > state.balanced_count:
                res.failures.append(
                    f"f(e)={gain} delta={state.balanced_count} e={g.edge(e)} "
                    f"edges={list(g.edges())}"
                )
    return _finish(res, start)


def suite_determinism(seed: int = 7) -> SuiteResult:
    """Fixed seeds give byte-identical reports and CSV rows across runs."""
    from .harness import ExperimentConfig, records_to_csv, run_experiment_on_graph

    start = time.time()
    res = SuiteResult("seeded runs are byte-identical", True, 0)
    rng = random.Random(seed)
    g = random_connected_signed(30, 25, rng)
    for algo in ("greedy", "rg", "min-cep", "random", "spec-top", "isa"):
        cfg = ExperimentConfig(
            dataset="fixture",
            algorithm=algo,
            budget=5,
            seed=3,
            timing=False,
        )
        rec1 = run_experiment_on_graph(g, cfg)
        rec2 = run_experiment_on_graph(g, cfg)
        csv1 = records_to_csv([rec1])
        csv2 = records_to_csv([rec2])
        res.checked += 1
        if csv1 != csv2 or rec1.to_json() != rec2.to_json():
            res.failures.append(f"{algo}: outputs differ between identical runs")
    return _finish(res, start)


def run_all(fast: bool = False) -> list[SuiteResult]:
    """Run every suite; ``fast`` shrinks the sample counts."""
    scale = 0.2 if fast else 1.0
    fixtures = unbalanced_fixture_family(
        samples_per_size=2 if fast else 10
    )
    small_fixtures = unbalanced_fixture_family(samples_per_size=2 if fast else 5)
    results = [
        suite_balance_spectrum(max_nodes=4 if fast else 5),
        suite_sandwich(samples=int(500 * scale) or 50),
        suite_switching(samples=int(100 * scale) or 20),
        suite_modularity_spectop(samples=int(200 * scale) or 40),
        suite_eigenvalue_bound(samples=int(200 * scale) or 40),
        suite_nonmonotone_fixture(),
        suite_counterexample_fixtures(),
        suite_approximation(fixtures=fixtures, rg_seeds=range(5 if fast else 20)),
        suite_pseudo_submodularity(samples=int(300 * scale) or 60),
        suite_induction_bound(fixtures=small_fixtures),
        suite_per_edge_gain_cap(fixtures=small_fixtures),
        suite_component_cap(fixtures=small_fixtures),
        suite_determinism(),
    ]
    return results


def overall_success(results: list[SuiteResult]) -> bool:
    """Expected failures count as success only while they keep failing."""
    for r in results:
        if r.expected_failure:
            if r.passed:
                return False
        elif not r.passed:
            return False
    return True
