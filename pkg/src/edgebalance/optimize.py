"""Budgeted edge-deletion optimizers with approximation-bound calculators.

Deleting a peripheral edge can free its outside endpoint from its
contradictory edge pairs, letting it (and a cascade of neighbors) join the
maintained balanced subgraph. The greedy family maximizes that per-step
gain; an exhaustive oracle and pseudo-submodularity checkers validate the
claimed guarantees on small instances.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Sequence

import numpy as np

from .balance import (
    OUT,
    V1,
    V2,
    BalancedState,
    OracleLimitError,
    _expand_inplace,
    _mask_connected,
    _mask_two_color,
    _sign_masks,
    _votes,
    current_balance_exact,
)
from .graph import SignedGraph
from .reports import BoundReport, DeletedEdge, SolutionReport


@dataclass(frozen=True)
class ConflictCounters:
    """Edge classes at one outside node: sign x side of the inside endpoint.

    ``pos_v1``/``neg_v1`` count positive/negative edges into side 1,
    ``pos_v2``/``neg_v2`` into side 2.
    """

    pos_v1: int = 0
    neg_v1: int = 0
    pos_v2: int = 0
    neg_v2: int = 0

    def pair_count(self) -> int:
        """Number of contradictory edge pairs at this node.

        Same-sign pairs straddling the two sides plus opposite-sign pairs
        into one side; equivalently (side-1 pulls) x (side-2 pulls).
        """
        return (
            self.pos_v1 * self.pos_v2
            + self.neg_v1 * self.neg_v2
            + self.pos_v1 * self.neg_v1
            + self.pos_v2 * self.neg_v2
        )

    def votes(self) -> tuple[int, int]:
        return self.pos_v1 + self.neg_v2, self.pos_v2 + self.neg_v1

    def is_free(self) -> bool:
        v1, v2 = self.votes()
        return v1 == 0 or v2 == 0


class ConflictIndex:
    """Per-node conflict counters for every outside node touching the subgraph."""

    def __init__(self, counters: dict[int, ConflictCounters]):
        self.counters = counters

    def nodes(self) -> list[int]:
        return sorted(self.counters)

    def __getitem__(self, x: int) -> ConflictCounters:
        return self.counters.get(x, ConflictCounters())

    def pair_count(self, x: int) -> int:
        return self[x].pair_count()


def build_cep_index(
    g: SignedGraph, state: BalancedState, alive: np.ndarray | None = None
) -> ConflictIndex:
    """Count edge classes for each outside node with a live edge into the subgraph."""
    counters: dict[int, list[int]] = {}
    labels = state.labels
    for eid in range(g.m):
        if alive is not None and not alive[eid]:
            continue
        u, v, s = g.edge(eid)
        lu, lv = labels[u], labels[v]
        if (lu == OUT) == (lv == OUT):
            continue
        x, inside = (u, v) if lu == OUT else (v, u)
        slot = counters.setdefault(x, [0, 0, 0, 0])
        side = labels[inside]
        idx = (0 if s > 0 else 1) + (0 if side == V1 else 2)
        slot[idx] += 1
    return ConflictIndex(
        {x: ConflictCounters(*slot) for x, slot in counters.items()}
    )


def enumerate_cep_pairs(
    g: SignedGraph, state: BalancedState, x: int, alive: np.ndarray | None = None
) -> list[tuple[int, int]]:
    """Directly enumerate contradictory edge pairs at x (test oracle for
    the counter formula)."""
    labels = state.labels
    if labels[x] != OUT:
        return []
    incident = []
    for y, s, eid in g.neighbors(x):
        if alive is not None and not alive[eid]:
            continue
        if labels[y] != OUT:
            incident.append((eid, int(labels[y]), s))
    pairs = []
    for (e1, side1, s1), (e2, side2, s2) in combinations(incident, 2):
        contradiction = (
            (side1 != side2 and s1 == s2)
            or (side1 == side2 and s1 == -s2)
        )
        if contradiction:
            pairs.append((min(e1, e2), max(e1, e2)))
    return sorted(pairs)


def peripheral_edges(
    g: SignedGraph, state: BalancedState, alive: np.ndarray | None = None
) -> list[int]:
    """Edge ids with exactly one endpoint inside the balanced subgraph."""
    labels = state.labels
    out = []
    for eid in range(g.m):
        if alive is not None and not alive[eid]:
            continue
        u, v = int(g.edge_u[eid]), int(g.edge_v[eid])
        if (labels[u] == OUT) != (labels[v] == OUT):
            out.append(eid)
    return out


# -- maintained-state workspace ----------------------------------------------


class _Workspace:
    """Mutable labels + alive-edge mask used by the optimizer loops."""

    def __init__(self, g: SignedGraph, state: BalancedState, candidates: Iterable[int]):
        self.g = g
        self.labels = state.labels.copy()
        self.alive = np.ones(g.m, dtype=bool)
        self.candidates = set(candidates)
        for eid in self.candidates:
            if not 0 <= eid < g.m:
                raise ValueError(f"unknown candidate edge id {eid}")
        # saturate, in case the caller's state is not at a fixed point
        seeds = self._frontier()
        _expand_inplace(g, self.labels, self.alive, seeds)

    def _frontier(self) -> set[int]:
        seeds = set()
        for u in np.flatnonzero(self.labels != OUT):
            for v, _, eid in self.g.neighbors(int(u)):
                if self.alive[eid] and self.labels[v] == OUT:
                    seeds.add(v)
        return seeds

    @property
    def delta(self) -> int:
        return int(np.count_nonzero(self.labels != OUT))

    def out_endpoint(self, eid: int) -> int:
        u, v, _ = self.g.edge(eid)
        lu, lv = self.labels[u], self.labels[v]
        if (lu == OUT) == (lv == OUT):
            raise ValueError(f"edge {eid} is not peripheral")
        return u if lu == OUT else v

    def peripheral_candidates(self) -> list[int]:
        labels = self.labels
        pool = []
        for eid in sorted(self.candidates):
            if not self.alive[eid]:
                continue
            u, v = int(self.g.edge_u[eid]), int(self.g.edge_v[eid])
            if (labels[u] == OUT) != (labels[v] == OUT):
                pool.append(eid)
        return pool

    def votes_after_removal(self, eid: int) -> tuple[int, int]:
        """Votes at the outside endpoint once eid is deleted."""
        x = self.out_endpoint(eid)
        self.alive[eid] = False
        try:
            return _votes(self.g, self.labels, self.alive, x)
        finally:
            self.alive[eid] = True

    def eval_gain(self, eid: int) -> int:
        """Simulated cascade size for deleting eid; workspace untouched."""
        x = self.out_endpoint(eid)
        self.alive[eid] = False
        try:
            v1, v2 = _votes(self.g, self.labels, self.alive, x)
            if (v1 > 0) == (v2 > 0):
                return 0
            self.labels[x] = V1 if v1 > 0 else V2
            seeds = [
                y
                for y, _, k in self.g.neighbors(x)
                if self.alive[k] and self.labels[y] == OUT
            ]
            admitted = _expand_inplace(self.g, self.labels, self.alive, seeds)
            self.labels[x] = OUT
            for w in admitted:
                self.labels[w] = OUT
            return 1 + len(admitted)
        finally:
            self.alive[eid] = True

    def commit(self, eid: int) -> int:
        """Delete eid for real and cascade; returns admitted node count."""
        x = self.out_endpoint(eid)
        self.alive[eid] = False
        self.candidates.discard(eid)
        v1, v2 = _votes(self.g, self.labels, self.alive, x)
        if (v1 > 0) == (v2 > 0):
            return 0
        self.labels[x] = V1 if v1 > 0 else V2
        seeds = [
            y
            for y, _, k in self.g.neighbors(x)
            if self.alive[k] and self.labels[y] == OUT
        ]
        admitted = _expand_inplace(self.g, self.labels, self.alive, seeds)
        return 1 + len(admitted)

    def state(self) -> BalancedState:
        return BalancedState(self.labels.copy())


def marginal_gain(g: SignedGraph, state: BalancedState, eid: int) -> int:
    """Nodes admitted into the balanced subgraph if this peripheral edge
    were deleted; the state itself is untouched."""
    ws = _Workspace(g, state, ())
    return ws.eval_gain(eid)


# -- optimizer family ----------------------------------------------------------


def _edge_vote_side(g: SignedGraph, labels: np.ndarray, eid: int) -> int:
    """Which side the inside endpoint of this peripheral edge pulls toward."""
    u, v, s = g.edge(eid)
    inside = v if labels[u] == OUT else u
    pulls_v1 = (labels[inside] == V1) == (s > 0)
    return V1 if pulls_v1 else V2


def _grouped_gains(ws: _Workspace, pool: Sequence[int]) -> dict[int, int]:
    """Cascade gain per candidate, sharing vote counts per outside node."""
    by_x: dict[int, list[int]] = {}
    for eid in pool:
        by_x.setdefault(ws.out_endpoint(eid), []).append(eid)
    gains: dict[int, int] = {}
    for x, eids in by_x.items():
        v1, v2 = _votes(ws.g, ws.labels, ws.alive, x)
        for eid in eids:
            if _edge_vote_side(ws.g, ws.labels, eid) == V1:
                r1, r2 = v1 - 1, v2
            else:
                r1, r2 = v1, v2 - 1
            if (r1 > 0) == (r2 > 0):
                gains[eid] = 0
            else:
                gains[eid] = ws.eval_gain(eid)
    return gains


PickFn = Callable[[_Workspace, list[int], random.Random | None], int]


def _run_optimizer(
    g: SignedGraph,
    state: BalancedState,
    candidates: Iterable[int],
    b: int,
    algorithm: str,
    pick: PickFn,
    seed: int | None = None,
) -> SolutionReport:
    if b < 0:
        raise ValueError("budget must be >= 0")
    ws = _Workspace(g, state, candidates)
    rng = random.Random(seed) if seed is not None else None
    report = SolutionReport(algorithm=algorithm, budget=b, seed=seed)
    report.delta_initial = ws.delta
    start = time.perf_counter()
    for step in range(b):
        pool = ws.peripheral_candidates()
        if not pool:
            report.stopped_early = True
            break
        eid = pick(ws, pool, rng)
        gained = ws.commit(eid)
        u, v, s = g.edge(eid)
        report.deleted.append(DeletedEdge(eid, u, v, s))
        report.gains.append(gained)
        report.delta_trajectory.append(ws.delta)
        if gained == 0:
            report.zero_gain_steps.append(step)
    report.elapsed_seconds = time.perf_counter() - start
    report.bound = gamma_bounds(max(b, 1), report.delta_final)
    return report


def greedy(
    g: SignedGraph, state: BalancedState, candidates: Iterable[int], b: int
) -> SolutionReport:
    """Delete the highest-gain peripheral candidate b times.

    Ties break to the smallest edge id; when every gain is zero the
    smallest-id candidate is spent (flagged in the report).
    """

    def pick(ws: _Workspace, pool: list[int], rng) -> int:
        gains = _grouped_gains(ws, pool)
        return max(pool, key=lambda e: (gains[e], -e))

    return _run_optimizer(g, state, candidates, b, "greedy", pick)


def randomized_greedy(
    g: SignedGraph,
    state: BalancedState,
    candidates: Iterable[int],
    b: int,
    seed: int,
) -> SolutionReport:
    """Per round, pick uniformly among the b best positive-gain candidates.

    When no candidate has positive gain the round falls back to the
    smallest-id candidate, deterministically, like greedy. Letting the
    shortlist carry zero-gain filler would let unlucky seeds burn budget
    and lose the approximation guarantee. With b = 1 this degenerates to
    plain greedy.
    """

    def pick(ws: _Workspace, pool: list[int], rng: random.Random) -> int:
        gains = _grouped_gains(ws, pool)
        shortlist = sorted(
            (e for e in pool if gains[e] > 0), key=lambda e: (-gains[e], e)
        )[:b]
        if not shortlist:
            return min(pool)
        return shortlist[rng.randrange(len(shortlist))]

    return _run_optimizer(g, state, candidates, b, "rg", pick, seed=seed)


def min_cep(
    g: SignedGraph, state: BalancedState, candidates: Iterable[int], b: int
) -> SolutionReport:
    """Delete the candidate leaving the fewest contradictory pairs at its
    outside endpoint (ties to the smallest edge id)."""

    def pick(ws: _Workspace, pool: list[int], rng) -> int:
        def left_over(eid: int) -> int:
            v1, v2 = ws.votes_after_removal(eid)
            return v1 * v2

        return min(pool, key=lambda e: (left_over(e), e))

    return _run_optimizer(g, state, candidates, b, "min-cep", pick)


def random_baseline(
    g: SignedGraph,
    state: BalancedState,
    candidates: Iterable[int],
    b: int,
    seed: int,
) -> SolutionReport:
    """Delete uniformly random peripheral candidates."""

    def pick(ws: _Workspace, pool: list[int], rng: random.Random) -> int:
        return pool[rng.randrange(len(pool))]

    return _run_optimizer(g, state, candidates, b, "random", pick, seed=seed)


# -- exact oracle and bound machinery ------------------------------------------


def delta_exact_excluding(
    g: SignedGraph, excluded: Iterable[int], max_nodes: int = 16
) -> int:
    """Exact largest-balanced-subgraph size of the graph minus some edges."""
    if g.n > max_nodes:
        raise OracleLimitError(f"balance oracle limited to {max_nodes} nodes, got {g.n}")
    if g.n == 0:
        return 0
    pos, neg = _sign_masks(g, frozenset(excluded))
    adj = [p | q for p, q in zip(pos, neg)]
    for size in range(g.n, 0, -1):
        for comb in combinations(range(g.n), size):
            mask = 0
            for u in comb:
                mask |= 1 << u
            if _mask_connected(adj, mask) and _mask_two_color(pos, neg, mask) is not None:
                return size
    return 0


def brute_force_opt(
    g: SignedGraph,
    state: BalancedState,
    candidates: Sequence[int],
    b: int,
    max_subsets: int = 200_000,
    max_nodes: int = 16,
) -> tuple[tuple[int, ...], int]:
    """Exhaustively best deletion set of size <= b from the candidates.

    Returns (edge ids, exact balance after deletion). Ties prefer the
    lexicographically smallest set. Deleting fewer than b edges is allowed
    since deletions can hurt.
    """
    cands = sorted(set(candidates))
    total = sum(math.comb(len(cands), k) for k in range(min(b, len(cands)) + 1))
    if total > max_subsets:
        raise OracleLimitError(f"{total} subsets exceed the limit of {max_subsets}")
    best_set: tuple[int, ...] = ()
    best_delta = delta_exact_excluding(g, (), max_nodes)
    for k in range(1, min(b, len(cands)) + 1):
        for comb in combinations(cands, k):
            delta = delta_exact_excluding(g, comb, max_nodes)
            if delta > best_delta or (delta == best_delta and comb < best_set):
                best_delta = delta
                best_set = comb
    return best_set, best_delta


def gamma_bounds(
    b: int,
    delta_alg: int,
    delta_opt: int | None = None,
    psi: int | None = None,
) -> BoundReport:
    """Lower bounds on the approximation exponent from one run's numbers."""
    if b < 1:
        raise ValueError("budget must be >= 1")
    if delta_alg < 0 or (delta_opt is not None and delta_opt < 0):
        raise ValueError("balance values must be >= 0")
    if psi is not None and psi < 1:
        raise ValueError("psi must be >= 1")
    gamma_i = None if delta_opt is None else 4.0 / (4.0 + delta_opt * (b - 1))
    gamma_ii = 4.0 / (4.0 + delta_alg * (b - 1))
    gamma_iii = None if psi is None else 4.0 * psi / (4.0 * psi + delta_alg * (b - 1))
    return BoundReport(
        budget=b,
        delta_alg=delta_alg,
        delta_opt=delta_opt,
        psi=psi,
        gamma_i=gamma_i,
        gamma_ii=gamma_ii,
        gamma_iii=gamma_iii,
    )


def cascade_state(
    g: SignedGraph, state: BalancedState, deleted: Iterable[int]
) -> tuple[BalancedState, int]:
    """State after deleting edges and cascading admissions from the
    maintained subgraph; returns (new state, admitted count)."""
    labels = state.labels.copy()
    alive = np.ones(g.m, dtype=bool)
    for eid in deleted:
        alive[eid] = False
    seeds = set()
    for u in np.flatnonzero(labels != OUT):
        for v, _, eid in g.neighbors(int(u)):
            if alive[eid] and labels[v] == OUT:
                seeds.add(v)
    admitted = _expand_inplace(g, labels, alive, seeds)
    return BalancedState(labels), len(admitted)


@dataclass(frozen=True)
class PseudoSubmodularityCheck:
    """Summed single-edge gains vs the joint gain, with the claimed ratio."""

    lhs: int
    rhs: int
    gamma_bound: float
    holds: bool
    delta_hq: int


def pseudo_submodularity_check(
    g: SignedGraph,
    state: BalancedState,
    q_edges: Sequence[int],
    r_edges: Sequence[int],
    semantics: str = "exact",
    max_nodes: int = 16,
) -> PseudoSubmodularityCheck:
    """Verify sum of marginal gains of R over Q >= gamma * joint gain.

    ``semantics="exact"`` measures gains with the exhaustive balance oracle;
    ``"cascade"`` measures them as admissions cascading from the maintained
    state, which is how the optimizers experience them.
    """
    q = frozenset(q_edges)
    r = list(dict.fromkeys(r_edges))
    if q & set(r):
        raise ValueError("Q and R must be disjoint")
    if not r:
        raise ValueError("R must be nonempty")

    if semantics == "exact":
        base = delta_exact_excluding(g, q, max_nodes)
        lhs = sum(
            delta_exact_excluding(g, q | {e}, max_nodes) - base for e in r
        )
        rhs = delta_exact_excluding(g, q | set(r), max_nodes) - base
        delta_hq = base
    elif semantics == "cascade":
        state_q, _ = cascade_state(g, state, q)
        delta_hq = state_q.balanced_count
        alive_q = np.ones(g.m, dtype=bool)
        for eid in q:
            alive_q[eid] = False
        lhs = sum(cascade_state(g, state_q, q | {e})[1] for e in r)
        rhs = cascade_state(g, state_q, q | set(r))[1]
    else:
        raise ValueError(f"unknown semantics {semantics!r}")

    gamma = Fraction(4, 4 + delta_hq * (len(r) - 1))
    holds = Fraction(lhs) >= gamma * rhs
    return PseudoSubmodularityCheck(
        lhs=lhs, rhs=rhs, gamma_bound=float(gamma), holds=holds, delta_hq=delta_hq
    )
