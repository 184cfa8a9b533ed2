"""Balance detection, switching transforms, and exact small-instance oracles.

The exact routines (`frustration_exact`, `current_balance_exact`) do
exhaustive subset search over bitmask-encoded subgraphs and are the ground
truth the heuristics and optimizers are validated against. They refuse to
run above configurable size limits.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .graph import SignedGraph, induced_subgraph

OUT = 0
V1 = 1
V2 = 2


class OracleLimitError(RuntimeError):
    """An exhaustive oracle was asked to run above its size limit."""


@dataclass(frozen=True)
class Bipartition:
    """Two-sided node labelling certifying balance.

    ``side[u]`` is 1 or 2; positive edges join equal sides, negative edges
    cross. Component roots (smallest node id) sit on side 1.
    """

    side: tuple[int, ...]

    def indicator(self) -> np.ndarray:
        """+1 on side 1, -1 on side 2."""
        return np.where(np.asarray(self.side) == V1, 1, -1)


@dataclass
class BalancedState:
    """Maintained connected balanced subgraph plus its two-sided labelling.

    ``labels[u]`` is 0 (outside), 1, or 2. The labelled nodes must induce a
    connected balanced subgraph; ``anchor`` is its smallest node id (-1 when
    empty).
    """

    labels: np.ndarray
    anchor: int = -1

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=np.int8)
        members = np.flatnonzero(self.labels != OUT)
        if members.size:
            if self.anchor < 0:
                self.anchor = int(members[0])
        else:
            self.anchor = -1

    @property
    def balanced_count(self) -> int:
        return int(np.count_nonzero(self.labels != OUT))

    def node_set(self) -> list[int]:
        return np.flatnonzero(self.labels != OUT).tolist()

    def side_nodes(self, side: int) -> list[int]:
        return np.flatnonzero(self.labels == side).tolist()

    def copy(self) -> "BalancedState":
        return BalancedState(self.labels.copy(), self.anchor)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BalancedState):
            return NotImplemented
        return self.anchor == other.anchor and np.array_equal(self.labels, other.labels)


@dataclass(frozen=True)
class FrustrationReport:
    """Exact frustration number/index with lexicographically smallest witnesses."""

    nu: int
    epsilon: int
    witness_nodes: tuple[int, ...]
    witness_edges: tuple[int, ...]


# -- balance checking --------------------------------------------------------


def check_balance(g: SignedGraph) -> Bipartition | None:
    """Two-color the graph if it is balanced, else None.

    BFS per component: a node discovered over a positive edge takes the
    discoverer's side, over a negative edge the opposite side.
    """
    side = [0] * g.n
    for root in range(g.n):
        if side[root]:
            continue
        side[root] = V1
        queue = [root]
        while queue:
            u = queue.pop()
            for v, s, _ in g.neighbors(u):
                want = side[u] if s > 0 else (V1 + V2 - side[u])
                if side[v] == 0:
                    side[v] = want
                    queue.append(v)
                elif side[v] != want:
                    return None
    return Bipartition(tuple(side))


def negative_cycle_witness(g: SignedGraph) -> list[int] | None:
    """Edge ids of a negative cycle, or None when the graph is balanced.

    The cycle is the BFS-tree fundamental cycle through the first edge that
    contradicts the greedy two-coloring.
    """
    side = [0] * g.n
    parent: dict[int, tuple[int, int]] = {}
    for root in range(g.n):
        if side[root]:
            continue
        side[root] = V1
        queue = [root]
        order = {root: 0}
        while queue:
            u = queue.pop(0)
            for v, s, eid in g.neighbors(u):
                want = side[u] if s > 0 else (V1 + V2 - side[u])
                if side[v] == 0:
                    side[v] = want
                    parent[v] = (u, eid)
                    order[v] = order[u] + 1
                    queue.append(v)
                elif side[v] != want:
                    path_u = _root_path(u, parent)
                    path_v = _root_path(v, parent)
                    while len(path_u) > 1 and len(path_v) > 1 and path_u[-2][0] == path_v[-2][0]:
                        path_u.pop()
                        path_v.pop()
                    cycle = [eid]
                    cycle += [e for _, e in path_u[:-1]]
                    cycle += [e for _, e in path_v[:-1]]
                    return sorted(set(cycle))
    return None


def _root_path(u: int, parent: dict[int, tuple[int, int]]) -> list[tuple[int, int]]:
    # (node, edge-into-node) pairs from u up to its BFS root
    path = [(u, -1)]
    while path[-1][0] in parent:
        p, eid = parent[path[-1][0]]
        path[-1] = (path[-1][0], eid)
        path.append((p, -1))
    return path


def apply_switching(g: SignedGraph, theta: Sequence[int] | np.ndarray) -> SignedGraph:
    """Resign every edge (u,v) to theta[u]*sign*theta[v]; topology unchanged."""
    th = np.asarray(theta, dtype=np.int64)
    if th.shape != (g.n,):
        raise ValueError("theta must assign +-1 to every node")
    if not np.all(np.abs(th) == 1):
        raise ValueError("theta values must be -1 or +1")
    edges = [
        (int(u), int(v), int(th[u] * s * th[v]))
        for u, v, s in zip(g.edge_u, g.edge_v, g.edge_sign)
    ]
    return SignedGraph(g.n, edges, labels=g.labels)


# -- bitmask helpers for the exact oracles -----------------------------------


def _sign_masks(g: SignedGraph, removed_edges: frozenset[int] = frozenset()):
    pos = [0] * g.n
    neg = [0] * g.n
    for eid in range(g.m):
        if eid in removed_edges:
            continue
        u, v, s = int(g.edge_u[eid]), int(g.edge_v[eid]), int(g.edge_sign[eid])
        if s > 0:
            pos[u] |= 1 << v
            pos[v] |= 1 << u
        else:
            neg[u] |= 1 << v
            neg[v] |= 1 << u
    return pos, neg


def _mask_connected(adj: list[int], mask: int) -> bool:
    if mask == 0:
        return True
    seen = mask & -mask
    frontier = seen
    while frontier:
        nxt = 0
        rest = frontier
        while rest:
            bit = rest & -rest
            rest ^= bit
            nxt |= adj[bit.bit_length() - 1]
        frontier = nxt & mask & ~seen
        seen |= frontier
    return seen == mask


def _mask_two_color(pos: list[int], neg: list[int], mask: int) -> int | None:
    """Side-1 mask of a balanced 2-coloring of ``mask``, or None."""
    side1 = 0
    side2 = 0
    todo = mask
    while todo:
        root = todo & -todo
        s1, s2 = root, 0
        f1, f2 = root, 0
        while f1 | f2:
            n1 = n2 = 0
            rest = f1
            while rest:
                bit = rest & -rest
                rest ^= bit
                u = bit.bit_length() - 1
                n1 |= pos[u]
                n2 |= neg[u]
            rest = f2
            while rest:
                bit = rest & -rest
                rest ^= bit
                u = bit.bit_length() - 1
                n2 |= pos[u]
                n1 |= neg[u]
            n1 &= mask
            n2 &= mask
            if (n1 & s2) or (n2 & s1) or (n1 & n2):
                return None
            f1 = n1 & ~s1
            f2 = n2 & ~s2
            s1 |= n1
            s2 |= n2
        todo &= ~(s1 | s2)
        side1 |= s1
        side2 |= s2
    return side1


def _balanced_mask(pos: list[int], neg: list[int], mask: int) -> bool:
    return _mask_two_color(pos, neg, mask) is not None


# -- exact oracles ------------------------------------------------------------


def frustration_exact(
    g: SignedGraph, max_nodes: int = 16, max_edges: int = 20
) -> FrustrationReport:
    """Exact frustration number (nu) and index (epsilon) by subset search.

    Subsets are tried in increasing cardinality and lexicographic order, so
    the first balancing witness is minimal and lexicographically smallest.
    """
    if g.n > max_nodes:
        raise OracleLimitError(f"frustration oracle limited to {max_nodes} nodes, got {g.n}")
    if g.m > max_edges:
        raise OracleLimitError(f"frustration oracle limited to {max_edges} edges, got {g.m}")
    pos, neg = _sign_masks(g)
    full = (1 << g.n) - 1

    nu = 0
    witness_nodes: tuple[int, ...] = ()
    for k in range(g.n + 1):
        found = None
        for comb in combinations(range(g.n), k):
            drop = 0
            for u in comb:
                drop |= 1 << u
            if _balanced_mask(pos, neg, full & ~drop):
                found = comb
                break
        if found is not None:
            nu, witness_nodes = k, found
            break

    eps = 0
    witness_edges: tuple[int, ...] = ()
    for k in range(g.m + 1):
        found = None
        for comb in combinations(range(g.m), k):
            p2, n2 = _sign_masks(g, frozenset(comb))
            if _balanced_mask(p2, n2, full):
                found = comb
                break
        if found is not None:
            eps, witness_edges = k, found
            break

    return FrustrationReport(nu, eps, witness_nodes, witness_edges)


def current_balance_exact(g: SignedGraph, max_nodes: int = 16) -> BalancedState:
    """Largest connected induced balanced subgraph by exhaustive search.

    Scans node subsets in decreasing size; within a size, lexicographically
    smallest wins. The smallest member of the winning set is placed on side
    1.
    """
    if g.n > max_nodes:
        raise OracleLimitError(f"balance oracle limited to {max_nodes} nodes, got {g.n}")
    labels = np.zeros(g.n, dtype=np.int8)
    if g.n == 0:
        return BalancedState(labels)
    pos, neg = _sign_masks(g)
    adj = [p | q for p, q in zip(pos, neg)]
    for size in range(g.n, 0, -1):
        for comb in combinations(range(g.n), size):
            mask = 0
            for u in comb:
                mask |= 1 << u
            if not _mask_connected(adj, mask):
                continue
            side1 = _mask_two_color(pos, neg, mask)
            if side1 is None:
                continue
            for u in comb:
                labels[u] = V1 if (side1 >> u) & 1 else V2
            return BalancedState(labels, anchor=comb[0])
    return BalancedState(labels)


# -- maintained-state machinery -----------------------------------------------


def _votes(
    g: SignedGraph, labels: np.ndarray, alive: np.ndarray | None, x: int
) -> tuple[int, int]:
    """How many live edges pull x toward side 1 vs side 2."""
    v1 = v2 = 0
    for y, s, eid in g.neighbors(x):
        if alive is not None and not alive[eid]:
            continue
        ly = labels[y]
        if ly == OUT:
            continue
        if (ly == V1) == (s > 0):
            v1 += 1
        else:
            v2 += 1
    return v1, v2


def _expand_inplace(
    g: SignedGraph,
    labels: np.ndarray,
    alive: np.ndarray | None,
    seeds: Iterable[int],
) -> list[int]:
    """Admit forced outside nodes until a fixed point; smallest id first.

    A node is admitted when all its live edges into the subgraph agree on
    one side. Returns admitted node ids in admission order.
    """
    heap = sorted({x for x in seeds if labels[x] == OUT})
    in_heap = set(heap)
    admitted: list[int] = []
    while heap:
        x = heapq.heappop(heap)
        in_heap.discard(x)
        if labels[x] != OUT:
            continue
        v1, v2 = _votes(g, labels, alive, x)
        if v1 > 0 and v2 == 0:
            labels[x] = V1
        elif v2 > 0 and v1 == 0:
            labels[x] = V2
        else:
            continue
        admitted.append(x)
        for y, _, eid in g.neighbors(x):
            if alive is not None and not alive[eid]:
                continue
            if labels[y] == OUT and y not in in_heap:
                heapq.heappush(heap, y)
                in_heap.add(y)
    return admitted


def expand_state(g: SignedGraph, state: BalancedState) -> BalancedState:
    """Grow the balanced subgraph by cascading forced admissions."""
    labels = state.labels.copy()
    seeds = set()
    for u in np.flatnonzero(labels != OUT):
        for v, _, _ in g.neighbors(int(u)):
            if labels[v] == OUT:
                seeds.add(v)
    _expand_inplace(g, labels, None, seeds)
    return BalancedState(labels)


def state_is_valid(g: SignedGraph, state: BalancedState) -> bool:
    """Check the BalancedState invariants by direct inspection."""
    members = state.node_set()
    if not members:
        return state.anchor == -1
    if state.anchor != members[0]:
        return False
    sub, old_ids = induced_subgraph(g, members)
    bip = check_balance(sub)
    if bip is None:
        return False
    # labelling must itself be consistent edge by edge
    for u, v, s in g.edges():
        lu, lv = state.labels[u], state.labels[v]
        if lu == OUT or lv == OUT:
            continue
        if s > 0 and lu != lv:
            return False
        if s < 0 and lu == lv:
            return False
    # connected: BFS inside members
    seen = {members[0]}
    stack = [members[0]]
    member_set = set(members)
    while stack:
        u = stack.pop()
        for v, _, _ in g.neighbors(u):
            if v in member_set and v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == len(members)


def max_balanced_heuristic(g: SignedGraph) -> BalancedState:
    """Spectral peel-and-grow estimate of the largest balanced subgraph.

    Switches the graph by the signs of the smallest-Laplacian-eigenvector
    entries, peels the node with the most remaining negative edges until
    none are left, keeps the largest surviving component, and expands. On a
    balanced input the eigenvector is exact and the whole graph is kept.
    """
    from .spectral import LaplacianView, smallest_eigenpair

    labels = np.zeros(g.n, dtype=np.int8)
    if g.n == 0:
        return BalancedState(labels)

    eig = smallest_eigenpair(LaplacianView(g))
    theta = np.where(eig.v >= 0, 1, -1)
    switched = apply_switching(g, theta)

    alive = np.ones(g.n, dtype=bool)
    neg_deg = np.zeros(g.n, dtype=np.int64)
    for u, v, s in switched.edges():
        if s < 0:
            neg_deg[u] += 1
            neg_deg[v] += 1
    while True:
        worst = -1
        for u in range(g.n):
            if alive[u] and neg_deg[u] > 0 and (worst < 0 or neg_deg[u] > neg_deg[worst]):
                worst = u
        if worst < 0:
            break
        alive[worst] = False
        for v, s, _ in switched.neighbors(worst):
            if alive[v] and s < 0:
                neg_deg[v] -= 1

    # largest surviving component, ties to smallest node id
    best: list[int] = []
    seen = np.zeros(g.n, dtype=bool)
    for root in range(g.n):
        if not alive[root] or seen[root]:
            continue
        comp = [root]
        seen[root] = True
        stack = [root]
        while stack:
            u = stack.pop()
            for v, _, _ in g.neighbors(u):
                if alive[v] and not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    stack.append(v)
        if len(comp) > len(best):
            comp.sort()
            best = comp
    if not best:
        return BalancedState(labels)

    flip = theta[best[0]] < 0
    for u in best:
        up = (theta[u] > 0) != flip
        labels[u] = V1 if up else V2
    state = BalancedState(labels, anchor=best[0])
    return expand_state(g, state)
