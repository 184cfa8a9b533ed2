"""Signed-graph data model, edge-list ingestion, and structural utilities.

A :class:`SignedGraph` is an immutable simple undirected graph whose edges
carry a sign in {-1, +1}. Nodes are dense ids ``0..n-1`` (original file
labels are retained for output); edges are dense ids ``0..m-1`` stored in
canonical ``u < v`` order. All mutating operations return new graphs.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator

import numpy as np


class GraphError(ValueError):
    """Raised on malformed input files or out-of-range node/edge ids."""


@dataclass(frozen=True)
class LoadReport:
    """Counters describing what the edge-list loader kept and dropped."""

    lines_total: int = 0
    edges_kept: int = 0
    self_loops_dropped: int = 0
    duplicates_dropped: int = 0

    def to_dict(self) -> dict[str, int]:
        return {
            "lines_total": self.lines_total,
            "edges_kept": self.edges_kept,
            "self_loops_dropped": self.self_loops_dropped,
            "duplicates_dropped": self.duplicates_dropped,
        }


class SignedGraph:
    """Immutable signed graph with a per-node adjacency index.

    Adjacency is exposed through flat CSR-style arrays so numeric kernels
    and Python loops share one representation. Safe to share across
    threads once constructed.
    """

    __slots__ = (
        "n",
        "m",
        "edge_u",
        "edge_v",
        "edge_sign",
        "labels",
        "_indptr",
        "_nbr",
        "_nbr_sign",
        "_nbr_eid",
        "_edge_index",
    )

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int, int]],
        labels: tuple[str, ...] | None = None,
    ):
        canon: list[tuple[int, int, int]] = []
        seen: set[tuple[int, int]] = set()
        for u, v, s in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge endpoint out of range: ({u}, {v})")
            if u == v:
                raise GraphError(f"self-loop not allowed: node {u}")
            if s not in (-1, 1):
                raise GraphError(f"edge sign must be -1 or +1, got {s}")
            if u > v:
                u, v = v, u
            if (u, v) in seen:
                raise GraphError(f"parallel edge not allowed: ({u}, {v})")
            seen.add((u, v))
            canon.append((u, v, s))
        if labels is not None and len(labels) != n:
            raise GraphError("labels length must equal node count")

        self.n = n
        self.m = len(canon)
        self.edge_u = np.array([e[0] for e in canon], dtype=np.int64)
        self.edge_v = np.array([e[1] for e in canon], dtype=np.int64)
        self.edge_sign = np.array([e[2] for e in canon], dtype=np.int64)
        self.labels = labels

        counts = np.zeros(n + 1, dtype=np.int64)
        for u, v, _ in canon:
            counts[u + 1] += 1
            counts[v + 1] += 1
        indptr = np.cumsum(counts)
        nbr = np.zeros(2 * self.m, dtype=np.int64)
        nbr_sign = np.zeros(2 * self.m, dtype=np.int64)
        nbr_eid = np.zeros(2 * self.m, dtype=np.int64)
        cursor = indptr[:-1].copy()
        for eid, (u, v, s) in enumerate(canon):
            nbr[cursor[u]] = v
            nbr_sign[cursor[u]] = s
            nbr_eid[cursor[u]] = eid
            cursor[u] += 1
            nbr[cursor[v]] = u
            nbr_sign[cursor[v]] = s
            nbr_eid[cursor[v]] = eid
            cursor[v] += 1
        self._indptr = indptr
        self._nbr = nbr
        self._nbr_sign = nbr_sign
        self._nbr_eid = nbr_eid
        self._edge_index = {(e[0], e[1]): i for i, e in enumerate(canon)}

    # -- basic accessors ---------------------------------------------------

    def edge(self, eid: int) -> tuple[int, int, int]:
        """Return (u, v, sign) for an edge id, u < v."""
        if not 0 <= eid < self.m:
            raise GraphError(f"unknown edge id {eid}")
        return int(self.edge_u[eid]), int(self.edge_v[eid]), int(self.edge_sign[eid])

    def edges(self) -> Iterator[tuple[int, int, int]]:
        for eid in range(self.m):
            yield self.edge(eid)

    def edge_id(self, u: int, v: int) -> int | None:
        """Edge id for the unordered pair (u, v), or None."""
        if u > v:
            u, v = v, u
        return self._edge_index.get((u, v))

    def neighbors(self, u: int) -> Iterator[tuple[int, int, int]]:
        """Yield (neighbor, sign, edge id) for every edge at u."""
        for k in range(self._indptr[u], self._indptr[u + 1]):
            yield int(self._nbr[k]), int(self._nbr_sign[k]), int(self._nbr_eid[k])

    def degree(self, u: int) -> int:
        return int(self._indptr[u + 1] - self._indptr[u])

    def degrees(self) -> np.ndarray:
        return np.diff(self._indptr)

    def label_of(self, u: int) -> str:
        return self.labels[u] if self.labels is not None else str(u)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SignedGraph):
            return NotImplemented
        return (
            self.n == other.n
            and self.m == other.m
            and np.array_equal(self.edge_u, other.edge_u)
            and np.array_equal(self.edge_v, other.edge_v)
            and np.array_equal(self.edge_sign, other.edge_sign)
        )

    def __hash__(self):  # pragma: no cover - identity hashing only
        return id(self)

    def __repr__(self) -> str:
        return f"SignedGraph(n={self.n}, m={self.m})"


# -- loading and writing ---------------------------------------------------


def _sign_of(value: float) -> int:
    return 1 if value > 0 else -1


def load_edge_list(
    source: IO[bytes] | IO[str] | str, sign_from_weight: bool = False
) -> tuple[SignedGraph, LoadReport]:
    """Parse a whitespace-separated edge list into a simple signed graph.

    Each data line is ``u v s [extra...]``; ``%`` and ``#`` start comments.
    Direction is ignored, self-loops are dropped, and on duplicate pairs
    the first sign wins (all counted in the report). With
    ``sign_from_weight`` the sign of the third column is taken; otherwise
    it must be exactly +1 or -1. A weight of zero is rejected either way.
    """
    if isinstance(source, str):
        stream: IO[str] = io.StringIO(source)
    elif isinstance(source, io.TextIOBase):
        stream = source
    else:
        stream = io.TextIOWrapper(source, encoding="utf-8")

    node_ids: dict[str, int] = {}
    edges: list[tuple[int, int, int]] = []
    seen: dict[tuple[int, int], int] = {}
    lines = 0
    self_loops = 0
    duplicates = 0

    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("%") or line.startswith("#"):
            continue
        lines += 1
        tokens = line.split()
        if len(tokens) < 3:
            raise GraphError(f"line {lineno}: expected at least 3 tokens, got {len(tokens)}")
        try:
            weight = float(tokens[2])
        except ValueError as exc:
            raise GraphError(f"line {lineno}: unparsable weight {tokens[2]!r}") from exc
        if weight == 0:
            raise GraphError(f"line {lineno}: zero weight has no sign")
        if sign_from_weight:
            sign = _sign_of(weight)
        else:
            if weight not in (1.0, -1.0):
                raise GraphError(f"line {lineno}: sign must be +1 or -1, got {tokens[2]!r}")
            sign = int(weight)

        u_lab, v_lab = tokens[0], tokens[1]
        for lab in (u_lab, v_lab):
            if lab not in node_ids:
                node_ids[lab] = len(node_ids)
        u, v = node_ids[u_lab], node_ids[v_lab]
        if u == v:
            self_loops += 1
            continue
        if u > v:
            u, v = v, u
        if (u, v) in seen:
            duplicates += 1
            continue
        seen[(u, v)] = sign
        edges.append((u, v, sign))

    labels = tuple(node_ids)
    graph = SignedGraph(len(node_ids), edges, labels=labels)
    report = LoadReport(
        lines_total=lines,
        edges_kept=graph.m,
        self_loops_dropped=self_loops,
        duplicates_dropped=duplicates,
    )
    return graph, report


def dump_edge_list(g: SignedGraph) -> str:
    """Serialize edges deterministically: ascending (u, v), sign +1/-1.

    Isolated nodes are not representable in the edge-list format and are
    silently dropped on a round trip.
    """
    rows = sorted(zip(g.edge_u.tolist(), g.edge_v.tolist(), g.edge_sign.tolist()))
    return "".join(f"{u} {v} {'+1' if s > 0 else '-1'}\n" for u, v, s in rows)


def export_dot(g: SignedGraph, max_nodes: int = 200) -> str:
    """Graphviz source for small graphs; negative edges drawn dashed."""
    if g.n > max_nodes:
        raise GraphError(f"graph too large for DOT export ({g.n} > {max_nodes} nodes)")
    out = ["graph signed {"]
    for u in range(g.n):
        out.append(f'  {u} [label="{g.label_of(u)}"];')
    for u, v, s in g.edges():
        style = "" if s > 0 else " [style=dashed]"
        out.append(f"  {u} -- {v}{style};")
    out.append("}")
    return "\n".join(out) + "\n"


# -- structure -------------------------------------------------------------


def connected_components(g: SignedGraph) -> list[list[int]]:
    """Components as sorted node lists, ordered by smallest contained id."""
    seen = np.zeros(g.n, dtype=bool)
    comps: list[list[int]] = []
    for root in range(g.n):
        if seen[root]:
            continue
        comp = [root]
        seen[root] = True
        stack = [root]
        while stack:
            u = stack.pop()
            for v, _, _ in g.neighbors(u):
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    stack.append(v)
        comp.sort()
        comps.append(comp)
    return comps


def connected_component_count(g: SignedGraph) -> int:
    return len(connected_components(g))


def largest_connected_component(g: SignedGraph) -> list[int]:
    """Node set of a maximum component; ties go to the smallest node id."""
    best: list[int] = []
    for comp in connected_components(g):
        if len(comp) > len(best):
            best = comp
    return best


def k_core(g: SignedGraph, k: int) -> list[int]:
    """Maximal node set whose induced subgraph has all degrees >= k.

    Iterative peeling; signs are ignored. May return the empty set.
    """
    if k < 0:
        raise GraphError("k must be >= 0")
    deg = g.degrees().copy()
    alive = np.ones(g.n, dtype=bool)
    queue = [u for u in range(g.n) if deg[u] < k]
    while queue:
        u = queue.pop()
        if not alive[u]:
            continue
        alive[u] = False
        for v, _, _ in g.neighbors(u):
            if alive[v]:
                deg[v] -= 1
                if deg[v] < k:
                    queue.append(v)
    return [u for u in range(g.n) if alive[u]]


def induced_subgraph(g: SignedGraph, nodes: Iterable[int]) -> tuple[SignedGraph, list[int]]:
    """Subgraph on ``nodes`` with ids re-densified in ascending order.

    Returns (subgraph, old_ids) where ``old_ids[new]`` is the original id.
    """
    old_ids = sorted(set(nodes))
    for u in old_ids:
        if not 0 <= u < g.n:
            raise GraphError(f"node id {u} out of range")
    new_of = {old: new for new, old in enumerate(old_ids)}
    edges = [
        (new_of[u], new_of[v], s)
        for u, v, s in g.edges()
        if u in new_of and v in new_of
    ]
    labels = tuple(g.label_of(u) for u in old_ids) if g.labels is not None else None
    return SignedGraph(len(old_ids), edges, labels=labels), old_ids


def delete_edges(g: SignedGraph, edge_ids: Iterable[int]) -> SignedGraph:
    """New graph on the same node set with the given edges removed."""
    drop = set(edge_ids)
    for eid in drop:
        if not 0 <= eid < g.m:
            raise GraphError(f"unknown edge id {eid}")
    edges = [g.edge(eid) for eid in range(g.m) if eid not in drop]
    return SignedGraph(g.n, edges, labels=g.labels)
