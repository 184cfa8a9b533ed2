from __future__ import annotations

import pytest
from hypothesis import strategies as st

from edgebalance.graph import SignedGraph


@pytest.fixture
def triangle():
    # two positive edges and one negative: the smallest unbalanced graph
    return SignedGraph(3, [(0, 1, 1), (0, 2, 1), (1, 2, -1)])


@pytest.fixture
def balanced_p4():
    # path a-b-c-d with only the middle edge negative; balanced as a whole
    return SignedGraph(4, [(0, 1, 1), (1, 2, -1), (2, 3, 1)])


@pytest.fixture
def split_node_fixture():
    # u1-u2 positive, x tied to u1 by + and to u2 by -: x is held out
    return SignedGraph(3, [(0, 1, 1), (0, 2, 1), (1, 2, -1)])


@st.composite
def signed_graphs(draw, min_nodes=2, max_nodes=8, connected=True):
    """Random signed graph; a spanning tree keeps it connected."""
    n = draw(st.integers(min_nodes, max_nodes))
    edges: set[tuple[int, int]] = set()
    if connected and n > 1:
        order = draw(st.permutations(list(range(n))))
        for i in range(1, n):
            j = draw(st.integers(0, i - 1))
            u, v = order[i], order[j]
            edges.add((min(u, v), max(u, v)))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    extra = draw(st.lists(st.sampled_from(pairs), max_size=min(10, len(pairs))))
    edges.update(extra)
    signs = draw(
        st.lists(st.sampled_from([-1, 1]), min_size=len(edges), max_size=len(edges))
    )
    return SignedGraph(n, [(u, v, s) for (u, v), s in zip(sorted(edges), signs)])
