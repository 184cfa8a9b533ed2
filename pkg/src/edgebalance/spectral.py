"""Signed Laplacian, smallest-eigenpair solver, and spectral deletion heuristics.

The Laplacian L = D - A (A carrying edge signs) is positive semidefinite
and has smallest eigenvalue 0 exactly on balanced graphs, which makes the
smallest eigenpair a balance probe. Small instances are solved densely (a
deterministic oracle); larger ones run LOBPCG against the matrix-free
edgewise matvec, never materializing L.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import eigh
from scipy.sparse.linalg import LinearOperator, lobpcg

from . import _kernels
from .graph import SignedGraph
from .reports import DeletedEdge, SolutionReport

DENSE_THRESHOLD = 256


class EigensolveError(RuntimeError):
    """Solver did not reach the requested residual; carries the best pair."""

    def __init__(self, message: str, best: "EigenPair"):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class EigenPair:
    """Smallest eigenvalue, unit eigenvector, residual, and eigengap estimate."""

    lambda1: float
    v: np.ndarray
    residual: float
    gap: float | None = None


class LaplacianView:
    """Matrix-free signed Laplacian of a graph minus an excluded edge set.

    Exposes matvec/matmat through the compiled kernels; safe for concurrent
    readers (all state is fixed at construction).
    """

    def __init__(self, g: SignedGraph, excluded: Iterable[int] = ()):
        self.graph = g
        self.excluded = frozenset(excluded)
        for eid in self.excluded:
            if not 0 <= eid < g.m:
                raise ValueError(f"unknown edge id {eid}")
        if self.excluded:
            keep = np.ones(g.m, dtype=bool)
            keep[list(self.excluded)] = False
            self.edge_u = np.ascontiguousarray(g.edge_u[keep])
            self.edge_v = np.ascontiguousarray(g.edge_v[keep])
            self.edge_sign = np.ascontiguousarray(g.edge_sign[keep])
        else:
            self.edge_u = g.edge_u
            self.edge_v = g.edge_v
            self.edge_sign = g.edge_sign
        self.degrees = np.zeros(g.n, dtype=np.float64)
        np.add.at(self.degrees, self.edge_u, 1.0)
        np.add.at(self.degrees, self.edge_v, 1.0)
        self._sign_f = self.edge_sign.astype(np.float64)

    @property
    def n(self) -> int:
        return self.graph.n

    def matvec(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64).reshape(self.n)
        out = np.empty_like(x)
        _kernels.laplacian_matvec(
            self.edge_u, self.edge_v, self._sign_f, self.degrees, x, out
        )
        return out

    def matmat(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        out = np.empty_like(x)
        _kernels.laplacian_matmat(
            self.edge_u, self.edge_v, self._sign_f, self.degrees, x, out
        )
        return out

    def quadratic_form(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=np.float64).reshape(self.n)
        return float(
            _kernels.quadratic_form(self.edge_u, self.edge_v, self._sign_f, x)
        )

    def to_dense(self) -> np.ndarray:
        L = np.zeros((self.n, self.n))
        np.fill_diagonal(L, self.degrees)
        for u, v, s in zip(self.edge_u, self.edge_v, self._sign_f):
            L[u, v] -= s
            L[v, u] -= s
        return L


def quadratic_form(g: SignedGraph, excluded: Iterable[int], x: Sequence[float]) -> float:
    """Edgewise x'Lx over live edges: sum of (x_i - sign * x_j)^2."""
    xs = np.asarray(x, dtype=np.float64)
    if xs.shape != (g.n,):
        raise ValueError(f"vector length {xs.shape} does not match {g.n} nodes")
    return LaplacianView(g, excluded).quadratic_form(xs)


def _normalize_sign(v: np.ndarray) -> np.ndarray:
    for val in v:
        if abs(val) > 1e-12:
            return v if val > 0 else -v
    return v


def smallest_eigenpair(
    view: LaplacianView,
    tol: float = 1e-8,
    max_iter: int | None = None,
    seed: int = 0,
    dense_threshold: int = DENSE_THRESHOLD,
) -> EigenPair:
    """Smallest eigenpair of the viewed Laplacian.

    Below ``dense_threshold`` nodes a dense symmetric solve is used, making
    the result deterministic; above it, LOBPCG with a seeded start block
    and Jacobi preconditioning runs through the edgewise matvec. Tiny
    negative eigenvalues within tolerance are clamped to zero.
    """
    n = view.n
    if n < 1:
        raise ValueError("graph has no nodes")
    if tol <= 0:
        raise ValueError("tol must be positive")

    if n <= dense_threshold:
        w, vecs = eigh(view.to_dense())
        lam = float(w[0])
        vec = _normalize_sign(vecs[:, 0].copy())
        gap = float(w[1] - w[0]) if n > 1 else None
    else:
        rng = np.random.default_rng(seed)
        block = rng.standard_normal((n, min(4, n)))
        inv_diag = 1.0 / np.maximum(view.degrees, 1.0)
        op = LinearOperator(
            (n, n), matvec=view.matvec, matmat=view.matmat, dtype=np.float64
        )
        precond = LinearOperator(
            (n, n),
            matvec=lambda x: inv_diag * np.ravel(x),
            matmat=lambda x: inv_diag[:, None] * x,
            dtype=np.float64,
        )
        if max_iter is None:
            max_iter = 10 * n
        with warnings.catch_warnings():
            # the solver warns when the whole block misses tol; only the
            # smallest pair matters and its residual is checked below
            warnings.simplefilter("ignore", UserWarning)
            w, vecs = lobpcg(
                op, block, M=precond, tol=tol, maxiter=max_iter, largest=False
            )
        order = np.argsort(w)
        lam = float(w[order[0]])
        vec = _normalize_sign(np.asarray(vecs[:, order[0]], dtype=np.float64).copy())
        gap = float(w[order[1]] - w[order[0]]) if len(w) > 1 else None

    norm = float(np.linalg.norm(vec))
    if norm > 0:
        vec = vec / norm
    residual = float(np.linalg.norm(view.matvec(vec) - lam * vec))
    if -tol <= lam < 0:
        lam = 0.0
    pair = EigenPair(lambda1=lam, v=vec, residual=residual, gap=gap)
    if residual > tol * max(1.0, abs(lam)) and n > dense_threshold:
        raise EigensolveError(
            f"eigensolver residual {residual:.3e} above tolerance {tol:.1e}", pair
        )
    return pair


def edge_score(v: np.ndarray, edge: tuple[int, int, int]) -> float:
    """Deletion score (v_i - sign * v_j)^2 of one edge."""
    i, j, s = edge
    d = v[i] - s * v[j]
    return float(d * d)


def edge_scores(g: SignedGraph, v: np.ndarray, edge_ids: Sequence[int]) -> np.ndarray:
    """Deletion scores for a batch of edge ids."""
    ids = np.asarray(edge_ids, dtype=np.int64)
    out = np.empty(len(ids), dtype=np.float64)
    _kernels.edge_scores(
        g.edge_u[ids],
        g.edge_v[ids],
        g.edge_sign[ids].astype(np.float64),
        np.asarray(v, dtype=np.float64),
        out,
    )
    return out


def _ranking_scores(g: SignedGraph, v: np.ndarray, edge_ids: Sequence[int]) -> np.ndarray:
    # score differences below the solver's meaningful resolution are noise;
    # rounding makes them exact ties so the edge-id tie-break is stable
    return np.round(edge_scores(g, v, edge_ids), 12)


def upper_bound_g(eig: EigenPair, edge_ids: Iterable[int], g: SignedGraph) -> float:
    """Post-deletion bound on the smallest eigenvalue: lambda1 minus the
    summed scores of the removed edges. May go negative; callers clamp."""
    total = 0.0
    for eid in edge_ids:
        total += edge_score(eig.v, g.edge(eid))
    return eig.lambda1 - total


def balance_upper_bound(g: SignedGraph, eig: EigenPair) -> float:
    """Spectral cap on the largest balanced subgraph size: |V| - lambda1."""
    return g.n - eig.lambda1


def perturbation_predict(eig: EigenPair, edge: tuple[int, int, int]) -> float:
    """First-order prediction of lambda1 after deleting one edge."""
    return eig.lambda1 - edge_score(eig.v, edge)


def spectral_top(
    g: SignedGraph,
    candidates: Sequence[int],
    b: int,
    tol: float = 1e-8,
    seed: int = 0,
    dense_threshold: int = DENSE_THRESHOLD,
) -> list[int]:
    """Pick the b candidate edges with the largest scores from one solve.

    The post-deletion eigenvalue bound is modular in the deleted set, so
    the top-b edges minimize it exactly. Ties go to the smallest edge id.
    """
    cands = sorted(set(candidates))
    if b > len(cands):
        raise ValueError(f"budget {b} exceeds candidate pool of {len(cands)}")
    if b == 0:
        return []
    eig = smallest_eigenpair(
        LaplacianView(g), tol=tol, seed=seed, dense_threshold=dense_threshold
    )
    scores = _ranking_scores(g, eig.v, cands)
    order = sorted(range(len(cands)), key=lambda i: (-scores[i], cands[i]))
    return [cands[i] for i in order[:b]]


def iterative_spectral(
    g: SignedGraph,
    candidates: Sequence[int],
    b: int,
    tol: float = 1e-8,
    seed: int = 0,
    dense_threshold: int = DENSE_THRESHOLD,
) -> SolutionReport:
    """Delete b edges one at a time, re-solving the eigenpair each round.

    Each iteration scores the remaining candidates against the current
    graph's eigenvector and removes the argmax (smallest edge id on ties),
    recording the eigenvalue trajectory. A failed solve aborts with the
    partial report attached to the error.
    """
    cands = sorted(set(candidates))
    if b > len(cands):
        raise ValueError(f"budget {b} exceeds candidate pool of {len(cands)}")
    report = SolutionReport(algorithm="isa", budget=b, seed=seed, lambda_trajectory=[])
    deleted: set[int] = set()
    start = time.perf_counter()
    for _ in range(b):
        pool = [e for e in cands if e not in deleted]
        if not pool:
            report.stopped_early = True
            break
        try:
            eig = smallest_eigenpair(
                LaplacianView(g, deleted),
                tol=tol,
                seed=seed,
                dense_threshold=dense_threshold,
            )
        except EigensolveError as exc:
            report.elapsed_seconds = time.perf_counter() - start
            exc.partial_report = report
            raise
        report.lambda_trajectory.append(eig.lambda1)
        scores = _ranking_scores(g, eig.v, pool)
        best = min(range(len(pool)), key=lambda i: (-scores[i], pool[i]))
        eid = pool[best]
        deleted.add(eid)
        u, v, s = g.edge(eid)
        report.deleted.append(DeletedEdge(eid, u, v, s))
    # eigenvalue of the final graph closes the trajectory
    if report.lambda_trajectory is not None and g.n >= 1:
        final = smallest_eigenpair(
            LaplacianView(g, deleted), tol=tol, seed=seed, dense_threshold=dense_threshold
        )
        report.lambda_trajectory.append(final.lambda1)
    report.elapsed_seconds = time.perf_counter() - start
    return report
