"""Numeric inner loops shared by the spectral machinery.

Two interchangeable backends provide the same four kernels:

* ``numba`` (default when importable): ``@njit``-compiled edge loops.
* ``numpy``: vectorised fallback built on ``np.add.at`` scatter ops.

Selection happens once at import time via the ``EDGEBALANCE_KERNELS``
environment variable (``"numba"`` or ``"numpy"``, default ``"numba"``).
``benchmarks/kernel_bench.py`` compares the two paths.
"""

from __future__ import annotations

import os

import numpy as np

_REQUESTED = os.environ.get("EDGEBALANCE_KERNELS", "numba").strip().lower()
if _REQUESTED not in ("numba", "numpy"):
    raise ValueError(
        f"EDGEBALANCE_KERNELS must be 'numba' or 'numpy', got {_REQUESTED!r}"
    )


def _matvec_loop(eu, ev, es, deg, x, out):
    n = x.shape[0]
    for i in range(n):
        out[i] = deg[i] * x[i]
    for k in range(eu.shape[0]):
        u = eu[k]
        v = ev[k]
        s = es[k]
        out[u] -= s * x[v]
        out[v] -= s * x[u]
    return out


def _matmat_loop(eu, ev, es, deg, x, out):
    n, ncols = x.shape
    for i in range(n):
        for j in range(ncols):
            out[i, j] = deg[i] * x[i, j]
    for k in range(eu.shape[0]):
        u = eu[k]
        v = ev[k]
        s = es[k]
        for j in range(ncols):
            out[u, j] -= s * x[v, j]
            out[v, j] -= s * x[u, j]
    return out


def _quadratic_form_loop(eu, ev, es, x):
    total = 0.0
    for k in range(eu.shape[0]):
        d = x[eu[k]] - es[k] * x[ev[k]]
        total += d * d
    return total


def _edge_scores_loop(eu, ev, es, v, out):
    for k in range(eu.shape[0]):
        d = v[eu[k]] - es[k] * v[ev[k]]
        out[k] = d * d
    return out


def _matvec_numpy(eu, ev, es, deg, x, out):
    np.multiply(deg, x, out=out)
    sx = es * x[ev]
    np.subtract.at(out, eu, sx)
    np.subtract.at(out, ev, es * x[eu])
    return out


def _matmat_numpy(eu, ev, es, deg, x, out):
    np.multiply(deg[:, None], x, out=out)
    np.subtract.at(out, eu, es[:, None] * x[ev])
    np.subtract.at(out, ev, es[:, None] * x[eu])
    return out


def _quadratic_form_numpy(eu, ev, es, x):
    d = x[eu] - es * x[ev]
    return float(np.dot(d, d))


def _edge_scores_numpy(eu, ev, es, v, out):
    np.subtract(v[eu], es * v[ev], out=out)
    np.square(out, out=out)
    return out


BACKEND = "numpy"
if _REQUESTED == "numba":
    try:
        import numba

        _jit = numba.njit(cache=True, fastmath=False)
        laplacian_matvec = _jit(_matvec_loop)
        laplacian_matmat = _jit(_matmat_loop)
        quadratic_form = _jit(_quadratic_form_loop)
        edge_scores = _jit(_edge_scores_loop)
        BACKEND = "numba"
    except ImportError:
        pass

if BACKEND == "numpy":
    laplacian_matvec = _matvec_numpy
    laplacian_matmat = _matmat_numpy
    quadratic_form = _quadratic_form_numpy
    edge_scores = _edge_scores_numpy
