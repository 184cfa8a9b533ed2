from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest

from edgebalance import _kernels
from edgebalance.graph import SignedGraph
from edgebalance.spectral import LaplacianView


@pytest.fixture
def arrays():
    rng = np.random.default_rng(0)
    n, m = 50, 120
    eu = rng.integers(0, n - 1, m)
    ev = eu + rng.integers(1, n - eu)
    es = rng.choice([-1.0, 1.0], m)
    deg = np.zeros(n)
    np.add.at(deg, eu, 1.0)
    np.add.at(deg, ev, 1.0)
    x = rng.standard_normal(n)
    return eu, ev, es, deg, x


def test_backends_agree_on_matvec(arrays):
    eu, ev, es, deg, x = arrays
    active = _kernels.laplacian_matvec(eu, ev, es, deg, x, np.empty_like(x))
    reference = _kernels._matvec_numpy(eu, ev, es, deg, x, np.empty_like(x))
    assert np.allclose(active, reference, atol=1e-12)


def test_backends_agree_on_matmat(arrays):
    eu, ev, es, deg, x = arrays
    rng = np.random.default_rng(1)
    block = rng.standard_normal((len(x), 4))
    active = _kernels.laplacian_matmat(eu, ev, es, deg, block, np.empty_like(block))
    reference = _kernels._matmat_numpy(eu, ev, es, deg, block, np.empty_like(block))
    assert np.allclose(active, reference, atol=1e-12)


def test_backends_agree_on_quadratic_form(arrays):
    eu, ev, es, deg, x = arrays
    active = _kernels.quadratic_form(eu, ev, es, x)
    reference = _kernels._quadratic_form_numpy(eu, ev, es, x)
    assert active == pytest.approx(reference, rel=1e-12)


def test_backends_agree_on_edge_scores(arrays):
    eu, ev, es, deg, x = arrays
    active = _kernels.edge_scores(eu, ev, es, x, np.empty(len(eu)))
    reference = _kernels._edge_scores_numpy(eu, ev, es, x, np.empty(len(eu)))
    assert np.allclose(active, reference, atol=1e-12)


def test_matvec_matches_dense_laplacian():
    g = SignedGraph(4, [(0, 1, 1), (1, 2, -1), (2, 3, 1), (0, 3, -1)])
    view = LaplacianView(g)
    rng = np.random.default_rng(2)
    x = rng.standard_normal(4)
    assert np.allclose(view.matvec(x), view.to_dense() @ x, atol=1e-12)


def test_numpy_backend_selectable_via_env():
    script = (
        "import edgebalance._kernels as k; import numpy as np;"
        "assert k.BACKEND == 'numpy', k.BACKEND;"
        "from edgebalance.graph import SignedGraph;"
        "from edgebalance.spectral import LaplacianView, smallest_eigenpair;"
        "g = SignedGraph(3, [(0,1,1),(0,2,1),(1,2,-1)]);"
        "lam = smallest_eigenpair(LaplacianView(g)).lambda1;"
        "assert abs(lam - 1.0) < 1e-8, lam;"
        "print('numpy backend ok')"
    )
    env = dict(os.environ, EDGEBALANCE_KERNELS="numpy")
    proc = subprocess.run(
        [sys.executable, "-c", script], env=env, capture_output=True, text=True
    )
    assert proc.returncode == 0, proc.stderr
    assert "numpy backend ok" in proc.stdout


def test_bad_backend_env_rejected():
    script = "import edgebalance._kernels"
    env = dict(os.environ, EDGEBALANCE_KERNELS="cuda")
    proc = subprocess.run(
        [sys.executable, "-c", script], env=env, capture_output=True, text=True
    )
    assert proc.returncode != 0
    assert "EDGEBALANCE_KERNELS" in proc.stderr
