import numpy as np
import pytest

from coeditnet import _kernels_py, kernels
from coeditnet.graph import CollabGraph

compiled = pytest.importorskip("coeditnet._kernels")


def random_graph(n, m, seed):
    rng = np.random.default_rng(seed)
    pairs = rng.integers(0, n, size=(m, 2))
    return CollabGraph.from_edges(n, {(int(a), int(b)) for a, b in pairs if a != b})


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")


@pytest.mark.parametrize("n, m, seed", [(1, 0, 0), (2, 1, 0), (40, 60, 1), (120, 400, 2), (200, 150, 3)])
def test_brandes_bit_identical(n, m, seed):
    g = random_graph(n, m, seed)
    indptr, indices = g.csr
    assert np.array_equal(compiled.brandes(indptr, indices), _kernels_py.brandes(indptr, indices))


@pytest.mark.parametrize("n, m, seed", [(2, 1, 0), (30, 50, 1), (80, 200, 2)])
def test_layout_backends_agree_over_few_iterations(n, m, seed):
    g = random_graph(n, m, seed)
    e = np.asarray(g.edges, dtype=np.int64).reshape(-1, 3)
    pos = np.random.default_rng(seed).random((g.n, 2))
    k = np.sqrt(1.0 / g.n)
    a = compiled.fruchterman_reingold(pos, e[:, 0], e[:, 1], 5, k, 0.1)
    b = _kernels_py.fruchterman_reingold(pos, e[:, 0], e[:, 1], 5, k, 0.1)
    assert np.allclose(a, b, atol=1e-9, rtol=0)


def test_layout_kernel_leaves_input_untouched():
    pos = np.random.default_rng(0).random((5, 2))
    before = pos.copy()
    for mod in (compiled, _kernels_py):
        mod.fruchterman_reingold(pos, np.array([0, 1]), np.array([1, 2]), 10, 0.4, 0.1)
    assert np.array_equal(pos, before)


def test_pure_python_env_switch():
    import subprocess
    import sys

    out = subprocess.run(
        [sys.executable, "-c", "import coeditnet.kernels as k; print(k.BACKEND)"],
        env={"COEDITNET_PURE_PYTHON": "1", "PATH": ""}, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
