import json
import os
import subprocess
import sys

import numpy as np
import pytest

from hodgenorm import _pykernels, bounds, hyperbolic as hyp, kernels, meshes

try:
    from hodgenorm import _ckernels
except ImportError:  # extension not built
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled extension not built")


def cone_inputs(k, n, seed, count=500):
    rng = np.random.default_rng(seed)
    V = hyp.recentre(hyp.random_points(rng, n, k + 1, 3.0))
    U = rng.random((count, k))
    return np.ascontiguousarray(V), U


def test_backend_is_reported():
    assert kernels.BACKEND in ("cython", "python")
    if _ckernels is not None and not os.environ.get("HODGENORM_PURE_PYTHON"):
        assert kernels.BACKEND == "cython"


@needs_ext
@pytest.mark.parametrize("k,n", [(1, 2), (2, 2), (2, 3), (3, 3), (4, 4), (3, 5)])
def test_cone_integrand_backends_agree(k, n):
    V, U = cone_inputs(k, n, 10 * k + n)
    np.testing.assert_allclose(_ckernels.cone_integrand(V, U), _pykernels.cone_integrand(V, U),
                               rtol=1e-10, atol=1e-14)


@needs_ext
@pytest.mark.parametrize("name", ["two_triangles", "dumbbell", "circle3", "torus7", "sphere3"])
def test_cheeger_scan_backends_agree(name, monkeypatch):
    M = getattr(meshes, name)() if hasattr(meshes, name) else meshes.BUNDLED[name]()
    monkeypatch.setattr(kernels, "cheeger_scan", _pykernels.cheeger_scan)
    py = bounds.cheeger_bruteforce(M)
    monkeypatch.setattr(kernels, "cheeger_scan", _ckernels.cheeger_scan)
    assert bounds.cheeger_bruteforce(M) == pytest.approx(py, rel=1e-12)


def test_cone_integrand_matches_finite_differences():
    V, U = cone_inputs(2, 2, 3, count=50)
    s = hyp.StraightSimplex(V)
    step = 1e-6
    for u in U[:10]:
        cols = []
        for i in range(2):
            e = np.zeros(2)
            e[i] = step
            hi = s.evaluate(hyp.cube_to_barycentric(u + e))[0]
            lo = s.evaluate(hyp.cube_to_barycentric(u - e))[0]
            cols.append((hi - lo) / (2 * step))
        T = np.array(cols)
        G = T[:, :-1] @ T[:, :-1].T - np.outer(T[:, -1], T[:, -1])
        assert _pykernels.cone_integrand(V, u[None])[0] == pytest.approx(np.sqrt(np.linalg.det(G)),
                                                                          rel=1e-6)


def test_cheeger_scan_small_example():
    # three unit cells in a path, cell 0 pinned: the best cuts isolate an end cell
    cell_vol = np.ones(3)
    face_cells = np.array([[0, 1], [1, 2]], dtype=np.int64)
    ratio, mask = _pykernels.cheeger_scan(cell_vol, face_cells, np.ones(2))
    assert ratio == pytest.approx(1.0)
    assert mask in (0b10, 0b11)


def test_pure_python_fallback_in_subprocess():
    code = (
        "import json; from hodgenorm import kernels, bounds, meshes, hyperbolic as hyp;"
        "import numpy as np;"
        "V = hyp.regular_simplex_vertices(3, 1.0);"
        "print(json.dumps([kernels.BACKEND, bounds.cheeger_bruteforce(meshes.two_triangles()),"
        " hyp.simplex_volume(hyp.straighten(V))]))"
    )
    env = dict(os.environ, HODGENORM_PURE_PYTHON="1")
    proc = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env,
                          check=True)
    backend, h, vol = json.loads(proc.stdout)
    assert backend == "python"
    assert h == pytest.approx(4 / np.sqrt(3))
    V = hyp.regular_simplex_vertices(3, 1.0)
    assert vol == pytest.approx(hyp.simplex_volume(hyp.straighten(V)), rel=1e-9)
