"""Compare the compiled and numpy kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Times the straightened-simplex density on a batch of cube points and the
exhaustive Cheeger scan, checks that both backends agree, and prints the
speedup of the compiled extension.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from hodgenorm import _pykernels, bounds, hyperbolic as hyp, meshes

try:
    from hodgenorm import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def cone_case(k: int, points: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    V = np.ascontiguousarray(hyp.recentre(hyp.random_points(rng, k, k + 1, 4.0)))
    return V, rng.random((points, k))


def cheeger_case(loop: int):
    return bounds.cheeger_arrays(meshes.dumbbell(loop=loop))


def best_time(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _ckernels is None:
        print("compiled extension not built; run 'pip install -e . --no-build-isolation'")
        return
    rows = []
    for k, points in ((2, 200_000), (3, 200_000), (4, 100_000)):
        V, U = cone_case(k, points)
        ref = _pykernels.cone_integrand(V, U)
        # the backends order floating point operations differently; near-degenerate
        # corners of the cube lose a few digits to cancellation
        assert np.allclose(_ckernels.cone_integrand(V, U), ref, rtol=1e-9,
                           atol=1e-10 * np.abs(ref).max())
        rows.append((f"cone_integrand k={k}, {points} points",
                     best_time(lambda: _pykernels.cone_integrand(V, U), args.repeat),
                     best_time(lambda: _ckernels.cone_integrand(V, U), args.repeat)))
    for loop in (8, 10):
        data = cheeger_case(loop)
        assert np.isclose(_pykernels.cheeger_scan(*data)[0], _ckernels.cheeger_scan(*data)[0])
        cells = len(data[0])
        rows.append((f"cheeger_scan {cells} cells ({2 ** (cells - 1)} bipartitions)",
                     best_time(lambda: _pykernels.cheeger_scan(*data), max(1, args.repeat // 2)),
                     best_time(lambda: _ckernels.cheeger_scan(*data), args.repeat)))
    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'numpy [s]':>10}  {'cython [s]':>10}  {'speedup':>8}")
    for name, py, cy in rows:
        print(f"{name:<{width}}  {py:10.4f}  {cy:10.4f}  {py / cy:7.1f}x")
    print(f"cheeger_bruteforce(two_triangles) = {bounds.cheeger_bruteforce(meshes.two_triangles()):.6f}")


if __name__ == "__main__":
    main()
