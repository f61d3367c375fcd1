"""Small bundled triangulations used by the tests, the CLI and the benchmarks."""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np

from .complex import SimplicialComplex
from .metric import MetricComplex


def _edge_lengths(K: SimplicialComplex, length: float = 1.0) -> dict[tuple[int, int], float]:
    return {e: length for e in K.simplices[1]}


def cycle(m: int = 3, circumference: float | None = None) -> MetricComplex:
    """Polygon with ``m`` vertices; each edge has length ``circumference / m``."""
    K = SimplicialComplex.from_simplices([(i, (i + 1) % m) for i in range(m)],
                                         closed_pseudomanifold=True)
    length = 1.0 if circumference is None else circumference / m
    return MetricComplex(K, _edge_lengths(K, length))


def sphere(n: int = 2) -> MetricComplex:
    """Boundary of the regular unit (n+1)-simplex, an n-sphere."""
    K = SimplicialComplex.from_simplices(combinations(range(n + 2), n + 1),
                                         closed_pseudomanifold=True)
    return MetricComplex(K, _edge_lengths(K))


TORUS7_TRIANGLES = [tuple(sorted(((i, (i + 1) % 7, (i + 3) % 7)))) for i in range(7)] + \
                   [tuple(sorted(((i, (i + 2) % 7, (i + 3) % 7)))) for i in range(7)]


def torus7() -> MetricComplex:
    """Seven-vertex (Csaszar) torus with the equilateral unit metric."""
    K = SimplicialComplex.from_simplices(TORUS7_TRIANGLES, closed_pseudomanifold=True)
    return MetricComplex(K, _edge_lengths(K))


RP2_TRIANGLES = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
                 (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3)]


def projective_plane() -> SimplicialComplex:
    """Six-vertex RP^2; closed but not orientable."""
    return SimplicialComplex.from_simplices(RP2_TRIANGLES, closed_pseudomanifold=True)


def mobius_band() -> SimplicialComplex:
    tris = [(0, 1, 3), (1, 3, 4), (1, 2, 4), (2, 4, 5), (2, 3, 5), (0, 3, 5)]
    return SimplicialComplex.from_simplices(tris)


def genus2_triangles() -> list[tuple[int, ...]]:
    """Connected sum of two seven-vertex tori glued along the triangle (0, 1, 3)."""
    removed = (0, 1, 3)
    first = [t for t in TORUS7_TRIANGLES if t != removed]
    relabel = {0: 0, 1: 1, 3: 3}
    nxt = 7
    for v in range(7):
        if v not in relabel:
            relabel[v] = nxt
            nxt += 1
    second = [tuple(sorted(relabel[v] for v in t)) for t in TORUS7_TRIANGLES if t != removed]
    return first + second


def genus2(area: float | None = 4 * math.pi) -> MetricComplex:
    """Genus-two surface (11 vertices, 26 triangles) with an equilateral metric.

    By default the edge length is chosen so the total area is ``4*pi``, the area
    of any hyperbolic genus-two surface.
    """
    K = SimplicialComplex.from_simplices(genus2_triangles(), closed_pseudomanifold=True)
    length = 1.0
    if area is not None:
        length = math.sqrt(area / (K.count(2) * math.sqrt(3) / 4))
    return MetricComplex(K, _edge_lengths(K, length))


def _torus_positions(N: int, width: float, height: float, jitter: float,
                     seed: int) -> np.ndarray:
    """Grid positions (vertex i*N + j near (i, j) * spacing), optionally jittered."""
    i, j = np.divmod(np.arange(N * N), N)
    pos = np.column_stack([i * width / N, j * height / N])
    if jitter:
        rng = np.random.default_rng(seed)
        pos += jitter * rng.uniform(-0.5, 0.5, pos.shape) * [width / N, height / N]
    return pos


def _torus_offset(pos: np.ndarray, u: int, v: int, width: float, height: float) -> np.ndarray:
    """Shortest periodic displacement from vertex u to vertex v."""
    d = pos[v] - pos[u]
    return d - np.round(d / [width, height]) * [width, height]


def flat_torus(N: int, width: float = 1.0, height: float = 1.0, *, jitter: float = 0.0,
               seed: int = 0) -> MetricComplex:
    """``N x N`` grid on the flat torus, every square split along its diagonal.

    ``jitter`` moves each vertex by up to ``jitter / 2`` grid spacings per axis
    (seeded), giving an irregular mesh of the same flat torus. Values above
    0.4 could fold triangles over and are rejected.
    """
    if not 0 <= jitter <= 0.4:
        raise ValueError("jitter must lie in [0, 0.4]")
    def vid(i: int, j: int) -> int:
        return (i % N) * N + (j % N)

    tris = []
    for i in range(N):
        for j in range(N):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)
            tris += [(a, b, c), (a, c, d)]
    K = SimplicialComplex.from_simplices(tris, closed_pseudomanifold=True)
    pos = _torus_positions(N, width, height, jitter, seed)
    lengths = {(u, v): float(np.linalg.norm(_torus_offset(pos, u, v, width, height)))
               for u, v in K.simplices[1]}
    return MetricComplex(K, lengths)


def flat_torus_dx(M: MetricComplex, N: int, width: float = 1.0, height: float = 1.0, *,
                  jitter: float = 0.0, seed: int = 0) -> np.ndarray:
    """Integrals of dx over the oriented edges of the matching :func:`flat_torus`."""
    pos = _torus_positions(N, width, height, jitter, seed)
    return np.array([_torus_offset(pos, u, v, width, height)[0]
                     for u, v in M.complex.simplices[1]])


def two_triangles() -> MetricComplex:
    """Two unit equilateral triangles sharing the edge (1, 2)."""
    K = SimplicialComplex.from_simplices([(0, 1, 2), (1, 2, 3)])
    return MetricComplex(K, _edge_lengths(K))


def dumbbell(loop: int = 6, neck: float = 0.5, loop_length: float = 3.0) -> MetricComplex:
    """Two polygons joined by a two-edge path; the neck vertex sits in the middle."""
    edges = [(i, (i + 1) % loop) for i in range(loop)]
    edges += [(loop + i, loop + (i + 1) % loop) for i in range(loop)]
    mid = 2 * loop
    edges += [(0, mid), (loop, mid)]
    K = SimplicialComplex.from_simplices(edges)
    lengths = {e: loop_length / loop for e in K.simplices[1]}
    lengths[(0, mid)] = neck
    lengths[(loop, mid)] = neck
    return MetricComplex(K, lengths)


def random_complex(seed: int = 1, vertices: int = 7, tets: int = 9) -> MetricComplex:
    """Seeded random pure 3-complex with the regular unit metric.

    Unused vertex labels are compacted away. The defaults give Betti numbers
    [1, 0, 2, 0], so there are 2-dimensional classes to exercise.
    """
    rng = np.random.default_rng(seed)
    chosen: set[tuple[int, ...]] = set()
    while len(chosen) < tets:
        chosen.add(tuple(sorted(int(v) for v in rng.choice(vertices, 4, replace=False))))
    used = sorted({v for s in chosen for v in s})
    relabel = {u: i for i, u in enumerate(used)}
    K = SimplicialComplex.from_simplices([tuple(relabel[v] for v in s) for s in sorted(chosen)])
    return MetricComplex(K, _edge_lengths(K))


BUNDLED = {
    "circle3": lambda: cycle(3),
    "torus7": torus7,
    "sphere2": lambda: sphere(2),
    "sphere3": lambda: sphere(3),
    "genus2": genus2,
    "random3": random_complex,
}
