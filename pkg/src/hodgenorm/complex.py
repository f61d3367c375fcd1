"""Finite oriented simplicial complexes, chains and (co)homology over Q."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import _rational

Simplex = tuple[int, ...]


class ComplexError(ValueError):
    """Raised for malformed complexes or operations outside their domain."""


class OrientationError(ComplexError):
    """Raised when a closed pseudomanifold admits no coherent orientation."""


def faces(simplex: Simplex) -> list[tuple[int, Simplex]]:
    """Codimension-one faces with their incidence signs (-1)**i."""
    return [((-1) ** i, simplex[:i] + simplex[i + 1:]) for i in range(len(simplex))]


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    """Oriented simplicial complex; every simplex is a sorted vertex tuple.

    Build with :meth:`from_simplices`, which closes the input under taking faces.
    """

    simplices: tuple[tuple[Simplex, ...], ...]
    vertex_count: int
    closed_pseudomanifold: bool = False
    _index: tuple[dict[Simplex, int], ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self) -> None:
        index = tuple({s: i for i, s in enumerate(level)} for level in self.simplices)
        object.__setattr__(self, "_index", index)
        self._validate()

    @classmethod
    def from_simplices(cls, simplices: Iterable[Sequence[int]], *,
                       closed_pseudomanifold: bool = False,
                       vertex_count: int | None = None) -> "SimplicialComplex":
        tops = {tuple(sorted(int(v) for v in s)) for s in simplices}
        for s in tops:
            if len(set(s)) != len(s):
                raise ComplexError(f"simplex {s} repeats a vertex")
        if not tops:
            raise ComplexError("empty complex")
        dim = max(len(s) for s in tops) - 1
        levels: list[set[Simplex]] = [set() for _ in range(dim + 1)]
        for s in tops:
            for k in range(1, len(s) + 1):
                levels[k - 1].update(combinations(s, k))
        nv = 1 + max(v for (v,) in levels[0])
        if vertex_count is not None:
            if vertex_count < nv:
                raise ComplexError("vertex index out of range")
            nv = vertex_count
        levels[0].update((v,) for v in range(nv))
        return cls(tuple(tuple(sorted(lv)) for lv in levels), nv,
                   closed_pseudomanifold=closed_pseudomanifold)

    def _validate(self) -> None:
        if not self.simplices:
            raise ComplexError("complex has no simplices")
        for p, level in enumerate(self.simplices):
            if len(self._index[p]) != len(level):
                raise ComplexError(f"duplicate simplices in dimension {p}")
            for s in level:
                if len(s) != p + 1 or list(s) != sorted(set(s)):
                    raise ComplexError(f"simplex {s} is not a sorted {p}-simplex")
                if p and any(f not in self._index[p - 1] for _, f in faces(s)):
                    raise ComplexError(f"a face of {s} is missing")
                if p == 0 and not 0 <= s[0] < self.vertex_count:
                    raise ComplexError(f"vertex {s[0]} out of range")
        if self.closed_pseudomanifold:
            n = self.dimension
            if n < 1:
                raise ComplexError("a closed pseudomanifold needs dimension >= 1")
            counts = np.abs(self.boundary_matrix(n)).sum(axis=1)
            bad = [self.simplices[n - 1][i] for i in np.nonzero(counts != 2)[0]]
            if bad:
                raise ComplexError(f"faces {bad[:3]} do not have exactly two cofaces")

    @property
    def dimension(self) -> int:
        return len(self.simplices) - 1

    def count(self, p: int) -> int:
        return len(self.simplices[p]) if 0 <= p <= self.dimension else 0

    def index(self, simplex: Sequence[int]) -> int:
        s = tuple(sorted(simplex))
        return self._index[len(s) - 1][s]

    @cached_property
    def _boundaries(self) -> dict[int, np.ndarray]:
        return {}

    def boundary_matrix(self, p: int) -> np.ndarray:
        """Integer matrix of the boundary map from p-chains to (p-1)-chains."""
        if not 1 <= p <= self.dimension:
            raise ComplexError(f"boundary degree {p} outside 1..{self.dimension}")
        cache = self._boundaries
        if p not in cache:
            rows = self._index[p - 1]
            mat = np.zeros((len(rows), self.count(p)), dtype=np.int64)
            for j, s in enumerate(self.simplices[p]):
                for sign, f in faces(s):
                    mat[rows[f], j] = sign
            mat.setflags(write=False)
            cache[p] = mat
        return cache[p]

    def _bd(self, p: int) -> np.ndarray:
        """Boundary matrix with the empty conventions at p = 0 and p = n + 1."""
        if p == 0:
            return np.zeros((0, self.count(0)), dtype=np.int64)
        if p == self.dimension + 1:
            return np.zeros((self.count(self.dimension), 0), dtype=np.int64)
        return self.boundary_matrix(p)

    def coboundary_matrix(self, p: int) -> np.ndarray:
        """Matrix of the coboundary from p-cochains to (p+1)-cochains."""
        if not 0 <= p <= self.dimension:
            raise ComplexError(f"coboundary degree {p} outside 0..{self.dimension}")
        return self._bd(p + 1).T

    def is_connected(self) -> bool:
        parent = list(range(self.vertex_count))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        if self.dimension >= 1:
            for a, b in self.simplices[1]:
                parent[find(a)] = find(b)
        return len({find(v) for v in range(self.vertex_count)}) == 1


@dataclass(frozen=True)
class Chain:
    degree: int
    coefficients: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "coefficients", np.asarray(self.coefficients))

    def __mul__(self, t: float) -> "Chain":
        return Chain(self.degree, self.coefficients * t)

    __rmul__ = __mul__

    def __add__(self, other: "Chain") -> "Chain":
        if other.degree != self.degree:
            raise ComplexError("cannot add chains of different degrees")
        return Chain(self.degree, self.coefficients + other.coefficients)

    def check(self, K: SimplicialComplex) -> "Chain":
        if len(self.coefficients) != K.count(self.degree):
            raise ComplexError(f"{self.degree}-chain has {len(self.coefficients)} "
                               f"coefficients, complex has {K.count(self.degree)} simplices")
        return self


@dataclass(frozen=True)
class Cochain:
    degree: int
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", np.asarray(self.values))

    def __mul__(self, t: float) -> "Cochain":
        return Cochain(self.degree, self.values * t)

    __rmul__ = __mul__

    def __add__(self, other: "Cochain") -> "Cochain":
        if other.degree != self.degree:
            raise ComplexError("cannot add cochains of different degrees")
        return Cochain(self.degree, self.values + other.values)

    def check(self, K: SimplicialComplex) -> "Cochain":
        if len(self.values) != K.count(self.degree):
            raise ComplexError(f"{self.degree}-cochain has {len(self.values)} "
                               f"values, complex has {K.count(self.degree)} simplices")
        return self

    def pair(self, chain: Chain) -> float:
        if chain.degree != self.degree:
            raise ComplexError("pairing needs equal degrees")
        return float(np.dot(self.values, chain.coefficients))


def _check_degree(K: SimplicialComplex, p: int) -> None:
    if not 0 <= p <= K.dimension:
        raise ComplexError(f"degree {p} outside 0..{K.dimension}")


def _basis(cycle_mat: np.ndarray, bd_mat: np.ndarray) -> list[list[Fraction]]:
    """Integer vectors in ker(cycle_mat) independent modulo im(bd_mat)."""
    ech = _rational.Echelon()
    for col in _rational.columns(bd_mat):
        ech.add(col)
    out = []
    for vec in _rational.nullspace(cycle_mat):
        if ech.add(vec):
            out.append(vec)
    return out


def homology_basis(K: SimplicialComplex, p: int) -> tuple[list[Chain], int]:
    """Cycles spanning H_p(K; Q) and the Betti number, computed exactly."""
    _check_degree(K, p)
    vecs = _basis(K._bd(p), K._bd(p + 1))
    chains = [Chain(p, np.array([float(v) for v in vec])) for vec in vecs]
    return chains, len(chains)


def cohomology_basis(K: SimplicialComplex, p: int) -> tuple[list[Cochain], int]:
    """Cocycles spanning H^p(K; Q), computed exactly."""
    _check_degree(K, p)
    vecs = _basis(K._bd(p + 1).T, K._bd(p).T)
    cochains = [Cochain(p, np.array([float(v) for v in vec])) for vec in vecs]
    return cochains, len(cochains)


def betti_numbers(K: SimplicialComplex) -> list[int]:
    ranks = [_rational.rank(K._bd(p)) for p in range(K.dimension + 2)]
    return [K.count(p) - ranks[p] - ranks[p + 1] for p in range(K.dimension + 1)]


def is_boundary(K: SimplicialComplex, chain: Chain | Sequence, p: int | None = None) -> bool:
    """Exact test that a chain lies in the image of the boundary map."""
    if isinstance(chain, Chain):
        p, coeffs = chain.degree, chain.coefficients
    else:
        coeffs = chain
    ech = _rational.Echelon()
    for col in _rational.columns(K._bd(p + 1)):
        ech.add(col)
    vec = {i: (c if isinstance(c, Fraction) else _rational.to_fraction(float(c)))
           for i, c in enumerate(coeffs) if c}
    return ech.contains(vec)


def fundamental_class(K: SimplicialComplex) -> Chain:
    """Coherently oriented sum of top simplices of a closed orientable pseudomanifold."""
    if not K.closed_pseudomanifold:
        raise OrientationError("fundamental class needs a closed pseudomanifold")
    n = K.dimension
    bd = K.boundary_matrix(n)
    m = K.count(n)
    signs = np.zeros(m, dtype=np.int64)
    # (n-1)-face -> its two cofaces with incidence numbers
    cofaces = [np.nonzero(bd[i])[0] for i in range(bd.shape[0])]
    neighbours: list[list[tuple[int, int]]] = [[] for _ in range(m)]
    for i, (a, b) in enumerate(cofaces):
        # coherent means the face cancels: s_a * bd[i,a] + s_b * bd[i,b] = 0
        rel = -int(bd[i, a] * bd[i, b])
        neighbours[a].append((b, rel))
        neighbours[b].append((a, rel))
    for start in range(m):
        if signs[start]:
            continue
        signs[start] = 1
        stack = [start]
        while stack:
            s = stack.pop()
            for t, rel in neighbours[s]:
                want = signs[s] * rel
                if signs[t] == 0:
                    signs[t] = want
                    stack.append(t)
                elif signs[t] != want:
                    raise OrientationError("complex is not orientable")
    chain = Chain(n, signs.astype(float))
    if np.any(bd @ signs):
        raise OrientationError("coherent orientation failed to give a cycle")
    return chain


def cap_product(K: SimplicialComplex, cochain: Cochain, chain: Chain) -> Chain:
    """Alexander-Whitney cap product of a p-cochain with an n-chain.

    ``[v0..vn] cap phi = phi([v0..vp]) [vp..vn]``; with the fundamental class
    this gives a Poincare dual cycle.
    """
    p, n = cochain.degree, chain.degree
    if p > n:
        raise ComplexError("cochain degree exceeds chain degree")
    out = np.zeros(K.count(n - p))
    for j, s in enumerate(K.simplices[n]):
        c = chain.coefficients[j]
        if not c:
            continue
        front = cochain.values[K.index(s[:p + 1])]
        if front:
            out[K.index(s[p:])] += c * front
    return Chain(n - p, out)
