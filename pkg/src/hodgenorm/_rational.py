"""Exact linear algebra over the rationals for sparse integer matrices.

Rows are stored as ``{column: Fraction}`` dicts so that the elimination on
boundary matrices (entries in {-1, 0, 1}, a handful per column) stays cheap.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

import numpy as np

SparseVec = dict[int, Fraction]


def _to_sparse(vec: Iterable) -> SparseVec:
    out: SparseVec = {}
    for i, v in enumerate(vec):
        if v:
            out[i] = Fraction(v)
    return out


def _axpy(target: SparseVec, coef: Fraction, src: SparseVec) -> None:
    """target += coef * src, dropping exact zeros."""
    for k, v in src.items():
        nv = target.get(k, 0) + coef * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)


class Echelon:
    """Incrementally grown row-echelon basis of a subspace of Q^dim.

    ``add`` reduces a vector against the current basis and keeps it when it is
    independent.
    """

    def __init__(self) -> None:
        self._rows: dict[int, SparseVec] = {}

    def __len__(self) -> int:
        return len(self._rows)

    def reduce(self, vec: SparseVec) -> SparseVec:
        v = dict(vec)
        while v:
            pivots = [k for k in v if k in self._rows]
            if not pivots:
                break
            k = min(pivots)
            _axpy(v, -v[k], self._rows[k])
        return v

    def add(self, vec: SparseVec | Sequence) -> bool:
        if not isinstance(vec, dict):
            vec = _to_sparse(vec)
        v = self.reduce(vec)
        if not v:
            return False
        piv = min(v)
        inv = 1 / v[piv]
        v = {k: x * inv for k, x in v.items()}
        # keep earlier rows free of the new pivot so reduction terminates quickly
        for row in self._rows.values():
            if piv in row:
                _axpy(row, -row[piv], v)
        self._rows[piv] = v
        return True

    def contains(self, vec: SparseVec | Sequence) -> bool:
        if not isinstance(vec, dict):
            vec = _to_sparse(vec)
        return not self.reduce(vec)


def columns(mat: np.ndarray) -> list[SparseVec]:
    mat = np.asarray(mat)
    cols = []
    for j in range(mat.shape[1]):
        nz = np.nonzero(mat[:, j])[0]
        cols.append({int(i): Fraction(int(mat[i, j])) if float(mat[i, j]).is_integer()
                     else Fraction(mat[i, j]) for i in nz})
    return cols


def rank(mat: np.ndarray) -> int:
    """Exact rank of an integer (or exactly representable float) matrix."""
    mat = np.asarray(mat)
    if mat.size == 0:
        return 0
    ech = Echelon()
    for col in columns(mat):
        ech.add(col)
    return len(ech)


def nullspace(mat: np.ndarray) -> list[list[Fraction]]:
    """Basis of the right kernel of ``mat``; each vector scaled to coprime integers."""
    mat = np.asarray(mat)
    m, n = mat.shape
    rows = [_to_sparse(mat[i]) for i in range(m)]
    pivots: dict[int, SparseVec] = {}
    for r in rows:
        for k, prow in pivots.items():
            if k in r:
                _axpy(r, -r[k], prow)
        if not r:
            continue
        piv = min(r)
        inv = 1 / r[piv]
        r = {k: x * inv for k, x in r.items()}
        for prow in pivots.values():
            if piv in prow:
                _axpy(prow, -prow[piv], r)
        pivots[piv] = r
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * n
        vec[f] = Fraction(1)
        for k, prow in pivots.items():
            if f in prow:
                vec[k] = -prow[f]
        basis.append(integerize(vec))
    return basis


def integerize(vec: Sequence[Fraction]) -> list[Fraction]:
    """Scale a rational vector to coprime integers with a positive leading entry."""
    den = 1
    for v in vec:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in vec]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g == 0:
        return [Fraction(0)] * len(vec)
    lead = next(v for v in ints if v)
    sign = 1 if lead > 0 else -1
    return [Fraction(sign * v // g) for v in ints]


def solve(mat: Sequence[Sequence], rhs: Sequence) -> list[Fraction]:
    """Solve a square nonsingular system exactly by Gauss-Jordan elimination."""
    n = len(mat)
    aug = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        prow = [x * inv for x in aug[col]]
        aug[col] = prow
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], prow)]
    return [aug[i][n] for i in range(n)]


def to_fraction(x: float, max_den: int = 10**12) -> Fraction:
    return Fraction(x).limit_denominator(max_den)
