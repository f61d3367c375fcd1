"""Piecewise-flat metrics, Whitney-form inner products and discrete Hodge theory."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from . import forms
from .complex import Cochain, ComplexError, SimplicialComplex

SOLVE_RTOL = 1e-10


class MetricError(ValueError):
    """Raised for degenerate simplices or inconsistent metric data."""


class CocycleError(ValueError):
    def __init__(self, violation: float):
        super().__init__(f"cochain is not a cocycle (|d c| = {violation:.3e})")
        self.violation = violation


def _lengths_array(K: SimplicialComplex, edge_lengths) -> np.ndarray:
    if isinstance(edge_lengths, Mapping):
        out = np.empty(K.count(1))
        for k, e in enumerate(K.simplices[1]):
            if e in edge_lengths:
                out[k] = edge_lengths[e]
            elif e[::-1] in edge_lengths:
                out[k] = edge_lengths[e[::-1]]
            else:
                raise MetricError(f"no length for edge {e}")
        return out
    out = np.asarray(edge_lengths, dtype=float)
    if out.shape != (K.count(1),):
        raise MetricError("edge length array does not match the edges")
    return out


@dataclass(frozen=True, eq=False)
class MetricComplex:
    """A pure simplicial complex with edge lengths giving flat simplices."""

    complex: SimplicialComplex
    edge_lengths: np.ndarray
    vertex_coords: np.ndarray | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        K = self.complex
        if K.dimension < 1:
            raise MetricError("metric complexes need dimension >= 1")
        lengths = self.edge_lengths
        if self.vertex_coords is not None:
            X = np.asarray(self.vertex_coords, dtype=float)
            object.__setattr__(self, "vertex_coords", X)
            induced = np.array([np.linalg.norm(X[a] - X[b]) for a, b in K.simplices[1]])
            if lengths is None:
                lengths = induced
            else:
                lengths = _lengths_array(K, lengths)
                if not np.allclose(lengths, induced, rtol=1e-9, atol=0):
                    raise MetricError("edge lengths disagree with vertex coordinates")
        lengths = _lengths_array(K, lengths)
        if np.any(~np.isfinite(lengths)) or np.any(lengths <= 0):
            raise MetricError("edge lengths must be positive")
        lengths.setflags(write=False)
        object.__setattr__(self, "edge_lengths", lengths)
        n = K.dimension
        covered = set()
        for s in K.simplices[n]:
            covered.update(s)
        if len(covered) != K.vertex_count:
            raise MetricError("complex is not pure: some vertex lies in no top simplex")
        for p in range(1, n):
            self.simplex_geometry(p)
        self.simplex_geometry(n)

    @property
    def dimension(self) -> int:
        return self.complex.dimension

    def _length(self, a: int, b: int) -> float:
        return self.edge_lengths[self.complex.index((a, b))]

    def simplex_geometry(self, p: int) -> tuple[np.ndarray, np.ndarray]:
        """Edge-vector Gram matrices (S, p, p) and volumes (S,) of all p-simplices.

        The Gram matrix entry G_ij = <v_i - v_0, v_j - v_0> comes from the law of
        cosines; positive definiteness is the Cayley-Menger nondegeneracy test.
        """
        key = ("geom", p)
        if key in self._cache:
            return self._cache[key]
        simplices = self.complex.simplices[p]
        G = np.empty((len(simplices), p, p))
        for t, s in enumerate(simplices):
            d0 = [self._length(s[0], s[i]) ** 2 for i in range(1, p + 1)]
            for i in range(p):
                G[t, i, i] = d0[i]
                for j in range(i + 1, p):
                    g = 0.5 * (d0[i] + d0[j] - self._length(s[i + 1], s[j + 1]) ** 2)
                    G[t, i, j] = G[t, j, i] = g
        det = np.linalg.det(G)
        scale = np.prod(np.diagonal(G, axis1=1, axis2=2), axis=1)
        bad = np.nonzero(det <= 1e-12 * scale)[0]
        if len(bad):
            raise MetricError(f"degenerate {p}-simplex {simplices[bad[0]]}")
        vol = np.sqrt(det) / math.factorial(p)
        self._cache[key] = (G, vol)
        return G, vol

    def volume(self) -> float:
        return float(self.simplex_geometry(self.dimension)[1].sum())

    @cached_property
    def _top(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Barycentric gradient inner products, volumes and orthonormal coordinates."""
        n = self.dimension
        G, vol = self.simplex_geometry(n)
        Ginv = np.linalg.inv(G)
        S = len(vol)
        grads = np.empty((S, n + 1, n + 1))
        grads[:, 1:, 1:] = Ginv
        grads[:, 0, 1:] = -Ginv.sum(axis=1)
        grads[:, 1:, 0] = -Ginv.sum(axis=2)
        grads[:, 0, 0] = Ginv.sum(axis=(1, 2))
        coords = np.linalg.cholesky(G)  # row i = v_{i+1} - v_0 in an orthonormal frame
        return grads, vol, coords


def whitney_gram(M: MetricComplex, p: int) -> sp.csr_matrix:
    """L2 Gram matrix of the Whitney p-forms.

    For faces F, E of a top simplex the Whitney forms are
    p! sum_j (-1)^j lambda_{F_j} d lambda_{F minus F_j}; the pairing integrates the
    products of barycentric coordinates exactly and pairs wedges of gradients
    through Gram determinants.
    """
    n = M.dimension
    if not 0 <= p <= n:
        raise ComplexError(f"degree {p} outside 0..{n}")
    key = ("gram", p)
    if key in M._cache:
        return M._cache[key]
    K = M.complex
    grads, vol, _ = M._top
    S = len(vol)
    local = list(combinations(range(n + 1), p + 1))
    tops = np.array(K.simplices[n])
    gidx = np.array([[K.index(tuple(t[list(f)])) for f in local] for t in tops])
    integ = lambda a, b: vol * (1.0 + (a == b)) / ((n + 1) * (n + 2))
    fact2 = math.factorial(p) ** 2
    rows, cols, vals = [], [], []
    for a, F in enumerate(local):
        for b, E in enumerate(local):
            if b < a:
                continue
            acc = np.zeros(S)
            for j in range(p + 1):
                Fr = F[:j] + F[j + 1:]
                for k in range(p + 1):
                    Er = E[:k] + E[k + 1:]
                    if p:
                        d = np.linalg.det(grads[:, list(Fr)][:, :, list(Er)])
                    else:
                        d = 1.0
                    acc += (-1) ** (j + k) * integ(F[j], E[k]) * d
            acc *= fact2
            rows.append(gidx[:, a]); cols.append(gidx[:, b]); vals.append(acc)
            if b != a:
                rows.append(gidx[:, b]); cols.append(gidx[:, a]); vals.append(acc)
    m = K.count(p)
    mat = sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                        shape=(m, m)).tocsr()
    M._cache[key] = mat
    return mat


def _d(M: MetricComplex, p: int) -> sp.csr_matrix:
    """Sparse coboundary from degree p to p+1 (empty outside 0..n-1)."""
    return sp.csr_matrix(M.complex._bd(p + 1).T.astype(float))


@dataclass(frozen=True)
class HodgeLaplacian:
    """Delta_p = delta d + d delta in weak form: stiffness x = lambda * mass x."""

    degree: int
    stiffness: np.ndarray
    mass: np.ndarray

    def eigenvalues(self) -> np.ndarray:
        return scipy.linalg.eigh(self.stiffness, self.mass, eigvals_only=True)

    def kernel_dimension(self, threshold: float = 1e-8) -> int:
        return int(np.sum(self.eigenvalues() <= threshold))

    def apply(self, x: np.ndarray) -> np.ndarray:
        return scipy.linalg.solve(self.mass, self.stiffness @ x, assume_a="pos")


def _mass_inv_times(M: MetricComplex, p: int, rhs: np.ndarray) -> np.ndarray:
    return scipy.linalg.cho_solve(scipy.linalg.cho_factor(whitney_gram(M, p).toarray()), rhs)


def hodge_laplacian(M: MetricComplex, p: int) -> HodgeLaplacian:
    n = M.dimension
    if not 0 <= p <= n:
        raise ComplexError(f"degree {p} outside 0..{n}")
    Mp = whitney_gram(M, p).toarray()
    K = np.zeros_like(Mp)
    if p < n:
        dp = _d(M, p)
        K += (dp.T @ whitney_gram(M, p + 1) @ dp).toarray()
    if p > 0:
        dq = _d(M, p - 1).toarray()
        B = Mp @ dq
        K += B @ _mass_inv_times(M, p - 1, B.T)
    K = 0.5 * (K + K.T)
    return HodgeLaplacian(p, K, Mp)


@dataclass(frozen=True)
class HarmonicForm:
    cochain: Cochain
    residual: float
    norm_sq: float

    @property
    def degree(self) -> int:
        return self.cochain.degree

    @property
    def norm(self) -> float:
        return math.sqrt(max(self.norm_sq, 0.0))


def gram_norm_sq(M: MetricComplex, c: Cochain) -> float:
    v = np.asarray(c.values, dtype=float)
    return float(v @ (whitney_gram(M, c.degree) @ v))


def cocycle_violation(M: MetricComplex, c: Cochain) -> float:
    if c.degree >= M.dimension:
        return 0.0
    return float(np.max(np.abs(_d(M, c.degree) @ c.values), initial=0.0))


def _exact_part(M: MetricComplex, c: Cochain) -> np.ndarray:
    """Gram-orthogonal projection of c onto the coboundaries d(C^{p-1})."""
    p = c.degree
    if p == 0:
        return np.zeros(len(c.values))
    d = _d(M, p - 1)
    Mp = whitney_gram(M, p)
    A = (d.T @ Mp @ d).toarray()
    rhs = d.T @ (Mp @ c.values)
    phi = scipy.linalg.lstsq(A, rhs, cond=SOLVE_RTOL, lapack_driver="gelsd")[0]
    return d @ phi


def harmonic_representative(M: MetricComplex, c: Cochain, *, tol: float = 1e-9) -> HarmonicForm:
    """Discrete harmonic form in the cohomology class of the cocycle ``c``.

    Minimises the Gram norm over c + d(C^{p-1}); the residual is the Euclidean
    norm of the Hodge Laplacian stiffness applied to the result.
    """
    c = c.check(M.complex)
    vals = np.asarray(c.values, dtype=float)
    viol = cocycle_violation(M, c)
    if viol > tol * max(1.0, float(np.max(np.abs(vals), initial=0.0))):
        raise CocycleError(viol)
    h = vals - _exact_part(M, c)
    lap = hodge_laplacian(M, c.degree)
    residual = float(np.linalg.norm(lap.stiffness @ h))
    form = Cochain(c.degree, h)
    return HarmonicForm(form, residual, gram_norm_sq(M, form))


def harmonic_norm(M: MetricComplex, c: Cochain) -> float:
    return harmonic_representative(M, c).norm


def hodge_decomposition(M: MetricComplex, c: Cochain) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split a p-cochain into Gram-orthogonal exact, coexact and harmonic parts."""
    p, n = c.degree, M.dimension
    vals = np.asarray(c.values, dtype=float)
    exact = _exact_part(M, c)
    coexact = np.zeros_like(vals)
    if p < n:
        d = _d(M, p).toarray()
        MinvDt = _mass_inv_times(M, p, d.T @ whitney_gram(M, p + 1).toarray())
        # coexact = M^-1 d^T M' y with d(coexact) = d(c)
        A = d @ MinvDt
        y = scipy.linalg.lstsq(A, d @ vals, cond=SOLVE_RTOL, lapack_driver="gelsd")[0]
        coexact = MinvDt @ y
    return exact, coexact, vals - exact - coexact


@dataclass(frozen=True)
class PointwiseNorms:
    """Per-top-simplex norms of the constant form fitted to a cochain.

    ``linf`` is exact when ``exact`` is set; otherwise it is a certified lower
    bound found by frame ascent and ``linf_upper`` (= l2) bounds it from above.
    """

    l2: np.ndarray
    linf: np.ndarray
    linf_upper: np.ndarray
    exact: bool
    coefficients: np.ndarray


def constant_forms(M: MetricComplex, c: Cochain) -> np.ndarray:
    """Least-squares constant p-form on each top simplex matching the face integrals.

    Coefficients are in the orthonormal frame of the simplex's Cholesky coordinates.
    """
    K, n, p = M.complex, M.dimension, c.degree
    if not 0 <= p <= n:
        raise ComplexError(f"degree {p} outside 0..{n}")
    c = c.check(K)
    _, _, coords = M._top
    X = np.concatenate([np.zeros((len(coords), 1, n)), coords], axis=1)  # (S, n+1, n)
    local = list(combinations(range(n + 1), p + 1))
    idx = forms.basis(n, p)
    out = np.empty((len(coords), len(idx)))
    scale = 1.0 / math.factorial(p)
    for t, top in enumerate(K.simplices[n]):
        B = np.empty((len(local), len(idx)))
        rhs = np.empty(len(local))
        for r, F in enumerate(local):
            E = X[t, list(F[1:])] - X[t, F[0]]
            for q, I in enumerate(idx):
                B[r, q] = (np.linalg.det(E[:, I]) if p else 1.0) * scale
            rhs[r] = c.values[K.index(tuple(top[i] for i in F))]
        out[t] = np.linalg.lstsq(B, rhs, rcond=None)[0]
    return out


def pointwise_norms(M: MetricComplex, c: Cochain, *, rng: np.random.Generator | None = None
                    ) -> PointwiseNorms:
    n, p = M.dimension, c.degree
    coeffs = constant_forms(M, c)
    l2 = np.linalg.norm(coeffs, axis=1)
    linf = np.empty(len(coeffs))
    exact = True
    for t, a in enumerate(coeffs):
        linf[t], ex = forms.comass(a, n, p, rng=rng)
        exact &= ex
    upper = linf.copy() if exact else l2.copy()
    return PointwiseNorms(l2, linf, upper, exact, coeffs)


def comass(M: MetricComplex, c: Cochain) -> tuple[float, bool]:
    """Maximum over top simplices of the pointwise sup norm, with an exactness flag."""
    pw = pointwise_norms(M, c)
    return float(pw.linf.max()), pw.exact


def spectral_lambda1(M: MetricComplex) -> float:
    """Smallest positive eigenvalue of the scalar Laplacian."""
    if not M.complex.is_connected():
        raise MetricError("spectral gap needs a connected complex")
    ev = hodge_laplacian(M, 0).eigenvalues()
    return float(ev[1])


def li_subsolution_defect(M: MetricComplex, form: HarmonicForm, lam: float) -> float:
    """Diagnostic for Delta f <= lam f with f the pointwise l2 norm of a harmonic form.

    f is averaged to vertices and tested weakly against the hat functions:
    returns max_i (int grad f . grad phi_i - lam int f phi_i) / int f phi_i,
    which is <= 0 when the inequality holds in the discrete sense.
    """
    K, n = M.complex, M.dimension
    _, vol, _ = M._top
    cell = pointwise_norms(M, form.cochain).l2
    f = np.zeros(K.vertex_count)
    w = np.zeros(K.vertex_count)
    for t, s in enumerate(K.simplices[n]):
        for v in s:
            f[v] += cell[t] * vol[t]
            w[v] += vol[t]
    f /= w
    lap = hodge_laplacian(M, 0)
    lhs = lap.stiffness @ f - lam * (lap.mass @ f)
    denom = lap.mass @ f
    denom = np.where(denom > 0, denom, np.inf)
    return float(np.max(lhs / denom))
