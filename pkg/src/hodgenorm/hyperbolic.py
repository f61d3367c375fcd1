"""Geodesic straightening of simplices in the hyperboloid model of H^n."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from . import kernels

SHEET_TOL = 1e-9
DEGENERATE_TOL = 1e-13


class QuadratureError(RuntimeError):
    def __init__(self, message: str, estimate: float, error: float):
        super().__init__(f"{message} (estimate {estimate:.12g}, error {error:.3g})")
        self.estimate = estimate
        self.error = error


def minkowski(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Lorentzian form with the time coordinate last: sum x_i y_i - x_n y_n."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return (x[..., :-1] * y[..., :-1]).sum(axis=-1) - x[..., -1] * y[..., -1]


def as_hpoint(x: Sequence[float]) -> np.ndarray:
    """Validate a point on the upper sheet of the hyperboloid <x, x> = -1."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or len(x) < 2:
        raise ValueError("a hyperboloid point needs n + 1 >= 2 coordinates")
    q = float(minkowski(x, x))
    if abs(q + 1.0) > SHEET_TOL * max(1.0, x[-1] ** 2) or x[-1] < 1.0 - SHEET_TOL:
        raise ValueError(f"point {x} is not on the upper hyperboloid sheet (<x,x> = {q})")
    return x


def exp_origin(v: Sequence[float]) -> np.ndarray:
    """Exponential map at the origin (0, ..., 0, 1) of a tangent vector in R^n."""
    v = np.asarray(v, dtype=float)
    r = float(np.linalg.norm(v))
    if r == 0:
        return np.append(np.zeros_like(v), 1.0)
    return np.append(math.sinh(r) * v / r, math.cosh(r))


def distance(p: np.ndarray, q: np.ndarray) -> float:
    # 2 asinh(|p - q| / 2) avoids the cancellation of arccosh near 1
    diff = np.asarray(p, dtype=float) - np.asarray(q, dtype=float)
    chord = math.sqrt(max(0.0, float(minkowski(diff, diff))))
    return 2.0 * math.asinh(chord / 2.0)


def geodesic(p: np.ndarray, q: np.ndarray, t: float | np.ndarray) -> np.ndarray:
    """Constant-speed geodesic from p (t = 0) to q (t = 1)."""
    p, q = as_hpoint(p), as_hpoint(q)
    d = distance(p, q)
    t = np.asarray(t, dtype=float)
    if d < 1e-12:
        return np.broadcast_to(p, t.shape + p.shape).copy()
    s = math.sinh(d)
    a = np.sinh((1 - t) * d) / s
    b = np.sinh(t * d) / s
    return a[..., None] * p + b[..., None] * q


def random_points(rng: np.random.Generator, n: int, count: int, radius: float) -> np.ndarray:
    """Points exp_o(r u) with u uniform on S^{n-1} and r uniform in [0, radius]."""
    u = rng.standard_normal((count, n))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    r = radius * rng.random(count)
    return np.column_stack([np.sinh(r)[:, None] * u, np.cosh(r)])


def random_isometry(rng: np.random.Generator, n: int) -> np.ndarray:
    """Random element of SO+(n,1): a rotation composed with a boost."""
    Q = np.linalg.qr(rng.standard_normal((n, n)))[0]
    R = np.eye(n + 1)
    R[:n, :n] = Q
    beta = rng.uniform(-2.0, 2.0)
    Bst = np.eye(n + 1)
    Bst[0, 0] = Bst[n, n] = math.cosh(beta)
    Bst[0, n] = Bst[n, 0] = math.sinh(beta)
    return Bst @ R


@dataclass(frozen=True)
class StraightSimplex:
    """Iterated geodesic cone on ordered vertices, coning from the last vertex.

    ``a`` is the curvature scale: the metric is rescaled to curvature -a^2.
    """

    vertices: np.ndarray
    a: float = 1.0

    @property
    def k(self) -> int:
        return len(self.vertices) - 1

    @property
    def ambient_dim(self) -> int:
        return self.vertices.shape[1] - 1

    def evaluate(self, bary: np.ndarray) -> np.ndarray:
        """Image of barycentric coordinates (shape (..., k+1)) on the hyperboloid."""
        bary = np.asarray(bary, dtype=float)
        flat = bary.reshape(-1, self.k + 1)
        out = self._eval(flat, self.k)
        return out.reshape(bary.shape[:-1] + (self.vertices.shape[1],))

    def _eval(self, bary: np.ndarray, k: int) -> np.ndarray:
        V = self.vertices
        if k == 0:
            return np.broadcast_to(V[0], (len(bary), V.shape[1])).copy()
        t = bary[:, k]
        rest = 1.0 - t
        safe = np.where(rest > 0, rest, 1.0)
        prev = self._eval(bary[:, :k] / safe[:, None], k - 1)
        q = V[k]
        c = np.maximum(-minkowski(prev, q), 1.0)
        d = np.arccosh(c)
        tiny = d < 1e-12
        dd = np.where(tiny, 1.0, d)
        s = np.sinh(dd)
        A = np.where(tiny, 1 - t, np.sinh((1 - t) * dd) / s)
        B = np.where(tiny, t, np.sinh(t * dd) / s)
        out = A[:, None] * prev + B[:, None] * q
        out[rest <= 0] = q
        return out

    def face(self, indices: Sequence[int]) -> "StraightSimplex":
        return StraightSimplex(self.vertices[list(indices)], self.a)

    def restricted(self, indices: Sequence[int]) -> Callable[[np.ndarray], np.ndarray]:
        """Parent evaluator restricted to a face: zeros at the missing vertices."""
        idx = list(indices)

        def ev(bary: np.ndarray) -> np.ndarray:
            bary = np.asarray(bary, dtype=float)
            full = np.zeros(bary.shape[:-1] + (self.k + 1,))
            full[..., idx] = bary
            return self.evaluate(full)

        return ev


def straighten(vertices: Sequence[Sequence[float]], a: float = 1.0) -> StraightSimplex:
    V = np.array([as_hpoint(v) for v in vertices])
    if a <= 0:
        raise ValueError("curvature scale a must be positive")
    n = V.shape[1] - 1
    if len(V) - 1 > n:
        raise ValueError(f"a {len(V) - 1}-simplex does not fit in H^{n}")
    V.setflags(write=False)
    return StraightSimplex(V, float(a))


@lru_cache(maxsize=None)
def _unit_rule(k: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Tensor Gauss-Legendre nodes and weights on [0, 1]^k."""
    x, w = np.polynomial.legendre.leggauss(order)
    x, w = 0.5 * (x + 1), 0.5 * w
    U = np.stack([g.ravel() for g in np.meshgrid(*([x] * k), indexing="ij")], axis=1)
    W = np.prod(np.stack([g.ravel() for g in np.meshgrid(*([w] * k), indexing="ij")], axis=1), axis=1)
    return U, W


@lru_cache(maxsize=None)
def _child_offsets(k: int) -> np.ndarray:
    return np.array(np.meshgrid(*([[0.0, 0.5]] * k), indexing="ij")).reshape(k, -1).T


@dataclass(frozen=True)
class QuadratureResult:
    """Integral estimate; ``roundoff`` marks results limited by rounding, not by rtol."""

    value: float
    error: float
    boxes: int
    roundoff: bool = False


def _box_integrals(integrand, lo: np.ndarray, width: np.ndarray, k: int, order: int,
                   chunk: int = 1 << 17) -> np.ndarray:
    U, W = _unit_rule(k, order)
    per = max(1, chunk // len(W))
    out = np.empty(len(lo))
    for i in range(0, len(lo), per):
        pts = lo[i:i + per, None, :] + width[i:i + per, None, None] * U[None, :, :]
        vals = integrand(pts.reshape(-1, k)).reshape(-1, len(W))
        out[i:i + per] = (vals @ W) * width[i:i + per] ** k
    return out


def _adaptive(integrand: Callable[[np.ndarray], np.ndarray], k: int, rtol: float,
              atol: float, order: int, max_level: int, max_boxes: int = 50_000,
              stall_rtol: float = 1e-6) -> QuadratureResult:
    """Adaptive cubature on [0, 1]^k by bisecting every axis of unresolved boxes.

    A box is accepted when its tensor Gauss-Legendre value agrees with the sum
    over its 2^k children to within its volume share of the global tolerance
    (or to rounding level); the accepted child sum is used. Refinement stops as
    soon as the summed error estimates meet the global tolerance. All boxes of
    a level are evaluated in one batched integrand call.

    When the total error estimate has not halved over three levels the
    integrand is taken to be rounding-limited: the result is returned with
    ``roundoff`` set if its error is within ``stall_rtol`` relative, and
    refinement otherwise continues until the level or box budget runs out.
    """
    offsets = _child_offsets(k)
    lo = np.zeros((1, k))
    width = np.ones(1)
    parent = _box_integrals(integrand, lo, width, k, order)
    done_value, done_error, boxes = 0.0, 0.0, 1
    history: list[float] = []
    pending_value, pending_error = float(parent.sum()), math.inf
    for _ in range(max_level):
        clo = (lo[:, None, :] + width[:, None, None] * offsets[None]).reshape(-1, k)
        cw = np.repeat(width / 2, len(offsets))
        child = _box_integrals(integrand, clo, cw, k, order).reshape(len(lo), len(offsets))
        boxes += child.size
        csum = child.sum(axis=1)
        err = np.abs(csum - parent)
        estimate = done_value + csum.sum()
        total = done_error + err.sum()
        tol = max(rtol * abs(estimate), atol)
        if total <= tol:
            return QuadratureResult(float(estimate), float(total), boxes)
        history.append(total)
        if (len(history) >= 4 and history[-1] > 0.5 * history[-4]
                and total <= max(stall_rtol * abs(estimate), atol)):
            return QuadratureResult(float(estimate), float(total), boxes, roundoff=True)
        floor = 64 * np.finfo(float).eps * np.abs(child).sum(axis=1)
        ok = err <= np.maximum(tol * width ** k, floor)
        done_value += csum[ok].sum()
        done_error += err[ok].sum()
        pending_value, pending_error = float(csum[~ok].sum()), float(err[~ok].sum())
        if boxes + int((~ok).sum()) * len(offsets) > max_boxes:
            break
        keep = np.repeat(~ok, len(offsets))
        lo, width, parent = clo[keep], cw[keep], child[~ok].ravel()
    raise QuadratureError("volume quadrature did not converge",
                          done_value + pending_value, done_error + pending_error)


def boost_to_origin(m: np.ndarray) -> np.ndarray:
    """Lorentz boost (an isometry) taking the hyperboloid point m to the origin."""
    m = as_hpoint(m)
    y, t = m[:-1], m[-1]
    r = np.linalg.norm(y)
    n = len(y)
    B = np.eye(n + 1)
    if r == 0:
        return B
    u = y / r
    B[:n, :n] += (t - 1) * np.outer(u, u)
    B[:n, n] = -y
    B[n, :n] = -y
    B[n, n] = t
    return B


def recentre(V: np.ndarray) -> np.ndarray:
    """Move a vertex set by an isometry so that its normalised mean is the origin.

    Volumes are isometry invariant; small coordinates keep the Minkowski
    products in the density well conditioned.
    """
    m = V.sum(axis=0)
    m = m / np.sqrt(-minkowski(m, m))
    m[-1] = np.sqrt(1.0 + m[:-1] @ m[:-1])
    return V @ boost_to_origin(m).T


def integrate_volume(s: StraightSimplex, *, rtol: float = 1e-8, atol: float = 1e-13,
                     order: int = 8, max_level: int = 14, max_boxes: int = 50_000) -> QuadratureResult:
    """k-volume of the straightened simplex with an error estimate.

    Uses the cube parametrisation of the iterated cone, whose density is
    evaluated with exact derivatives, and adaptive tensor Gauss-Legendre cubature.
    """
    k = s.k
    if k == 0:
        return QuadratureResult(0.0, 0.0, 0)
    V = np.ascontiguousarray(recentre(s.vertices))
    sv = np.linalg.svd(V, compute_uv=False)
    if sv[-1] <= DEGENERATE_TOL * sv[0]:
        # vertices span a lower-dimensional hyperbolic subspace
        return QuadratureResult(0.0, 0.0, 0)
    res = _adaptive(lambda U: kernels.cone_integrand(V, U), k, rtol, atol, order, max_level,
                    max_boxes)
    scale = s.a ** (-k)
    return QuadratureResult(res.value * scale, res.error * scale, res.boxes, res.roundoff)


def simplex_volume(s: StraightSimplex, **kw) -> float:
    return integrate_volume(s, **kw).value


def cube_to_barycentric(U: np.ndarray) -> np.ndarray:
    """Barycentric coordinates of cube points under the coning parametrisation."""
    U = np.atleast_2d(U)
    N, k = U.shape
    bary = np.zeros((N, k + 1))
    rem = np.ones(N)
    for j in range(k, 0, -1):
        bary[:, j] = rem * U[:, j - 1]
        rem = rem * (1 - U[:, j - 1])
    bary[:, 0] = rem
    return bary


def evaluator_volume(evaluate: Callable[[np.ndarray], np.ndarray], k: int, *,
                     step: float = 1e-5, rtol: float = 1e-8, order: int = 6,
                     max_level: int = 8) -> QuadratureResult:
    """Volume of an arbitrary evaluator by central differences in cube coordinates."""

    def density(U: np.ndarray) -> np.ndarray:
        cols = []
        for i in range(k):
            e = np.zeros(k)
            e[i] = step
            hi = np.clip(U + e, 0.0, 1.0)
            lo = np.clip(U - e, 0.0, 1.0)
            width = (hi[:, i] - lo[:, i])[:, None]
            cols.append((evaluate(cube_to_barycentric(hi)) - evaluate(cube_to_barycentric(lo))) / width)
        T = np.stack(cols, axis=1)
        G = np.einsum("nad,nbd->nab", T[..., :-1], T[..., :-1]) - \
            np.einsum("na,nb->nab", T[..., -1], T[..., -1])
        return np.sqrt(np.maximum(np.linalg.det(G), 0.0))

    return _adaptive(density, k, rtol, 1e-12, order, max_level)


def triangle_angles(p: np.ndarray, q: np.ndarray, r: np.ndarray) -> tuple[float, float, float]:
    """Interior angles of the geodesic triangle pqr."""

    def angle(x, y, z):
        u = y + minkowski(x, y) * x
        w = z + minkowski(x, z) * x
        cosang = minkowski(u, w) / math.sqrt(minkowski(u, u) * minkowski(w, w))
        return math.acos(min(1.0, max(-1.0, float(cosang))))

    return angle(p, q, r), angle(q, r, p), angle(r, p, q)


def _lobachevsky_reduced(theta: float) -> float:
    # -int_0^theta log(2 sin u) du split as log(2u) + log(sin u / u) for the singularity
    if theta == 0.0:
        return 0.0
    smooth = integrate.quad(lambda u: math.log(math.sin(u) / u) if u else 0.0, 0.0, theta,
                            epsabs=1e-15, epsrel=1e-13, limit=200)[0]
    return -theta * (math.log(2 * theta) - 1.0) - smooth


def lobachevsky(theta: float) -> float:
    """Lobachevsky function -int_0^theta log|2 sin u| du (odd, pi-periodic)."""
    t = math.fmod(float(theta), math.pi)
    if t > math.pi / 2:
        t -= math.pi
    elif t < -math.pi / 2:
        t += math.pi
    if t < 0:
        return -_lobachevsky_reduced(-t)
    return _lobachevsky_reduced(t)


def volume_bound(k: int, a: float = 1.0) -> float:
    """Upper bound pi a^-k / (k-1)! on straightened k-simplex volumes."""
    if k < 2:
        raise ValueError("the straightened volume bound needs k >= 2")
    if a <= 0:
        raise ValueError("curvature scale a must be positive")
    return math.pi * a ** (-k) / math.factorial(k - 1)


def regular_simplex_vertices(n: int, radius: float) -> np.ndarray:
    """Vertices of a regular n-simplex in H^n at distance ``radius`` from the origin."""
    E = np.eye(n + 1) - 1.0 / (n + 1)
    basis = np.linalg.svd(E)[2][:n]  # orthonormal basis of the sum-zero hyperplane
    dirs = E @ basis.T
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    return np.array([exp_origin(radius * d) for d in dirs])
