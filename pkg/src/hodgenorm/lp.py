"""Revised simplex solver and the simplicial l1 / dual l-infinity seminorms."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

import numpy as np
import scipy.linalg

from . import _rational
from .complex import Chain, Cochain, ComplexError, SimplicialComplex, is_boundary
from .metric import HarmonicForm, MetricComplex, comass

Status = Literal["optimal", "unbounded", "infeasible"]

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-9


@dataclass
class LPResult:
    status: Status
    x: np.ndarray | None
    objective: float
    basis: list[int] = field(default_factory=list)
    duals: np.ndarray | None = None
    iterations: int = 0
    slackness_gap: float = math.nan


class _Simplex:
    """Dense revised simplex on min c.x, A x = b, x >= 0 with Bland's rule."""

    def __init__(self, A: np.ndarray, b: np.ndarray, max_iter: int):
        self.A = A
        self.b = b
        self.max_iter = max_iter
        self.iterations = 0

    def run(self, c: np.ndarray, basis: list[int], allowed: np.ndarray) -> tuple[str, list[int]]:
        A, b = self.A, self.b
        while True:
            if self.iterations >= self.max_iter:
                raise RuntimeError("simplex iteration limit reached")
            self.iterations += 1
            lu = scipy.linalg.lu_factor(A[:, basis])
            xB = scipy.linalg.lu_solve(lu, b)
            y = scipy.linalg.lu_solve(lu, c[basis], trans=1)
            red = c - A.T @ y
            scale = 1.0 + np.abs(c).max(initial=0.0)
            inbasis = np.zeros(A.shape[1], dtype=bool)
            inbasis[basis] = True
            cand = np.nonzero(allowed & ~inbasis & (red < -PIVOT_TOL * scale))[0]
            if len(cand) == 0:
                return "optimal", basis
            j = int(cand[0])  # Bland: lowest index entering
            d = scipy.linalg.lu_solve(lu, A[:, j])
            rows = np.nonzero(d > PIVOT_TOL)[0]
            if len(rows) == 0:
                return "unbounded", basis
            ratios = np.maximum(xB[rows], 0.0) / d[rows]
            best = ratios.min()
            ties = rows[ratios <= best + 1e-12 * (1.0 + best)]
            leave = min(ties, key=lambda r: basis[r])  # Bland: lowest index leaving
            basis = list(basis)
            basis[leave] = j


def lp_solve(c, A, b, sense: Literal["min", "max"] = "min", *, max_iter: int = 50_000) -> LPResult:
    """Solve min (or max) c.x subject to A x = b, x >= 0.

    Two-phase revised simplex with Bland's anti-cycling rule. Infeasible and
    unbounded problems are reported through ``status``.
    """
    c = np.asarray(c, dtype=float).ravel()
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float).ravel()
    m, n = A.shape
    if c.shape != (n,) or b.shape != (m,):
        raise ValueError("dimension mismatch between c, A and b")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b)) and np.all(np.isfinite(c))):
        raise ValueError("LP data must be finite")
    cost = -c if sense == "max" else c
    flip = b < 0
    A = np.where(flip[:, None], -A, A)
    b = np.where(flip, -b, b)

    # phase 1 with one artificial per row
    Aext = np.hstack([A, np.eye(m)])
    solver = _Simplex(Aext, b, max_iter)
    allowed = np.ones(n + m, dtype=bool)
    c1 = np.concatenate([np.zeros(n), np.ones(m)])
    _, basis = solver.run(c1, list(range(n, n + m)), allowed)
    xB = np.linalg.solve(Aext[:, basis], b)
    if xB[np.array(basis) >= n].sum() > FEAS_TOL * (1.0 + np.abs(b).max(initial=0.0)):
        return LPResult("infeasible", None, math.nan, iterations=solver.iterations)

    # drive artificials out of the basis; rows where that fails are redundant
    keep_rows = list(range(m))
    for r in range(m):
        if basis[r] < n:
            continue
        Binv_row = np.linalg.solve(Aext[:, basis].T, np.eye(m)[r])
        row = Binv_row @ A
        inb = set(basis)
        cand = [j for j in np.nonzero(np.abs(row) > PIVOT_TOL)[0] if j not in inb]
        if cand:
            basis[r] = int(cand[0])
        else:
            keep_rows.remove(r)
    basis = [basis[r] for r in keep_rows]
    A2, b2 = A[keep_rows], b[keep_rows]

    solver2 = _Simplex(A2, b2, max_iter)
    solver2.iterations = solver.iterations
    status, basis = solver2.run(cost, basis, np.ones(n, dtype=bool))
    if status == "unbounded":
        return LPResult("unbounded", None, -math.inf if sense == "min" else math.inf,
                        basis, iterations=solver2.iterations)
    B = A2[:, basis]
    xB = np.linalg.solve(B, b2)
    x = np.zeros(n)
    x[basis] = np.maximum(xB, 0.0)
    y = np.linalg.solve(B.T, cost[basis])
    red = cost - A2.T @ y
    gap = float(abs(x @ red))
    duals = np.zeros(m)
    duals[keep_rows] = np.where(flip[keep_rows], -y, y)
    if sense == "max":
        duals = -duals
    obj = float(c @ x)
    return LPResult("optimal", x, obj, basis, duals, solver2.iterations, gap)


def exact_basic_solution(A: np.ndarray, b: np.ndarray, basis: list[int]) -> list[Fraction] | None:
    """Rational vertex for an optimal basis of an integer LP, or None if singular.

    Rows are selected greedily to make the basis square and nonsingular.
    """
    A = np.asarray(A)
    cols = _rational.columns(A[:, basis].T)  # rows of A_B as sparse vectors
    ech = _rational.Echelon()
    rows = [i for i, r in enumerate(cols) if ech.add(r)]
    if len(rows) != len(basis):
        return None
    sub = [[A[i, j] for j in basis] for i in rows]
    try:
        xB = _rational.solve(sub, [b[i] for i in rows])
    except ZeroDivisionError:
        return None
    x = [Fraction(0)] * A.shape[1]
    for j, v in zip(basis, xB):
        x[j] = v
    # the dropped rows must still hold
    for i in range(A.shape[0]):
        if sum(Fraction(int(A[i, j])) * x[j] for j in basis) != b[i]:
            return None
    return x


@dataclass
class L1Result:
    value: float
    optimal_chain: Chain | None
    status: Status
    certified: bool = False


@dataclass
class DualResult:
    value: float
    optimal_cochain: Cochain | None
    status: Status


def _cycle_check(K: SimplicialComplex, alpha: Chain, p: int) -> np.ndarray:
    if alpha.degree != p:
        raise ComplexError("chain degree does not match p")
    alpha.check(K)
    a = np.asarray(alpha.coefficients, dtype=float)
    if p > 0 and np.max(np.abs(K.boundary_matrix(p) @ a), initial=0.0) > 1e-9:
        raise ComplexError("input chain is not a cycle")
    return a


def l1_seminorm(K: SimplicialComplex, alpha: Chain, p: int) -> L1Result:
    """min sum |a_i| over a = alpha + bd(b); an upper bound for the Gromov norm.

    Variables (a+, a-, b+, b-) >= 0 with a+ - a- - bd(b+) + bd(b-) = alpha.
    """
    a = _cycle_check(K, alpha, p)
    m = K.count(p)
    bd = K._bd(p + 1).astype(float)
    q = bd.shape[1]
    A = np.hstack([np.eye(m), -np.eye(m), -bd, bd])
    cost = np.concatenate([np.ones(2 * m), np.zeros(2 * q)])
    res = lp_solve(cost, A, a)
    if res.status != "optimal":
        return L1Result(math.inf, None, res.status)
    x = res.x
    chain = Chain(p, x[:m] - x[m:2 * m])
    certified = False
    if np.all(np.mod(a, 1) == 0):
        exact = exact_basic_solution(A.astype(np.int64), [Fraction(int(v)) for v in a], res.basis)
        if exact is not None and all(v >= 0 for v in exact):
            ex_chain = [exact[i] - exact[m + i] for i in range(m)]
            diff = [ex_chain[i] - Fraction(int(a[i])) for i in range(m)]
            certified = is_boundary(K, diff, p)
            chain = Chain(p, np.array([float(v) for v in ex_chain]))
    return L1Result(float(np.abs(chain.coefficients).sum()), chain, "optimal", certified)


def linf_dual(K: SimplicialComplex, alpha: Chain, p: int) -> DualResult:
    """min max |c(sigma)| over cocycles c with <c, alpha> = 1.

    Variables (c+, c-, t, s+, s-) >= 0 with c = c+ - c-, coboundary(c) = 0,
    <c, alpha> = 1, c + s+ = t and -c + s- = t.
    """
    a = _cycle_check(K, alpha, p)
    m = K.count(p)
    cob = K._bd(p + 1).T.astype(float)
    r = cob.shape[0]
    one = np.ones((m, 1))
    I, Z = np.eye(m), np.zeros((m, m))
    rows = [
        np.hstack([cob, -cob, np.zeros((r, 1)), np.zeros((r, 2 * m))]),
        np.hstack([a[None, :], -a[None, :], np.zeros((1, 1 + 2 * m))]),
        np.hstack([I, -I, -one, I, Z]),
        np.hstack([-I, I, -one, Z, I]),
    ]
    A = np.vstack(rows)
    b = np.concatenate([np.zeros(r), [1.0], np.zeros(2 * m)])
    cost = np.zeros(A.shape[1])
    cost[2 * m] = 1.0
    res = lp_solve(cost, A, b)
    if res.status != "optimal":
        return DualResult(math.inf, None, res.status)
    c = res.x[:m] - res.x[m:2 * m]
    return DualResult(float(np.abs(c).max(initial=0.0)), Cochain(p, c), "optimal")


def gromov_lower_bound(M: MetricComplex, omega: HarmonicForm, beta_star: Chain,
                       straight_vol_max: float) -> float:
    """||omega||_2^2 / (comass(*omega) * V_max), a lower bound on ||beta*||_1.

    The sup norm is preserved by the Hodge star, so comass(*omega) is computed
    as the comass of omega itself.
    """
    if straight_vol_max <= 0:
        raise ValueError("straightened volume bound must be positive")
    if beta_star.degree != M.dimension - omega.degree:
        raise ComplexError("Poincare dual must have complementary degree")
    if omega.norm_sq == 0:
        return 0.0
    cm, _ = comass(M, omega.cochain)
    if cm <= 0:
        raise ValueError("harmonic form has zero comass")
    return omega.norm_sq / (cm * straight_vol_max)
