"""Constant p-forms on R^n in an orthonormal coframe.

A form is a coefficient vector over the increasing index tuples of
``combinations(range(n), p)`` in lexicographic order.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations
from math import comb

import numpy as np

# p values handled by a closed-form comass; see `comass`.
def exact_degrees(n: int) -> set[int]:
    return {q for q in (0, 1, 2, n - 2, n - 1, n) if 0 <= q <= n}


@lru_cache(maxsize=None)
def basis(n: int, p: int) -> tuple[tuple[int, ...], ...]:
    return tuple(combinations(range(n), p))


def _perm_sign(seq: tuple[int, ...]) -> int:
    sign, seen = 1, list(seq)
    for i in range(len(seen)):
        for j in range(i + 1, len(seen)):
            if seen[i] > seen[j]:
                sign = -sign
    return sign


def to_tensor(coeffs: np.ndarray, n: int, p: int) -> np.ndarray:
    """Fully antisymmetric array T with T[i1..ip] = phi(e_i1, ..., e_ip)."""
    T = np.zeros((n,) * p)
    for a, idx in zip(coeffs, basis(n, p)):
        if a == 0:
            continue
        for perm in permutations(range(p)):
            T[tuple(idx[k] for k in perm)] = _perm_sign(perm) * a
    return T


def evaluate(coeffs: np.ndarray, n: int, p: int, vectors: np.ndarray) -> float:
    """phi(v_1, ..., v_p) for the rows of ``vectors`` (p x n)."""
    vectors = np.atleast_2d(vectors)
    total = 0.0
    for a, idx in zip(coeffs, basis(n, p)):
        if a:
            total += a * np.linalg.det(vectors[:, idx]) if p else a
    return float(total)


def hodge_star(coeffs: np.ndarray, n: int, p: int) -> np.ndarray:
    """Euclidean Hodge star, sending e_I to sign(I, J) e_J with J the complement."""
    out = np.zeros(comb(n, n - p))
    pos = {J: k for k, J in enumerate(basis(n, n - p))}
    for a, I in zip(coeffs, basis(n, p)):
        J = tuple(j for j in range(n) if j not in I)
        out[pos[J]] = _perm_sign(I + J) * a
    return out


def l2_norm(coeffs: np.ndarray) -> float:
    return float(np.linalg.norm(coeffs))


def _two_form_matrix(coeffs: np.ndarray, n: int) -> np.ndarray:
    A = np.zeros((n, n))
    for a, (i, j) in zip(coeffs, basis(n, 2)):
        A[i, j], A[j, i] = a, -a
    return A


def _contract_except(T: np.ndarray, frame: np.ndarray, skip: int) -> np.ndarray:
    """Vector v with v . u = T(u_1, .., u, .., u_p), u in slot ``skip``."""
    out = T
    # contract trailing slots first so remaining axis positions stay valid
    for k in reversed(range(frame.shape[0])):
        if k == skip:
            continue
        out = np.tensordot(out, frame[k], axes=([k], [0]))
    return out


def comass_ascent(coeffs: np.ndarray, n: int, p: int, *, restarts: int = 3,
                  iters: int = 60, rng: np.random.Generator | None = None) -> float:
    """Lower bound for the pointwise sup norm by block-coordinate ascent over frames.

    Always started from the best coordinate frame, so the result is at least
    ``max |a_I| >= l2 / sqrt(binom(n, p))``.
    """
    T = to_tensor(coeffs, n, p)
    k = int(np.argmax(np.abs(coeffs)))
    start = np.eye(n)[list(basis(n, p)[k])]
    if coeffs[k] < 0:
        start[0] = -start[0]
    rng = rng or np.random.default_rng(0)
    starts = [start] + [np.linalg.qr(rng.standard_normal((n, p)))[0].T for _ in range(restarts)]
    best = abs(float(coeffs[k]))
    for frame in starts:
        frame = frame.copy()
        val = -np.inf
        for _ in range(iters):
            for j in range(p):
                v = _contract_except(T, frame, j)
                others = np.delete(frame, j, axis=0)
                v = v - others.T @ (others @ v)
                nv = np.linalg.norm(v)
                if nv > 0:
                    frame[j] = v / nv
            new = float(np.tensordot(_contract_except(T, frame, 0), frame[0], axes=1))
            if new - val <= 1e-13 * max(1.0, abs(new)):
                val = new
                break
            val = new
        best = max(best, abs(val))
    return best


def comass(coeffs: np.ndarray, n: int, p: int, *,
           rng: np.random.Generator | None = None) -> tuple[float, bool]:
    """Pointwise sup norm of a constant form and whether it is exact.

    Exact for p in {0, 1, 2, n-2, n-1, n}: degrees 0, 1, n-1, n are decomposable
    (value = l2), p = 2 is the top singular value of the coefficient matrix, and
    p = n-2 reduces to p = 2 because the Hodge star preserves the sup norm.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    if p in (0, n):
        return float(abs(coeffs[0])), True
    if p in (1, n - 1):
        return l2_norm(coeffs), True
    if p == 2:
        return float(np.linalg.norm(_two_form_matrix(coeffs, n), 2)), True
    if p == n - 2:
        return float(np.linalg.norm(_two_form_matrix(hodge_star(coeffs, n, p), n), 2)), True
    return comass_ascent(coeffs, n, p, rng=rng), False
