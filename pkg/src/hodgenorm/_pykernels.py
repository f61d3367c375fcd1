"""Pure numpy implementations of the hot loops; reference for the compiled twins."""

from __future__ import annotations

import numpy as np

SMALL_DIST = 1e-9


def _mink(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return (x[..., :-1] * y[..., :-1]).sum(axis=-1) - x[..., -1] * y[..., -1]


def cone_integrand(V: np.ndarray, U: np.ndarray) -> np.ndarray:
    """Volume density of the iterated geodesic cone at cube points ``U``.

    V holds the k+1 hyperboloid vertices; the cube point (u_1..u_k) maps to
    X_k with X_0 = v_0 and X_j = geodesic(X_{j-1}, v_j, u_j). Returns
    sqrt(det <dX/du_a, dX/du_b>) with derivatives pushed forward exactly.
    """
    V = np.asarray(V, dtype=float)
    U = np.asarray(U, dtype=float)
    k = V.shape[0] - 1
    N, D = U.shape[0], V.shape[1]
    X = np.broadcast_to(V[0], (N, D)).copy()
    T = np.zeros((N, k, D))
    for j in range(1, k + 1):
        q = V[j]
        t = U[:, j - 1]
        c = np.maximum(-_mink(X, q), 1.0)
        d = np.arccosh(c)
        small = d < SMALL_DIST
        d = np.where(small, 1.0, d)
        s = np.sinh(d)
        sa, sb = np.sinh((1 - t) * d), np.sinh(t * d)
        ca, cb = np.cosh((1 - t) * d), np.cosh(t * d)
        A = np.where(small, 1 - t, sa / s)
        B = np.where(small, t, sb / s)
        dA = np.where(small, 0.0, ((1 - t) * ca * s - sa * c) / s**2)
        dB = np.where(small, 0.0, (t * cb * s - sb * c) / s**2)
        dt = np.where(small[:, None], 0.0, (d / s)[:, None] * (-ca[:, None] * X + cb[:, None] * q))
        if j > 1:
            W = T[:, : j - 1]
            dd = np.where(small[:, None], 0.0, -_mink(W, q[None, None, :]) / s[:, None])
            T[:, : j - 1] = (A[:, None, None] * W
                             + dd[:, :, None] * (dA[:, None, None] * X[:, None, :]
                                                 + dB[:, None, None] * q[None, None, :]))
        T[:, j - 1] = dt
        X = A[:, None] * X + B[:, None] * q
    G = np.einsum("nad,nbd->nab", T[..., :-1], T[..., :-1]) - \
        np.einsum("na,nb->nab", T[..., -1], T[..., -1])
    det = np.linalg.det(G) if k else np.ones(N)
    return np.sqrt(np.maximum(det, 0.0))


def cheeger_scan(cell_vol: np.ndarray, face_cells: np.ndarray, face_area: np.ndarray
                 ) -> tuple[float, int]:
    """Exhaustive minimum of cut area / smaller side volume over cell bipartitions.

    ``face_cells`` is (F, deg) with -1 padding. Cell 0 is pinned to side 0, so
    masks range over the remaining cells. Returns (ratio, mask) where bit i of
    the mask puts cell i+1 on side 1.
    """
    C = len(cell_vol)
    total = float(cell_vol.sum())
    deg = (face_cells >= 0).sum(axis=1)
    padded = np.where(face_cells >= 0, face_cells, C)  # sentinel column of zeros
    best, best_mask = np.inf, 0
    nmask = 1 << (C - 1)
    chunk = 1 << 15
    shifts = np.arange(C - 1, dtype=np.int64)
    for start in range(1, nmask, chunk):
        masks = np.arange(start, min(start + chunk, nmask), dtype=np.int64)
        bits = np.zeros((len(masks), C + 1), dtype=np.int8)
        bits[:, 1:C] = (masks[:, None] >> shifts) & 1
        side = bits[:, :C].astype(float) @ cell_vol
        small = np.minimum(side, total - side)
        cnt = bits[:, padded].sum(axis=2)
        cut = ((cnt > 0) & (cnt < deg)).astype(float) @ face_area
        ratio = cut / small
        i = int(np.argmin(ratio))
        if ratio[i] < best:
            best, best_mask = float(ratio[i]), int(masks[i])
    return best, best_mask
