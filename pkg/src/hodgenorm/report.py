"""Pipelines behind the command line: norms of homology classes, bound reports, straightening."""

from __future__ import annotations

import math
from typing import Any

import numpy as np

from . import bounds, hyperbolic
from .complex import (Chain, Cochain, ComplexError, OrientationError, cap_product,
                      cohomology_basis, fundamental_class, homology_basis)
from .lp import gromov_lower_bound, l1_seminorm, linf_dual
from .metric import MetricComplex, comass, harmonic_representative, spectral_lambda1


def clean(x: Any) -> Any:
    """Recursively convert numpy scalars and non-finite floats to JSON-safe values."""
    if isinstance(x, dict):
        return {str(k): clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [clean(v) for v in x]
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer, int)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else None
    return x


def pairing_dual_basis(K, p: int) -> tuple[list[Chain], list[Cochain]]:
    """Homology basis of H_p and the cohomology basis dual to it under the Kronecker pairing."""
    cycles, _ = homology_basis(K, p)
    cocycles, _ = cohomology_basis(K, p)
    if not cycles:
        return [], []
    P = np.array([[b.pair(a) for b in cocycles] for a in cycles])  # P[i, j] = <beta_j, alpha_i>
    Q = np.linalg.solve(P, np.eye(len(cycles)))
    B = np.array([b.values for b in cocycles], dtype=float)
    dual = [Cochain(p, Q[:, i] @ B) for i in range(len(cycles))]
    return cycles, dual


def norms_document(M: MetricComplex, p: int, *, select: int | None = None,
                   tol: float = 1e-7) -> tuple[dict[str, Any], bool]:
    """Per-class l1 / dual / harmonic data; returns (document, all invariants held)."""
    K = M.complex
    if not 0 <= p <= K.dimension:
        raise ComplexError(f"degree {p} outside 0..{K.dimension}")
    cycles, duals = pairing_dual_basis(K, p)
    indices = range(len(cycles))
    if select is not None:
        if not 0 <= select < len(cycles):
            raise ComplexError(f"class index {select} out of range (b_{p} = {len(cycles)})")
        indices = [select]
    ok = True
    classes = []
    for i in indices:
        alpha = cycles[i]
        l1 = l1_seminorm(K, alpha, p)
        dual = linf_dual(K, alpha, p)
        entry: dict[str, Any] = {
            "index": i,
            "cycle": {str(j): float(c) for j, c in enumerate(alpha.coefficients) if c},
            "l1_upper": l1.value, "l1_status": l1.status, "l1_certified": l1.certified,
            "dual": dual.value, "dual_status": dual.status,
        }
        invariants = []
        if l1.status == "optimal" and dual.status == "optimal":
            product = l1.value * dual.value
            entry["duality_product"] = product
            invariants.append(abs(product - 1.0) <= tol)
        else:
            entry["duality_product"] = None
        form = harmonic_representative(M, duals[i])
        cm, exact = comass(M, form.cochain)
        entry.update(harmonic_norm=form.norm, harmonic_residual=form.residual,
                     comass=cm, comass_exact=exact,
                     pairing=float(duals[i].pair(alpha)))
        invariants.append(abs(entry["pairing"] - 1.0) <= 1e-9)
        entry["invariants_hold"] = all(invariants)
        ok &= entry["invariants_hold"]
        classes.append(entry)
    doc = {"command": "norms", "dimension": K.dimension, "degree": p,
           "betti": len(cycles), "tolerance": tol, "classes": classes,
           "all_invariants_hold": ok}
    return clean(doc), ok


def verify_document(M: MetricComplex, desc: bounds.ManifoldDescriptor, *,
                    rtol: float = bounds.DISCRETE_RTOL) -> tuple[dict[str, Any], bool]:
    """Bound report over every class of H^p; returns (document, no violations)."""
    K = M.complex
    n, p = desc.n, desc.p
    if K.dimension != n:
        raise bounds.DescriptorError(f"descriptor n = {n} but the mesh has dimension {K.dimension}")
    try:
        fund = fundamental_class(K)
    except OrientationError as exc:
        raise ComplexError(f"verify needs a closed orientable mesh: {exc}") from None
    _, duals = pairing_dual_basis(K, p)
    k = n - p
    vbound = hyperbolic.volume_bound(k, desc.a) if k >= 2 and desc.a > 0 else None
    report = bounds.BoundReport()
    classes = []
    for i, beta in enumerate(duals):
        form = harmonic_representative(M, beta)
        beta_star = cap_product(K, beta, fund)
        l1 = l1_seminorm(K, beta_star, k)
        cm, _ = comass(M, form.cochain)
        g_lo = gromov_lower_bound(M, form, beta_star, vbound) if vbound else 0.0
        computed = {"harmonic_norm": form.norm, "l1_upper": l1.value,
                    "gromov_lower": g_lo, "comass": cm}
        classes.append({"index": i, **computed,
                        "straightened_volume_bound": vbound, "l1_certified": l1.certified})
        report.extend(bounds.verify_report(desc, computed, rtol=rtol, include_cheeger=False),
                      prefix=f"class{i}.")
    cheeger_inputs: dict[str, float] = {}
    if K.is_connected():
        cheeger_inputs["lambda1"] = spectral_lambda1(M)
        if K.count(n) <= bounds.CHEEGER_MAX_CELLS:
            cheeger_inputs["h_bruteforce"] = bounds.cheeger_bruteforce(M)
    report.entries.append(bounds.cheeger_entry(desc, cheeger_inputs, rtol))
    counts = {s: sum(e.status == s for e in report.entries)
              for s in ("holds", "violated", "not_applicable")}
    doc = {"command": "verify", "descriptor": desc.to_dict(), "tolerance": rtol,
           "classes": classes, "cheeger_inputs": cheeger_inputs,
           **report.to_dict(), "summary": counts}
    return clean(doc), counts["violated"] == 0


def straighten_document(k: int, n: int, count: int, seed: int, radius: float, *,
                        a: float = 1.0, rtol: float = 1e-9) -> tuple[dict[str, Any], bool]:
    """Volumes of random straightened simplices against pi a^-k/(k-1)!."""
    if not 2 <= k <= n <= 6:
        raise ValueError("need 2 <= k <= n <= 6")
    if count < 1 or radius <= 0:
        raise ValueError("count must be >= 1 and radius > 0")
    bound = hyperbolic.volume_bound(k, a)
    rng = np.random.default_rng(seed)
    vols = np.empty(count)
    errs = np.empty(count)
    unconverged = roundoff = 0
    for i in range(count):
        s = hyperbolic.straighten(hyperbolic.random_points(rng, n, k + 1, radius), a)
        try:
            res = hyperbolic.integrate_volume(s, rtol=rtol)
            vols[i], errs[i] = res.value, res.error
            roundoff += res.roundoff
        except hyperbolic.QuadratureError as exc:
            # keep the achieved estimate; the error bound makes the comparison conservative
            unconverged += 1
            vols[i], errs[i] = exc.estimate, exc.error
    worst = float(np.max(vols + errs))
    doc = {"command": "straighten", "k": k, "n": n, "count": count, "seed": seed,
           "radius": radius, "a": a, "max_volume": float(vols.max()),
           "mean_volume": float(vols.mean()), "max_quadrature_error": float(errs.max()),
           "unconverged": unconverged, "roundoff_limited": roundoff, "bound": bound, "passed": bool(worst < bound)}
    if k == 3 and a == 1.0:
        doc["ideal_regular_tetrahedron"] = 3 * hyperbolic.lobachevsky(math.pi / 3)
    return clean(doc), doc["passed"]
