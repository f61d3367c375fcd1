"""Acceptance criteria 1-9.

Each criterion is a function returning ``(ok, detail)``; the pytest wrappers
record one PASS/FAIL line per criterion (printed in the terminal summary by
``conftest.py``) and assert. Run ``python tests/test_acceptance.py`` to print
the lines without pytest.
"""

from __future__ import annotations

import math
import time

import mpmath
import numpy as np

from hodgenorm import bounds, fileio, forms, hyperbolic, meshes, report
from hodgenorm.complex import Cochain, betti_numbers, homology_basis
from hodgenorm.lp import l1_seminorm, linf_dual
from hodgenorm.metric import harmonic_representative, hodge_laplacian, spectral_lambda1

RESULTS: list[str] = []

CLOSED = ("circle3", "torus7", "sphere2", "sphere3", "genus2")


def record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    RESULTS.append(line)
    print(line)


def criterion_1() -> tuple[bool, str]:
    """l1 seminorm times its dual equals 1 on every homology basis class."""
    start = time.perf_counter()
    worst, classes = 0.0, 0
    for name in ("circle3", "torus7", "sphere3", "genus2", "random3"):
        K = meshes.BUNDLED[name]().complex
        for p in range(K.dimension + 1):
            cycles, _ = homology_basis(K, p)
            for alpha in cycles:
                l1 = l1_seminorm(K, alpha, p)
                dual = linf_dual(K, alpha, p)
                ok_status = l1.status == dual.status == "optimal"
                worst = max(worst, abs(l1.value * dual.value - 1.0) if ok_status else math.inf)
                classes += 1
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-7 and elapsed < 10 and classes > 0
    return ok, f"{classes} classes on 5 complexes, max |l1*dual - 1| = {worst:.2e}, {elapsed:.2f} s"


def criterion_2() -> tuple[bool, str]:
    """0 <= |phi|_inf <= |phi|_2 <= sqrt(binom(n,p)) |phi|_inf for random forms."""
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    pairs = [(n, p) for n in range(1, 7) for p in range(n + 1)]
    violations = certified = 0
    slack = 1e-12
    for i in range(10_000):
        n, p = pairs[i % len(pairs)]
        coeffs = rng.standard_normal(math.comb(n, p)) * rng.uniform(0.1, 10.0)
        l2 = forms.l2_norm(coeffs)
        linf, exact = forms.comass(coeffs, n, p, rng=rng)
        # exact branch: linf is the value; bound branch: linf is a lower bound and l2 an upper one
        upper = linf if exact else l2
        certified += not exact
        lower_ok = 0 <= linf <= upper * (1 + slack)
        chain_ok = upper <= l2 * (1 + slack) and l2 <= math.sqrt(math.comb(n, p)) * linf * (1 + slack)
        violations += not (lower_ok and chain_ok)
    elapsed = time.perf_counter() - start
    ok = violations == 0 and elapsed < 5
    return ok, (f"10000 forms (n <= 6, all p), {violations} violations, "
                f"{certified} via the certified bound branch, {elapsed:.2f} s")


def criterion_3() -> tuple[bool, str]:
    """Harmonic norm of [dx] on the unit flat torus is 1 within 2%; refinement does not worsen it."""
    start = time.perf_counter()
    errors = {}
    for N in (16, 32):
        M = meshes.flat_torus(N)
        form = harmonic_representative(M, Cochain(1, meshes.flat_torus_dx(M, N)))
        errors[N] = abs(form.norm - 1.0)
    elapsed = time.perf_counter() - start
    ok = errors[16] <= 0.02 and errors[32] <= errors[16] + 1e-12 and elapsed < 10
    return ok, (f"|norm - 1| = {errors[16]:.2e} (16x16), {errors[32]:.2e} (32x32), "
                f"{elapsed:.2f} s")


def criterion_4() -> tuple[bool, str]:
    """Kernel dimensions of Delta_0 and Delta_1 equal b_0 and b_1."""
    rows = []
    ok = True
    for name in CLOSED:
        M = meshes.BUNDLED[name]()
        b = betti_numbers(M.complex)
        dims = [hodge_laplacian(M, p).kernel_dimension(1e-8) for p in (0, 1)]
        ok &= dims == b[:2]
        rows.append(f"{name} {dims}/{b[:2]}")
    return ok, "kernel/betti " + ", ".join(rows)


def criterion_5() -> tuple[bool, str]:
    """1000 random straightened triangles in H^2 and tetrahedra in H^3 obey the volume bound."""
    start = time.perf_counter()
    rng = np.random.default_rng(5)
    unconverged = roundoff = 0

    def volume(V: np.ndarray, rtol: float) -> tuple[float, float]:
        nonlocal unconverged, roundoff
        try:
            res = hyperbolic.integrate_volume(hyperbolic.straighten(V), rtol=rtol)
        except hyperbolic.QuadratureError as exc:
            # near-degenerate simplex: compare the estimate plus its error bound instead
            unconverged += 1
            return exc.estimate, exc.error
        roundoff += res.roundoff
        return res.value, res.error

    gb_worst, max2 = 0.0, 0.0
    for _ in range(1000):
        V = hyperbolic.random_points(rng, 2, 3, 5.0)
        area, err = volume(V, 1e-9)
        max2 = max(max2, area + err)
        gb_worst = max(gb_worst, abs(area + sum(hyperbolic.triangle_angles(*V)) - math.pi))
    max3 = 0.0
    for _ in range(1000):
        value, err = volume(hyperbolic.random_points(rng, 3, 4, 5.0), 1e-8)
        max3 = max(max3, value + err)
    elapsed = time.perf_counter() - start
    ok = max2 < math.pi and max3 < math.pi / 2 and gb_worst <= 1e-6 and elapsed < 60
    return ok, (f"max area {max2:.6f} < pi, max volume {max3:.6f} < pi/2, "
                f"Gauss-Bonnet error {gb_worst:.1e}, {roundoff} rounding-limited, "
                f"{unconverged} unconverged (estimate + error used), {elapsed:.1f} s")


def criterion_6() -> tuple[bool, str]:
    """Regular ideal tetrahedron volume 3 L(pi/3) = 2 L(pi/6) = 1.014941606... against the series."""
    target = 1.0149416064096536  # volume of the regular ideal tetrahedron

    def series(theta: float) -> float:
        # L(theta) = 1/2 sum_k sin(2 k theta) / k^2, summed by mpmath's Clausen function
        return float(mpmath.clsin(2, 2 * theta) / 2)

    ours = 3 * hyperbolic.lobachevsky(math.pi / 3)
    other = 2 * hyperbolic.lobachevsky(math.pi / 6)
    ref = 3 * series(math.pi / 3)
    errs = (abs(ours - ref), abs(other - ref), abs(ref - target))
    # the literal 3 L(pi/6) is a different number; confirm the series agrees on it as well
    lit = abs(3 * hyperbolic.lobachevsky(math.pi / 6) - 3 * series(math.pi / 6))
    ok = max(errs) <= 1e-8 and lit <= 1e-8
    return ok, (f"3L(pi/3) = {ours:.12f}, 2L(pi/6) = {other:.12f}, series {ref:.12f}, "
                f"max error {max(errs):.1e}; 3L(pi/6) = {3 * hyperbolic.lobachevsky(math.pi / 6):.10f}")


def criterion_7() -> tuple[bool, str]:
    """Sandwich and implication-safe inequalities on the bundled genus-two surface."""
    M = fileio.read_mesh(fileio.bundled_path("genus2.json"))
    base = fileio.read_descriptor(fileio.bundled_path("genus2_descriptor.json")).to_dict()
    parts, ok = [], True
    for p in (0, 1):
        desc = bounds.ManifoldDescriptor.from_dict({**base, "p": p})
        doc, _ = report.verify_document(M, desc, rtol=0.05)
        entries = doc["entries"]
        status = {e["inequality_id"]: e["status"] for e in entries}
        sandwich = all(c["gromov_lower"] <= c["l1_upper"] * 1.05 for c in doc["classes"])
        keys = [k for k in status if k.endswith(("thm_upper_bound", "thm_general_estimate"))]
        clean = all(status[k] != "violated" for k in keys)
        upper_holds = all(status[k] == "holds" for k in keys if k.endswith("thm_upper_bound"))
        ok &= sandwich and clean and upper_holds and doc["summary"]["violated"] == 0
        parts.append(f"p={p}: {len(doc['classes'])} classes, sandwich {sandwich}, "
                     f"summary {doc['summary']}")
    return ok, "; ".join(parts)


def criterion_8() -> tuple[bool, str]:
    """Closed-form evaluators against hand-computed values."""
    B = bounds
    checks = {
        "thm_upper_rhs(3,1,1,1)": (B.thm_upper_rhs(3, 1, 1, 1), 8.0),
        "thm_upper_rhs(3,1,4,2)": (B.thm_upper_rhs(3, 1, 4, 2), 32.0),
        "thm_upper_rhs(p=n)": (B.thm_upper_rhs(4, 4, 9, 2), 6.0),
        "volume_bound(2,1)": (hyperbolic.volume_bound(2, 1), math.pi),
        "volume_bound(3,1)": (hyperbolic.volume_bound(3, 1), math.pi / 2),
        "volume_bound(3,2)": (hyperbolic.volume_bound(3, 2), math.pi / 16),
        "li_corollary_constant(K_p=0,V=7)": (B.li_corollary_constant(3, 1, 0.0, 1.0, 7.0), 7.0),
        "default_li_cn(3)": (B.default_li_cn(3), 1.0),
        "default_li_cn(5)": (B.default_li_cn(5), 2 ** 2.5),
        "li_lambda(3,1,-1)": (B.li_lambda(3, 1, -1), 2.0),
        "li_lambda(p=0)": (B.li_lambda(5, 0, -3), 0.0),
        "li_lambda(4,2,-2)": (B.li_lambda(4, 2, -2), 8.0),
        "margulis negatively curved mu/eps=4": (B.margulis_count("negatively_curved", 4.0, 1.0, 3), 4.0),
        "margulis symmetric rank 2 mu/eps=3": (
            B.margulis_count({"kind": "higher_rank_symmetric", "rank": 2, "srk": 1}, 3.0, 1.0, 5), 9.0),
        "margulis generic n=3 mu/eps=2": (B.margulis_count("generic", 2.0, 5.0, 3), 8.0),
        "moser_rhs(lambda=0,K=0)": (B.moser_rhs(3, 0, 0, 2.0, 4.0, 3.0), 1.5),
        "moser_rhs(3,1,1,1,1,1)": (B.moser_rhs(3, 1, 1, 1, 1, 1), 2 ** 1.25 * math.exp(math.sqrt(2))),
        "comass_harmonic_rhs(neg,3,1,1)": (B.comass_harmonic_rhs("negatively_curved", 3, 1, 1), 1.0),
        "comass_harmonic_rhs(generic)": (B.comass_harmonic_rhs("generic", 3, 7.0, 4.0), 4.0 ** -1.5),
        "thm_lower_const(neg,3,1,1,1,1)": (B.thm_lower_const("negatively_curved", 3, 1, 1, 1, 1), 1.0),
        "gromov_mass_comass p!(n-1)^p": (B.gromov_mass_comass(3, 1, mode="l1_by_mass"), 2.0),
        "gromov_mass_comass p=2,a=1": (B.gromov_mass_comass(3, 2, 1.0, "mass_by_l1"), math.pi),
        "gromov_mass_comass p=1,a=2": (B.gromov_mass_comass(3, 1, 2.0, "mass_by_l1"), math.pi / 2),
        "sobolev C1 upper (h=1,n=3,vol=2)": (B.sobolev_chain(3, 2.0, h=1.0).C1_bounds[1], 1.0),
        "sobolev CS (C0=1,n=4)": (B.sobolev_chain(4, C0=1.0).CS_value, math.sqrt(3)),
        "cheeger_buser(1,3) lower": (B.cheeger_buser(1, 3)[0], 0.25),
        "cheeger_buser(1,3) upper": (B.cheeger_buser(1, 3)[1], 14.0),
        "cheeger_buser(2,2) upper": (B.cheeger_buser(2, 2)[1], 44.0),
        "cheng(3,1,1,1)": (B.cheng_lambda1_upper(3, 1, 1, 1), 2.0),
        "cheng(K=0)": (B.cheng_lambda1_upper(4, 0, 2.0, 3.0), 0.75),
        "croke(K=0,n=2,d=1,vol=1)": (B.croke_c1_lower(2, 0.0, 1.0, 1.0), 8.0),
        "srk SL(3,R)": (B.srk_closed_form("sl_m_R", 3), 3),
        "srk SL(2,R)": (B.srk_closed_form("sl_m_R", 2), 1),
        "srk SL(3,C)": (B.srk_closed_form("sl_m_C", 3), 4),
        "kp constant curvature p=2": (B.kp_from_curvature_operator(-np.eye(6), 2, 4), -1.0),
        "kp p=0": (B.kp_from_curvature_operator(-np.eye(6), 0, 4), 0.0),
        "ric_k constant curvature k=3": (B.ric_k(-np.eye(4), 3), -3.0),
        "ric_k diag(-1,-2,-3) k=2": (B.ric_k(np.diag([-1.0, -2.0, -3.0]), 2), -3.0),
    }
    bad = [name for name, (got, want) in checks.items() if got != want]
    # derived identities that are exact only up to rounding in the last place
    close = {
        "croke(K=-1) -> K=0 limit": (B.croke_c1_lower(2, -1e-10, 1.0, 1.0), 8.0),
        "sobolev CS (C0=1,n=3)": (B.sobolev_chain(3, C0=1.0).CS_value, 4 ** (2 / 3)),
    }
    bad += [name for name, (got, want) in close.items() if not math.isclose(got, want, rel_tol=1e-9)]
    na = B.thm_lower_const("negatively_curved", 3, 2, 1, 1, 1) is None
    ok = not bad and na
    return ok, (f"{len(checks) + len(close)} evaluator values, mismatches: {bad or 'none'}; "
                f"p = n-1 not applicable: {na}")


def criterion_9() -> tuple[bool, str]:
    """Discrete Cheeger inequality lambda_1 >= 0.9 h^2/4 on small meshes."""
    cases = {name: meshes.BUNDLED[name]() for name in meshes.BUNDLED}
    cases["two_triangles"] = meshes.two_triangles()
    cases["dumbbell"] = meshes.dumbbell()
    rows, ok = [], True
    for name, M in cases.items():
        if M.complex.vertex_count > 20:
            continue
        lam = spectral_lambda1(M)
        h = bounds.cheeger_bruteforce(M)
        ratio = lam / (h * h / 4)
        ok &= ratio >= 0.9
        rows.append(f"{name} {ratio:.3f}")
    ok &= len(rows) >= 6
    return ok, "lambda_1 / (h^2/4): " + ", ".join(rows)


CRITERIA = [
    (1, "LP duality", criterion_1),
    (2, "pointwise norm comparison", criterion_2),
    (3, "flat torus harmonic norm", criterion_3),
    (4, "Hodge kernel dimensions", criterion_4),
    (5, "straightened volume bound", criterion_5),
    (6, "Lobachevsky oracle", criterion_6),
    (7, "sandwich consistency", criterion_7),
    (8, "constant evaluators", criterion_8),
    (9, "Cheeger oracle", criterion_9),
]


def _run(number: int) -> None:
    _, title, fn = CRITERIA[number - 1]
    ok, detail = fn()
    record(number, title, ok, detail)
    assert ok, detail


def test_criterion_1_lp_duality():
    _run(1)


def test_criterion_2_pointwise_norms():
    _run(2)


def test_criterion_3_flat_torus():
    _run(3)


def test_criterion_4_hodge_kernels():
    _run(4)


def test_criterion_5_straightened_volume():
    _run(5)


def test_criterion_6_lobachevsky():
    _run(6)


def test_criterion_7_sandwich():
    _run(7)


def test_criterion_8_constants():
    _run(8)


def test_criterion_9_cheeger():
    _run(9)


def test_bundled_betti_numbers_match_documentation():
    expected = {"circle3": [1, 1], "torus7": [1, 2, 1], "sphere2": [1, 0, 1],
                "sphere3": [1, 0, 0, 1], "genus2": [1, 4, 1], "random3": [1, 0, 2, 0]}
    for name, b in expected.items():
        assert betti_numbers(meshes.BUNDLED[name]().complex) == b


if __name__ == "__main__":
    failed = 0
    for number, title, fn in CRITERIA:
        ok, detail = fn()
        record(number, title, ok, detail)
        failed += not ok
    raise SystemExit(1 if failed else 0)
