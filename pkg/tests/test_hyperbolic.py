import math

import mpmath
import numpy as np
import pytest

from hodgenorm import hyperbolic as hyp

RNG = np.random.default_rng


def klein_volume(V, order=24):
    """Oracle: geodesic simplices are Euclidean in the Klein model, with density (1-|x|^2)^(-(n+1)/2).

    Integrates over the Euclidean simplex with a Duffy (collapsed cube) map and a
    fixed tensor Gauss-Legendre rule.
    """
    X = V[:, :-1] / V[:, -1:]
    k = len(X) - 1
    n = X.shape[1]
    g, w = np.polynomial.legendre.leggauss(order)
    g, w = (g + 1) / 2, w / 2
    grids = np.meshgrid(*[g] * k, indexing="ij")
    U = np.stack([x.ravel() for x in grids], axis=1)
    W = np.prod(np.meshgrid(*[w] * k, indexing="ij"), axis=0).ravel()
    bary = hyp.cube_to_barycentric(U)
    jac = np.prod([(1 - U[:, j - 1]) ** (j - 1) for j in range(2, k + 1)], axis=0) if k > 1 else 1.0
    P = bary @ X
    E = X[1:] - X[0]
    gram = math.sqrt(abs(np.linalg.det(E @ E.T)))
    dens = (1 - (P * P).sum(axis=1)) ** (-(n + 1) / 2)
    return float((W * jac * dens).sum() * gram)


def test_points_and_geodesics():
    rng = RNG(0)
    p, q = hyp.random_points(rng, 3, 2, 2.0)
    for x in (p, q):
        assert hyp.minkowski(x, x) == pytest.approx(-1.0)
    d = hyp.distance(p, q)
    ts = np.linspace(0, 1, 7)
    path = hyp.geodesic(p, q, ts)
    np.testing.assert_allclose(path[0], p, atol=1e-12)
    np.testing.assert_allclose(path[-1], q, atol=1e-12)
    for t, x in zip(ts, path):
        assert hyp.minkowski(x, x) == pytest.approx(-1.0)
        assert hyp.distance(p, x) == pytest.approx(t * d, abs=1e-9)


def test_exp_origin_distance():
    v = np.array([0.3, -1.2])
    assert hyp.distance(hyp.exp_origin(np.zeros(2)), hyp.exp_origin(v)) == pytest.approx(np.linalg.norm(v))


def test_as_hpoint_rejects_off_sheet():
    with pytest.raises(ValueError):
        hyp.as_hpoint([0.0, 0.0, -1.0])
    with pytest.raises(ValueError):
        hyp.as_hpoint([1.0, 0.0, 1.0])
    with pytest.raises(ValueError):
        hyp.as_hpoint([1.0])


def test_straighten_errors():
    o = hyp.exp_origin(np.zeros(2))
    with pytest.raises(ValueError):
        hyp.straighten([o, o, o, o])  # a 3-simplex in H^2
    with pytest.raises(ValueError):
        hyp.straighten([o, o], a=0.0)


def test_random_isometry_preserves_form():
    L = hyp.random_isometry(RNG(1), 3)
    J = np.diag([1.0, 1.0, 1.0, -1.0])
    np.testing.assert_allclose(L.T @ J @ L, J, atol=1e-10)


def test_vertices_and_edges_are_geodesic():
    V = hyp.random_points(RNG(2), 3, 4, 2.0)
    s = hyp.straighten(V)
    np.testing.assert_allclose(s.evaluate(np.eye(4)), V, atol=1e-10)
    ts = np.linspace(0, 1, 5)
    bary = np.zeros((5, 4))
    bary[:, 0], bary[:, 2] = 1 - ts, ts
    np.testing.assert_allclose(s.evaluate(bary), hyp.geodesic(V[0], V[2], ts), atol=1e-10)


def test_face_restriction_is_coherent():
    V = hyp.random_points(RNG(3), 3, 4, 1.5)
    s = hyp.straighten(V)
    B = RNG(4).dirichlet(np.ones(3), 20)
    for idx in ([0, 1, 2], [0, 1, 3], [1, 2, 3], [0, 2, 3]):
        np.testing.assert_allclose(s.restricted(idx)(B), s.face(idx).evaluate(B), atol=1e-10)


def test_facet_volume_via_restricted_evaluator():
    s = hyp.straighten(hyp.random_points(RNG(13), 3, 4, 1.5))
    for idx in ([0, 1, 2], [1, 2, 3]):
        direct = hyp.simplex_volume(s.face(idx))
        via_parent = hyp.evaluator_volume(s.restricted(idx), 2).value
        assert via_parent == pytest.approx(direct, abs=1e-6)


def test_image_lies_on_hyperboloid():
    s = hyp.straighten(hyp.random_points(RNG(5), 4, 5, 2.0))
    X = s.evaluate(RNG(6).dirichlet(np.ones(5), 200))
    np.testing.assert_allclose(hyp.minkowski(X, X), -1.0, atol=1e-9)


def test_degenerate_simplex_has_zero_volume():
    o = hyp.exp_origin(np.zeros(2))
    p = hyp.exp_origin([1.0, 0.0])
    q = hyp.exp_origin([2.0, 0.0])
    assert hyp.integrate_volume(hyp.straighten([o, p, q])).value == pytest.approx(0.0, abs=1e-12)
    assert hyp.integrate_volume(hyp.straighten([o])).value == 0.0


@pytest.mark.parametrize("seed", range(5))
def test_gauss_bonnet(seed):
    V = hyp.random_points(RNG(seed), 2, 3, 3.0)
    res = hyp.integrate_volume(hyp.straighten(V), rtol=1e-10)
    assert res.value == pytest.approx(math.pi - sum(hyp.triangle_angles(*V)), abs=1e-8)
    assert res.error <= 1e-9 * max(res.value, 1e-3)


@pytest.mark.parametrize("seed", range(4))
def test_tetrahedron_volume_matches_klein_oracle(seed):
    V = hyp.random_points(RNG(100 + seed), 3, 4, 1.2)
    vol = hyp.simplex_volume(hyp.straighten(V), rtol=1e-10)
    assert vol == pytest.approx(klein_volume(V), rel=1e-7)


def test_isometry_invariance():
    rng = RNG(7)
    V = hyp.random_points(rng, 3, 4, 1.5)
    base = hyp.simplex_volume(hyp.straighten(V), rtol=1e-11)
    for _ in range(3):
        L = hyp.random_isometry(rng, 3)
        moved = hyp.simplex_volume(hyp.straighten(V @ L.T), rtol=1e-11)
        assert abs(moved - base) < 1e-8


def test_curvature_scaling():
    V = hyp.random_points(RNG(8), 3, 4, 1.5)
    base = hyp.simplex_volume(hyp.straighten(V))
    for a in (0.5, 2.0):
        assert hyp.simplex_volume(hyp.straighten(V, a=a)) == pytest.approx(base / a ** 3, rel=1e-8)


def test_vertex_order_does_not_change_volume():
    V = hyp.random_points(RNG(9), 3, 4, 1.5)
    a = hyp.simplex_volume(hyp.straighten(V), rtol=1e-10)
    b = hyp.simplex_volume(hyp.straighten(V[[2, 0, 3, 1]]), rtol=1e-10)
    assert a == pytest.approx(b, rel=1e-8)


def test_regular_ideal_limit_from_below():
    vols = [hyp.simplex_volume(hyp.straighten(hyp.regular_simplex_vertices(3, r)), rtol=1e-9)
            for r in (3.0, 5.0, 6.0)]
    assert vols[0] < vols[1] < vols[2] < 3 * hyp.lobachevsky(math.pi / 3)
    assert vols[2] == pytest.approx(1.0149416064096536, abs=1e-3)


def test_volume_bound():
    assert hyp.volume_bound(2) == pytest.approx(math.pi)
    assert hyp.volume_bound(3) == pytest.approx(math.pi / 2)
    assert hyp.volume_bound(4, a=2.0) == pytest.approx(math.pi / 6 / 16)
    with pytest.raises(ValueError):
        hyp.volume_bound(1)
    with pytest.raises(ValueError):
        hyp.volume_bound(3, a=-1.0)


@pytest.mark.parametrize("theta", [0.1, 0.5, math.pi / 6, math.pi / 3, 1.3, 2.0, -0.7, 4.0])
def test_lobachevsky_matches_clausen(theta):
    assert hyp.lobachevsky(theta) == pytest.approx(float(mpmath.clsin(2, 2 * theta)) / 2, abs=1e-13)


def test_lobachevsky_identities():
    L = hyp.lobachevsky
    assert 3 * L(math.pi / 3) == pytest.approx(1.0149416064096536, abs=1e-13)
    assert 2 * L(math.pi / 6) == pytest.approx(3 * L(math.pi / 3), abs=1e-13)
    assert L(0.0) == 0.0 and L(math.pi / 2) == pytest.approx(0.0, abs=1e-14)
    # duplication: L(2x) = 2 L(x) + 2 L(x + pi/2)
    for x in (0.2, 0.6, 1.1):
        assert L(2 * x) == pytest.approx(2 * L(x) + 2 * L(x + math.pi / 2), abs=1e-13)


def test_evaluator_volume_agrees_with_exact_density():
    V = hyp.random_points(RNG(10), 2, 3, 1.5)
    s = hyp.straighten(V)
    fd = hyp.evaluator_volume(s.evaluate, 2)
    assert fd.value == pytest.approx(hyp.simplex_volume(s), rel=1e-6)


def test_cube_to_barycentric_sums_to_one():
    U = RNG(11).random((50, 3))
    B = hyp.cube_to_barycentric(U)
    np.testing.assert_allclose(B.sum(axis=1), 1.0)
    assert np.all(B >= 0)


def test_recentre_preserves_distances():
    V = hyp.random_points(RNG(12), 3, 4, 4.0)
    W = hyp.recentre(V)
    for i in range(4):
        for j in range(i):
            assert hyp.distance(W[i], W[j]) == pytest.approx(hyp.distance(V[i], V[j]), rel=1e-9)
