import numpy as np
import pytest

from Common.convexGeom import boundary_distance, point_in_polygon
from Common.navErrors import CenterOutside, NearVertex, NotSimplePolygon
from Common.numDiff import gradient, jacobian
from Include.obstacleTree import (band_points, beta, beta_all, beta_grad, boundary_point_along,
                                  boundary_points, build_tree, choose_rho, place)


def _sign_agreement(tree, rng, n=1500):
    v = tree.vertices
    lo, hi = v.min(axis=0) - 0.5, v.max(axis=0) + 0.5
    pts = rng.uniform(lo, hi, size=(n, 2))
    val, _, _ = tree.evaluate_body(pts)
    checked = 0
    for q, b in zip(pts, val):
        if boundary_distance(q, v) < 1e-6:
            continue
        assert (b < 0.0) == point_in_polygon(q, v), q
        checked += 1
    return checked


class TestBuildTree:
    def test_square_is_one_conjunction(self):
        tree = build_tree([[-1, -1], [1, -1], [1, 1], [-1, 1]])
        assert tree.n_leaves() == 4
        assert tree.n_or() == 0
        assert tree.describe() == '¬(ω1∧ω2∧ω3∧ω4)'

    def test_u_shape(self, u_vertices):
        tree = build_tree(u_vertices, star_center=[0.0, -0.5])
        assert tree.n_leaves() == 8
        assert tree.n_or() == 1
        # the arm tops lie on the hull edge, so the notch is one chain
        assert tree.describe() == '¬(ω1∧ω2∧((ω3∧ω4)∨ω5∨(ω6∧ω7))∧ω8)'

    def test_clockwise_input_reversed(self, u_vertices):
        tree = build_tree(u_vertices[::-1], star_center=[0.0, -0.5])
        val, _, _ = tree.evaluate_body([[0.0, -0.5], [0.0, 1.0]])
        assert val[0] < 0.0
        assert val[1] > 0.0

    def test_not_simple(self):
        with pytest.raises(NotSimplePolygon):
            build_tree([[0, 0], [1, 1], [1, 0], [0, 1]])

    def test_odd_exponent(self, u_vertices):
        with pytest.raises(ValueError):
            build_tree(u_vertices, p=3)

    def test_default_star_center_is_centroid(self):
        tree = build_tree([[0, 0], [2, 0], [2, 2], [0, 2]])
        np.testing.assert_allclose(tree.star_center_body, [1.0, 1.0])


class TestSign:
    def test_u(self, u_vertices):
        tree = build_tree(u_vertices, star_center=[0.0, -0.5])
        assert _sign_agreement(tree, np.random.default_rng(1)) > 1000

    def test_star10(self, star10):
        tree = build_tree(star10, star_center=[0.0, 0.0])
        assert _sign_agreement(tree, np.random.default_rng(2)) > 1000

    def test_zero_on_edges(self, u_vertices):
        tree = build_tree(u_vertices, star_center=[0.0, -0.5])
        v = tree.vertices
        mids = 0.5 * (v + np.roll(v, -1, axis=0))
        val, _, _ = tree.evaluate_body(mids)
        np.testing.assert_allclose(val, 0.0, atol=1e-9)


class TestApproximateDistance:
    @pytest.mark.parametrize('d', [0.05, 0.1, 0.3])
    def test_square_edge(self, square_star, d):
        assert beta(square_star, [1.0 + d, 0.0]) == pytest.approx(d, rel=0.1)

    @pytest.mark.parametrize('d', [0.05, 0.1, 0.3])
    def test_u_outer_edge(self, u_vertices, d):
        tree = build_tree(u_vertices, star_center=[0.0, -0.5])
        val, _, _ = tree.evaluate_body([[0.0, -1.0 - d]])
        assert val[0] == pytest.approx(d, rel=0.1)


class TestPlaced:
    def test_pose_invariance(self, u_vertices):
        tree = build_tree(u_vertices, star_center=[0.0, -0.5])
        placed = place(tree, [3.0, -2.0], 0.7, 0.3)
        body = np.array([[0.3, -1.4], [2.9, 0.2], [0.0, 1.0]])
        world = placed.to_world(body)
        np.testing.assert_allclose(placed.to_body(world), body, atol=1e-12)
        val_w, _, _ = placed.evaluate(world)
        val_b, _, _ = tree.evaluate_body(body)
        np.testing.assert_allclose(val_w, val_b, atol=1e-12)

    def test_gradient_and_hessian(self, u_star):
        pts = band_points(u_star, 60, 4)
        rng = np.random.default_rng(3)
        for x in pts[rng.choice(len(pts), 25, replace=False)]:
            if u_star.tree.min_vertex_distance(u_star.to_body(x))[0] < 0.05:
                continue
            b, g, H = beta_all(u_star, x)
            gn = gradient(lambda q: beta(u_star, q), x, 1e-6)
            Hn = jacobian(lambda q: beta_grad(u_star, q), x, 1e-6)
            np.testing.assert_allclose(g, gn, rtol=1e-5, atol=1e-6)
            np.testing.assert_allclose(H, Hn, rtol=1e-3, atol=1e-3 * max(1.0, np.abs(H).max()))

    def test_vertex_guard(self, u_star):
        vertex = u_star.world_vertices()[0]
        with pytest.raises(NearVertex):
            u_star.evaluate(vertex, order=1)
        val, _, _ = u_star.evaluate(vertex)
        assert abs(val[0]) < 1e-9

    def test_rho(self, square_star):
        assert square_star.rho == pytest.approx(0.9)
        assert choose_rho(square_star, 0.5) == pytest.approx(0.5)

    def test_center_outside(self, u_vertices):
        tree = build_tree(u_vertices, star_center=[0.0, 1.0])
        with pytest.raises(CenterOutside):
            place(tree, [0.0, 0.0], 0.0, 0.3)

    def test_contains(self, u_star):
        assert u_star.contains(u_star.center)
        assert not u_star.contains([0.0, -0.5])


class TestSampling:
    def test_boundary_points(self, u_star):
        pts = boundary_points(u_star, 360)
        val, _, _ = u_star.evaluate(pts)
        np.testing.assert_allclose(val, 0.0, atol=1e-9)

    def test_band_levels(self, u_star):
        pts = band_points(u_star, 100, 4)
        val, _, _ = u_star.evaluate(pts)
        np.testing.assert_allclose(val.reshape(4, 100), np.repeat([[0.0], [0.1], [0.2], [0.3]], 100, 1),
                                   atol=1e-8)

    def test_boundary_point_along(self, square_star):
        np.testing.assert_allclose(boundary_point_along(square_star, [0.0, -2.0]), [0.0, -1.0],
                                   atol=1e-10)
