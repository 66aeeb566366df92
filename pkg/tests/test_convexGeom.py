import numpy as np
import pytest

from Common.convexGeom import (ConvexPolygon, Disk, HalfPlane, clip_polygon, convex_hull,
                               dilate_polygon, intersect_halfplanes, is_simple, line_chord,
                               point_in_polygon, project_convex, project_point_set,
                               regular_polygon, remove_collinear, signed_area)
from Common.navErrors import DegenerateInput, EmptyIntersection, SelfIntersection


class TestHalfPlane:
    def test_requires_unit_normal(self):
        with pytest.raises(DegenerateInput):
            HalfPlane([0.0, 0.0], [1.0, 1.0])

    def test_through_normalises(self):
        plane = HalfPlane.through([0.0, 0.0], [2.0, 0.0])
        np.testing.assert_allclose(plane.normal, [1.0, 0.0])
        assert plane.value([3.0, 5.0]) == pytest.approx(3.0)
        assert plane.contains([0.0, 1.0])
        assert not plane.contains([-0.1, 0.0])

    def test_zero_direction_rejected(self):
        with pytest.raises(DegenerateInput):
            HalfPlane.through([0.0, 0.0], [0.0, 0.0])


class TestConvexPolygon:
    def test_clockwise_rejected(self, unit_square):
        with pytest.raises(DegenerateInput):
            ConvexPolygon(unit_square[::-1])

    def test_nonconvex_rejected(self):
        with pytest.raises(DegenerateInput):
            ConvexPolygon([[0, 0], [2, 0], [1, 0.5], [2, 2], [0, 2]])

    def test_area_and_normals(self, unit_square):
        sq = ConvexPolygon(unit_square)
        assert sq.area() == pytest.approx(1.0)
        np.testing.assert_allclose(sq.inward_normals(),
                                   [[0, 1], [-1, 0], [0, -1], [1, 0]], atol=1e-15)

    def test_contains(self, unit_square):
        sq = ConvexPolygon(unit_square)
        assert sq.contains([0.5, 0.5])
        assert sq.contains([1.0, 0.5])
        assert not sq.contains([1.2, 0.5])


class TestProjection:
    def test_inside_point_is_fixed(self, unit_square):
        q = np.array([0.3, 0.6])
        np.testing.assert_array_equal(project_convex(q, ConvexPolygon(unit_square)), q)

    def test_onto_edge_and_vertex(self, unit_square):
        sq = ConvexPolygon(unit_square)
        np.testing.assert_allclose(project_convex([2.0, 0.5], sq), [1.0, 0.5])
        np.testing.assert_allclose(project_convex([2.0, 3.0], sq), [1.0, 1.0])

    def test_onto_disk(self):
        disk = Disk([1.0, 1.0], 1.0)
        np.testing.assert_allclose(project_convex([4.0, 1.0], disk), [2.0, 1.0])
        assert disk.distance([4.0, 1.0]) == pytest.approx(2.0)
        assert disk.distance([1.0, 1.5]) == pytest.approx(-0.5)

    def test_point_set_hull(self):
        pts = [[0, 0], [2, 0], [2, 2], [0, 2], [1, 1]]
        np.testing.assert_allclose(project_point_set([3.0, 1.0], pts), [2.0, 1.0])

    def test_point_set_collinear(self):
        pts = [[0, 0], [1, 0], [2, 0]]
        np.testing.assert_allclose(project_point_set([1.0, 1.0], pts), [1.0, 0.0])
        np.testing.assert_allclose(project_point_set([5.0, 1.0], pts), [2.0, 0.0])

    def test_point_set_single(self):
        np.testing.assert_allclose(project_point_set([5.0, 1.0], [[1.0, 2.0]]), [1.0, 2.0])


class TestLineChord:
    def test_chord_through_square(self, unit_square):
        s_min, s_max = line_chord(ConvexPolygon(unit_square), [0.5, 0.5], [1.0, 0.0])
        assert s_min == pytest.approx(-0.5)
        assert s_max == pytest.approx(0.5)

    def test_line_misses(self, unit_square):
        s_min, s_max = line_chord(ConvexPolygon(unit_square), [0.5, 2.0], [1.0, 0.0])
        assert not s_min <= s_max


class TestIntersection:
    def test_clip_half(self, unit_square):
        poly = intersect_halfplanes([HalfPlane([0.5, 0.0], [-1.0, 0.0])], ConvexPolygon(unit_square))
        assert poly.area() == pytest.approx(0.5)

    def test_empty(self, unit_square):
        with pytest.raises(EmptyIntersection):
            intersect_halfplanes([HalfPlane([2.0, 0.0], [1.0, 0.0])], ConvexPolygon(unit_square))

    def test_nearest_first_pruning_matches(self, unit_square):
        planes = [HalfPlane([-5.0, 0.0], [1.0, 0.0]), HalfPlane([0.5, 0.0], [-1.0, 0.0])]
        seed = ConvexPolygon(unit_square)
        full = intersect_halfplanes(planes, seed)
        pruned = intersect_halfplanes(planes, seed, center=[0.25, 0.5])
        assert pruned.area() == pytest.approx(full.area())
        assert pruned.area() == pytest.approx(0.5)

    def test_clip_polygon_keeps_inside(self, unit_square):
        out = clip_polygon(unit_square, HalfPlane([0.0, 0.0], [1.0, 0.0]))
        np.testing.assert_array_equal(out, unit_square)

    def test_regular_polygon(self):
        poly = regular_polygon([1.0, 2.0], 2.0, 64)
        assert len(poly) == 64
        np.testing.assert_allclose(np.linalg.norm(poly.vertices - [1.0, 2.0], axis=1), 2.0)


class TestHullAndOffset:
    def test_hull_drops_interior_point(self):
        hull = convex_hull([[0, 0], [1, 0], [1, 1], [0, 1], [0.5, 0.5]])
        assert len(hull) == 4
        assert hull.area() == pytest.approx(1.0)

    def test_hull_collinear(self):
        with pytest.raises(DegenerateInput):
            convex_hull([[0, 0], [1, 0], [2, 0]])

    def test_dilate_square(self, unit_square):
        out = dilate_polygon(unit_square, 0.1)
        np.testing.assert_allclose(out, [[-0.1, -0.1], [1.1, -0.1], [1.1, 1.1], [-0.1, 1.1]])
        assert signed_area(out) == pytest.approx(1.44)

    def test_dilate_negative(self, unit_square):
        with pytest.raises(ValueError):
            dilate_polygon(unit_square, -0.1)

    def test_dilate_u_stays_simple(self, u_vertices):
        out = dilate_polygon(u_vertices, 0.2)
        assert is_simple(out)
        assert signed_area(out) > signed_area(u_vertices)

    def test_dilate_crossing(self):
        # a slot narrower than twice the offset closes up
        slot = [[0, 0], [3, 0], [3, 2.4], [1.6, 2.4], [1.6, 0.5], [1.4, 0.5], [1.4, 2], [0, 2]]
        with pytest.raises(SelfIntersection):
            dilate_polygon(slot, 0.5)


class TestSimplePolygons:
    def test_bow_tie(self):
        assert not is_simple([[0, 0], [1, 1], [1, 0], [0, 1]])

    def test_remove_collinear(self):
        out = remove_collinear([[0, 0], [0.5, 0], [1, 0], [1, 1], [0, 1]])
        assert len(out) == 4

    def test_point_in_u(self, u_vertices):
        assert point_in_polygon([0.0, 0.0], u_vertices)
        assert not point_in_polygon([0.0, 1.0], u_vertices)
        assert not point_in_polygon([3.0, 0.0], u_vertices)
