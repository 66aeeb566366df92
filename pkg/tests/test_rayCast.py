import numpy as np
import pytest

from Common.convexGeom import ConvexPolygon, Disk
from Common.rayCast import RayTargets, cast_rays, ray_cast, ray_directions


class TestCastRays:
    def test_disk_hit(self):
        targets = RayTargets.from_obstacles([Disk([3.0, 0.0], 1.0)])
        dist, owner = cast_rays([0.0, 0.0], np.array([[1.0, 0.0]]), targets, 10.0)
        assert dist[0] == pytest.approx(2.0)
        assert owner[0] == 0

    def test_from_inside_disk(self):
        targets = RayTargets.from_obstacles([Disk([0.0, 0.0], 1.5)])
        dist, _ = cast_rays([0.0, 0.0], ray_directions(8), targets, 10.0)
        np.testing.assert_allclose(dist, 1.5)

    def test_segment_hit(self):
        targets = RayTargets.from_obstacles([np.array([[2.0, -1.0], [2.0, 1.0]])])
        dist, owner = cast_rays([0.0, 0.0], np.array([[1.0, 0.0], [-1.0, 0.0]]), targets, 10.0)
        assert dist[0] == pytest.approx(2.0)
        assert owner[0] == 0
        assert np.isinf(dist[1])
        assert owner[1] == -1

    def test_max_range(self):
        targets = RayTargets.from_obstacles([Disk([3.0, 0.0], 1.0)])
        dist, owner = cast_rays([0.0, 0.0], np.array([[1.0, 0.0]]), targets, 1.5)
        assert np.isinf(dist[0])
        assert owner[0] == -1

    def test_nearest_owner_wins(self):
        square = ConvexPolygon([[4, -1], [6, -1], [6, 1], [4, 1]])
        targets = RayTargets.from_obstacles([square, Disk([2.0, 0.0], 0.5)], owners=[7, 3])
        dist, owner = cast_rays([0.0, 0.0], np.array([[1.0, 0.0], [0.0, 1.0]]), targets, 10.0)
        assert dist[0] == pytest.approx(1.5)
        assert owner[0] == 3
        assert owner[1] == -1

    def test_empty_targets(self):
        assert RayTargets.from_obstacles([]).is_empty()


class TestHelpers:
    def test_directions(self):
        d = ray_directions(4)
        np.testing.assert_allclose(d, [[1, 0], [0, 1], [-1, 0], [0, -1]], atol=1e-15)
        np.testing.assert_allclose(ray_directions(4, np.pi / 2)[0], [0, 1], atol=1e-15)

    def test_single_ray(self):
        hit = ray_cast([0.0, 0.0], [0.0, 1.0], [Disk([0.0, 5.0], 1.0)], 10.0)
        assert hit is not None
        point, dist = hit
        np.testing.assert_allclose(point, [0.0, 4.0])
        assert dist == pytest.approx(4.0)
        assert ray_cast([0.0, 0.0], [1.0, 0.0], [Disk([0.0, 5.0], 1.0)], 10.0) is None
