import numpy as np
import pytest

from Common.convexGeom import ConvexPolygon, Disk
from Include.obstacleTree import build_tree, place
from Include.validateAssumptions import star_condition_delta, validate_assumptions
from Include.worldSim import World

SQUARE = [[-1, -1], [1, -1], [1, 1], [-1, 1]]
BOUNDS = ConvexPolygon([[-6, -6], [6, -6], [6, 6], [-6, 6]])


def _square_at(center, name):
    return place(build_tree(SQUARE, 20, [0.0, 0.0]), center, 0.0, 0.3, name)


def _check(world, **kw):
    kw.setdefault('n_angles', 400)
    return validate_assumptions(world, **kw)


class TestValidScenarios:
    def test_ushape(self, ushape):
        report = validate_assumptions(ushape.world, ushape.catalogue, ushape.start[:2])
        assert report.passed, report.summary()
        assert ushape.world.familiar[0].delta >= 1e-3
        assert {e.condition for e in report.entries} == {'world', 'b', 'c', 'd'}

    def test_shipped(self, shipped_scenario):
        sc = shipped_scenario
        report = validate_assumptions(sc.world, sc.catalogue, sc.start[:2])
        assert report.passed, report.summary()

    def test_two_separated_stars(self):
        world = World(BOUNDS, [_square_at([-3, 0], 'A'), _square_at([3, 0], 'B')], [],
                      [0.0, 4.0], 0.2, 5.0)
        report = _check(world)
        assert report.passed
        assert [e.passed for e in report.entries if e.condition == 'a'] == [True]

    def test_report_dict(self, square_world):
        d = _check(square_world).as_dict()
        assert d['passed'] is True
        assert all({'condition', 'subject', 'passed', 'value', 'detail'} <= set(e) for e in d['entries'])


class TestViolations:
    def test_overlapping_bands(self):
        world = World(BOUNDS, [_square_at([-1.2, 0], 'A'), _square_at([1.2, 0], 'B')], [],
                      [0.0, 4.0], 0.2, 5.0)
        report = _check(world)
        assert not report.passed
        assert 'a' in report.failed_conditions()

    def test_goal_in_band(self):
        world = World(BOUNDS, [_square_at([0, 0], 'A')], [], [1.1, 0.0], 0.2, 5.0)
        report = _check(world)
        assert [e.subject for e in report.failures('b')] == ['A goal']

    def test_unknown_touches_band(self):
        world = World(BOUNDS, [_square_at([0, 0], 'A')], [Disk([1.6, 0.0], 0.4)],
                      [0.0, 4.0], 0.2, 5.0)
        assert 'b' in _check(world).failed_conditions()

    def test_band_leaves_workspace(self):
        world = World(BOUNDS, [_square_at([5.1, 0], 'A')], [], [0.0, 4.0], 0.2, 5.0)
        assert 'd' in _check(world).failed_conditions()

    def test_short_sensor_range(self, square_star):
        world = World(BOUNDS, [square_star], [], [0.0, 4.0], 0.2, 2.0)
        report = _check(world)
        assert [e.subject for e in report.failures('world')] == ['sensor range']

    def test_start_inside_obstacle(self, square_world):
        report = _check(square_world, start=[0.5, 0.5])
        assert [e.subject for e in report.failures()] == ['start']


class TestStarCondition:
    def test_square_delta(self, square_star):
        pts = np.array([[1.2, 0.0], [0.0, -1.1]])
        assert star_condition_delta(square_star, pts) == pytest.approx(1.1, rel=0.05)

    def test_sampled_delta_below_bound(self, square_world):
        report = _check(square_world, delta_min=10.0)
        assert [e.subject for e in report.failures()] == ['square']
        assert report.failures('c')[0].value == pytest.approx(square_world.familiar[0].delta)
