import copy
import json

import numpy as np
import pytest

from Common.convexGeom import Disk
from Common.navErrors import ScenarioError
from Include.scenarioFile import (erode_convex, load_scenario, save_scenario,
                                  scenario_from_document)

BASE = {
    'name': 'box',
    'workspace': {'vertices': [[-5, -5], [5, -5], [5, 5], [-5, 5]]},
    'catalogue': [{'name': 'table', 'vertices': [[-1, -1], [1, -1], [1, 1], [-1, 1]],
                   'star_center': [0, 0], 'epsilon': 0.3}],
    'placements': [{'name': 'table', 'rotation': 90, 'center': [2, 0]}],
    'unknown': [{'disk': {'center': [-2, 0], 'radius': 0.5}}],
    'robot': {'radius': 0.2, 'type': 'full', 'start': [0, -4, 90], 'sensor_range': 5},
    'goal': [0, 4],
    'params': {},
}


def _doc(**changes):
    doc = copy.deepcopy(BASE)
    doc.update(changes)
    return doc


def _write(tmp_path, text):
    path = tmp_path / 'scenario.scn'
    path.write_text(text)
    return path


class TestLoading:
    def test_ushape(self, ushape):
        assert ushape.name == 'ushape'
        assert ushape.robot_type == 'full'
        assert [s.name for s in ushape.world.familiar] == ['U0']
        np.testing.assert_allclose(ushape.start, [-0.4, -5.0, np.pi / 2])
        np.testing.assert_allclose(ushape.world.goal, [0.0, 4.0])
        assert ushape.settings.k == 0.4

    def test_dilation(self):
        sc = scenario_from_document(_doc())
        np.testing.assert_allclose(np.abs(sc.world.boundary.vertices), 4.8)
        [disk] = sc.world.unknown
        assert isinstance(disk, Disk)
        assert disk.radius == pytest.approx(0.7)
        table = sc.world.familiar[0]
        assert table.name == 'table0'
        np.testing.assert_allclose(table.rotation, [[0.0, -1.0], [1.0, 0.0]], atol=1e-12)
        assert np.max(np.abs(sc.catalogue['table'].vertices)) == pytest.approx(1.2)

    def test_polygon_unknown(self):
        sc = scenario_from_document(_doc(unknown=[{'polygon': [[0, 2], [1, 2], [0.5, 3]]}]))
        assert sc.world.unknown[0].area() > 0.5

    def test_random_start(self):
        robot = dict(BASE['robot'], start='random')
        sc = scenario_from_document(_doc(robot=robot))
        assert sc.start is None
        a, b = sc.resolve_start(), sc.resolve_start()
        np.testing.assert_array_equal(a, b)
        assert sc.world.clearance(a[:2]) >= sc.settings.gridClearance

    def test_params_and_overrides(self):
        sc = scenario_from_document(_doc(params={'k': 0.8, 'deltaMin': 0.01}), overrides={'k': 1.0})
        assert sc.settings.k == 1.0
        assert sc.settings.validation.deltaMin == 0.01

    def test_save_round_trip(self, ushape, tmp_path):
        path = tmp_path / 'copy.scn'
        save_scenario(ushape, path)
        again = load_scenario(path)
        assert again.document == ushape.document
        np.testing.assert_allclose(again.world.familiar[0].center, ushape.world.familiar[0].center)

    def test_erode_convex(self):
        poly = erode_convex([[0, 0], [2, 0], [2, 2], [0, 2]], 0.5)
        assert poly.area() == pytest.approx(1.0)


class TestErrors:
    def test_json_syntax_line(self, tmp_path):
        text = '{\n  "name": "broken",\n  "goal": [0, 0]\n  "robot": {}\n}\n'
        with pytest.raises(ScenarioError) as info:
            load_scenario(_write(tmp_path, text))
        assert info.value.lineno == 4
        assert str(info.value).startswith(str(tmp_path / 'scenario.scn') + ':4:')

    def test_unknown_section_line(self, tmp_path):
        doc = _doc()
        doc['extras'] = 1
        text = json.dumps(doc, indent=2)
        with pytest.raises(ScenarioError) as info:
            load_scenario(_write(tmp_path, text))
        expected = next(i for i, line in enumerate(text.splitlines(), 1) if '"extras"' in line)
        assert info.value.lineno == expected

    def test_missing_file(self, tmp_path):
        with pytest.raises(ScenarioError, match='cannot read'):
            load_scenario(tmp_path / 'nowhere.scn')

    @pytest.mark.parametrize('changes', [
        {'goal': [0, 0, 0]},
        {'robot': dict(BASE['robot'], type='hovercraft')},
        {'robot': dict(BASE['robot'], radius=-0.1)},
        {'params': {'warp': 9}},
        {'params': {'k': -1.0}},
        {'catalogue': [dict(BASE['catalogue'][0], epsilon=0.0)]},
        {'placements': [{'name': 'sofa', 'center': [2, 0]}]},
        {'unknown': [{'cylinder': 1}]},
        {'workspace': {'vertices': [[0, 0], [1, 1]]}},
    ])
    def test_invalid(self, changes):
        with pytest.raises(ScenarioError):
            scenario_from_document(_doc(**changes))

    def test_missing_section(self):
        doc = _doc()
        del doc['goal']
        with pytest.raises(ScenarioError, match='missing section'):
            scenario_from_document(doc)

    def test_bad_shape(self):
        bowtie = [[0, 0], [2, 2], [2, 0], [0, 2]]
        doc = _doc(catalogue=[dict(BASE['catalogue'][0], vertices=bowtie, star_center=[1, 0.5])])
        with pytest.raises(ScenarioError, match='invalid geometry'):
            scenario_from_document(doc)
