import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent
sys.path.insert(0, str(ROOT))

from Common.convexGeom import ConvexPolygon, Disk
from Include.obstacleTree import build_tree, place
from Include.scenarioFile import load_scenario
from Include.worldSim import SemanticMap, World
from init_settings import init_settings

U_VERTICES = [[-2.5, -1.0], [2.5, -1.0], [2.5, 1.5], [1.7, 1.5],
              [0.5, 0.3], [-0.5, 0.3], [-1.7, 1.5], [-2.5, 1.5]]


@pytest.fixture
def settings():
    return init_settings()


@pytest.fixture
def scenario_dir():
    return ROOT / 'scenarios'


@pytest.fixture
def unit_square():
    return np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


@pytest.fixture
def star10():
    """Ten-vertex star, tips at radius 1 and notches at radius 0.5."""
    k = np.arange(10)
    radius = np.where(k % 2 == 0, 1.0, 0.5)
    angle = np.pi / 2 + 2.0 * np.pi * k / 10
    return np.column_stack((radius * np.cos(angle), radius * np.sin(angle)))


@pytest.fixture
def u_vertices():
    return np.array(U_VERTICES)


@pytest.fixture
def square_star():
    """Square [-1, 1]^2 centred at the origin, eps 0.3, rho 0.9."""
    tree = build_tree([[-1, -1], [1, -1], [1, 1], [-1, 1]], p=20, star_center=[0.0, 0.0])
    return place(tree, [0.0, 0.0], 0.0, 0.3, 'square')


@pytest.fixture
def u_star():
    """The U rotated by 180 degrees with its star center at (0, 0.5)."""
    tree = build_tree(U_VERTICES, p=20, star_center=[0.0, -0.5])
    return place(tree, [0.0, 0.5], np.pi, 0.3, 'U0')


@pytest.fixture
def one_star_map(square_star):
    return SemanticMap(stars=[square_star], star_sources=[0])


@pytest.fixture
def square_world(square_star):
    return World(boundary=ConvexPolygon([[-6, -6], [6, -6], [6, 6], [-6, 6]]),
                 familiar=[square_star], unknown=[], goal=[0.0, 4.0],
                 robot_radius=0.2, sensor_range=5.0)


@pytest.fixture
def disk_world():
    return World(boundary=ConvexPolygon([[-6, -6], [6, -6], [6, 6], [-6, 6]]),
                 familiar=[], unknown=[Disk([2.0, 0.0], 0.5)], goal=[4.0, 0.0],
                 robot_radius=0.2, sensor_range=5.0)


@pytest.fixture
def empty_scenario(scenario_dir):
    return load_scenario(scenario_dir / 'empty.scn')


@pytest.fixture
def ushape(scenario_dir):
    return load_scenario(scenario_dir / 'ushape.scn')


@pytest.fixture(params=['ushape.scn', 'cluttered_u.scn', 'room.scn'])
def shipped_scenario(request, scenario_dir):
    return load_scenario(scenario_dir / request.param)


@pytest.fixture(params=['cluttered_u.scn', 'room.scn'])
def cluttered_scenario(request, scenario_dir):
    return load_scenario(scenario_dir / request.param)
