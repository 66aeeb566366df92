"""
Scenario files (.scn): JSON documents describing a workspace, a catalogue of
familiar shapes, their placements, unknown obstacles, the robot and the goal.

Geometry is written in physical metres and angles in degrees. Loading
dilates every obstacle by the robot radius and erodes the workspace by it.
"""

from __future__ import annotations
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple
import copy
import json
import logging
import numpy as np

from Common.convexGeom import ConvexPolygon, Disk, HalfPlane, dilate_polygon, intersect_halfplanes
from Common.navErrors import GeometryError, ScenarioError, ShapeError
from Include.gridExperiment import sample_starts
from Include.worldSim import Catalogue, CatalogueEntry, World
from init_settings import Settings, init_settings

log = logging.getLogger(__name__)

ROBOT_TYPES = ('full', 'diffdrive')
SECTIONS = ('name', 'workspace', 'catalogue', 'placements', 'unknown', 'robot', 'goal', 'params')


@dataclass(eq=False)
class Scenario:
    name: str
    world: World
    catalogue: Catalogue
    robot_type: str
    start: Optional[np.ndarray]            # (x, y, psi [rad]); None for a random start
    settings: Settings
    document: Dict[str, Any] = field(default_factory=dict)
    path: Optional[str] = None

    def resolve_start(self, settings: Optional[Settings] = None) -> np.ndarray:
        """The start pose, drawn from the seeded generator if the file asks for 'random'."""
        if self.start is not None:
            return self.start.copy()
        s = self.settings if settings is None else settings
        return sample_starts(self.world, 1, np.random.default_rng(s.seed), s.gridClearance)[0]


# =============================================================================
# Parsing helpers
# =============================================================================
def _line_of(text: str, key: str) -> Optional[int]:
    token = f'"{key}"'
    for i, line in enumerate(text.splitlines(), start=1):
        if token in line:
            return i
    return None


class _Reader:
    """Schema checks that report the line of the offending key."""

    def __init__(self, text: str, path: Optional[str]):
        self.text = text
        self.path = path

    def fail(self, message: str, key: Optional[str] = None):
        raise ScenarioError(message, self.path, _line_of(self.text, key) if key else None)

    def section(self, doc: dict, key: str, kind, required: bool = True, default=None):
        if key not in doc:
            if required:
                self.fail(f'missing section "{key}"')
            return default
        value = doc[key]
        if not isinstance(value, kind):
            self.fail(f'"{key}" must be a JSON {kind.__name__}', key)
        return value

    def points(self, value, key: str, min_len: int = 1) -> List[List[float]]:
        try:
            arr = np.array(value, dtype=float)
        except (TypeError, ValueError):
            self.fail(f'"{key}" must be a list of [x, y] pairs', key)
        if arr.ndim != 2 or arr.shape[1] != 2 or len(arr) < min_len or not np.all(np.isfinite(arr)):
            self.fail(f'"{key}" must hold at least {min_len} finite [x, y] pairs', key)
        return arr.tolist()

    def vector(self, value, key: str, n: int) -> List[float]:
        try:
            arr = np.array(value, dtype=float).reshape(n)
        except (TypeError, ValueError):
            self.fail(f'"{key}" must be a list of {n} numbers', key)
        if not np.all(np.isfinite(arr)):
            self.fail(f'"{key}" must be finite', key)
        return arr.tolist()

    def number(self, value, key: str, positive: bool = False) -> float:
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not np.isfinite(value):
            self.fail(f'"{key}" must be a number', key)
        if positive and not value > 0:
            self.fail(f'"{key}" must be positive', key)
        return float(value)


def normalise_document(doc: Any, text: str = '', path: Optional[str] = None) -> Dict[str, Any]:
    """Checked copy of a scenario document with every number as float."""
    rd = _Reader(text, path)
    if not isinstance(doc, dict):
        rd.fail('scenario must be a JSON object')
    for key in doc:
        if key not in SECTIONS:
            rd.fail(f'unknown section "{key}"', key)
    out: Dict[str, Any] = {'name': str(doc.get('name', 'scenario'))}

    ws = rd.section(doc, 'workspace', dict)
    out['workspace'] = {'vertices': rd.points(ws.get('vertices'), 'vertices', 3)}

    out['catalogue'] = []
    for entry in rd.section(doc, 'catalogue', list, required=False, default=[]):
        if not isinstance(entry, dict) or 'name' not in entry:
            rd.fail('catalogue entries need a "name"', 'catalogue')
        item = {'name': str(entry['name']),
                'vertices': rd.points(entry.get('vertices'), 'vertices', 3),
                'star_center': rd.vector(entry.get('star_center'), 'star_center', 2),
                'epsilon': rd.number(entry.get('epsilon'), 'epsilon', positive=True)}
        if 'p' in entry:
            if isinstance(entry['p'], bool) or not isinstance(entry['p'], int):
                rd.fail('"p" must be an even integer', 'p')
            item['p'] = entry['p']
        out['catalogue'].append(item)

    out['placements'] = []
    for entry in rd.section(doc, 'placements', list, required=False, default=[]):
        if not isinstance(entry, dict) or 'name' not in entry:
            rd.fail('placements need the "name" of a catalogue shape', 'placements')
        item = {'name': str(entry['name']),
                'rotation': rd.number(entry.get('rotation', 0.0), 'rotation'),
                'center': rd.vector(entry.get('center'), 'center', 2)}
        if 'label' in entry:
            item['label'] = str(entry['label'])
        out['placements'].append(item)

    out['unknown'] = []
    for entry in rd.section(doc, 'unknown', list, required=False, default=[]):
        if isinstance(entry, dict) and 'disk' in entry and isinstance(entry['disk'], dict):
            out['unknown'].append({'disk': {
                'center': rd.vector(entry['disk'].get('center'), 'center', 2),
                'radius': rd.number(entry['disk'].get('radius'), 'radius', positive=True)}})
        elif isinstance(entry, dict) and 'polygon' in entry:
            out['unknown'].append({'polygon': rd.points(entry['polygon'], 'polygon', 3)})
        else:
            rd.fail('unknown obstacles are {"disk": {...}} or {"polygon": [...]}', 'unknown')

    robot = rd.section(doc, 'robot', dict)
    rtype = robot.get('type', 'full')
    if rtype not in ROBOT_TYPES:
        rd.fail(f'robot type must be one of {ROBOT_TYPES}', 'type')
    start = robot.get('start')
    if start != 'random':
        start = rd.vector(start, 'start', 3)
    out['robot'] = {'radius': rd.number(robot.get('radius'), 'radius', positive=True),
                    'type': rtype, 'start': start,
                    'sensor_range': rd.number(robot.get('sensor_range'), 'sensor_range', positive=True)}

    out['goal'] = rd.vector(rd.section(doc, 'goal', list), 'goal', 2)
    out['params'] = dict(rd.section(doc, 'params', dict, required=False, default={}))
    return out


# =============================================================================
# Building the world
# =============================================================================
def erode_convex(vertices, r: float) -> ConvexPolygon:
    """Convex polygon shrunk by r along every edge."""
    poly = ConvexPolygon(vertices)
    planes = [HalfPlane(a + r * n, n) for a, n in zip(poly.vertices, poly.inward_normals())]
    return intersect_halfplanes(planes, poly)


def build_world(doc: Dict[str, Any], settings: Settings) -> Tuple[World, Catalogue]:
    """
    Physical layer of a normalised document, dilated by the robot radius.

    Inputs:
        doc         - output of normalise_document
        settings    - Settings (p default and rhoScale are used)
    Outputs:
        World, Catalogue
    """
    r = doc['robot']['radius']
    catalogue = Catalogue()
    for item in doc['catalogue']:
        catalogue.add(CatalogueEntry(name=item['name'],
                                     vertices=dilate_polygon(item['vertices'], r),
                                     star_center_body=item['star_center'],
                                     epsilon=item['epsilon'], p=item.get('p', settings.p)))

    familiar = []
    for k, item in enumerate(doc['placements']):
        label = item.get('label', f"{item['name']}{k}")
        placed = catalogue.place(item['name'], item['center'], np.deg2rad(item['rotation']),
                                 settings.rhoScale, label)
        placed.vertex_guard = settings.vertexGuard
        familiar.append(placed)

    unknown = []
    for item in doc['unknown']:
        if 'disk' in item:
            unknown.append(Disk(item['disk']['center'], item['disk']['radius'] + r))
        else:
            unknown.append(ConvexPolygon(dilate_polygon(item['polygon'], r)))

    boundary = erode_convex(doc['workspace']['vertices'], r)
    world = World(boundary=boundary, familiar=familiar, unknown=unknown, goal=doc['goal'],
                  robot_radius=r, sensor_range=doc['robot']['sensor_range'])
    return world, catalogue


def scenario_from_document(doc: Dict[str, Any], settings: Optional[Settings] = None,
                           overrides: Optional[Dict[str, Any]] = None, text: str = '',
                           path: Optional[str] = None) -> Scenario:
    doc = normalise_document(doc, text, path)
    base = init_settings() if settings is None else settings
    try:
        settings = base.with_overrides(doc['params']).with_overrides(overrides or {})
    except ScenarioError as e:
        raise ScenarioError(e.message, path, _line_of(text, 'params')) from None
    except (TypeError, ValueError) as e:
        raise ScenarioError(f'invalid parameter: {e}', path, _line_of(text, 'params')) from None
    try:
        world, catalogue = build_world(doc, settings)
    except ScenarioError as e:
        raise ScenarioError(e.message, path, e.lineno) from None
    except (GeometryError, ShapeError) as e:
        raise ScenarioError(f'invalid geometry: {e}', path) from None

    start = doc['robot']['start']
    if start != 'random':
        start = np.array([start[0], start[1], np.deg2rad(start[2])])
    else:
        start = None
    log.debug('loaded scenario %s: %d familiar, %d unknown obstacles', doc['name'],
              len(world.familiar), len(world.unknown))
    return Scenario(name=doc['name'], world=world, catalogue=catalogue,
                    robot_type=doc['robot']['type'], start=start, settings=settings,
                    document=doc, path=path)


def load_scenario(path, settings: Optional[Settings] = None,
                  overrides: Optional[Dict[str, Any]] = None) -> Scenario:
    """
    Read and build a scenario file.

    Raises ScenarioError with the line number of the offending text.
    """
    path = str(path)
    try:
        with open(path, 'r') as fid:
            text = fid.read()
    except OSError as e:
        raise ScenarioError(f'cannot read scenario: {e.strerror}', path) from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError(e.msg, path, e.lineno) from None
    return scenario_from_document(doc, settings, overrides, text, path)


def save_scenario(scenario: Scenario, path):
    """Write the normalised document of a scenario; loading it again gives the same world."""
    with open(path, 'w') as fid:
        json.dump(copy.deepcopy(scenario.document), fid, indent=2)
        fid.write('\n')
