"""
Preflight checks of a world against the assumptions the navigation law
relies on:

  (a) the epsilon-bands {beta_i <= eps_i} of two stars never overlap;
  (b) the goal lies outside every band and no band touches an unknown obstacle;
  (c) the star condition (x - x*_i) . grad beta_i >= delta_min over each band;
  (d) every band lies inside the workspace, so h is the identity on its boundary;
  world: sensor range R >= 10 max eps_i, goal (and start) in the freespace.

Bands are sampled along rays from each star center. Failures are report
entries, never exceptions.
"""

from __future__ import annotations
from dataclasses import dataclass, field
from typing import Dict, List, Optional
import logging
import numpy as np

from Common.convexGeom import Disk, boundary_distance, point_in_polygon
from Include.obstacleTree import PlacedObstacle, band_points
from Include.worldSim import World

log = logging.getLogger(__name__)

PAIR_MARGIN = 1.0  # [m] extra prefilter radius when testing band overlap


@dataclass(slots=True)
class CheckResult:
    condition: str       # 'a' | 'b' | 'c' | 'd' | 'world'
    subject: str
    passed: bool
    value: float = float('nan')
    detail: str = ''


@dataclass
class ValidationReport:
    entries: List[CheckResult] = field(default_factory=list)

    def add(self, condition, subject, passed, value=float('nan'), detail=''):
        self.entries.append(CheckResult(condition, subject, bool(passed), float(value), detail))

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def failures(self, condition: Optional[str] = None) -> List[CheckResult]:
        return [e for e in self.entries
                if not e.passed and (condition is None or e.condition == condition)]

    def failed_conditions(self) -> List[str]:
        return sorted({e.condition for e in self.entries if not e.passed})

    def summary(self) -> str:
        if self.passed:
            return f'all {len(self.entries)} checks passed'
        return (f'{len(self.failures())} of {len(self.entries)} checks failed '
                f'(conditions {", ".join(self.failed_conditions())})')

    def as_dict(self) -> Dict:
        return {'passed': self.passed,
                'entries': [{'condition': e.condition, 'subject': e.subject,
                             'passed': e.passed, 'value': e.value, 'detail': e.detail}
                            for e in self.entries]}


def _boundary_samples(obs, n: int = 360) -> np.ndarray:
    if isinstance(obs, Disk):
        a = 2.0 * np.pi * np.arange(n) / n
        return obs.center + obs.radius * np.column_stack((np.cos(a), np.sin(a)))
    v = obs.vertices
    w = np.roll(v, -1, axis=0)
    per_edge = max(2, n // len(v))
    t = np.linspace(0.0, 1.0, per_edge, endpoint=False)
    return (v[:, None, :] + t[None, :, None] * (w - v)[:, None, :]).reshape(-1, 2)


def _inside_unknown(obs, pts: np.ndarray) -> np.ndarray:
    if isinstance(obs, Disk):
        return np.linalg.norm(pts - obs.center, axis=1) <= obs.radius
    n = obs.inward_normals()
    s = np.einsum('kij,ij->ki', pts[:, None, :] - obs.vertices[None, :, :], n)
    return np.all(s >= 0.0, axis=1)


def star_condition_delta(placed: PlacedObstacle, pts: np.ndarray) -> float:
    """Sampled minimum of (x - x*) . grad beta over the given points."""
    body = placed.to_body(pts)
    keep = placed.tree.min_vertex_distance(body) > 1e-6
    if not np.any(keep):
        return float('nan')
    _, grad, _ = placed.evaluate(pts[keep], order=1, guard=False)
    return float(np.min(np.einsum('ij,ij->i', pts[keep] - placed.center, grad)))


def validate_assumptions(world: World, catalogue=None, start=None, delta_min: float = 1e-3,
                         n_angles: int = 2000, n_levels: int = 5) -> ValidationReport:
    """
    Check a world against conditions (a)-(d) and the world invariants.

    Inputs:
        world       - the physical layer (dilated geometry)
        catalogue   - optional Catalogue; every entry is checked for a star
                      center strictly inside its polygon
        start       - optional start position checked for freespace
        delta_min   - lower bound required of the star-condition minimum
        n_angles    - rays per star for band sampling
        n_levels    - levels of beta between 0 and eps sampled per ray
    Outputs:
        ValidationReport (placed.delta is set as a side effect)
    """
    report = ValidationReport()
    stars = world.familiar

    #--- World invariants ---------------------------------------------------
    max_eps = world.max_epsilon()
    report.add('world', 'sensor range', world.sensor_range >= 10.0 * max_eps,
               world.sensor_range, f'R = {world.sensor_range:g} m, 10 max eps = {10 * max_eps:g} m')
    goal_clear = world.clearance(world.goal)
    report.add('world', 'goal', goal_clear > 0.0, goal_clear, 'goal clearance in the freespace')
    if start is not None:
        start_clear = world.clearance(np.asarray(start, dtype=float)[:2])
        report.add('world', 'start', start_clear > 0.0, start_clear, 'start clearance in the freespace')
    if catalogue is not None:
        for name, entry in catalogue.entries.items():
            inside = point_in_polygon(entry.star_center_body, entry.tree.vertices) and \
                boundary_distance(entry.star_center_body, entry.tree.vertices) > 0.0
            report.add('world', f'catalogue {name}', inside, detail='star center interior')

    bands = [band_points(s, n_angles, n_levels) for s in stars]

    #--- (a) pairwise disjoint bands -----------------------------------------
    for i in range(len(stars)):
        for j in range(i + 1, len(stars)):
            si, sj = stars[i], stars[j]
            subject = f'{si.name}/{sj.name}'
            reach = (si.bounding_radius() + sj.bounding_radius()
                     + si.epsilon + sj.epsilon + PAIR_MARGIN)
            if np.linalg.norm(si.center - sj.center) > reach:
                report.add('a', subject, True, detail='separated beyond bounding circles')
                continue
            bij, _, _ = sj.evaluate(bands[i])
            bji, _, _ = si.evaluate(bands[j])
            margin = min(float(np.min(bij)) - sj.epsilon, float(np.min(bji)) - si.epsilon)
            report.add('a', subject, margin > 0.0, margin, 'min beta_j - eps_j over band i')

    #--- (b) goal and unknown obstacles outside the bands ---------------------
    for s, pts in zip(stars, bands):
        g = float(s.evaluate(world.goal)[0][0])
        report.add('b', f'{s.name} goal', g > s.epsilon, g - s.epsilon, 'beta(goal) - eps')
        for k, obs in enumerate(world.unknown):
            touches = bool(np.any(_inside_unknown(obs, pts)))
            if not touches:
                b, _, _ = s.evaluate(_boundary_samples(obs))
                touches = bool(np.any(b <= s.epsilon))
            report.add('b', f'{s.name} unknown{k}', not touches,
                       detail='band disjoint from unknown obstacle')

    #--- (c) star condition --------------------------------------------------
    for s, pts in zip(stars, bands):
        delta = star_condition_delta(s, pts)
        s.delta = delta
        report.add('c', s.name, delta >= delta_min, delta, f'sampled delta >= {delta_min:g}')

    #--- (d) bands inside the workspace --------------------------------------
    for s, pts in zip(stars, bands):
        margin = float(np.min(np.einsum('kij,ij->ki', pts[:, None, :] - world.boundary.vertices[None],
                                        world.boundary.inward_normals()).min(axis=1)))
        report.add('d', s.name, margin > 0.0, margin, 'band clearance from the workspace boundary')

    log.debug('validate_assumptions: %s', report.summary())
    return report
