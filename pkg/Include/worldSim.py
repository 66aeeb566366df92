"""
Physical layer, simulated range sensor, recognition oracle and the
bookkeeping of the mapped and model layers.

All geometry stored here is already dilated by the robot radius, so the
robot is a point in every layer.
"""

from __future__ import annotations
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple, Union
import logging
import numpy as np

from Common.convexGeom import ConvexPolygon, Disk, closest_on_segments
from Common.navErrors import ScenarioError
from Common.rayCast import RayTargets, cast_rays, ray_directions
from Include.obstacleTree import ObstacleTree, PlacedObstacle, build_tree, place

log = logging.getLogger(__name__)


# =============================================================================
# Catalogue
# =============================================================================
@dataclass(eq=False)
class CatalogueEntry:
    name: str
    vertices: np.ndarray          # body frame, CCW, already dilated by r
    star_center_body: np.ndarray
    epsilon: float
    p: int = 20
    tree: Optional[ObstacleTree] = None

    def __post_init__(self):
        self.vertices = np.array(self.vertices, dtype=float).reshape(-1, 2)
        self.star_center_body = np.array(self.star_center_body, dtype=float).reshape(2)
        if not self.epsilon > 0.0:
            raise ScenarioError(f'catalogue entry {self.name}: epsilon must be positive')
        if self.tree is None:
            self.tree = build_tree(self.vertices, self.p, self.star_center_body)


@dataclass(eq=False)
class Catalogue:
    entries: Dict[str, CatalogueEntry] = field(default_factory=dict)

    def add(self, entry: CatalogueEntry):
        if entry.name in self.entries:
            raise ScenarioError(f'duplicate catalogue entry {entry.name}')
        self.entries[entry.name] = entry

    def __getitem__(self, name: str) -> CatalogueEntry:
        try:
            return self.entries[name]
        except KeyError:
            raise ScenarioError(f'unknown catalogue shape {name!r}') from None

    def __len__(self) -> int:
        return len(self.entries)

    def place(self, name: str, center, theta: float, rho_scale: float = 0.9,
              label: str = '') -> PlacedObstacle:
        entry = self[name]
        return place(entry.tree, center, theta, entry.epsilon, label or name, rho_scale)


# =============================================================================
# World
# =============================================================================
@dataclass(eq=False)
class World:
    boundary: ConvexPolygon               # workspace, eroded by r (freespace boundary)
    familiar: List[PlacedObstacle]
    unknown: List[Union[Disk, ConvexPolygon]]
    goal: np.ndarray
    robot_radius: float
    sensor_range: float
    _targets: Optional[RayTargets] = field(default=None, repr=False)

    def __post_init__(self):
        self.goal = np.array(self.goal, dtype=float).reshape(2)

    # ------------------------------------------------------------
    # Source ids: familiar obstacles first, then unknown ones
    # ------------------------------------------------------------
    def n_sources(self) -> int:
        return len(self.familiar) + len(self.unknown)

    def is_familiar(self, source: int) -> bool:
        return 0 <= source < len(self.familiar)

    def source_name(self, source: int) -> str:
        if self.is_familiar(source):
            return self.familiar[source].name or f'star{source}'
        return f'unknown{source - len(self.familiar)}'

    def targets(self) -> RayTargets:
        if self._targets is None:
            shapes = [p.world_vertices() for p in self.familiar] + list(self.unknown)
            self._targets = RayTargets.from_obstacles(shapes)
        return self._targets

    def max_epsilon(self) -> float:
        return max((p.epsilon for p in self.familiar), default=0.0)

    # ------------------------------------------------------------
    # Clearances (signed, dilated coordinates)
    # ------------------------------------------------------------
    def familiar_clearance(self, x) -> float:
        out = np.inf
        for placed in self.familiar:
            d = placed.boundary_distance(x)
            out = min(out, -d if placed.contains(x) else d)
        return out

    def unknown_clearance(self, x) -> float:
        x = np.asarray(x, dtype=float)
        out = np.inf
        for obs in self.unknown:
            if isinstance(obs, Disk):
                d = obs.distance(x)
            else:
                a, b = obs.edges()
                _, dist = closest_on_segments(x, a, b)
                d = float(np.min(dist))
                if obs.contains(x):
                    d = -d
            out = min(out, d)
        return out

    def boundary_clearance(self, x) -> float:
        return float(np.min(self.boundary.support_values(x)))

    def clearance(self, x) -> float:
        return min(self.familiar_clearance(x), self.unknown_clearance(x),
                   self.boundary_clearance(x))

    def in_freespace(self, x, margin: float = 0.0) -> bool:
        return self.clearance(x) > margin

    def min_beta(self, x) -> float:
        """Smallest obstacle function value over every familiar obstacle (ground truth)."""
        vals = [float(p.evaluate(x)[0][0]) for p in self.familiar]
        return min(vals) if vals else np.inf


# =============================================================================
# Sensing
# =============================================================================
@dataclass(eq=False)
class Scan:
    origin: np.ndarray
    points: np.ndarray    # (n, 2) hit points
    sources: np.ndarray   # (n,) source id of each hit

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Tuple[np.ndarray, int]]:
        return iter(zip(self.points, (int(s) for s in self.sources)))


def sense(x, world: World, n_rays: int = 360) -> Scan:
    """n_rays evenly spaced casts of range R from x, hits tagged with their source."""
    x = np.asarray(x, dtype=float)
    targets = world.targets()
    if targets.is_empty():
        return Scan(x, np.zeros((0, 2)), np.zeros(0, dtype=int))
    dirs = ray_directions(n_rays)
    dist, owner = cast_rays(x, dirs, targets, world.sensor_range)
    hit = np.isfinite(dist)
    return Scan(x, x + dist[hit, None] * dirs[hit], owner[hit])


# =============================================================================
# Semantic map and model layer
# =============================================================================
@dataclass(frozen=True, eq=False)
class Fragment:
    source: int
    points: np.ndarray


@dataclass(eq=False)
class SemanticMap:
    stars: List[PlacedObstacle] = field(default_factory=list)
    star_sources: List[int] = field(default_factory=list)
    fragments: List[Fragment] = field(default_factory=list)

    def copy(self) -> 'SemanticMap':
        return SemanticMap(list(self.stars), list(self.star_sources), list(self.fragments))

    def with_star(self, placed: PlacedObstacle, source: int = -1) -> 'SemanticMap':
        out = self.copy()
        out.stars.append(placed)
        out.star_sources.append(source)
        return out


def update_map(smap: SemanticMap, hits: Scan, world: World,
               all_unknown: bool = False) -> SemanticMap:
    """
    Register newly recognised familiar obstacles and replace the fragments.

    With all_unknown every hit is kept as a raw fragment and no star is
    ever recognised (the standalone baseline).
    """
    out = SemanticMap(list(smap.stars), list(smap.star_sources), [])
    sources = np.asarray(hits.sources, dtype=int)
    for source in np.unique(sources):
        source = int(source)
        if world.is_familiar(source) and not all_unknown:
            if source not in out.star_sources:
                out.stars.append(world.familiar[source])
                out.star_sources.append(source)
                log.info('   Recognised %s from %d hit(s)', world.source_name(source),
                         int(np.count_nonzero(sources == source)))
            continue
        out.fragments.append(Fragment(source, hits.points[sources == source]))
    return out


def model_layer(smap: SemanticMap) -> list:
    """One disk (x*_j, rho_j) per star followed by the fragments, copied unchanged."""
    disks = [Disk(star.center, star.rho) for star in smap.stars]
    return disks + list(smap.fragments)
