"""
Convex local freespace of a model-layer point y.

LF(y) is a regular polygon of radius R_virt/2 around y clipped by one
separating half-plane per obstacle within R_virt: the perpendicular
bisector between y and the nearest point of that obstacle. Model disks are
projected onto exactly; sensed fragments through the convex hull of their
points, or through one hull per angular sector about y when y lies inside
that hull. The workspace edges are treated the same way.
"""

from __future__ import annotations
from dataclasses import dataclass
from typing import List, Optional, Sequence
import logging
import numpy as np

from Common.convexGeom import (EPS, ConvexPolygon, Disk, HalfPlane, as_points,
                               intersect_halfplanes, line_chord, project_convex,
                               project_point_set, regular_polygon)
from Common.navErrors import DegenerateLine, EmptyIntersection, EmptyLocalFreespace
from Include.worldSim import Fragment

log = logging.getLogger(__name__)

SECTOR_SPAN = 0.5 * np.pi   # sectors narrower than pi keep y outside their hull


@dataclass(eq=False)
class LocalFreespace:
    polygon: ConvexPolygon
    y: np.ndarray

    def contains(self, q, tol: float = 0.0) -> bool:
        return self.polygon.contains(q, tol)

    def project(self, q) -> np.ndarray:
        """Metric projection of q onto LF."""
        return project_convex(q, self.polygon)

    def project_on_line(self, q, direction) -> np.ndarray:
        """
        Projection of q onto the chord LF cut by the line y + s*direction.

        Inputs:
            q           - point to project
            direction   - unit direction of the line through y
        Outputs:
            point of the chord closest to q; y itself when the chord is shorter
            than 1e-9
        """
        d = np.asarray(direction, dtype=float)
        s_min, s_max = line_chord(self.polygon, self.y, d)
        if not s_min <= s_max:
            raise DegenerateLine('guide line misses the local freespace')
        if s_max - s_min < EPS:
            return self.y.copy()
        s = float(np.clip((np.asarray(q, dtype=float) - self.y) @ d, s_min, s_max))
        return self.y + s * d


def separating_plane(y, nearest) -> Optional[HalfPlane]:
    """Half-plane of points at least as close to y as to `nearest`, bisecting the gap."""
    y = np.asarray(y, dtype=float)
    gap_vec = np.asarray(nearest, dtype=float) - y
    gap = float(np.linalg.norm(gap_vec))
    if gap < EPS:
        return None
    n = gap_vec / gap
    return HalfPlane(anchor=y + 0.5 * gap * n, normal=-n)


def _disk_plane(y, disk: Disk, reach: float) -> Optional[HalfPlane]:
    offset = disk.center - y
    dist = float(np.linalg.norm(offset))
    if dist < EPS:
        raise EmptyLocalFreespace('y coincides with a model disk center')
    gap = dist - disk.radius            # signed, negative inside the disk
    if gap > reach:
        return None
    n = offset / dist
    return HalfPlane(anchor=y + 0.5 * gap * n, normal=-n)


def _sector_groups(y, points: np.ndarray, span: float = SECTOR_SPAN) -> List[np.ndarray]:
    """Split points into angular sectors about y narrower than span, starting at the widest gap."""
    rel = points - y
    angle = np.arctan2(rel[:, 1], rel[:, 0])
    order = np.argsort(angle)
    sorted_angle = angle[order]
    gaps = np.diff(np.append(sorted_angle, sorted_angle[0] + 2.0 * np.pi))
    start = sorted_angle[(int(np.argmax(gaps)) + 1) % len(order)]
    sector = np.floor(np.mod(angle - start, 2.0 * np.pi) / span).astype(int)
    return [points[sector == s] for s in np.unique(sector)]


def _fragment_planes(y, points: np.ndarray, reach: float) -> List[HalfPlane]:
    near = points[np.linalg.norm(points - y, axis=1) <= reach]
    if len(near) == 0:
        return []
    plane = separating_plane(y, project_point_set(y, near))
    if plane is not None:
        return [plane]
    #--- y inside the hull of the fragment: one hull per angular sector ---
    planes = [separating_plane(y, project_point_set(y, group))
              for group in _sector_groups(y, near)]
    if any(p is None for p in planes):
        raise EmptyLocalFreespace('y lies on a sensed obstacle point')
    return planes


def _boundary_planes(y, boundary: ConvexPolygon, reach: float) -> List[HalfPlane]:
    planes = []
    n = boundary.inward_normals()
    g = boundary.support_values(y)       # signed distance to each edge line
    for gi, ni in zip(g, n):
        if gi <= reach:
            planes.append(HalfPlane(anchor=y - 0.5 * gi * ni, normal=ni))
    return planes


def local_freespace(y, model: Sequence, R_virt: float,
                    boundary: Optional[ConvexPolygon] = None,
                    n_sides: int = 64) -> LocalFreespace:
    """
    Convex local freespace LF(y) of the model layer.

    Inputs:
        y           - model-layer point
        model       - model obstacles: Disk, Fragment or (n, 2) point arrays
        R_virt      - virtual sensing range
        boundary    - optional convex workspace
        n_sides     - sides of the polygonal seed disk of radius R_virt/2
    Outputs:
        LocalFreespace
    """
    y = np.array(y, dtype=float).reshape(2)
    if not R_virt > 0.0:
        raise ValueError(f'R_virt must be positive, got {R_virt}')
    seed = regular_polygon(y, 0.5 * R_virt, n_sides)

    planes = []
    for obs in model:
        if isinstance(obs, Disk):
            plane = _disk_plane(y, obs, R_virt)
            planes.extend([] if plane is None else [plane])
        elif isinstance(obs, ConvexPolygon):
            plane = separating_plane(y, project_convex(y, obs))
            if plane is not None and 2.0 * plane.value(y) <= R_virt:
                planes.append(plane)
        else:
            pts = obs.points if isinstance(obs, Fragment) else obs
            planes.extend(_fragment_planes(y, as_points(pts), R_virt))
    if boundary is not None:
        planes.extend(_boundary_planes(y, boundary, R_virt))

    try:
        poly = intersect_halfplanes(planes, seed, center=y)
    except EmptyIntersection as e:
        raise EmptyLocalFreespace(f'local freespace of {y} is empty') from e
    log.debug('local freespace at %s: %d planes, %d vertices', y, len(planes), len(poly))
    return LocalFreespace(poly, y)
