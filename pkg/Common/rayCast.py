"""
Simulated range sensing: batches of rays cast against disks and segments.

All rays share one origin; every call is vectorised over (rays x primitives).
"""

from __future__ import annotations
from dataclasses import dataclass, field
from typing import Iterable, Optional, Tuple
import numpy as np

from Common.convexGeom import Disk, ConvexPolygon, as_points, cross2


@dataclass
class RayTargets:
    """Flat primitive arrays for casting, each tagged with an owner index."""
    centers: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))
    radii: np.ndarray = field(default_factory=lambda: np.zeros(0))
    disk_owner: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))
    seg_a: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))
    seg_b: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))
    seg_owner: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))

    @classmethod
    def from_obstacles(cls, obstacles: Iterable, owners: Optional[Iterable[int]] = None) -> 'RayTargets':
        """Accepts Disk, ConvexPolygon, (n, 2) vertex rings and (a, b) segments."""
        obstacles = list(obstacles)
        owners = list(range(len(obstacles))) if owners is None else list(owners)
        centers, radii, d_own = [], [], []
        seg_a, seg_b, s_own = [], [], []
        for obs, owner in zip(obstacles, owners):
            if isinstance(obs, Disk):
                centers.append(obs.center)
                radii.append(obs.radius)
                d_own.append(owner)
                continue
            if isinstance(obs, ConvexPolygon):
                ring = obs.vertices
                a, b = ring, np.roll(ring, -1, axis=0)
            else:
                ring = as_points(obs)
                if len(ring) == 2:
                    a, b = ring[:1], ring[1:]
                else:
                    a, b = ring, np.roll(ring, -1, axis=0)
            seg_a.append(a)
            seg_b.append(b)
            s_own.append(np.full(len(a), owner, dtype=int))
        targets = cls()
        if centers:
            targets.centers = np.array(centers, dtype=float)
            targets.radii = np.array(radii, dtype=float)
            targets.disk_owner = np.array(d_own, dtype=int)
        if seg_a:
            targets.seg_a = np.vstack(seg_a)
            targets.seg_b = np.vstack(seg_b)
            targets.seg_owner = np.concatenate(s_own)
        return targets

    def is_empty(self) -> bool:
        return len(self.radii) == 0 and len(self.seg_a) == 0


def cast_rays(origin, directions: np.ndarray, targets: RayTargets,
              max_range: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Nearest hit distance along every ray.

    Inputs:
        origin      - common ray origin (2,)
        directions  - unit ray directions (n, 2)
        targets     - primitives to intersect
        max_range   - hits farther than this are discarded
    Outputs:
        dist        - (n,) distance to the nearest hit, inf if none
        owner       - (n,) owner index of the hit primitive, -1 if none
    """
    o = np.asarray(origin, dtype=float)
    d = np.atleast_2d(np.asarray(directions, dtype=float))
    n = len(d)
    dist = np.full(n, np.inf)
    owner = np.full(n, -1, dtype=int)

    #--- Disks ---------------------------------------------------------------
    if len(targets.radii):
        oc = o - targets.centers                       # (m, 2)
        b = d @ oc.T                                   # (n, m)
        c = np.einsum('ij,ij->i', oc, oc) - targets.radii ** 2
        disc = b * b - c[None, :]
        root = np.sqrt(np.where(disc >= 0.0, disc, 0.0))
        t_near = -b - root
        t_far = -b + root
        t = np.where(t_near >= 0.0, t_near, t_far)
        t = np.where((disc >= 0.0) & (t >= 0.0), t, np.inf)
        j = np.argmin(t, axis=1)
        best = t[np.arange(n), j]
        closer = best < dist
        dist[closer] = best[closer]
        owner[closer] = targets.disk_owner[j[closer]]

    #--- Segments ------------------------------------------------------------
    if len(targets.seg_a):
        e = targets.seg_b - targets.seg_a              # (s, 2)
        ao = targets.seg_a - o                         # (s, 2)
        denom = d[:, None, 0] * e[None, :, 1] - d[:, None, 1] * e[None, :, 0]
        ok = np.abs(denom) > 1e-15
        safe = np.where(ok, denom, 1.0)
        t = cross2(ao, e)[None, :] / safe
        u = (ao[None, :, 0] * d[:, None, 1] - ao[None, :, 1] * d[:, None, 0]) / safe
        t = np.where(ok & (t >= 0.0) & (u >= 0.0) & (u <= 1.0), t, np.inf)
        j = np.argmin(t, axis=1)
        best = t[np.arange(n), j]
        closer = best < dist
        dist[closer] = best[closer]
        owner[closer] = targets.seg_owner[j[closer]]

    miss = dist > max_range
    dist[miss] = np.inf
    owner[miss] = -1
    return dist, owner


def ray_directions(n_rays: int, heading: float = 0.0) -> np.ndarray:
    angles = heading + 2.0 * np.pi * np.arange(n_rays) / n_rays
    return np.column_stack((np.cos(angles), np.sin(angles)))


def ray_cast(origin, direction, world, max_range: float) -> Optional[Tuple[np.ndarray, float]]:
    """Nearest intersection of one ray with a list of obstacles, or None."""
    targets = world if isinstance(world, RayTargets) else RayTargets.from_obstacles(world)
    d = np.asarray(direction, dtype=float)
    dist, _ = cast_rays(origin, d[None, :], targets, max_range)
    if not np.isfinite(dist[0]):
        return None
    return np.asarray(origin, dtype=float) + dist[0] * d, float(dist[0])
