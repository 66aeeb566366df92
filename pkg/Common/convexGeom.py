"""
Exact 2D primitives: points, segments, convex polygons, hulls, half-plane
intersection, metric projections onto convex sets and polygon offsetting.

Points are numpy arrays of shape (2,), point lists arrays of shape (n, 2).
Polygons are counterclockwise. One absolute tolerance (EPS, metres) is used
for every degeneracy test.
"""

from __future__ import annotations
from dataclasses import dataclass
from typing import Sequence, Tuple, Union
import numpy as np
from scipy.spatial import ConvexHull

try:
    from scipy.spatial import QhullError
except ImportError:  # scipy < 1.8
    from scipy.spatial.qhull import QhullError

from Common.navErrors import DegenerateInput, EmptyIntersection, SelfIntersection

EPS = 1e-9  # [m]


def vec2(x: float, y: float) -> np.ndarray:
    return np.array([x, y], dtype=float)


def as_points(points) -> np.ndarray:
    """Return a float (n, 2) array copy of a point list."""
    pts = np.array(points, dtype=float)
    return pts.reshape(-1, 2)


def cross2(a: np.ndarray, b: np.ndarray):
    """z-component of the cross product, broadcast over leading axes."""
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def signed_area(vertices: np.ndarray) -> float:
    v = as_points(vertices)
    w = np.roll(v, -1, axis=0)
    return 0.5 * float(np.sum(cross2(v, w)))


def edge_normals(vertices: np.ndarray) -> np.ndarray:
    """Unit inward normals of the edges v_i -> v_{i+1} of a CCW polygon."""
    v = as_points(vertices)
    d = np.roll(v, -1, axis=0) - v
    length = np.linalg.norm(d, axis=1)
    return np.column_stack((-d[:, 1], d[:, 0])) / length[:, None]


# =============================================================================
# Domain types
# =============================================================================
@dataclass(frozen=True, eq=False)
class HalfPlane:
    """{q : (q - anchor) . normal >= 0}; normal is unit and points into the kept side."""
    anchor: np.ndarray
    normal: np.ndarray

    def __post_init__(self):
        anchor = np.array(self.anchor, dtype=float).reshape(2)
        normal = np.array(self.normal, dtype=float).reshape(2)
        if abs(np.linalg.norm(normal) - 1.0) > 1e-12:
            raise DegenerateInput('half-plane normal must be a unit vector')
        object.__setattr__(self, 'anchor', anchor)
        object.__setattr__(self, 'normal', normal)

    @classmethod
    def through(cls, anchor, direction) -> 'HalfPlane':
        """Build from any nonzero normal direction, normalising it."""
        d = np.asarray(direction, dtype=float)
        n = np.linalg.norm(d)
        if n < EPS:
            raise DegenerateInput('half-plane normal has zero length')
        return cls(anchor, d / n)

    def value(self, q):
        """Signed distance of q (or of an (n, 2) array of points) to the boundary line."""
        return (np.asarray(q, dtype=float) - self.anchor) @ self.normal

    def contains(self, q, tol: float = 0.0) -> bool:
        return bool(self.value(q) >= -tol)


@dataclass(frozen=True, eq=False)
class Disk:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, 'center', np.array(self.center, dtype=float).reshape(2))
        object.__setattr__(self, 'radius', float(self.radius))
        if not self.radius > 0.0:
            raise DegenerateInput(f'disk radius must be positive, got {self.radius}')

    def contains(self, q, tol: float = 0.0) -> bool:
        return bool(np.linalg.norm(np.asarray(q) - self.center) <= self.radius + tol)

    def distance(self, q) -> float:
        """Signed distance from q to the circle (negative inside)."""
        return float(np.linalg.norm(np.asarray(q) - self.center) - self.radius)


@dataclass(frozen=True, eq=False)
class ConvexPolygon:
    vertices: np.ndarray

    def __post_init__(self):
        v = as_points(self.vertices)
        if len(v) < 3:
            raise DegenerateInput('a convex polygon needs at least 3 vertices')
        d = np.roll(v, -1, axis=0) - v
        if np.min(np.linalg.norm(d, axis=1)) < EPS:
            raise DegenerateInput('convex polygon has repeated vertices')
        if signed_area(v) <= EPS * EPS:
            raise DegenerateInput('convex polygon must be counterclockwise with positive area')
        turn = cross2(d, np.roll(d, -1, axis=0))
        scale = max(1.0, float(np.max(np.abs(v)))) ** 2
        if np.any(turn < -EPS * scale):
            raise DegenerateInput('polygon is not convex')
        v.flags.writeable = False
        object.__setattr__(self, 'vertices', v)

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.vertices, np.roll(self.vertices, -1, axis=0)

    def inward_normals(self) -> np.ndarray:
        return edge_normals(self.vertices)

    def halfplanes(self) -> list:
        return [HalfPlane(a, n) for a, n in zip(self.vertices, self.inward_normals())]

    def support_values(self, q) -> np.ndarray:
        """(q - v_i) . n_i for every edge; all >= 0 iff q is inside."""
        return np.einsum('ij,ij->i', np.asarray(q, dtype=float) - self.vertices,
                         self.inward_normals())

    def contains(self, q, tol: float = 0.0) -> bool:
        return bool(np.all(self.support_values(q) >= -tol))

    def area(self) -> float:
        return signed_area(self.vertices)

    def centroid(self) -> np.ndarray:
        return np.mean(self.vertices, axis=0)


ConvexObstacle = Union[Disk, ConvexPolygon]


# =============================================================================
# Segments and simple polygons
# =============================================================================
def closest_on_segments(q, a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Closest points on segments a[i]-b[i] to q, and their distances."""
    q = np.asarray(q, dtype=float)
    d = b - a
    dd = np.einsum('ij,ij->i', d, d)
    t = np.einsum('ij,ij->i', q - a, d) / np.where(dd > 0.0, dd, 1.0)
    t = np.clip(t, 0.0, 1.0)
    c = a + t[:, None] * d
    return c, np.linalg.norm(q - c, axis=1)


def segment_closest_point(q, a, b) -> np.ndarray:
    c, _ = closest_on_segments(q, np.atleast_2d(np.asarray(a, dtype=float)),
                               np.atleast_2d(np.asarray(b, dtype=float)))
    return c[0]


def boundary_distance(q, vertices) -> float:
    """Exact distance from q to the boundary of a (not necessarily convex) polygon."""
    v = as_points(vertices)
    _, dist = closest_on_segments(q, v, np.roll(v, -1, axis=0))
    return float(np.min(dist))


def point_in_polygon(q, vertices) -> bool:
    """Even-odd ray-crossing test."""
    x, y = float(q[0]), float(q[1])
    v = as_points(vertices)
    w = np.roll(v, -1, axis=0)
    straddle = (v[:, 1] > y) != (w[:, 1] > y)
    if not np.any(straddle):
        return False
    vs, ws = v[straddle], w[straddle]
    x_cross = vs[:, 0] + (y - vs[:, 1]) * (ws[:, 0] - vs[:, 0]) / (ws[:, 1] - vs[:, 1])
    return bool(np.count_nonzero(x_cross > x) % 2 == 1)


def _segments_cross(p1, p2, q1, q2) -> bool:
    d1 = cross2(p2 - p1, q1 - p1)
    d2 = cross2(p2 - p1, q2 - p1)
    d3 = cross2(q2 - q1, p1 - q1)
    d4 = cross2(q2 - q1, p2 - q1)
    return bool((d1 * d2 < 0.0) and (d3 * d4 < 0.0))


def is_simple(vertices) -> bool:
    """True if no two non-adjacent edges of the closed polygon intersect."""
    v = as_points(vertices)
    n = len(v)
    if n < 3:
        return False
    for i in range(n):
        a1, a2 = v[i], v[(i + 1) % n]
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            if _segments_cross(a1, a2, v[j], v[(j + 1) % n]):
                return False
    return True


def remove_collinear(vertices, tol: float = EPS) -> np.ndarray:
    """Drop vertices whose two edges are collinear (and repeated vertices)."""
    v = as_points(vertices)
    changed = True
    while changed and len(v) > 3:
        changed = False
        prev = np.roll(v, 1, axis=0)
        nxt = np.roll(v, -1, axis=0)
        a, b = v - prev, nxt - v
        turn = cross2(a, b) / np.maximum(np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1), EPS)
        keep = (np.abs(turn) > tol) & (np.linalg.norm(a, axis=1) > tol)
        if not np.all(keep):
            v = v[keep]
            changed = True
    return v


def regular_polygon(center, radius: float, n_sides: int) -> ConvexPolygon:
    angles = 2.0 * np.pi * np.arange(n_sides) / n_sides
    c = np.asarray(center, dtype=float)
    return ConvexPolygon(c + radius * np.column_stack((np.cos(angles), np.sin(angles))))


# =============================================================================
# Projections
# =============================================================================
def project_convex(q, C: Union[Disk, ConvexPolygon]) -> np.ndarray:
    """Metric projection of q onto a disk or convex polygon; q itself if q is in C."""
    q = np.array(q, dtype=float)
    if isinstance(C, Disk):
        d = q - C.center
        dist = np.linalg.norm(d)
        if dist <= C.radius:
            return q
        return C.center + C.radius * d / dist
    if C.contains(q):
        return q
    a, b = C.edges()
    c, dist = closest_on_segments(q, a, b)
    return c[int(np.argmin(dist))]


def project_point_set(q, points) -> np.ndarray:
    """Projection of q onto the convex hull of a finite point set."""
    pts = as_points(points)
    if len(pts) == 1:
        return pts[0].copy()
    try:
        return project_convex(q, convex_hull(pts))
    except DegenerateInput:
        pass
    #--- Collinear set: project onto the segment spanned by its extremes ---
    far = int(np.argmax(np.linalg.norm(pts - pts[0], axis=1)))
    d = pts[far] - pts[0]
    length = np.linalg.norm(d)
    if length < EPS:
        return pts[0].copy()
    d = d / length
    t = (pts - pts[0]) @ d
    return segment_closest_point(q, pts[0] + t.min() * d, pts[0] + t.max() * d)


def line_chord(poly: ConvexPolygon, point, direction) -> Tuple[float, float]:
    """Parameter interval [s_min, s_max] of {point + s*direction} inside poly.

    Returns (inf, -inf) when the line misses the polygon.
    """
    p = np.asarray(point, dtype=float)
    d = np.asarray(direction, dtype=float)
    n = poly.inward_normals()
    g = np.einsum('ij,ij->i', p - poly.vertices, n)
    c = n @ d
    s_min, s_max = -np.inf, np.inf
    pos, neg, par = c > EPS, c < -EPS, np.abs(c) <= EPS
    if np.any(par & (g < -EPS)):
        return np.inf, -np.inf
    if np.any(pos):
        s_min = float(np.max(-g[pos] / c[pos]))
    if np.any(neg):
        s_max = float(np.min(-g[neg] / c[neg]))
    return s_min, s_max


# =============================================================================
# Half-plane intersection and hulls
# =============================================================================
def _dedupe_ring(v: np.ndarray) -> np.ndarray:
    if len(v) == 0:
        return v
    keep = np.linalg.norm(v - np.roll(v, 1, axis=0), axis=1) > EPS
    if not np.any(keep):
        return v[:1]
    return v[keep]


def clip_polygon(vertices: np.ndarray, plane: HalfPlane) -> np.ndarray:
    """One Sutherland-Hodgman pass: keep the part of the ring inside plane."""
    v = vertices
    s = plane.value(v)
    inside = s >= 0.0
    if np.all(inside):
        return v
    if not np.any(inside):
        return v[:0]
    vn = np.roll(v, -1, axis=0)
    sn = np.roll(s, -1)
    crossing = inside != (sn >= 0.0)
    denom = np.where(crossing, s - sn, 1.0)
    t = np.where(crossing, s / denom, 0.0)
    x = v + t[:, None] * (vn - v)
    candidates = np.stack((v, x), axis=1).reshape(-1, 2)
    mask = np.stack((inside, crossing), axis=1).reshape(-1)
    return _dedupe_ring(candidates[mask])


def intersect_halfplanes(planes: Sequence[HalfPlane], seed: ConvexPolygon,
                         center=None) -> ConvexPolygon:
    """seed intersected with every half-plane, by sequential clipping.

    With a center inside the result, planes are clipped nearest first and
    the ones lying beyond the current polygon are skipped.
    """
    v = np.array(seed.vertices)
    if center is not None and len(planes):
        c = np.asarray(center, dtype=float)
        offsets = np.array([p.value(c) for p in planes])
        order = np.argsort(offsets, kind='stable')
        planes, offsets = [planes[i] for i in order], offsets[order]
    for k, plane in enumerate(planes):
        if center is not None and offsets[k] > np.max(np.linalg.norm(v - c, axis=1)):
            break
        v = clip_polygon(v, plane)
        if len(v) < 3:
            raise EmptyIntersection('half-plane intersection is empty')
    if len(v) < 3 or signed_area(v) <= EPS * EPS:
        raise EmptyIntersection('half-plane intersection has no interior')
    try:
        return ConvexPolygon(remove_collinear(v))
    except DegenerateInput as e:
        raise EmptyIntersection(f'half-plane intersection is degenerate ({e})') from e


def convex_hull_indices(points) -> np.ndarray:
    """Indices of the hull vertices of points, counterclockwise."""
    pts = as_points(points)
    if len(pts) < 3:
        raise DegenerateInput('convex hull needs at least 3 points')
    try:
        hull = ConvexHull(pts)
    except QhullError as e:
        raise DegenerateInput('points are collinear or coincident') from e
    if hull.volume <= EPS * EPS:
        raise DegenerateInput('points are collinear')
    return np.asarray(hull.vertices, dtype=int)


def convex_hull(points) -> ConvexPolygon:
    pts = as_points(points)
    return ConvexPolygon(pts[convex_hull_indices(pts)])


# =============================================================================
# Offsetting
# =============================================================================
def dilate_polygon(vertices, r: float) -> np.ndarray:
    """Mitred outward offset of a simple CCW polygon by r >= 0."""
    v = as_points(vertices)
    if r < 0.0:
        raise ValueError(f'dilation radius must be non-negative, got {r}')
    if r == 0.0:
        return v
    n_out = -edge_normals(v)             # outward normal of edge i
    n_prev = np.roll(n_out, 1, axis=0)   # edge i-1, ending at vertex i
    denom = 1.0 + np.einsum('ij,ij->i', n_prev, n_out)
    if np.any(denom < 1e-9):
        raise SelfIntersection('polygon has a zero-angle spike; mitre is unbounded')
    out = v + r * (n_prev + n_out) / denom[:, None]
    if not is_simple(out) or signed_area(out) <= 0.0:
        raise SelfIntersection(f'offsetting by {r} m creates crossing edges')
    return out
