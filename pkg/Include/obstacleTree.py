"""
AND-OR trees of R-functions describing star-shaped polygons.

A tree is built once per catalogue shape in its body frame; a PlacedObstacle
adds the pose (rotation R, star center x*) and the per-instance constants
(epsilon, rho, delta). The obstacle function is

    beta(x) = beta0(c + R^T (x - x*))

with beta0 the negated root of the tree (negative inside, positive outside)
and c the star center in the body frame.

Evaluation is vectorised over point batches, shape (N, 2).
"""

from __future__ import annotations
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union
import logging
import numpy as np

from Common.convexGeom import (EPS, HalfPlane, as_points, boundary_distance, convex_hull_indices,
                               cross2, edge_normals, is_simple, point_in_polygon,
                               remove_collinear, signed_area)
from Common.navErrors import (CenterOutside, DegenerateInput, NearVertex, NotSimplePolygon,
                              TreeConstructionError)
from Common.rFunctions import AND, OR, check_exponent, r_combine

log = logging.getLogger(__name__)


# =============================================================================
# Tree nodes
# =============================================================================
@dataclass(frozen=True, eq=False)
class Leaf:
    plane: HalfPlane
    edge: int          # index of the polygon edge v_edge -> v_edge+1


@dataclass(frozen=True, eq=False)
class Internal:
    op: str            # AND | OR
    children: tuple

    def __post_init__(self):
        if len(self.children) < 2:
            raise TreeConstructionError('internal node needs at least 2 children')
        if self.op not in (AND, OR):
            raise TreeConstructionError(f'unknown operator {self.op}')


TreeNode = Union[Leaf, Internal]


def _describe(node: TreeNode) -> str:
    if isinstance(node, Leaf):
        return f'ω{node.edge + 1}'
    symbol = '∧' if node.op == AND else '∨'
    return '(' + symbol.join(_describe(c) for c in node.children) + ')'


def _count(node: TreeNode, op: Optional[str] = None) -> int:
    if isinstance(node, Leaf):
        return 1 if op is None else 0
    own = 1 if (op is not None and node.op == op) else 0
    return own + sum(_count(c, op) for c in node.children)


def _evaluate(node: TreeNode, pts: np.ndarray, p: int, order: int):
    if isinstance(node, Leaf):
        n = node.plane.normal
        val = (pts - node.plane.anchor) @ n
        grad = np.broadcast_to(n, pts.shape) if order >= 1 else None
        hess = np.zeros((len(pts), 2, 2)) if order >= 2 else None
        return val, grad, hess

    val, grad, hess = _evaluate(node.children[0], pts, p, order)
    for child in node.children[1:]:
        cv, cg, ch = _evaluate(child, pts, p, order)
        if order == 0:
            # gradients are not needed, feed zeros through the same formula
            zero = np.zeros_like(pts)
            val, _, _ = r_combine(node.op, val, zero, None, cv, zero, None, p)
        else:
            val, grad, hess = r_combine(node.op, val, grad, hess, cv, cg, ch, p)
    return val, grad, hess


# =============================================================================
# ObstacleTree
# =============================================================================
@dataclass(eq=False)
class ObstacleTree:
    root: TreeNode
    p: int
    vertices: np.ndarray           # CCW, collinear vertices merged, body frame
    star_center_body: np.ndarray

    def describe(self) -> str:
        """Symbolic form of beta0, e.g. ¬((ω1∨ω2)∧(ω3∨ω4)∧...)."""
        inner = _describe(self.root)
        return '¬' + inner if inner.startswith('(') else '¬(' + inner + ')'

    def n_or(self) -> int:
        return _count(self.root, OR)

    def n_leaves(self) -> int:
        return _count(self.root)

    def evaluate_body(self, pts, order: int = 0):
        """beta0 and (order >= 1) its gradient, (order >= 2) its Hessian at body-frame points."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        val, grad, hess = _evaluate(self.root, pts, self.p, order)
        return (-val,
                None if grad is None else -np.array(grad),
                None if hess is None else -hess)

    def min_vertex_distance(self, pts) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        diff = pts[:, None, :] - self.vertices[None, :, :]
        return np.min(np.linalg.norm(diff, axis=2), axis=1)

    def max_radius(self) -> float:
        """Largest distance from the star center to a vertex."""
        return float(np.max(np.linalg.norm(self.vertices - self.star_center_body, axis=1)))


def _convex_flags(v: np.ndarray) -> np.ndarray:
    prev = np.roll(v, 1, axis=0)
    nxt = np.roll(v, -1, axis=0)
    return cross2(v - prev, nxt - v) > 0.0


def build_tree(vertices, p: int = 20, star_center=None) -> ObstacleTree:
    """
    Build the AND-OR tree of a simple polygon.

    The root conjoins the chains between consecutive convex-hull vertices.
    Each chain is split at the vertices of its own hull; subchains meeting at
    a concave vertex of the polygon are joined by OR, otherwise by AND.

    Inputs:
        vertices    - CCW polygon, body frame
        p           - even R-function exponent
        star_center - body-frame star center (defaults to the vertex centroid)
    Outputs:
        ObstacleTree
    """
    check_exponent(p)
    v = as_points(vertices)
    if len(v) < 3:
        raise NotSimplePolygon('polygon needs at least 3 vertices')
    if signed_area(v) < 0.0:
        log.debug('build_tree: clockwise vertex list reversed')
        v = v[::-1].copy()
    v = remove_collinear(v)
    if len(v) < 3 or not is_simple(v):
        raise NotSimplePolygon('polygon is not simple')

    n = len(v)
    convex = _convex_flags(v)
    normals = edge_normals(v)
    leaves = [Leaf(HalfPlane(v[i], normals[i]), i) for i in range(n)]

    def chain_node(idx: List[int]) -> TreeNode:
        m = len(idx) - 1
        if m == 1:
            return leaves[idx[0]]
        try:
            hull = convex_hull_indices(v[idx])
        except DegenerateInput as e:
            raise TreeConstructionError('chain is degenerate') from e
        splits = sorted(int(k) for k in hull if 0 < k < m)
        if not splits:
            raise TreeConstructionError(f'chain {idx[0]}..{idx[-1]} has no split vertex')
        bounds = [0] + splits + [m]
        children = [chain_node(idx[a:b + 1]) for a, b in zip(bounds[:-1], bounds[1:])]
        ops = [AND if convex[idx[k]] else OR for k in splits]
        if all(op == ops[0] for op in ops):
            return Internal(ops[0], tuple(children))
        node = children[0]
        for op, child in zip(ops, children[1:]):
            node = Internal(op, (node, child))
        return node

    #--- Chains between consecutive hull vertices ---
    try:
        hull = sorted(int(i) for i in convex_hull_indices(v))
    except DegenerateInput as e:
        raise NotSimplePolygon('polygon is degenerate') from e
    chains = []
    for a, b in zip(hull, hull[1:] + [hull[0] + n]):
        chains.append(chain_node([i % n for i in range(a, b + 1)]))
    root = chains[0] if len(chains) == 1 else Internal(AND, tuple(chains))

    center = np.mean(v, axis=0) if star_center is None else np.array(star_center, dtype=float)
    v.flags.writeable = False
    return ObstacleTree(root=root, p=int(p), vertices=v, star_center_body=center)


# =============================================================================
# Placed instances
# =============================================================================
def rotation_matrix(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


@dataclass(eq=False)
class PlacedObstacle:
    tree: ObstacleTree
    rotation: np.ndarray      # R_i
    center: np.ndarray        # x*_i, world frame
    epsilon: float
    rho: float = 0.0
    delta: float = 0.0
    name: str = ''
    vertex_guard: float = 1e-7  # [m]

    def __post_init__(self):
        self.rotation = np.array(self.rotation, dtype=float).reshape(2, 2)
        self.center = np.array(self.center, dtype=float).reshape(2)
        if not self.epsilon > 0.0:
            raise ValueError(f'epsilon must be positive, got {self.epsilon}')

    # ------------------------------------------------------------
    # Frames
    # ------------------------------------------------------------
    def to_body(self, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return self.tree.star_center_body + (x - self.center) @ self.rotation

    def to_world(self, pts_body) -> np.ndarray:
        pts_body = np.atleast_2d(np.asarray(pts_body, dtype=float))
        return self.center + (pts_body - self.tree.star_center_body) @ self.rotation.T

    def world_vertices(self) -> np.ndarray:
        return self.to_world(self.tree.vertices)

    def bounding_radius(self) -> float:
        return self.tree.max_radius()

    # ------------------------------------------------------------
    # Obstacle function
    # ------------------------------------------------------------
    def evaluate(self, x, order: int = 0, guard: bool = True):
        """beta, grad beta, Hessian of beta at world points x, shape (N, 2)."""
        body = self.to_body(x)
        if order >= 1 and guard:
            near = self.tree.min_vertex_distance(body) < self.vertex_guard
            if np.any(near):
                raise NearVertex(f'{self.name or "obstacle"}: derivative requested '
                                 f'within {self.vertex_guard} m of a vertex')
        val, grad, hess = self.tree.evaluate_body(body, order)
        R = self.rotation
        if grad is not None:
            grad = grad @ R.T
        if hess is not None:
            hess = R @ hess @ R.T
        return val, grad, hess

    def contains(self, x) -> bool:
        return point_in_polygon(self.to_body(x)[0], self.tree.vertices)

    def boundary_distance(self, x) -> float:
        return boundary_distance(self.to_body(x)[0], self.tree.vertices)


def beta(placed: PlacedObstacle, x) -> float:
    val, _, _ = placed.evaluate(x, order=0)
    return float(val[0])


def beta_grad(placed: PlacedObstacle, x) -> np.ndarray:
    _, grad, _ = placed.evaluate(x, order=1)
    return grad[0]


def beta_hess(placed: PlacedObstacle, x) -> np.ndarray:
    _, _, hess = placed.evaluate(x, order=2)
    return hess[0]


def beta_all(placed: PlacedObstacle, x) -> Tuple[float, np.ndarray, np.ndarray]:
    val, grad, hess = placed.evaluate(x, order=2)
    return float(val[0]), grad[0], hess[0]


def choose_rho(placed: PlacedObstacle, scale: float = 0.9) -> float:
    """scale x (exact distance from the star center to the polygon boundary)."""
    c = placed.tree.star_center_body
    dist = boundary_distance(c, placed.tree.vertices)
    if not point_in_polygon(c, placed.tree.vertices) or dist <= EPS:
        raise CenterOutside(f'{placed.name or "obstacle"}: star center is not interior')
    return scale * dist


def place(tree: ObstacleTree, center, theta: float, epsilon: float,
          name: str = '', rho_scale: float = 0.9) -> PlacedObstacle:
    """Instance of a catalogue shape with its star center at `center`, rotated by theta [rad]."""
    placed = PlacedObstacle(tree=tree, rotation=rotation_matrix(theta), center=center,
                            epsilon=epsilon, name=name)
    placed.rho = choose_rho(placed, rho_scale)
    return placed


# =============================================================================
# Sampling along rays from the star center
# =============================================================================
def _bisect_level(placed: PlacedObstacle, dirs: np.ndarray, level: float,
                  t_lo: np.ndarray, t_hi: np.ndarray, iters: int = 60) -> np.ndarray:
    lo, hi = t_lo.copy(), t_hi.copy()
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        val, _, _ = placed.evaluate(placed.center + mid[:, None] * dirs)
        below = val < level
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def _outer_bracket(placed: PlacedObstacle, dirs: np.ndarray, level: float) -> np.ndarray:
    t_hi = np.full(len(dirs), placed.bounding_radius() * 1.01 + 2.0 * level + 1e-3)
    for _ in range(30):
        val, _, _ = placed.evaluate(placed.center + t_hi[:, None] * dirs)
        short = val < level
        if not np.any(short):
            break
        t_hi = np.where(short, 2.0 * t_hi, t_hi)
    return t_hi


def ray_directions(n: int) -> np.ndarray:
    angles = 2.0 * np.pi * (np.arange(n) + 0.5) / n
    return np.column_stack((np.cos(angles), np.sin(angles)))


def boundary_points(placed: PlacedObstacle, n: int = 720) -> np.ndarray:
    """n points with beta = 0, on rays from x* at evenly spaced angles."""
    dirs = ray_directions(n)
    t_hi = _outer_bracket(placed, dirs, 0.0)
    t = _bisect_level(placed, dirs, 0.0, np.zeros(n), t_hi)
    return placed.center + t[:, None] * dirs


def band_points(placed: PlacedObstacle, n_angles: int = 2000, n_levels: int = 5,
                epsilon: Optional[float] = None) -> np.ndarray:
    """Points of the band 0 <= beta <= epsilon at evenly spaced levels and angles."""
    eps = placed.epsilon if epsilon is None else epsilon
    dirs = ray_directions(n_angles)
    t_hi = _outer_bracket(placed, dirs, eps)
    t0 = _bisect_level(placed, dirs, 0.0, np.zeros(n_angles), t_hi)
    out = []
    for level in np.linspace(0.0, eps, n_levels):
        t = t0 if level == 0.0 else _bisect_level(placed, dirs, level, t0, t_hi)
        out.append(placed.center + t[:, None] * dirs)
    return np.vstack(out)


def boundary_point_along(placed: PlacedObstacle, direction) -> np.ndarray:
    """Point with beta = 0 on the ray from x* along direction."""
    d = np.asarray(direction, dtype=float).reshape(1, 2)
    d = d / np.linalg.norm(d)
    t_hi = _outer_bracket(placed, d, 0.0)
    t = _bisect_level(placed, d, 0.0, np.zeros(1), t_hi, iters=80)
    return placed.center + t[0] * d[0]
