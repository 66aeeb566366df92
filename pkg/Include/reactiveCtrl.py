"""
Reactive control laws.

The model-layer law steers y toward the projection of the goal onto the
local freespace LF(y). The fully actuated robot pulls it back through
D_x h; the differential-drive robot builds the reference inputs (v^, w^)
in the model layer and maps them back through the SE(2) lift.
"""

from __future__ import annotations
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple
import logging
import numpy as np

from Common.convexGeom import EPS, ConvexPolygon
from Include.diffeo import DiffeoEval, SE2Eval, diffeo_eval, se2_eval
from Include.localFreespace import LocalFreespace, local_freespace
from Include.worldSim import SemanticMap, model_layer

log = logging.getLogger(__name__)


@dataclass(eq=False)
class ControlParams:
    k: float
    R_virt: float
    goal: np.ndarray
    boundary: Optional[ConvexPolygon] = None
    n_sides: int = 64

    def __post_init__(self):
        self.goal = np.array(self.goal, dtype=float).reshape(2)
        if not self.k > 0.0:
            raise ValueError(f'gain k must be positive, got {self.k}')
        if not self.R_virt > 0.0:
            raise ValueError(f'virtual range must be positive, got {self.R_virt}')

    @classmethod
    def from_world(cls, world, settings) -> 'ControlParams':
        return cls(k=settings.k, R_virt=settings.virtualRangeFactor * world.sensor_range,
                   goal=world.goal, boundary=world.boundary, n_sides=settings.nLfSides)


@dataclass(slots=True)
class ControlCommand:
    kind: str                       # 'full' | 'diffdrive'
    value: np.ndarray               # u, or (v, w)
    y: np.ndarray                   # model-layer position h(x)
    lf: LocalFreespace
    phi: Optional[float] = None     # model-layer heading xi
    refs: Optional[Tuple[float, float]] = None  # (v^, w^)
    v_model: Optional[np.ndarray] = None        # model-layer velocity D_x h u

    def norm(self) -> float:
        return float(np.linalg.norm(self.value))

    def model_speed(self) -> float:
        """Speed of h(x) under the command."""
        if self.refs is not None:
            return abs(float(self.refs[0]))
        if self.v_model is not None:
            return float(np.linalg.norm(self.v_model))
        return self.norm()


def _lf(y, model, params: ControlParams) -> LocalFreespace:
    return local_freespace(y, model, params.R_virt, params.boundary, params.n_sides)


# =============================================================================
# Fully actuated
# =============================================================================
def model_velocity(y, model: Sequence, params: ControlParams,
                   lf: Optional[LocalFreespace] = None) -> Tuple[np.ndarray, LocalFreespace]:
    """v(y) = -k (y - P_LF(y)(x_d)) and the local freespace it used."""
    y = np.asarray(y, dtype=float)
    lf = _lf(y, model, params) if lf is None else lf
    return -params.k * (y - lf.project(params.goal)), lf


def fully_actuated_eval(x, smap: SemanticMap, params: ControlParams,
                        deval: Optional[DiffeoEval] = None) -> ControlCommand:
    d = diffeo_eval(x, smap) if deval is None else deval
    v, lf = model_velocity(d.y, model_layer(smap), params)
    u = v if d.identity else np.linalg.solve(d.J, v)
    return ControlCommand('full', u, d.y, lf, v_model=v)


def fully_actuated_u(x, smap: SemanticMap, params: ControlParams) -> np.ndarray:
    """
    Planar velocity of the fully actuated robot.

    Inputs:
        x       - position in the mapped freespace
        smap    - semantic map (discovered stars and sensed fragments)
        params  - ControlParams
    Outputs:
        u = (D_x h)^-1 v(h(x))
    """
    return fully_actuated_eval(x, smap, params).value


# =============================================================================
# Differential drive
# =============================================================================
def _steering(y, phi: float, c: np.ndarray, k: float) -> float:
    t_hat = np.array([np.cos(phi), np.sin(phi)])
    n_hat = np.array([-np.sin(phi), np.cos(phi)])
    r = y - c
    num, den = float(n_hat @ r), float(t_hat @ r)
    if abs(num) < EPS and abs(den) < EPS:
        return 0.0
    if abs(den) < EPS:
        log.debug('steering at the atan limit: heading perpendicular to the guide vector at %s', y)
        return float(np.sign(num)) * k * np.pi / 2.0
    return k * float(np.arctan(num / den))


def diffdrive_refs(y, phi: float, model: Sequence, params: ControlParams,
                   lf: Optional[LocalFreespace] = None) -> Tuple[float, float, LocalFreespace]:
    """
    Reference inputs (v^, w^) of the model-layer unicycle.

    v^ pulls y toward the goal projected onto the part of LF along the
    heading line; w^ turns the heading toward the midpoint of the goal
    projected onto LF and onto the part of LF along the line to the goal.
    """
    y = np.asarray(y, dtype=float)
    goal = params.goal
    lf = _lf(y, model, params) if lf is None else lf
    t_hat = np.array([np.cos(phi), np.sin(phi)])

    p_par = lf.project_on_line(goal, t_hat)
    v_hat = -params.k * float(t_hat @ (y - p_par))

    to_goal = goal - y
    dist = float(np.linalg.norm(to_goal))
    p_goal_line = y.copy() if dist < EPS else lf.project_on_line(goal, to_goal / dist)
    c = 0.5 * (p_goal_line + lf.project(goal))
    w_hat = _steering(y, phi, c, params.k)
    return v_hat, w_hat, lf


def diffdrive_eval(x, psi: float, smap: SemanticMap, params: ControlParams,
                   se: Optional[SE2Eval] = None) -> ControlCommand:
    s = se2_eval(x, psi, smap) if se is None else se
    v_hat, w_hat, lf = diffdrive_refs(s.diffeo.y, s.xi, model_layer(smap), params)
    if s.diffeo.identity:
        v, w = v_hat, w_hat
    else:
        v = v_hat / s.e_norm
        w = (w_hat - v * s.dxi_dir) / s.dxi_dpsi
    return ControlCommand('diffdrive', np.array([v, w]), s.diffeo.y, lf,
                          phi=s.xi, refs=(v_hat, w_hat))


def diffdrive_u(x, psi: float, smap: SemanticMap, params: ControlParams) -> Tuple[float, float]:
    """Actual inputs (v, w) of the differential-drive robot at pose (x, psi)."""
    v, w = diffdrive_eval(x, psi, smap, params).value
    return float(v), float(w)


# =============================================================================
# Baseline: every obstacle unknown, h the identity
# =============================================================================
def baseline_eval(x, fragments: Sequence, params: ControlParams) -> ControlCommand:
    x = np.asarray(x, dtype=float)
    v, lf = model_velocity(x, fragments, params)
    return ControlCommand('full', v, x.copy(), lf, v_model=v)


def baseline_u(x, fragments: Sequence, params: ControlParams) -> np.ndarray:
    return baseline_eval(x, fragments, params).value


def baseline_diffdrive_eval(x, psi: float, fragments: Sequence,
                            params: ControlParams) -> ControlCommand:
    x = np.asarray(x, dtype=float)
    v_hat, w_hat, lf = diffdrive_refs(x, psi, fragments, params)
    return ControlCommand('diffdrive', np.array([v_hat, w_hat]), x.copy(), lf,
                          phi=psi, refs=(v_hat, w_hat))


def baseline_diffdrive_u(x, psi: float, fragments: Sequence,
                         params: ControlParams) -> Tuple[float, float]:
    v, w = baseline_diffdrive_eval(x, psi, fragments, params).value
    return float(v), float(w)
