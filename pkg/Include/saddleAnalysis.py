"""
Spurious equilibria of the fully actuated law.

Every model disk j has one saddle on its boundary, on the far side from the
goal. Its preimage in the mapped layer lies on the star boundary.
"""

from __future__ import annotations
from dataclasses import dataclass
from typing import List, Optional, Tuple
import logging
import numpy as np
from scipy.optimize import root

from Common.numDiff import jacobian
from Include.diffeo import inverse_h
from Include.obstacleTree import boundary_point_along
from Include.reactiveCtrl import ControlParams, fully_actuated_u
from Include.worldSim import SemanticMap

log = logging.getLogger(__name__)


@dataclass(slots=True)
class EquilibriumInfo:
    point: np.ndarray
    eigenvalues: np.ndarray
    kind: str               # 'saddle' | 'stable' | 'unstable' | 'degenerate'

    def n_negative(self) -> int:
        return int(np.sum(self.eigenvalues.real < 0.0))

    def n_positive(self) -> int:
        return int(np.sum(self.eigenvalues.real > 0.0))


def saddle_points(smap: SemanticMap, goal) -> List[Tuple[int, np.ndarray]]:
    """(j, s_j) with s_j = x*_j - rho_j (x_d - x*_j) / |x_d - x*_j| for every star."""
    goal = np.asarray(goal, dtype=float)
    out = []
    for j, star in enumerate(smap.stars):
        d = goal - star.center
        out.append((j, star.center - star.rho * d / np.linalg.norm(d)))
    return out


def locate_saddle(smap: SemanticMap, goal, j: int = 0, x0=None) -> np.ndarray:
    """
    h^-1(s_j) in the mapped layer.

    The Newton iteration starts from the star boundary point on the ray
    from x*_j toward s_j unless x0 is given.
    """
    star = smap.stars[j]
    s = dict(saddle_points(smap, goal))[j]
    if x0 is None:
        x0 = boundary_point_along(star, s - star.center)
    return inverse_h(s, smap, x0)


def closed_loop_jacobian(smap: SemanticMap, params: ControlParams, x,
                         step: float = 1e-6) -> np.ndarray:
    """Central-difference linearisation of x -> u(x) at x."""
    return jacobian(lambda q: fully_actuated_u(q, smap, params), x, step)


def classify_equilibrium(jac, tol: float = 1e-9) -> Tuple[str, np.ndarray]:
    eig = np.linalg.eigvals(np.asarray(jac, dtype=float))
    re = eig.real
    if np.any(np.abs(re) <= tol):
        kind = 'degenerate'
    elif np.all(re < 0.0):
        kind = 'stable'
    elif np.all(re > 0.0):
        kind = 'unstable'
    else:
        kind = 'saddle'
    return kind, eig


def find_equilibrium(smap: SemanticMap, params: ControlParams, x0,
                     tol: float = 1e-12) -> Optional[np.ndarray]:
    """Zero of the fully actuated field near x0, or None if the solver fails."""
    sol = root(lambda q: fully_actuated_u(q, smap, params), np.asarray(x0, dtype=float),
               method='hybr', tol=tol)
    if not sol.success:
        log.debug('find_equilibrium: %s', sol.message)
        return None
    return sol.x


def analyse_saddle(smap: SemanticMap, params: ControlParams, j: int = 0,
                   step: float = 1e-6) -> EquilibriumInfo:
    """Locate the saddle of star j and classify its linearisation."""
    x = locate_saddle(smap, params.goal, j)
    kind, eig = classify_equilibrium(closed_loop_jacobian(smap, params, x, step))
    log.debug('saddle of star %d at %s: %s, eigenvalues %s', j, x, kind, eig)
    return EquilibriumInfo(point=x, eigenvalues=eig, kind=kind)
