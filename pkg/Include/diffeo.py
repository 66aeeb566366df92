"""
The map h from the mapped layer to the model layer.

    sigma_j = eta_j(beta_j),  eta_j(chi) = zeta(eps_j - chi) / zeta(eps_j)
    nu_j    = rho_j / |x - x*_j|
    h(x)    = sum_j sigma_j [nu_j (x - x*_j) + x*_j] + sigma_d x,  sigma_d = 1 - sum_j sigma_j

which equals x + sum_j f_j w_j with w_j = x - x*_j and f_j = sigma_j (nu_j - 1).
Only stars with beta_j < eps_j contribute; everywhere else h is the identity.
"""

from __future__ import annotations
from dataclasses import dataclass, field
from typing import List, Optional
import logging
import numpy as np

from Common.navErrors import AtStarCenter, NearVertex, NoConvergence
from Include.obstacleTree import PlacedObstacle
from Include.worldSim import SemanticMap

log = logging.getLogger(__name__)

# Below the cutoff zeta, zeta1 and zeta2 are all under 1e-290, far beneath
# float64 resolution next to the O(1) terms of h and its derivatives.
ZETA_CUTOFF = 1.0 / 700.0
PREFILTER_MARGIN = 1.0      # [m]
CENTER_GUARD = 1e-12        # [m]


# =============================================================================
# zeta and its derivatives
# =============================================================================
def _positive(chi):
    chi = np.asarray(chi, dtype=float)
    pos = chi > ZETA_CUTOFF
    return chi, pos, np.where(pos, chi, 1.0)


def _out(a):
    return float(a) if np.ndim(a) == 0 else a


def zeta(chi):
    chi, pos, c = _positive(chi)
    return _out(np.where(pos, np.exp(-1.0 / c), 0.0))


def zeta1(chi):
    chi, pos, c = _positive(chi)
    return _out(np.where(pos, np.exp(-1.0 / c) / c ** 2, 0.0))


def zeta2(chi):
    chi, pos, c = _positive(chi)
    return _out(np.where(pos, np.exp(-1.0 / c) * (1.0 / c ** 4 - 2.0 / c ** 3), 0.0))


def eta(chi, eps):
    """eta(chi), eta'(chi), eta''(chi) for the switch of a star with band width eps."""
    z = zeta(eps)
    return zeta(eps - chi) / z, -zeta1(eps - chi) / z, zeta2(eps - chi) / z


# =============================================================================
# Per-star terms
# =============================================================================
@dataclass(slots=True)
class StarTerm:
    index: int
    w: np.ndarray          # x - x*
    beta: float
    grad_beta: np.ndarray
    sigma: float
    grad_sigma: np.ndarray
    hess_sigma: np.ndarray
    nu: float
    grad_nu: np.ndarray
    hess_nu: np.ndarray

    def f(self) -> float:
        return self.sigma * (self.nu - 1.0)

    def grad_f(self) -> np.ndarray:
        return (self.nu - 1.0) * self.grad_sigma + self.sigma * self.grad_nu

    def hess_f(self) -> np.ndarray:
        return ((self.nu - 1.0) * self.hess_sigma + self.sigma * self.hess_nu
                + np.outer(self.grad_sigma, self.grad_nu)
                + np.outer(self.grad_nu, self.grad_sigma))


def nu(x, star: PlacedObstacle):
    """Deforming factor rho / |x - x*| with its gradient and Hessian."""
    w = np.asarray(x, dtype=float) - star.center
    r = float(np.linalg.norm(w))
    if r < CENTER_GUARD:
        raise AtStarCenter(f'{star.name or "star"}: x coincides with the star center')
    rho = star.rho
    value = rho / r
    grad = -rho * w / r ** 3
    hess = 3.0 * rho / r ** 5 * np.outer(w, w) - rho / r ** 3 * np.eye(2)
    return value, grad, hess


def candidate_stars(x, smap: SemanticMap) -> List[int]:
    """Stars whose bounding circle, grown by eps and a margin, contains x."""
    x = np.asarray(x, dtype=float)
    out = []
    for j, star in enumerate(smap.stars):
        reach = star.bounding_radius() + star.epsilon + PREFILTER_MARGIN
        if np.linalg.norm(x - star.center) <= reach:
            out.append(j)
    return out


def active_terms(x, smap: SemanticMap) -> List[StarTerm]:
    """StarTerm for every star with beta_j(x) < eps_j."""
    x = np.asarray(x, dtype=float)
    terms = []
    for j in candidate_stars(x, smap):
        star = smap.stars[j]
        b, gb, hb = star.evaluate(x, order=2)
        b, gb, hb = float(b[0]), gb[0], hb[0]
        if b >= star.epsilon:
            continue
        e0, e1, e2 = eta(b, star.epsilon)
        n0, n1, n2 = nu(x, star)
        terms.append(StarTerm(index=j, w=x - star.center, beta=b, grad_beta=gb,
                              sigma=float(e0), grad_sigma=e1 * gb,
                              hess_sigma=e2 * np.outer(gb, gb) + e1 * hb,
                              nu=n0, grad_nu=n1, hess_nu=n2))
    if len(terms) > 1:
        log.debug('%d overlapping star bands active at %s', len(terms), x)
    return terms


@dataclass(slots=True)
class SwitchEval:
    sigma: np.ndarray       # (M,)
    sigma_d: float
    grads: np.ndarray       # (M, 2)
    hessians: np.ndarray    # (M, 2, 2)


def switches(x, smap: SemanticMap) -> SwitchEval:
    m = len(smap.stars)
    sigma = np.zeros(m)
    grads = np.zeros((m, 2))
    hessians = np.zeros((m, 2, 2))
    for term in active_terms(x, smap):
        sigma[term.index] = term.sigma
        grads[term.index] = term.grad_sigma
        hessians[term.index] = term.hess_sigma
    return SwitchEval(sigma, 1.0 - float(np.sum(sigma)), grads, hessians)


# =============================================================================
# h, its Jacobian and the second derivatives
# =============================================================================
@dataclass(slots=True)
class DiffeoEval:
    y: np.ndarray           # h(x)
    J: np.ndarray           # D_x h
    dJ: np.ndarray          # dJ[a, b, c] = d J_ab / d x_c
    terms: list = field(default_factory=list)

    @property
    def identity(self) -> bool:
        return not self.terms

    def det(self) -> float:
        return float(np.linalg.det(self.J))

    def trace(self) -> float:
        return float(np.trace(self.J))

    def dJ_entries(self) -> dict:
        """The eight scalars keyed 'J11_x', 'J11_y', ..., 'J22_y'."""
        out = {}
        for a in range(2):
            for b in range(2):
                for c, axis in enumerate('xy'):
                    out[f'J{a + 1}{b + 1}_{axis}'] = float(self.dJ[a, b, c])
        return out


def diffeo_eval(x, smap: SemanticMap) -> DiffeoEval:
    """
    h(x), D_x h(x) and the derivatives of D_x h.

    Inputs:
        x       - point of the mapped freespace
        smap    - semantic map holding the discovered stars
    Outputs:
        DiffeoEval
    """
    x = np.asarray(x, dtype=float)
    terms = active_terms(x, smap)
    if not terms:
        return DiffeoEval(y=x.copy(), J=np.eye(2), dJ=np.zeros((2, 2, 2)), terms=[])

    y = x.copy()
    J = np.eye(2)
    dJ = np.zeros((2, 2, 2))
    I = np.eye(2)
    for term in terms:
        f, gf, Hf, w = term.f(), term.grad_f(), term.hess_f(), term.w
        y = y + f * w
        J = J + f * I + np.outer(w, gf)
        # J_ab = delta_ab (1 + f) + w_a f_b
        dJ = (dJ + np.einsum('ab,c->abc', I, gf) + np.einsum('ac,b->abc', I, gf)
              + np.einsum('a,bc->abc', w, Hf))
    return DiffeoEval(y=y, J=J, dJ=dJ, terms=terms)


def h_map(x, smap: SemanticMap) -> np.ndarray:
    return diffeo_eval(x, smap).y


def closed_form_trace_det(term: StarTerm):
    """tr J and det J of a single active star from the scalar factors."""
    a = 1.0 + term.f()
    wg = float(term.w @ term.grad_f())
    return 2.0 * a + wg, a * (a + wg)


def boundary_normal_check(x, smap: SemanticMap) -> float:
    """Angle between J^-T grad beta_k and x - x*_k for the active star at x."""
    d = diffeo_eval(x, smap)
    if not d.terms:
        raise ValueError('no star band is active at x')
    term = d.terms[0]
    n = np.linalg.solve(d.J.T, term.grad_beta)
    cosang = float(n @ term.w) / (np.linalg.norm(n) * np.linalg.norm(term.w))
    return float(np.arccos(np.clip(cosang, -1.0, 1.0)))


# =============================================================================
# SE(2) lift
# =============================================================================
@dataclass(slots=True)
class SE2Eval:
    e: np.ndarray
    e_norm: float
    xi: float
    dxi_dpsi: float
    Dxi: np.ndarray          # row D_x xi, shape (2,)
    dxi_dir: float           # D_x xi . [cos psi, sin psi]
    diffeo: DiffeoEval


def wrap_angle(a: float) -> float:
    """Angle in (-pi, pi]."""
    w = float(np.arctan2(np.sin(a), np.cos(a)))
    return np.pi if w == -np.pi else w


def se2_eval(x, psi: float, smap: SemanticMap, deval: Optional[DiffeoEval] = None) -> SE2Eval:
    """e = J [cos psi, sin psi], xi = atan2(e), d xi / d psi and D_x xi."""
    d = diffeo_eval(x, smap) if deval is None else deval
    u = np.array([np.cos(psi), np.sin(psi)])
    if d.identity:
        return SE2Eval(e=u, e_norm=1.0, xi=wrap_angle(psi), dxi_dpsi=1.0,
                       Dxi=np.zeros(2), dxi_dir=0.0, diffeo=d)

    e = d.J @ u
    e2 = float(e @ e)
    xi = wrap_angle(np.arctan2(e[1], e[0]))
    dxi_dpsi = float(np.linalg.det(d.J)) / e2

    # de_a/dx_c = sum_b dJ[a, b, c] u_b
    de = np.einsum('abc,b->ac', d.dJ, u)
    Dxi = (e[0] * de[1] - e[1] * de[0]) / e2

    alpha1, alpha2 = -e[1], e[0]
    beta1 = float(u @ d.dJ[0] @ u)
    beta2 = float(u @ d.dJ[1] @ u)
    dxi_dir = (alpha1 * beta1 + alpha2 * beta2) / e2
    return SE2Eval(e=e, e_norm=float(np.sqrt(e2)), xi=xi, dxi_dpsi=dxi_dpsi,
                   Dxi=Dxi, dxi_dir=float(dxi_dir), diffeo=d)


# =============================================================================
# Inverse
# =============================================================================
def inverse_h(y, smap: SemanticMap, x0, tol: float = 1e-10, max_iter: int = 100) -> np.ndarray:
    """
    Solve h(x) = y by damped Newton iteration started at x0.

    The step is halved while it does not reduce the residual.
    """
    y = np.asarray(y, dtype=float)
    x = np.array(x0, dtype=float)
    d = diffeo_eval(x, smap)
    res = d.y - y
    err = float(np.linalg.norm(res))
    for it in range(max_iter):
        if err < tol:
            log.debug('inverse_h converged in %d iterations', it)
            return x
        step = np.linalg.solve(d.J, res)
        lam = 1.0
        while True:
            trial = x - lam * step
            try:
                d_trial = diffeo_eval(trial, smap)
                res_trial = d_trial.y - y
                err_trial = float(np.linalg.norm(res_trial))
            except (NearVertex, AtStarCenter):
                err_trial = np.inf
            if err_trial < err or lam < 1e-8:
                break
            lam *= 0.5
        if not np.isfinite(err_trial):
            break
        x, d, res, err = trial, d_trial, res_trial, err_trial
    if err < tol:
        return x
    raise NoConvergence(f'inverse_h: residual {err:.3e} after {max_iter} iterations')
