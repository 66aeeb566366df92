"""
Closed-loop simulation: sense, update the map, evaluate the command and
integrate the robot kinematics, until the goal is reached, the robot
stops making progress (Stalled), the time budget runs out, or the loop
faults.

The map is frozen during one integration step; the vector field is
re-evaluated at every Runge-Kutta stage against it. A step is accepted only
if it stays in the freespace and does not raise V = |h(x) - x_d|^2.
"""

from __future__ import annotations
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Deque, List, Optional, Tuple
import logging
import time
import numpy as np

from Common.navErrors import (AssumptionViolation, AtStarCenter, ControlError,
                              NearVertex, NoConvergence)
from Common.rk4 import rk4_step, rk45_step
from Include.diffeo import diffeo_eval, wrap_angle
from Include.reactiveCtrl import (ControlCommand, ControlParams, baseline_diffdrive_eval,
                                  baseline_eval, diffdrive_eval, fully_actuated_eval)
from Include.validateAssumptions import validate_assumptions
from Include.worldSim import SemanticMap, World, sense, update_map

log = logging.getLogger(__name__)

CSV_COLUMNS = ('t', 'x', 'y', 'psi', 'cmd1', 'cmd2', 'V', 'min_beta', 'n_stars')

CONVERGED = 'Converged'
STALLED = 'Stalled'
MAX_TIME = 'MaxTime'
FAULT = 'Fault'
STATUSES = (CONVERGED, STALLED, MAX_TIME, FAULT)

ROBOTS = ('full', 'diffdrive')
CLEARANCE_SLACK = 1e-6      # [m]
PROGRESS_PERIOD = 10.0      # [s]


# =============================================================================
# Logs and results
# =============================================================================
@dataclass(slots=True)
class LogRow:
    t: float
    x: float
    y: float
    psi: float
    cmd1: float
    cmd2: float
    V: float
    min_beta: float
    n_stars: int

    def as_tuple(self) -> tuple:
        return (self.t, self.x, self.y, self.psi, self.cmd1, self.cmd2,
                self.V, self.min_beta, self.n_stars)


@dataclass
class TrajectoryLog:
    rows: List[LogRow] = field(default_factory=list)
    model_path: List[np.ndarray] = field(default_factory=list)   # h(x(t))
    final_map: Optional[SemanticMap] = None

    def append(self, row: LogRow, y_model):
        self.rows.append(row)
        self.model_path.append(np.array(y_model, dtype=float))

    def __len__(self) -> int:
        return len(self.rows)

    def as_array(self) -> np.ndarray:
        if not self.rows:
            return np.zeros((0, len(CSV_COLUMNS)))
        return np.array([r.as_tuple() for r in self.rows], dtype=float)

    def column(self, name: str) -> np.ndarray:
        return self.as_array()[:, CSV_COLUMNS.index(name)]

    def positions(self) -> np.ndarray:
        return self.as_array()[:, 1:3]

    def model_positions(self) -> np.ndarray:
        return np.array(self.model_path).reshape(-1, 2)

    def write_csv(self, path):
        data = self.as_array()
        fmt = ['%.10g'] * (len(CSV_COLUMNS) - 1) + ['%d']
        np.savetxt(path, data, delimiter=',', header=','.join(CSV_COLUMNS),
                   comments='', fmt=fmt)


@dataclass(slots=True)
class RunResult:
    status: str
    robot: str
    baseline: bool
    final_state: np.ndarray       # (x, y, psi)
    goal: np.ndarray
    t_final: float = 0.0
    n_steps: int = 0
    path_length: float = 0.0
    min_clearance: float = np.inf
    n_stars: int = 0
    wall_time: float = 0.0
    message: str = ''

    @property
    def final_distance(self) -> float:
        return float(np.linalg.norm(self.final_state[:2] - self.goal))

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED

    def summary(self) -> str:
        law = 'baseline' if self.baseline else 'familiar'
        return (f'{self.status} ({self.robot}, {law}) after {self.t_final:.2f} s: '
                f'distance to goal {self.final_distance:.4f} m, '
                f'path {self.path_length:.3f} m, clearance {self.min_clearance:.4f} m')

    def as_dict(self, include_wall_time: bool = True) -> dict:
        out = {'status': self.status, 'robot': self.robot, 'baseline': self.baseline,
               'final_state': [float(v) for v in self.final_state],
               'final_distance': self.final_distance, 't_final': self.t_final,
               'n_steps': self.n_steps, 'path_length': self.path_length,
               'min_clearance': self.min_clearance, 'n_stars': self.n_stars,
               'message': self.message}
        if include_wall_time:
            out['wall_time'] = self.wall_time
        return out


# =============================================================================
# One control cycle
# =============================================================================
def observe(state, world: World, smap: SemanticMap, n_rays: int = 360,
            baseline: bool = False) -> SemanticMap:
    """Sense from the current position and fold the scan into the map."""
    return update_map(smap, sense(state[:2], world, n_rays), world, all_unknown=baseline)


def command(state, smap: SemanticMap, params: ControlParams, robot: str = 'full',
            baseline: bool = False) -> ControlCommand:
    x, psi = state[:2], float(state[2])
    if robot == 'full':
        if baseline:
            return baseline_eval(x, smap.fragments, params)
        return fully_actuated_eval(x, smap, params)
    if baseline:
        return baseline_diffdrive_eval(x, psi, smap.fragments, params)
    return diffdrive_eval(x, psi, smap, params)


def vector_field(smap: SemanticMap, params: ControlParams, robot: str = 'full',
                 baseline: bool = False) -> Callable:
    """Right hand side f(t, state) of the closed loop against a frozen map."""
    def fn(t, w):
        cmd = command(w, smap, params, robot, baseline).value
        if robot == 'full':
            return np.array([cmd[0], cmd[1], 0.0])
        v, omega = cmd
        return np.array([v * np.cos(w[2]), v * np.sin(w[2]), omega])
    return fn


def lyapunov(smap: SemanticMap, goal, baseline: bool = False) -> Callable:
    """V(state) = |h(x) - x_d|^2 against a frozen map."""
    goal = np.asarray(goal, dtype=float)
    if baseline:
        return lambda w: float(np.sum((np.asarray(w[:2], dtype=float) - goal) ** 2))
    return lambda w: float(np.sum((diffeo_eval(w[:2], smap).y - goal) ** 2))


def integrate(state, fn: Callable, t: float, dt: float, world: World,
              integrator: str = 'rk4', max_halvings: int = 6,
              V: Optional[Callable] = None, slack: float = 1e-10) -> Tuple[np.ndarray, float]:
    """
    Advance the state by one step, halving dt when a stage lands on a vertex
    or star center, the step leaves the freespace, or V rises across it.

    Inputs:
        state       - (x, y, psi)
        fn          - closed-loop vector field
        t, dt       - current time and proposed step
        world       - physical layer, for the freespace check
        V           - optional Lyapunov function of the state
        slack       - largest accepted rise of V
    Outputs:
        new_state, dt actually taken
    """
    stepper = rk4_step if integrator == 'rk4' else rk45_step
    v_old = None if V is None else V(state)
    for halving in range(max_halvings + 1):
        try:
            new = np.asarray(stepper(fn, t, state, dt), dtype=float)
            rise = 0.0 if v_old is None else V(new) - v_old
            if world.clearance(new[:2]) < -CLEARANCE_SLACK:
                reason = 'step leaves the freespace'
            elif rise > slack:
                reason = f'V rises by {rise:.3g}'
            else:
                new[2] = wrap_angle(new[2])
                return new, dt
        except (NearVertex, AtStarCenter) as e:
            reason = str(e)
        if halving < max_halvings:
            log.warning('   t = %.3f s: %s, halving dt to %.3g s', t, reason, dt / 2)
            dt = dt / 2
    raise NoConvergence(f'integration failed after {max_halvings} halvings: {reason}')


def step_size(cmd_norm: float, dt_max: float, step_length: float,
              model_speed: float = 0.0) -> float:
    """Largest dt moving neither x nor h(x) by more than step_length."""
    speed = max(cmd_norm, model_speed)
    if speed <= 0.0:
        return dt_max
    return min(dt_max, step_length / speed)


def make_row(t: float, state, cmd: ControlCommand, world: World, smap: SemanticMap) -> LogRow:
    V = float(np.sum((cmd.y - world.goal) ** 2))
    return LogRow(t=t, x=float(state[0]), y=float(state[1]), psi=float(state[2]),
                  cmd1=float(cmd.value[0]), cmd2=float(cmd.value[1]), V=V,
                  min_beta=world.min_beta(state[:2]), n_stars=len(smap.stars))


def _log_discovery(x, world: World, old: SemanticMap, new: SemanticMap):
    for star, source in zip(new.stars[len(old.stars):], new.star_sources[len(old.stars):]):
        b = float(star.evaluate(x)[0][0])
        log.info('   Discovered %s at beta = %.4f', world.source_name(source), b)
    goal = world.goal
    v_old = float(np.sum((diffeo_eval(x, old).y - goal) ** 2))
    v_new = float(np.sum((diffeo_eval(x, new).y - goal) ** 2))
    log.info('   V before/after discovery: %.12g / %.12g', v_old, v_new)


def step(state, world: World, smap: SemanticMap, params: ControlParams, settings,
         robot: str = 'full', baseline: bool = False, t: float = 0.0,
         cmd: Optional[ControlCommand] = None):
    """
    One sense/update/control/integrate cycle.

    Inputs:
        cmd         - command already evaluated at state, if any
    Outputs:
        new_state, new_map, LogRow of the state before the step, dt taken
    """
    state = np.asarray(state, dtype=float)
    cmd = command(state, smap, params, robot, baseline) if cmd is None else cmd
    row = make_row(t, state, cmd, world, smap)
    dt = step_size(cmd.norm(), settings.dtMax, settings.stepLength, cmd.model_speed())
    fn = vector_field(smap, params, robot, baseline)
    new_state, dt = integrate(state, fn, t, dt, world, settings.integrator,
                              settings.maxDtHalvings, lyapunov(smap, world.goal, baseline),
                              settings.lyapunovSlack)
    new_map = observe(new_state, world, smap, settings.nRays, baseline)
    if len(new_map.stars) > len(smap.stars):
        _log_discovery(new_state[:2], world, smap, new_map)
    return new_state, new_map, row, dt


@dataclass
class StallMonitor:
    """Flags a run whose command has died out or whose V no longer drops."""
    speed: float
    time: float
    window: float
    decrease: float
    slow_since: Optional[float] = None
    history: Deque[Tuple[float, float]] = field(default_factory=deque)

    @classmethod
    def from_settings(cls, settings) -> 'StallMonitor':
        return cls(settings.stallSpeed, settings.stallTime, settings.stallWindow,
                   settings.stallDecrease)

    def update(self, t: float, speed: float, V: float) -> Optional[str]:
        """Record one sample; returns the reason once the run counts as stalled."""
        if speed < self.speed:
            self.slow_since = t if self.slow_since is None else self.slow_since
            if t - self.slow_since >= self.time:
                return f'command below {self.speed:g} for {self.time:g} s'
        else:
            self.slow_since = None

        self.history.append((t, V))
        while len(self.history) > 1 and self.history[1][0] <= t - self.window:
            self.history.popleft()
        t0, V0 = self.history[0]
        if t - t0 >= self.window and V0 - V < self.decrease:
            return f'V dropped by {V0 - V:.3g} over the last {t - t0:.1f} s'
        return None


# =============================================================================
# Closed loop
# =============================================================================
def simulate(world: World, start, settings, robot: str = 'full',
             baseline: bool = False) -> Tuple[RunResult, TrajectoryLog]:
    """
    Run the closed loop from a start pose.

    Inputs:
        world       - physical layer
        start       - (x, y, psi) with psi in radians
        settings    - Settings
        robot       - 'full' or 'diffdrive'
        baseline    - treat every obstacle as unknown (h the identity)
    Outputs:
        RunResult, TrajectoryLog
    """
    if robot not in ROBOTS:
        raise ValueError(f'robot must be one of {ROBOTS}, got {robot!r}')
    wall0 = time.perf_counter()
    params = ControlParams.from_world(world, settings)
    state = np.array(start, dtype=float).reshape(3)
    state[2] = wrap_angle(state[2])
    traj = TrajectoryLog()
    result = RunResult(status=MAX_TIME, robot=robot, baseline=baseline,
                       final_state=state.copy(), goal=world.goal.copy())
    stall = StallMonitor.from_settings(settings)

    t, next_report = 0.0, PROGRESS_PERIOD
    smap = observe(state, world, SemanticMap(), settings.nRays, baseline)
    while True:
        try:
            cmd = command(state, smap, params, robot, baseline)
        except (NearVertex, AtStarCenter, ControlError) as e:
            result.status, result.message = FAULT, f'command failed at t = {t:.3f} s: {e}'
            log.error('   %s', result.message)
            break
        result.min_clearance = min(result.min_clearance, world.clearance(state[:2]))

        V = float(np.sum((cmd.y - world.goal) ** 2))
        stalled = stall.update(t, cmd.norm(), V)
        status = None
        if np.linalg.norm(state[:2] - world.goal) <= settings.goalTol:
            status = CONVERGED
        elif stalled is not None:
            status, result.message = STALLED, stalled
        elif t >= settings.tMax:
            status = MAX_TIME
        if status is not None:
            result.status = status
            traj.append(make_row(t, state, cmd, world, smap), cmd.y)
            break

        try:
            new_state, new_map, row, dt = step(state, world, smap, params, settings,
                                               robot, baseline, t, cmd)
        except (NoConvergence, ControlError) as e:
            traj.append(make_row(t, state, cmd, world, smap), cmd.y)
            result.status, result.message = FAULT, f't = {t:.3f} s: {e}'
            log.error('   %s', result.message)
            break
        traj.append(row, cmd.y)
        result.path_length += float(np.linalg.norm(new_state[:2] - state[:2]))
        state, smap, t = new_state, new_map, t + dt
        result.n_steps += 1

        if t >= next_report:
            log.debug('   t = %.1f s, x = (%.3f, %.3f), V = %.6g', t, state[0], state[1], V)
            next_report += PROGRESS_PERIOD

    result.final_state = state.copy()
    result.t_final = t
    result.n_stars = len(smap.stars)
    result.wall_time = time.perf_counter() - wall0
    traj.final_map = smap
    log.info('   %s', result.summary())
    return result, traj


def run(scenario, settings=None, robot: Optional[str] = None, baseline: bool = False,
        start=None, validate: bool = True) -> Tuple[RunResult, TrajectoryLog]:
    """
    Validate a loaded scenario and simulate it once.

    Raises AssumptionViolation carrying the report when validation fails.
    """
    settings = scenario.settings if settings is None else settings
    robot = scenario.robot_type if robot is None else robot
    start = scenario.resolve_start(settings) if start is None else np.asarray(start, dtype=float)
    if validate:
        report = validate_assumptions(scenario.world, scenario.catalogue, start[:2],
                                      settings.validation.deltaMin,
                                      settings.validation.bandAngles,
                                      settings.validation.bandLevels)
        if not report.passed:
            raise AssumptionViolation(report)
    return simulate(scenario.world, start, settings, robot, baseline)
