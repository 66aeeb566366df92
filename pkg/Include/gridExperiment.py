"""
Batch experiments: closed-loop runs from many random starts.
"""

from __future__ import annotations
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence
import json
import logging
import numpy as np

from Common.navErrors import AssumptionViolation
from Include.simulate import CONVERGED, FAULT, MAX_TIME, ROBOTS, STALLED, simulate
from Include.validateAssumptions import validate_assumptions
from Include.worldSim import World

log = logging.getLogger(__name__)

MAX_DRAWS_PER_START = 10000


def sample_starts(world: World, n: int, rng: np.random.Generator,
                  clearance: float = 0.05) -> np.ndarray:
    """
    Uniform start poses in the freespace by rejection sampling.

    Inputs:
        world       - physical layer
        n           - number of starts
        rng         - numpy Generator
        clearance   - minimum clearance of a start from every obstacle [m]
    Outputs:
        (n, 3) array of (x, y, psi)
    """
    lo = world.boundary.vertices.min(axis=0)
    hi = world.boundary.vertices.max(axis=0)
    out = []
    draws = 0
    while len(out) < n:
        if draws > MAX_DRAWS_PER_START * n:
            raise RuntimeError(f'could not sample {n} starts with clearance {clearance} m')
        draws += 1
        x = rng.uniform(lo, hi)
        psi = rng.uniform(-np.pi, np.pi)
        if world.clearance(x) < clearance:
            continue
        if np.linalg.norm(x - world.goal) <= clearance:
            continue
        out.append((x[0], x[1], psi))
    return np.array(out, dtype=float).reshape(-1, 3)


@dataclass
class GridSummary:
    n_starts: int
    seed: int
    robots: List[str]
    baseline: bool
    starts: np.ndarray
    results: Dict[str, list] = field(default_factory=dict)     # robot -> [RunResult]
    paths: Dict[str, list] = field(default_factory=dict)       # robot -> [(n, 2) arrays]

    @property
    def rates(self) -> Dict[str, dict]:
        out = {}
        for robot in self.robots:
            res = self.results.get(robot, [])
            counts = {s: sum(r.status == s for r in res) for s in (CONVERGED, STALLED, MAX_TIME, FAULT)}
            done = [r for r in res if r.status == CONVERGED]
            out[robot] = {
                'runs': len(res),
                'success_rate': counts[CONVERGED] / len(res) if res else 0.0,
                **counts,
                'mean_path_length': float(np.mean([r.path_length for r in done])) if done else 0.0,
                'mean_time': float(np.mean([r.t_final for r in done])) if done else 0.0,
                'min_clearance': float(min((r.min_clearance for r in res), default=np.inf)),
            }
        return out

    def success_rate(self, robot: str) -> float:
        return self.rates[robot]['success_rate']

    def as_dict(self) -> dict:
        """Deterministic summary; wall times are left out."""
        per_start = []
        for i, s in enumerate(self.starts):
            per_start.append({'index': i, 'start': [float(v) for v in s],
                              'results': {robot: self.results[robot][i].as_dict(include_wall_time=False)
                                          for robot in self.robots}})
        return {'n_starts': self.n_starts, 'seed': self.seed, 'baseline': self.baseline,
                'robots': list(self.robots), 'rates': self.rates, 'per_start': per_start}

    def write_json(self, path):
        with open(path, 'w') as fid:
            json.dump(self.as_dict(), fid, indent=2)
            fid.write('\n')


def _run_one(args):
    world, start, settings, robot, baseline = args
    result, traj = simulate(world, start, settings, robot, baseline)
    return result, traj.positions()


def grid_experiment(scenario, settings, n_starts: int, robots: Sequence[str] = ROBOTS,
                    baseline: bool = False, workers: Optional[int] = None,
                    validate: bool = True) -> GridSummary:
    """
    Run every robot type from n_starts seeded random starts.

    Inputs:
        scenario    - loaded Scenario (world and catalogue)
        settings    - Settings; seed, gridClearance and gridWorkers are used
        n_starts    - number of starts, > 0
        robots      - robot types to run from each start
        workers     - worker processes; defaults to settings.gridWorkers
    Outputs:
        GridSummary
    """
    if n_starts <= 0:
        raise ValueError(f'number of starts must be positive, got {n_starts}')
    world = scenario.world
    if validate:
        report = validate_assumptions(world, scenario.catalogue, None,
                                      settings.validation.deltaMin,
                                      settings.validation.bandAngles,
                                      settings.validation.bandLevels)
        if not report.passed:
            raise AssumptionViolation(report)

    rng = np.random.default_rng(settings.seed)
    starts = sample_starts(world, n_starts, rng, settings.gridClearance)
    jobs = [(world, s, settings, robot, baseline) for robot in robots for s in starts]
    workers = settings.gridWorkers if workers is None else workers

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_one, jobs))
    else:
        outcomes = []
        for i, job in enumerate(jobs):
            outcomes.append(_run_one(job))
            log.debug('   grid run %d/%d: %s', i + 1, len(jobs), outcomes[-1][0].status)

    summary = GridSummary(n_starts=n_starts, seed=settings.seed, robots=list(robots),
                          baseline=baseline, starts=starts)
    for k, robot in enumerate(robots):
        chunk = outcomes[k * n_starts:(k + 1) * n_starts]
        summary.results[robot] = [r for r, _ in chunk]
        summary.paths[robot] = [p for _, p in chunk]
    log.info('   grid: %s', ', '.join(f'{r} {summary.success_rate(r):.3f}' for r in robots))
    return summary
