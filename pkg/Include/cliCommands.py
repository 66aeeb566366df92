"""
Subcommands of the starnav command line: validate, run and grid.

Each returns the process exit code: 0 ok, 1 domain failure, 2 usage or
parse failure.
"""

from __future__ import annotations
from pathlib import Path
import json
import logging

from Common.navErrors import AssumptionViolation, ScenarioError
from Include.gridExperiment import grid_experiment
from Include.plotLayers import plot_grid_paths, plot_layers, plot_level_curves
from Include.scenarioFile import load_scenario
from Include.showStatus import show_grid_summary, show_run_summary, show_validation_report
from Include.simulate import FAULT, ROBOTS, run
from Include.validateAssumptions import validate_assumptions

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _load(path, overrides):
    try:
        return load_scenario(path, overrides=overrides)
    except ScenarioError as e:
        print(f'  {e}')
        return None


def _validate(scenario, start=None):
    s = scenario.settings.validation
    return validate_assumptions(scenario.world, scenario.catalogue, start,
                                s.deltaMin, s.bandAngles, s.bandLevels)


def cmd_validate(path, svg=None, shape=None, overrides=None) -> int:
    """Load a scenario, print the preflight checks; 0 iff every check passes."""
    scenario = _load(path, overrides)
    if scenario is None:
        return EXIT_USAGE
    print(f'Validating scenario {scenario.name} ({path})...')
    report = _validate(scenario, None if scenario.start is None else scenario.start[:2])
    show_validation_report(report)

    if svg and len(scenario.catalogue):
        name = shape or next(iter(scenario.catalogue.entries))
        try:
            entry = scenario.catalogue[name]
        except ScenarioError as e:
            print(f'  {e}')
            return EXIT_USAGE
        plot_level_curves(entry, svg)
        print(f'  Level curves of {name} written to {svg}')
    return EXIT_OK if report.passed else EXIT_FAILURE


def cmd_run(path, robot=None, baseline=False, csv=None, svg=None, json_out=None,
            seed=None, strict=False, overrides=None) -> int:
    """
    Validate and simulate a scenario once.

    Stalled and MaxTime outcomes exit 0 unless strict; a Fault exits 1.
    """
    overrides = dict(overrides or {})
    if seed is not None:
        overrides['seed'] = seed
    scenario = _load(path, overrides)
    if scenario is None:
        return EXIT_USAGE
    if robot is not None and robot not in ROBOTS:
        print(f'  robot must be one of {ROBOTS}')
        return EXIT_USAGE

    try:
        result, traj = run(scenario, robot=robot, baseline=baseline)
    except AssumptionViolation as e:
        print(f'  Scenario {scenario.name} violates the navigation assumptions:')
        show_validation_report(e.report)
        return EXIT_FAILURE

    label = f'{scenario.name} ({result.robot}{", baseline" if baseline else ""})'
    show_run_summary(result, label)
    if csv:
        traj.write_csv(csv)
        print(f'  Trajectory written to {csv}')
    if svg:
        plot_layers(scenario.world, traj.final_map, traj, svg, label)
        print(f'  Layers written to {svg}')
    if json_out:
        with open(json_out, 'w') as fid:
            json.dump(result.as_dict(), fid, indent=2)
            fid.write('\n')

    if result.status == FAULT:
        return EXIT_FAILURE
    if strict and not result.converged:
        return EXIT_FAILURE
    return EXIT_OK


def cmd_grid(path, n=100, seed=None, json_out=None, svg=None, workers=None,
             baseline=False, overrides=None) -> int:
    """Run both robot types from n seeded random starts."""
    if n <= 0:
        print(f'  number of starts must be positive, got {n}')
        return EXIT_USAGE
    overrides = dict(overrides or {})
    if seed is not None:
        overrides['seed'] = seed
    scenario = _load(path, overrides)
    if scenario is None:
        return EXIT_USAGE

    print(f'Running {n} starts per robot type in {scenario.name}...')
    try:
        summary = grid_experiment(scenario, scenario.settings, n, ROBOTS, baseline, workers)
    except AssumptionViolation as e:
        print(f'  Scenario {scenario.name} violates the navigation assumptions:')
        show_validation_report(e.report)
        return EXIT_FAILURE

    show_grid_summary(summary)
    if json_out:
        summary.write_json(json_out)
        print(f'  Summary written to {json_out}')
    if svg:
        out = Path(svg)
        for robot in summary.robots:
            target = out.with_name(f'{out.stem}_{robot}{out.suffix or ".svg"}')
            plot_grid_paths(scenario.world, summary, target, robot)
            print(f'  Paths of {robot} written to {target}')
    return EXIT_OK
