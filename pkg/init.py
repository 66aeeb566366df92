#--------------------------------------------------------------------------
#                               starnav
# Reactive navigation among familiar star-shaped and unknown convex obstacles
#--------------------------------------------------------------------------
#
# Command line entry point:
#
#   python init.py validate <scenario.scn> [--svg levels.svg]
#   python init.py run      <scenario.scn> [--robot full|diffdrive] [--baseline]
#                                          [--csv log.csv] [--svg layers.svg]
#                                          [--json result.json] [--seed n]
#   python init.py grid     <scenario.scn> [--n 100] [--seed n] [--json out]
#
# Default parameters live in init_settings.py; a scenario's "params"
# section and --param key=value flags override them.
#--------------------------------------------------------------------------

import argparse
import json
import logging
import sys

from Include.cliCommands import EXIT_USAGE, cmd_grid, cmd_run, cmd_validate
from Include.simulate import ROBOTS


def positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f'invalid integer {text!r}') from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f'must be positive, got {value}')
    return value


def param_override(text):
    key, sep, raw = text.partition('=')
    if not sep or not key:
        raise argparse.ArgumentTypeError(f'expected key=value, got {text!r}')
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key.strip(), value


def build_parser():
    parser = argparse.ArgumentParser(
        prog='starnav',
        description='Reactive navigation among familiar star-shaped and unknown convex obstacles.')
    parser.add_argument('-v', '--verbose', action='store_true', help='debug logging')
    sub = parser.add_subparsers(dest='command', required=True)

    def common(p):
        p.add_argument('scenario', help='scenario file (.scn)')
        p.add_argument('--param', action='append', type=param_override, default=[],
                       metavar='KEY=VALUE', help='override a setting')

    p = sub.add_parser('validate', help='check a scenario against the navigation assumptions')
    common(p)
    p.add_argument('--svg', help='write obstacle-function level curves of a catalogue shape')
    p.add_argument('--shape', help='catalogue shape drawn by --svg (default: the first)')

    p = sub.add_parser('run', help='simulate one run')
    common(p)
    p.add_argument('--robot', choices=ROBOTS, help='robot type (default: from the scenario)')
    p.add_argument('--baseline', action='store_true',
                   help='treat every obstacle as unknown (no diffeomorphism)')
    p.add_argument('--csv', help='write the trajectory log')
    p.add_argument('--svg', help='write the three layers')
    p.add_argument('--json', dest='json_out', help='write the run result')
    p.add_argument('--seed', type=int, help='seed of a random start')
    p.add_argument('--strict', action='store_true', help='exit 1 unless the run converges')

    p = sub.add_parser('grid', help='runs from many random starts')
    common(p)
    p.add_argument('--n', type=positive_int, default=100, help='number of starts')
    p.add_argument('--seed', type=int, help='seed of the start sampler')
    p.add_argument('--json', dest='json_out', help='write the summary')
    p.add_argument('--svg', help='write the trajectories, one file per robot type')
    p.add_argument('--workers', type=positive_int, help='worker processes')
    p.add_argument('--baseline', action='store_true')
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else 0

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s')
    overrides = dict(args.param)

    if args.command == 'validate':
        return cmd_validate(args.scenario, args.svg, args.shape, overrides)
    if args.command == 'run':
        return cmd_run(args.scenario, args.robot, args.baseline, args.csv, args.svg,
                       args.json_out, args.seed, args.strict, overrides)
    return cmd_grid(args.scenario, args.n, args.seed, args.json_out, args.svg,
                    args.workers, args.baseline, overrides)


if __name__ == '__main__':
    sys.exit(main())
