def show_validation_report(report):
    """
    Prints the preflight checks of a scenario in a table.

    show_validation_report(report)

    Inputs:
        report      - ValidationReport returned by validate_assumptions
    """
    print('\n*===========*==========================*=============*========*')
    print('| Condition | Subject                  |    Value    | Status |')
    print('*===========*==========================*=============*========*')

    for entry in report.entries:
        value = '      ---  ' if entry.value != entry.value else f'{entry.value:>11.4g}'
        status = 'pass' if entry.passed else 'FAIL'
        print('|   {:>5s}   | {:<24.24s} | {} |  {:>4s}  |'.format(
            entry.condition, entry.subject, value, status))

    print('*===========*==========================*=============*========*')
    print(f'   {report.summary()}')
    print()


def show_run_summary(result, label=''):
    """
    Prints the outcome of one closed-loop run.

    Inputs:
        result      - RunResult
        label       - optional name printed in the title line
    """
    x = result.final_state
    print('\n*=============*==================================*')
    print(f'| Run         | {label:<32.32s} |')
    print('*=============*==================================*')
    print('| Status      | {:<32s} |'.format(result.status))
    print('| Final pose  | {:<32s} |'.format(
        '({:.4f}, {:.4f}, {:.3f} rad)'.format(x[0], x[1], x[2])))
    print('| Goal dist.  | {:<32.6g} |'.format(result.final_distance))
    print('| Sim. time   | {:<32.4g} |'.format(result.t_final))
    print('| Path length | {:<32.6g} |'.format(result.path_length))
    print('| Clearance   | {:<32.6g} |'.format(result.min_clearance))
    print('| Steps       | {:<32d} |'.format(result.n_steps))
    print('*=============*==================================*')
    if result.message:
        print(f'   {result.message}')
    print()


def show_grid_summary(summary):
    """
    Prints convergence rates of a grid experiment per robot type.

    Inputs:
        summary     - GridSummary
    """
    print('\n*===========*=======*===========*=========*=========*=======*')
    print('| Robot     | Runs  | Converged | Stalled | MaxTime | Fault |')
    print('*===========*=======*===========*=========*=========*=======*')
    for robot, stats in summary.rates.items():
        print('| {:<9s} | {:>5d} | {:>9.3f} | {:>7d} | {:>7d} | {:>5d} |'.format(
            robot, stats['runs'], stats['success_rate'], stats['Stalled'],
            stats['MaxTime'], stats['Fault']))
    print('*===========*=======*===========*=========*=========*=======*')
    print()
