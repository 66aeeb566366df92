import numpy as np

from Include.gridExperiment import grid_experiment
from Include.showStatus import show_grid_summary, show_run_summary, show_validation_report
from Include.simulate import STALLED, RunResult
from Include.validateAssumptions import ValidationReport


class TestTables:
    def test_validation_report(self, capsys):
        report = ValidationReport()
        report.add('c', 'U0', True, 0.42)
        report.add('d', 'U0', False, detail='band leaves the workspace')
        show_validation_report(report)
        out = capsys.readouterr().out
        assert 'pass' in out
        assert 'FAIL' in out
        assert '0.42' in out
        assert '---' in out

    def test_run_summary(self, capsys):
        result = RunResult(status=STALLED, robot='full', baseline=True,
                           final_state=np.array([1.0, 2.0, 0.0]), goal=np.zeros(2),
                           message='command below 1e-07 for 1 s')
        show_run_summary(result, 'ushape')
        out = capsys.readouterr().out
        assert 'Stalled' in out
        assert 'ushape' in out
        assert 'command below' in out

    def test_grid_summary(self, empty_scenario, capsys):
        show_grid_summary(grid_experiment(empty_scenario, empty_scenario.settings, 1,
                                          robots=['full']))
        assert '1.000' in capsys.readouterr().out
