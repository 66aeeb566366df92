import numpy as np
import pytest

from Common.numDiff import derivative, gradient, jacobian, rel_err
from Common.rk4 import rk4_step, rk45_step


class TestNumDiff:
    def test_linear_map_exact(self):
        A = np.array([[1.0, 2.0], [-3.0, 0.5]])
        np.testing.assert_allclose(jacobian(lambda x: A @ x, [0.3, -0.2]), A, rtol=1e-9)

    def test_gradient_of_quadratic(self):
        g = gradient(lambda x: x[0] ** 2 + 3.0 * x[0] * x[1], [1.0, 2.0])
        np.testing.assert_allclose(g, [8.0, 3.0], rtol=1e-8)

    def test_derivative(self):
        assert derivative(np.sin, 0.3) == pytest.approx(np.cos(0.3), rel=1e-9)

    def test_rel_err_floor(self):
        assert rel_err([1e-12], [0.0]) == pytest.approx(1e-4)
        assert rel_err([2.0], [1.0]) == pytest.approx(1.0)


class TestIntegrators:
    def test_rk4_linear_decay(self):
        w = rk4_step(lambda t, w: -0.4 * w, 0.0, np.array([1.0, 0.0]), 0.1)
        assert w[0] == pytest.approx(np.exp(-0.04), abs=1e-9)
        assert w[1] == 0.0

    def test_rk4_time_dependent(self):
        # w' = t integrates exactly
        w = rk4_step(lambda t, w: np.array([t]), 1.0, np.array([0.0]), 0.5)
        assert w[0] == pytest.approx(0.5 * (1.5 ** 2 - 1.0), abs=1e-14)

    def test_rk45_matches(self):
        w = rk45_step(lambda t, w: -0.4 * w, 0.0, np.array([1.0, 2.0]), 0.1)
        np.testing.assert_allclose(w, np.exp(-0.04) * np.array([1.0, 2.0]), rtol=1e-7)
