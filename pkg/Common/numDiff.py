import numpy as np


def jacobian(f, x, step=1e-5):
    """
    Jacobian of f with second order central differences.

    Inputs:
        f       - function R^n -> R^m (scalars are treated as m = 1)
        x       - point, array (n,)
        step    - difference step
    Outputs:
        jac     - array (m, n)
    """
    x = np.asarray_chkfinite(x, dtype=float)
    a = np.array(x)
    columns = []
    for i in range(len(x)):
        a[i] = x[i] + step
        fr = np.atleast_1d(np.asarray(f(a), dtype=float))
        a[i] = x[i] - step
        fl = np.atleast_1d(np.asarray(f(a), dtype=float))
        a[i] = x[i]
        columns.append((fr - fl) / (2.0 * step))
    return np.column_stack(columns)


def gradient(f, x, step=1e-5):
    """Gradient of a scalar function, shape (n,)."""
    return jacobian(f, x, step)[0]


def derivative(f, t, step=1e-6):
    """Central difference of a function of one real variable."""
    return (np.asarray(f(t + step)) - np.asarray(f(t - step))) / (2.0 * step)


def rel_err(approx, exact, floor=1e-8):
    """Max elementwise relative error with an absolute floor on the scale."""
    approx = np.asarray(approx, dtype=float)
    exact = np.asarray(exact, dtype=float)
    scale = np.maximum(np.abs(exact), floor)
    return float(np.max(np.abs(approx - exact) / scale))
