import numpy as np
from scipy.integrate import solve_ivp


def rk4_step(fn, t, w, h):
    """
    One classical 4th order Runge-Kutta step of w' = fn(t, w).

    Inputs:
        fn  - right hand side f(t, w) returning an array like w
        t   - current time
        w   - current state
        h   - step size
    Outputs:
        w   - state at t + h
    """
    K1 = h * fn(t, w)
    K2 = h * fn(t + h / 2, w + K1 / 2)
    K3 = h * fn(t + h / 2, w + K2 / 2)
    K4 = h * fn(t + h, w + K3)
    return w + (K1 + 2 * K2 + 2 * K3 + K4) / 6


def rk45_step(fn, t, w, h, rtol=1e-8, atol=1e-10):
    """Adaptive Dormand-Prince integration of w' = fn(t, w) over [t, t + h]."""
    sol = solve_ivp(fn, (t, t + h), np.asarray(w, dtype=float), method='RK45',
                    rtol=rtol, atol=atol)
    if not sol.success:
        raise RuntimeError(f'RK45 failed: {sol.message}')
    return sol.y[:, -1]
