"""
R-functions of the p-norm family and their first and second derivatives.

  AND(w1, w2) = w1 + w2 - (w1^p + w2^p)^(1/p)
  OR(w1, w2)  = w1 + w2 + (w1^p + w2^p)^(1/p)
  NOT(w)      = -w

p must be even so the p-norm term is real and smooth for negative arguments.
Every function accepts scalars or numpy arrays (elementwise).
"""

import numpy as np

AND = 'AND'
OR = 'OR'


def check_exponent(p):
    if int(p) != p or p < 2 or int(p) % 2 != 0:
        raise ValueError(f'R-function exponent must be an even integer >= 2, got {p}')


def _pnorm(w1, w2, p):
    """(w1^p + w2^p)^(1/p), scaled to avoid overflow for large p."""
    m = np.maximum(np.abs(w1), np.abs(w2))
    safe = np.where(m > 0.0, m, 1.0)
    return np.where(m > 0.0, safe * ((w1 / safe) ** p + (w2 / safe) ** p) ** (1.0 / p), 0.0)


def r_and(w1, w2, p):
    check_exponent(p)
    return w1 + w2 - _pnorm(w1, w2, p)


def r_or(w1, w2, p):
    check_exponent(p)
    return w1 + w2 + _pnorm(w1, w2, p)


def r_neg(w):
    return -w


def r_combine(op, a, ga, Ha, b, gb, Hb, p):
    """
    Value, gradient and Hessian of AND/OR applied to two differentiable arguments.

    Inputs:
        op      - AND or OR
        a, b    - argument values, shape (N,)
        ga, gb  - argument gradients, shape (N, 2)
        Ha, Hb  - argument Hessians, shape (N, 2, 2) (None skips second order)
        p       - even exponent
    Outputs:
        f, grad, hess (hess is None when Ha is None)
    """
    sign = -1.0 if op == AND else 1.0
    r = _pnorm(a, b, p)
    f = a + b + sign * r

    live = r > 0.0
    rs = np.where(live, r, 1.0)
    ta = np.where(live, a / rs, 0.0)
    tb = np.where(live, b / rs, 0.0)
    ta1 = ta ** (p - 1)
    tb1 = tb ** (p - 1)

    fa = 1.0 + sign * ta1
    fb = 1.0 + sign * tb1
    grad = fa[:, None] * ga + fb[:, None] * gb
    if Ha is None:
        return f, grad, None

    k = np.where(live, (p - 1) / rs, 0.0)
    faa = sign * k * (ta ** (p - 2) - ta1 * ta1)
    fbb = sign * k * (tb ** (p - 2) - tb1 * tb1)
    fab = -sign * k * ta1 * tb1

    outer = lambda u, v: u[:, :, None] * v[:, None, :]
    hess = (fa[:, None, None] * Ha + fb[:, None, None] * Hb
            + faa[:, None, None] * outer(ga, ga)
            + fbb[:, None, None] * outer(gb, gb)
            + fab[:, None, None] * (outer(ga, gb) + outer(gb, ga)))
    return f, grad, hess
