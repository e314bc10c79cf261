"""Scalar special functions: Gaussian tail Q, exponential integral on the
negative axis Ei(-z), and the exponentially scaled form T(z) = e^z Ei(-z).

All functions accept floats or numpy arrays and are pure/reentrant.
"""

import numpy as np
from scipy import special

__all__ = ["q_function", "exp_int_ei_neg", "t_func"]

# Above this point the plain product exp(z)*exp1(z) risks overflow/underflow
# in double precision; switch to the continued fraction for e^z E1(z).
_T_PRODUCT_LIMIT = 500.0


def q_function(x):
    """Standard normal tail probability Pr{N(0,1) > x}.

    Computed through erfc, so Q(x) + Q(-x) = 1 holds to machine precision
    and the tail stays accurate far beyond x ~ 8.
    """
    x = np.asarray(x, dtype=float)
    out = 0.5 * special.erfc(x / np.sqrt(2.0))
    return float(out) if out.ndim == 0 else out


def _scaled_e1_cf(z, max_iter=80, tol=1e-16):
    """e^z E1(z) via the modified Lentz continued fraction.

    Converges quickly for large z; used where exp(z) would overflow.
    """
    b = z + 1.0
    c = b.copy()
    d = np.zeros_like(z)
    f = b.copy()
    for k in range(1, max_iter + 1):
        a = -float(k * k)
        b = b + 2.0
        d = b + a * d
        d = np.where(d == 0.0, 1e-300, d)
        c = b + a / c
        c = np.where(c == 0.0, 1e-300, c)
        d = 1.0 / d
        delta = c * d
        f = f * delta
        if np.all(np.abs(delta - 1.0) < tol):
            break
    return 1.0 / f


def exp_int_ei_neg(z):
    """Exponential integral Ei(-z) for z > 0.

    Ei(-z) = -int_z^inf e^{-t}/t dt, strictly negative and increasing
    toward 0.  For z beyond ~745 the magnitude underflows double precision
    and -0.0 is returned.
    """
    z = np.asarray(z, dtype=float)
    if np.any(~(z > 0.0)):
        raise ValueError("exp_int_ei_neg requires z > 0")
    out = -special.exp1(z)
    return float(out) if out.ndim == 0 else out


def _t_core(z):
    """t_func kernel without domain validation (z > 0 assumed)."""
    if z.max(initial=0.0) <= _T_PRODUCT_LIMIT:
        return -np.exp(z) * special.exp1(z)
    out = np.zeros_like(z)
    finite = np.isfinite(z)
    small = finite & (z <= _T_PRODUCT_LIMIT)
    zs = z[small]
    out[small] = -np.exp(zs) * special.exp1(zs)
    big = finite & (z > _T_PRODUCT_LIMIT)
    if np.any(big):
        out[big] = -_scaled_e1_cf(z[big])
    # z = +inf falls through as 0.0
    return out


def t_func(z):
    """T(z) = e^z Ei(-z) for z > 0.

    Negative, strictly increasing, with -1/z < T(z) < 0.  The scaled form
    never overflows: the naive product is used only while exp(z) is finite,
    and the continued fraction for e^z E1(z) takes over for large z.
    Infinite z returns the asymptote 0.0.
    """
    z = np.asarray(z, dtype=float)
    if np.any(~(z > 0.0)):
        raise ValueError("t_func requires z > 0")
    out = _t_core(z)
    return float(out) if out.ndim == 0 else out
