"""
Smooth cutoff profiles.

- `step` rises from 0 on `x <= 0` to 1 on `x >= 1` and is C-infinity.
- `plateau` equals 1 on `x <= 1` and 0 on `x >= 2`.
- `chi1` is the even plateau bump `plateau(|s|)`.
- `chi0` vanishes exactly on `s <= 1` and is convex: its second derivative
  is `exp(-1/(s-1))`, so the profile itself is the double antiderivative
  `(x^2/2 + x/2) e^{-1/x} - (x + 1/2) E1(1/x)` with `x = s - 1`.
"""

from functools import cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import exp1

from crlab.exceptions import UnsupportedError


__all__ = ("step", "plateau", "chi0", "chi1", "MAX_ORDER")


MAX_ORDER = 3
STEP_NODES = 48


def _bump(u: np.ndarray) -> np.ndarray:
    q = u * (1 - u)
    out = np.zeros_like(u)
    inside = q > 0
    out[inside] = np.exp(-1 / q[inside])
    return out


@cache
def _normalization() -> float:
    x, w = leggauss(2 * STEP_NODES)
    return float(np.sum(w * _bump((x + 1) / 2)) / 2)


def _partial(x: np.ndarray) -> np.ndarray:
    """Normalized integral of the bump over `[0, x]` for `0 <= x <= 1/2`"""
    nodes, weights = leggauss(STEP_NODES)
    u = x[..., None] * (nodes + 1) / 2
    return np.sum(weights * _bump(u), axis=-1) * x / 2 / _normalization()


def _bump_derivative(u: np.ndarray, order: int) -> np.ndarray:
    # beta = exp(g), g = -1/q, q = u (1 - u)
    out = np.zeros_like(u)
    inside = (u > 0) & (u < 1)
    v = u[inside]
    q = v * (1 - v)
    dq = 1 - 2 * v
    beta = np.exp(-1 / q)
    g1 = dq / q**2
    match order:
        case 0:
            out[inside] = beta
        case 1:
            out[inside] = beta * g1
        case 2:
            g2 = (-2 * q - 2 * dq**2) / q**3
            out[inside] = beta * (g1**2 + g2)
    return out


def step(x, /, order: int = 0) -> np.ndarray:
    """
    Smooth step and its derivatives up to `MAX_ORDER`

    >>> round(float(step(0.5)), 12)
    0.5
    """
    if order > MAX_ORDER:
        raise UnsupportedError("unsupported_degree", f"step derivative of order {order}")

    x = np.asarray(x, dtype=float)
    if order > 0:
        return _bump_derivative(x, order - 1) / _normalization()

    out = np.where(x >= 1, 1.0, 0.0)
    lower = (x > 0) & (x <= 0.5)
    upper = (x > 0.5) & (x < 1)
    out[lower] = _partial(x[lower])
    out[upper] = 1 - _partial(1 - x[upper])
    return out


def plateau(x, /, order: int = 0) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if order == 0:
        return 1 - step(x - 1)
    return -step(x - 1, order=order)


def chi1(s, /, order: int = 0) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    return np.sign(s) ** order * plateau(np.abs(s), order=order)


def chi0(s, /, order: int = 0) -> np.ndarray:
    """
    Convex profile vanishing solely on `s <= 1`

    >>> float(chi0(1.0))
    0.0
    """
    if order > MAX_ORDER:
        raise UnsupportedError("unsupported_degree", f"chi0 derivative of order {order}")

    x = np.asarray(s, dtype=float) - 1
    out = np.zeros_like(x)
    pos = x > 0
    v = x[pos]
    e = np.exp(-1 / v)

    match order:
        case 0:
            out[pos] = (v**2 / 2 + v / 2) * e - (v + 0.5) * exp1(1 / v)
        case 1:
            out[pos] = v * e - exp1(1 / v)
        case 2:
            out[pos] = e
        case 3:
            out[pos] = e / v**2

    return out
