"""Quantile/expectile losses and their empirical estimators.

The losses accept scalars or arrays and broadcast like numpy ufuncs; scalar
inputs give a Python ``float`` back. The indicator ``1(x <= r)`` includes the
tie, so a prediction equal to the observation sits on the "below" side.
"""

from __future__ import annotations

import math
from decimal import Decimal

import numpy as np

from .errors import AlignmentError, EmptyInputError, InvalidArgumentError
from .series import DailySeries, check_aligned

LOSS_KINDS = ("expectile", "quantile")

# Level assigned when every deviation is zero (0/0): the value an ideal
# prediction would score under the squared-error loss.
DEGENERATE_LEVEL = 0.5


class Level(float):
    """A probability level strictly inside (0, 1)."""

    def __new__(cls, value):
        value = float(value)
        if not (0.0 < value < 1.0):
            raise InvalidArgumentError(f"level must lie in (0, 1), got {value!r}")
        return super().__new__(cls, value)


def _level(value) -> float:
    return float(Level(value))


def _finite(name, value):
    arr = np.asarray(value, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{name} must be finite")
    return arr


def _sample(s) -> np.ndarray:
    x = np.asarray(s, dtype=np.float64).reshape(-1)
    if x.size == 0:
        raise EmptyInputError("sample is empty")
    if not np.all(np.isfinite(x)):
        raise InvalidArgumentError("sample contains non-finite values")
    return x


def _out(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


def quantile_loss(r, x, a):
    """Pinball loss ``(r - x) * (1(x <= r) - a)``."""
    a = _level(a)
    r = _finite("r", r)
    x = _finite("x", x)
    d = r - x
    return _out(d * ((x <= r) - a))


def expectile_loss(r, x, tau):
    """Asymmetric squared loss ``(r - x)**2 * |1(x <= r) - tau|``."""
    tau = _level(tau)
    r = _finite("r", r)
    x = _finite("x", x)
    d = r - x
    return _out(d * d * np.abs((x <= r) - tau))


def loss_function(kind: str):
    if kind == "expectile":
        return expectile_loss
    if kind == "quantile":
        return quantile_loss
    raise InvalidArgumentError(f"unknown loss kind {kind!r}; expected one of {LOSS_KINDS}")


def mean_loss(kind: str, r, x, level) -> float:
    """Arithmetic mean of the per-element loss."""
    values = np.asarray(loss_function(kind)(r, x, level))
    if values.size == 0:
        raise EmptyInputError("no values to score")
    return float(np.mean(values))


def sample_quantile(s, a) -> float:
    """Smallest order statistic ``x_(k)`` with ``k/n >= a`` (no interpolation)."""
    a = _level(a)
    x = _sample(s)
    n = x.size
    k = min(max(math.ceil(a * n), 1), n)
    # float rounding in a*n can miss the minimal k by one either way
    while k > 1 and (k - 1) / n >= a:
        k -= 1
    while k < n and k / n < a:
        k += 1
    return float(np.partition(x, k - 1)[k - 1])


def _expectile_fn(x, tau, e):
    d = x - e
    above = d > 0
    s_above = np.sum(d[above])
    s_below = -np.sum(d[~above])
    n_above = int(np.count_nonzero(above))
    g = tau * s_above - (1.0 - tau) * s_below
    slope = tau * n_above + (1.0 - tau) * (x.size - n_above)
    return g, slope


def sample_expectile(s, tau, rtol: float = 1e-10, max_iter: int = 200) -> float:
    """Root of ``tau*sum((x-e)+) - (1-tau)*sum((e-x)+)``.

    The function is continuous, piecewise linear and strictly decreasing, so a
    bisection bracket ``[min(s), max(s)]`` is kept while Newton steps (using
    the right-hand slope) do the actual work. Inside the linear piece holding
    the root a Newton step is exact.
    """
    tau = _level(tau)
    x = _sample(s)
    lo, hi = float(x.min()), float(x.max())
    if lo == hi:
        return lo
    e = float(np.mean(x))
    for _ in range(max_iter):
        g, slope = _expectile_fn(x, tau, e)
        if g == 0.0:
            return float(e)
        if g > 0:
            lo = e
        else:
            hi = e
        e_new = e + g / slope
        if not (lo <= e_new <= hi):
            e_new = 0.5 * (lo + hi)
        if abs(e_new - e) <= rtol * (1.0 + abs(e_new)):
            return float(e_new)
        e = e_new
    return float(e)


def expectile_argmin_oracle(s, tau, tol: float = 1e-8) -> float:
    """Golden-section minimiser of the mean expectile loss on ``[min, max]``.

    Independent cross-check for :func:`sample_expectile`; slow, test use only.
    """
    tau = _level(tau)
    x = _sample(s)
    a, b = float(x.min()), float(x.max())
    if a == b:
        return a

    def f(r):
        d = r - x
        return float(np.mean(d * d * np.where(x <= r, 1.0 - tau, tau)))

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol * (1.0 + abs(a) + abs(b)) / 2.0:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def _deviation_level(dev_below: np.ndarray, dev_total: np.ndarray) -> float:
    total = float(np.sum(dev_total))
    if total == 0.0:
        return DEGENERATE_LEVEL
    return float(np.sum(dev_below)) / total


def expectile_level_of_value(s, e) -> float:
    """Expectile level at which ``e`` is the sample expectile of ``s``.

    ``sum(|x - e| * 1(x <= e)) / sum(|x - e|)``; returns 0.5 when every
    element equals ``e``.
    """
    x = _sample(s)
    e = float(_finite("e", e))
    dev = np.abs(x - e)
    return _deviation_level(np.where(x <= e, dev, 0.0), dev)


def prediction_expectile_level(obs, sim) -> float:
    """Share of absolute residual mass lying below the predictions.

    Accepts :class:`DailySeries` (checked for alignment) or equal-length
    arrays. A perfect simulation scores 0.5 by convention.
    """
    if isinstance(obs, DailySeries) or isinstance(sim, DailySeries):
        check_aligned(obs, sim)
        obs, sim = obs.values, sim.values
    x = _sample(obs)
    r = _sample(sim)
    if x.shape != r.shape:
        raise AlignmentError(f"length mismatch: {x.size} observations vs {r.size} predictions")
    dev = np.abs(x - r)
    return _deviation_level(np.where(x <= r, dev, 0.0), dev)


def is_degenerate_level(obs, sim) -> bool:
    """True when the residuals are all zero and the level is the 0.5 convention."""
    if isinstance(obs, DailySeries):
        obs, sim = obs.values, sim.values
    return bool(np.all(np.asarray(obs) == np.asarray(sim)))


def return_period_from_level(level) -> float:
    """``1 / (1 - level)``.

    Evaluated on the shortest decimal form of ``level`` so that decimal
    levels give exact periods (0.975 -> 40.0 rather than 39.99999999999996).
    """
    level = _level(level)
    return float(1 / (1 - Decimal(repr(level))))
