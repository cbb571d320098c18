"""Two-parameter linear-reservoir benchmark model (``lr2``).

A single bucket of capacity ``c`` that spills excess rain, evaporates in
proportion to its relative filling and drains linearly with residence time
``k`` days.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from ..errors import DomainError


@dataclass(frozen=True)
class Lr2Params:
    c: float  # storage capacity, mm
    k: float  # residence time, days

    def __post_init__(self):
        if not (math.isfinite(self.c) and math.isfinite(self.k)):
            raise DomainError("LR2 parameters must be finite")
        if self.c <= 0:
            raise DomainError(f"c must be positive, got {self.c}")
        if self.k < 1:
            raise DomainError(f"k must be >= 1 day, got {self.k}")

    def as_array(self) -> np.ndarray:
        return np.array([self.c, self.k], dtype=np.float64)


@njit(cache=True)
def _step(w, p, e, c, k):
    w_plus = w + p
    overflow = w_plus - c if w_plus > c else 0.0
    w1 = w_plus if w_plus < c else c
    et = e * (w1 / c)
    w2 = w1 - et
    if w2 < 0.0:
        w2 = 0.0
    drain = w2 / k
    return w2 - drain, overflow + drain, w1 - w2


@njit(cache=True)
def _run(p, e, c, k, w0):
    n = p.shape[0]
    q = np.empty(n)
    aet = np.empty(n)
    w = w0
    for t in range(n):
        w, q[t], aet[t] = _step(w, p[t], e[t], c, k)
    return q, aet, w


def lr2_step(w: float, p: float, e: float, params: Lr2Params) -> tuple[float, float]:
    """One day of the bucket: returns ``(w_next, q)``."""
    if not (p >= 0 and e >= 0):
        raise DomainError(f"forcing must be non-negative (p={p}, e={e})")
    if not (0 <= w <= params.c):
        raise DomainError(f"storage {w} outside [0, {params.c}]")
    w_next, q, _ = _step(float(w), float(p), float(e), params.c, params.k)
    return w_next, q


def initial_storage(params: Lr2Params) -> float:
    return 0.5 * params.c


def run_lr2(params: Lr2Params, p: np.ndarray, e: np.ndarray, w0: float | None = None):
    if w0 is None:
        w0 = initial_storage(params)
    q, aet, w = _run(
        np.ascontiguousarray(p, dtype=np.float64),
        np.ascontiguousarray(e, dtype=np.float64),
        params.c, params.k, float(w0),
    )
    return {"q": q, "aet": aet, "exchange": np.zeros_like(q), "initial": float(w0), "final": w}
