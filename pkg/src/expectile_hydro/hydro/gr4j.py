"""GR4J daily lumped model.

Two stores (production ``s`` and routing ``r``), two unit hydrographs fed
90%/10% by effective rainfall, and a groundwater exchange term acting on both
branches. The inner loop is compiled with numba; :func:`gr4j_step` exposes a
single step on an explicit state for inspection and testing.

Unit-hydrograph buffers hold water still in transit *after* the current
step's output has been released, so their sum is part of basin storage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from ..errors import DomainError

N_UH1 = 20
N_UH2 = 40


@dataclass(frozen=True)
class Gr4jParams:
    x1: float  # production store capacity, mm
    x2: float  # groundwater exchange coefficient, mm/day
    x3: float  # routing store capacity, mm
    x4: float  # unit hydrograph time base, days

    def __post_init__(self):
        vals = (self.x1, self.x2, self.x3, self.x4)
        if not all(math.isfinite(v) for v in vals):
            raise DomainError("GR4J parameters must be finite")
        if self.x1 <= 0 or self.x3 <= 0:
            raise DomainError("x1 and x3 must be positive")
        if self.x4 < 0.5:
            raise DomainError(f"x4 must be >= 0.5 days, got {self.x4}")
        if self.x4 > N_UH1:
            raise DomainError(f"x4 must be <= {N_UH1} days (buffer length), got {self.x4}")

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3, self.x4], dtype=np.float64)


@dataclass
class Gr4jState:
    s: float
    r: float
    uh1: np.ndarray = field(default_factory=lambda: np.zeros(N_UH1))
    uh2: np.ndarray = field(default_factory=lambda: np.zeros(N_UH2))

    @classmethod
    def initial(cls, params: Gr4jParams) -> Gr4jState:
        return cls(s=0.3 * params.x1, r=0.5 * params.x3)

    def storage(self) -> float:
        return self.s + self.r + float(np.sum(self.uh1)) + float(np.sum(self.uh2))

    def copy(self) -> Gr4jState:
        return Gr4jState(self.s, self.r, self.uh1.copy(), self.uh2.copy())


@njit(cache=True)
def _sh1(t, x4):
    if t <= 0.0:
        return 0.0
    if t < x4:
        return (t / x4) ** 2.5
    return 1.0


@njit(cache=True)
def _sh2(t, x4):
    if t <= 0.0:
        return 0.0
    if t <= x4:
        return 0.5 * (t / x4) ** 2.5
    if t < 2.0 * x4:
        return 1.0 - 0.5 * (2.0 - t / x4) ** 2.5
    return 1.0


@njit(cache=True)
def _ordinates(x4):
    o1 = np.zeros(N_UH1)
    o2 = np.zeros(N_UH2)
    for i in range(N_UH1):
        o1[i] = _sh1(i + 1.0, x4) - _sh1(float(i), x4)
    for i in range(N_UH2):
        o2[i] = _sh2(i + 1.0, x4) - _sh2(float(i), x4)
    return o1, o2


def uh_ordinates(x4: float) -> tuple[np.ndarray, np.ndarray]:
    """Unit-hydrograph ordinates, trimmed to ``ceil(x4)`` and ``ceil(2*x4)`` entries."""
    if not x4 >= 0.5:
        raise DomainError(f"x4 must be >= 0.5 days, got {x4}")
    if x4 > N_UH1:
        raise DomainError(f"x4 must be <= {N_UH1} days, got {x4}")
    o1, o2 = _ordinates(float(x4))
    return o1[: math.ceil(x4)].copy(), o2[: math.ceil(2 * x4)].copy()


@njit(cache=True)
def _step(s, r, uh1, uh2, o1, o2, p, e, x1, x2, x3):
    # returns (s, r, q, aet, exchange); uh1/uh2 updated in place
    if p >= e:
        pn = p - e
        en = 0.0
        aet = e
    else:
        pn = 0.0
        en = e - p
        aet = p

    ps = 0.0
    es = 0.0
    if pn > 0.0:
        tw = math.tanh(pn / x1)
        sr = s / x1
        ps = x1 * (1.0 - sr * sr) * tw / (1.0 + sr * tw)
    if en > 0.0:
        tw = math.tanh(en / x1)
        sr = s / x1
        es = s * (2.0 - sr) * tw / (1.0 + (1.0 - sr) * tw)
    s = s + ps - es
    aet += es

    perc = s * (1.0 - (1.0 + (4.0 * s / (9.0 * x1)) ** 4) ** -0.25)
    s = s - perc
    pr = perc + (pn - ps)

    pr1 = 0.9 * pr
    pr2 = 0.1 * pr
    out1 = uh1[0] + o1[0] * pr1
    for j in range(N_UH1 - 1):
        uh1[j] = uh1[j + 1] + o1[j + 1] * pr1
    uh1[N_UH1 - 1] = 0.0
    out2 = uh2[0] + o2[0] * pr2
    for j in range(N_UH2 - 1):
        uh2[j] = uh2[j + 1] + o2[j + 1] * pr2
    uh2[N_UH2 - 1] = 0.0

    # exchange actually applied: a loss is capped by the water available
    f = x2 * (r / x3) ** 3.5
    r_new = r + out1 + f
    exch = f
    if r_new < 0.0:
        r_new = 0.0
        exch = -(r + out1)
    r = r_new
    qr = r * (1.0 - (1.0 + (r / x3) ** 4) ** -0.25)
    r = r - qr

    qd = out2 + f
    if qd < 0.0:
        qd = 0.0
        exch -= out2
    else:
        exch += f
    return s, r, qr + qd, aet, exch


@njit(cache=True)
def _run(p, e, x1, x2, x3, x4, s0, r0, uh1, uh2):
    n = p.shape[0]
    o1, o2 = _ordinates(x4)
    q = np.empty(n)
    aet = np.empty(n)
    exch = np.empty(n)
    s = s0
    r = r0
    for t in range(n):
        s, r, q[t], aet[t], exch[t] = _step(s, r, uh1, uh2, o1, o2, p[t], e[t], x1, x2, x3)
    return q, aet, exch, s, r


def gr4j_step(state: Gr4jState, p: float, e: float, params: Gr4jParams):
    """Advance one day. Returns ``(new_state, q)``; ``state`` is left untouched."""
    if not (p >= 0 and e >= 0):
        raise DomainError(f"forcing must be non-negative (p={p}, e={e})")
    o1, o2 = _ordinates(float(params.x4))
    new = state.copy()
    s, r, q, _, _ = _step(
        float(new.s), float(new.r), new.uh1, new.uh2, o1, o2,
        float(p), float(e), params.x1, params.x2, params.x3,
    )
    new.s, new.r = s, r
    return new, q


def run_gr4j(params: Gr4jParams, p: np.ndarray, e: np.ndarray, state: Gr4jState | None = None):
    """Simulate a full record.

    Returns a dict with daily ``q``, ``aet`` and applied ``exchange`` arrays,
    plus the ``initial`` and ``final`` states.
    """
    if state is None:
        state = Gr4jState.initial(params)
    final = state.copy()
    q, aet, exch, s, r = _run(
        np.ascontiguousarray(p, dtype=np.float64),
        np.ascontiguousarray(e, dtype=np.float64),
        params.x1, params.x2, params.x3, params.x4,
        float(state.s), float(state.r), final.uh1, final.uh2,
    )
    final.s, final.r = s, r
    return {"q": q, "aet": aet, "exchange": exch, "initial": state, "final": final}
