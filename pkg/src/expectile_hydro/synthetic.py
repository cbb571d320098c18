"""Synthetic basin generator used by tests, demos and the ``synth`` command."""

from __future__ import annotations

import datetime as dt
import math

import numpy as np

from .basin import BasinRecord
from .errors import InvalidArgumentError
from .hydro import Gr4jParams, daily_mean_temp, oudin_pet, run_gr4j

# reference parameter set that generates the synthetic streamflow
THETA_STAR = Gr4jParams(x1=350.0, x2=0.5, x3=90.0, x4=1.7)
SYNTH_START = dt.date(1980, 1, 1)
SYNTH_LATITUDE = 40.0
WET_DAY_PROB = 0.35
MEAN_WET_DAY_MM = 8.0
DEFAULT_NOISE = 0.25


def synth_basin(
    seed: int = 1,
    n_years: int = 34,
    noise: float = DEFAULT_NOISE,
    params: Gr4jParams = THETA_STAR,
    basin_id: str | None = None,
    start: dt.date = SYNTH_START,
) -> BasinRecord:
    """Deterministic synthetic basin.

    Temperatures follow a seasonal sinusoid; precipitation is an
    intermittent exponential process drawn from ``seed``. Observed flow is
    the GR4J simulation at ``params`` times mean-one lognormal noise with
    log-standard-deviation ``noise``, so errors scale with flow. With
    ``noise=0`` the observations equal the simulation exactly.
    """
    if n_years < 1:
        raise InvalidArgumentError("n_years must be at least 1")
    end = dt.date(start.year + n_years, start.month, start.day) - dt.timedelta(days=1)
    n = (end - start).days + 1
    dates = [start + dt.timedelta(days=i) for i in range(n)]
    doy = np.array([d.timetuple().tm_yday for d in dates])

    rng = np.random.Generator(np.random.PCG64(seed))
    seasonal = np.cos(2.0 * math.pi * (doy - 200) / 365.25)
    tmean = 10.0 + 12.0 * seasonal
    spread = 10.0 + 2.0 * seasonal
    tmin = np.round(tmean - spread / 2.0, 6)
    tmax = np.round(tmean + spread / 2.0, 6)

    wet = rng.random(n) < WET_DAY_PROB
    amounts = rng.exponential(MEAN_WET_DAY_MM, n)
    precip = np.round(np.where(wet, amounts, 0.0), 6)

    pet = oudin_pet(daily_mean_temp(tmin, tmax), math.radians(SYNTH_LATITUDE), doy)
    q_model = run_gr4j(params, precip, pet)["q"]
    eps = rng.standard_normal(n)
    if noise > 0:
        q_obs = q_model * np.exp(noise * eps - 0.5 * noise * noise)
    else:
        q_obs = q_model.copy()

    return BasinRecord(
        basin_id=basin_id or f"synth-{seed}",
        latitude=SYNTH_LATITUDE,
        start_date=start,
        precip=precip,
        tmin=tmin,
        tmax=tmax,
        q_obs=q_obs,
        pet=None,
    )
