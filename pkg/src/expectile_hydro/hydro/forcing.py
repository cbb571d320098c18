"""Forcing preparation: mean daily temperature and Oudin potential evapotranspiration."""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError, OrderingError

SOLAR_CONSTANT = 0.0820  # MJ m-2 min-1
INV_LATENT_HEAT = 0.408  # mm per MJ m-2 (1 / (lambda * rho))


def daily_mean_temp(tmin, tmax):
    """Average of daily minimum and maximum temperature (degC)."""
    tmin_a = np.asarray(tmin, dtype=np.float64)
    tmax_a = np.asarray(tmax, dtype=np.float64)
    if np.any(tmin_a > tmax_a):
        i = int(np.flatnonzero(np.atleast_1d(tmin_a > tmax_a))[0])
        raise OrderingError(f"tmin > tmax at position {i}")
    out = (tmin_a + tmax_a) / 2.0
    return float(out) if out.ndim == 0 else out


def _check_doy(day_of_year):
    doy = np.asarray(day_of_year)
    if np.any((doy < 1) | (doy > 366)) or np.any(doy != np.floor(doy)):
        raise DomainError("day_of_year must be an integer in 1..366")
    # day 366 uses the day-365 astronomy
    return np.minimum(doy, 365).astype(np.float64)


def extraterrestrial_radiation(latitude, day_of_year):
    """Daily extraterrestrial radiation (MJ m-2 day-1).

    Parameters
    ----------
    latitude : float or array
        Latitude in radians, ``|latitude| < pi/2``.
    day_of_year : int or array
        Calendar day 1..366.
    """
    lat = np.asarray(latitude, dtype=np.float64)
    if np.any(np.abs(lat) >= math.pi / 2):
        raise DomainError("latitude must satisfy |latitude| < pi/2 (radians)")
    j = _check_doy(day_of_year)
    decl = 0.409 * np.sin(2.0 * math.pi * j / 365.0 - 1.39)
    dr = 1.0 + 0.033 * np.cos(2.0 * math.pi * j / 365.0)
    ws = np.arccos(np.clip(-np.tan(lat) * np.tan(decl), -1.0, 1.0))
    re = (24.0 * 60.0 / math.pi) * SOLAR_CONSTANT * dr * (
        ws * np.sin(lat) * np.sin(decl) + np.cos(lat) * np.cos(decl) * np.sin(ws)
    )
    return float(re) if re.ndim == 0 else re


def oudin_pet(tmean, latitude, day_of_year):
    """Oudin potential evapotranspiration (mm/day).

    ``Re * 0.408 * (T + 5) / 100`` when ``T + 5 > 0``, zero otherwise.
    Arguments broadcast against each other.
    """
    t = np.asarray(tmean, dtype=np.float64)
    re = np.asarray(extraterrestrial_radiation(latitude, day_of_year))
    pet = np.where(t + 5.0 > 0.0, re * INV_LATENT_HEAT * (t + 5.0) / 100.0, 0.0)
    pet = np.maximum(pet, 0.0)
    return float(pet) if pet.ndim == 0 else pet
