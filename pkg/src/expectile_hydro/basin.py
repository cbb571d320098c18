"""Basin records: validated daily forcing and streamflow for one catchment."""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidArgumentError, OrderingError
from .hydro import Forcings, daily_mean_temp, oudin_pet
from .series import DEG_C, DailySeries, DateInterval, as_date

_ONE_DAY = dt.timedelta(days=1)


@dataclass(frozen=True, eq=False)
class BasinRecord:
    basin_id: str
    latitude: float  # degrees north
    start_date: dt.date
    precip: np.ndarray  # mm/day
    tmin: np.ndarray  # degC
    tmax: np.ndarray  # degC
    q_obs: np.ndarray  # mm/day
    pet: np.ndarray | None = None  # mm/day; computed with Oudin when absent

    def __post_init__(self):
        object.__setattr__(self, "start_date", as_date(self.start_date))
        n = len(self.precip)
        arrays = {}
        for name in ("precip", "tmin", "tmax", "q_obs", "pet"):
            value = getattr(self, name)
            if value is None:
                continue
            arr = np.array(value, dtype=np.float64).reshape(-1)
            if arr.size != n:
                raise InvalidArgumentError(f"{name} has {arr.size} values, expected {n}")
            bad = np.flatnonzero(~np.isfinite(arr))
            if bad.size:
                raise DomainError(f"missing or non-finite {name} on {self.date(bad[0])}")
            if name in ("precip", "q_obs", "pet"):
                neg = np.flatnonzero(arr < 0)
                if neg.size:
                    raise DomainError(f"negative {name} ({arr[neg[0]]}) on {self.date(neg[0])}")
            arr.setflags(write=False)
            arrays[name] = arr
        if n == 0:
            raise InvalidArgumentError("basin record is empty")
        swapped = np.flatnonzero(arrays["tmin"] > arrays["tmax"])
        if swapped.size:
            raise OrderingError(f"tmin > tmax on {self.date(swapped[0])}")
        if not (math.isfinite(self.latitude) and abs(self.latitude) < 90):
            raise DomainError(f"latitude must lie in (-90, 90) degrees, got {self.latitude}")
        for name, arr in arrays.items():
            object.__setattr__(self, name, arr)

    def date(self, i) -> dt.date:
        return self.start_date + int(i) * _ONE_DAY

    def __len__(self):
        return len(self.precip)

    def __eq__(self, other):
        if not isinstance(other, BasinRecord):
            return NotImplemented
        same_pet = (self.pet is None and other.pet is None) or (
            self.pet is not None and other.pet is not None and np.array_equal(self.pet, other.pet)
        )
        return (
            self.basin_id == other.basin_id
            and self.latitude == other.latitude
            and self.start_date == other.start_date
            and np.array_equal(self.precip, other.precip)
            and np.array_equal(self.tmin, other.tmin)
            and np.array_equal(self.tmax, other.tmax)
            and np.array_equal(self.q_obs, other.q_obs)
            and same_pet
        )

    @property
    def interval(self) -> DateInterval:
        return DateInterval(self.start_date, self.date(len(self) - 1))

    def dates(self) -> list[dt.date]:
        return [self.date(i) for i in range(len(self))]

    def day_of_year(self) -> np.ndarray:
        return np.array([d.timetuple().tm_yday for d in self.dates()])

    def tmean(self) -> np.ndarray:
        return daily_mean_temp(self.tmin, self.tmax)

    def pet_values(self) -> np.ndarray:
        if self.pet is not None:
            return self.pet
        return oudin_pet(self.tmean(), math.radians(self.latitude), self.day_of_year())

    def precip_series(self) -> DailySeries:
        return DailySeries(self.start_date, self.precip, nonnegative=True)

    def pet_series(self) -> DailySeries:
        return DailySeries(self.start_date, self.pet_values(), nonnegative=True)

    def tmean_series(self) -> DailySeries:
        return DailySeries(self.start_date, self.tmean(), unit=DEG_C)

    def obs_series(self) -> DailySeries:
        return DailySeries(self.start_date, self.q_obs, nonnegative=True)

    def forcings(self) -> Forcings:
        return Forcings(self.precip_series(), self.pet_series())

    def with_observations(self, q_obs) -> BasinRecord:
        return BasinRecord(
            self.basin_id, self.latitude, self.start_date,
            self.precip, self.tmin, self.tmax, q_obs, self.pet,
        )
