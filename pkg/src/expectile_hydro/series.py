"""Date-aligned daily series."""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field

import numpy as np

from .errors import AlignmentError, CoverageError, DomainError, InvalidArgumentError

MM_PER_DAY = "mm/day"
DEG_C = "degC"
_UNITS = (MM_PER_DAY, DEG_C)
_ONE_DAY = dt.timedelta(days=1)


def as_date(value) -> dt.date:
    if isinstance(value, dt.datetime):
        return value.date()
    if isinstance(value, dt.date):
        return value
    if isinstance(value, str):
        try:
            return dt.date.fromisoformat(value)
        except ValueError as exc:
            raise InvalidArgumentError(f"not an ISO-8601 date: {value!r}") from exc
    raise InvalidArgumentError(f"cannot interpret {value!r} as a date")


@dataclass(frozen=True)
class DateInterval:
    """Closed interval of calendar days ``[start, end]``."""

    start: dt.date
    end: dt.date

    def __post_init__(self):
        object.__setattr__(self, "start", as_date(self.start))
        object.__setattr__(self, "end", as_date(self.end))
        if self.end < self.start:
            raise InvalidArgumentError(f"interval ends before it starts: {self.start}..{self.end}")

    @property
    def n_days(self) -> int:
        return (self.end - self.start).days + 1

    def contains(self, other: DateInterval) -> bool:
        return self.start <= other.start and other.end <= self.end

    def __str__(self):
        return f"{self.start.isoformat()}..{self.end.isoformat()}"


@dataclass(frozen=True, eq=False)
class DailySeries:
    """Contiguous daily values starting at ``start_date``.

    Values are stored as a read-only float64 array. Equality compares dates,
    unit and values bitwise.
    """

    start_date: dt.date
    values: np.ndarray
    unit: str = MM_PER_DAY
    nonnegative: bool = field(default=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "start_date", as_date(self.start_date))
        values = np.array(self.values, dtype=np.float64, copy=True).reshape(-1)
        if self.unit not in _UNITS:
            raise InvalidArgumentError(f"unknown unit {self.unit!r}; expected one of {_UNITS}")
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            raise DomainError(f"non-finite value on {self.start_date + bad * _ONE_DAY}")
        if self.nonnegative and np.any(values < 0):
            bad = int(np.flatnonzero(values < 0)[0])
            raise DomainError(f"negative value {values[bad]} on {self.start_date + bad * _ONE_DAY}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.size

    def __eq__(self, other):
        if not isinstance(other, DailySeries):
            return NotImplemented
        return (
            self.start_date == other.start_date
            and self.unit == other.unit
            and np.array_equal(self.values, other.values)
        )

    @property
    def end_date(self) -> dt.date:
        return self.start_date + (len(self) - 1) * _ONE_DAY

    @property
    def interval(self) -> DateInterval:
        return DateInterval(self.start_date, self.end_date)

    def dates(self) -> list[dt.date]:
        return [self.start_date + i * _ONE_DAY for i in range(len(self))]

    def index_of(self, day) -> int:
        return (as_date(day) - self.start_date).days

    def window(self, interval: DateInterval) -> DailySeries:
        """Sub-series restricted to ``interval`` (must be covered)."""
        if not self.interval.contains(interval):
            raise CoverageError(f"series {self.interval} does not cover {interval}")
        i0 = self.index_of(interval.start)
        return DailySeries(interval.start, self.values[i0 : i0 + interval.n_days], self.unit)

    def with_values(self, values) -> DailySeries:
        return DailySeries(self.start_date, values, self.unit)


def check_aligned(*series: DailySeries) -> None:
    first = series[0]
    for other in series[1:]:
        if other.start_date != first.start_date or len(other) != len(first):
            raise AlignmentError(
                f"series not aligned: {first.interval} vs {other.interval}"
            )
