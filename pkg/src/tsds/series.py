"""Time-series value type, validation and seasonal-period rules."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import BadPeriodError, IrregularSpacingError, NonFiniteError, TooShortError

SPACING_RTOL = 1e-9


class Frequency(enum.Enum):
    DAILY = "daily"
    MONTHLY = "monthly"
    QUARTERLY = "quarterly"


# An int stands for Custom(m).
FrequencyLike = Union[Frequency, str, int]

_PERIODS = {Frequency.DAILY: 7, Frequency.MONTHLY: 12, Frequency.QUARTERLY: 4}


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Equally spaced observations with a seasonal period.

    ``values`` and ``timestamps`` are stored as read-only float arrays.
    Timestamps, when given, are epoch seconds and only label outputs; all
    computations use the position index.
    """

    values: np.ndarray
    period_m: int
    timestamps: Optional[np.ndarray] = None
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(np.ravel(self.values)))
        if self.timestamps is not None:
            object.__setattr__(self, "timestamps", _frozen(np.ravel(self.timestamps)))

    def __len__(self):
        return len(self.values)


def validate(series: TimeSeries) -> TimeSeries:
    """Return ``series`` unchanged if every invariant holds, else raise."""
    m = series.period_m
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)) or m < 2:
        raise BadPeriodError(m)
    y = series.values
    bad = np.flatnonzero(~np.isfinite(y))
    if bad.size:
        raise NonFiniteError(int(bad[0]))
    if len(y) < 2 * m:
        raise TooShortError(2 * m, len(y))
    ts = series.timestamps
    if ts is not None:
        if len(ts) != len(y):
            raise IrregularSpacingError(min(len(ts), len(y)))
        bad = np.flatnonzero(~np.isfinite(ts))
        if bad.size:
            raise IrregularSpacingError(int(bad[0]))
        if len(ts) > 1:
            d = np.diff(ts)
            step = d[0]
            if step <= 0:
                raise IrregularSpacingError(1)
            off = np.flatnonzero((d <= 0) | (np.abs(d - step) > SPACING_RTOL * abs(step)))
            if off.size:
                raise IrregularSpacingError(int(off[0]) + 1)
    return series


def parse_frequency(freq: FrequencyLike) -> Union[Frequency, int]:
    if isinstance(freq, Frequency):
        return freq
    if isinstance(freq, str):
        try:
            return Frequency(freq.lower())
        except ValueError:
            raise ValueError(f"unknown frequency {freq!r}") from None
    if isinstance(freq, bool) or not isinstance(freq, (int, np.integer)) or freq < 2:
        raise BadPeriodError(freq)
    return int(freq)


def default_period(freq: FrequencyLike) -> int:
    """Seasonal period for a sampling frequency: daily 7, monthly 12, quarterly 4.

    An integer is taken as a custom period and returned as is.
    """
    f = parse_frequency(freq)
    if isinstance(f, Frequency):
        return _PERIODS[f]
    return f
