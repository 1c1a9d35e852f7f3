"""
Classical seasonal decomposition by moving averages.

Additive model      y[t] = T[t] + S[t] + R[t]
Multiplicative      y[t] = T[t] * S[t] * R[t]

The trend is a centered moving average (2xm for even m), the seasonal
indices are per-position means of the detrended series, normalized to sum
to 0 (additive) or average 1 (multiplicative). Positions where the moving
average window does not fit are NaN in the full-length arrays and excluded
from ``defined_range``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import (DivisionByZeroTrendError, EmptySeasonError,
                     NonPositiveValuesError, TooShortError)
from .series import TimeSeries, validate


class DecompositionModel(enum.Enum):
    ADDITIVE = "additive"
    MULTIPLICATIVE = "multiplicative"


def _model(model) -> DecompositionModel:
    if isinstance(model, DecompositionModel):
        return model
    return DecompositionModel(str(model).lower())


def half_window(m: int) -> int:
    # odd m: (m-1)/2 ; even m (2xm filter spans m+1 points): m/2
    return m // 2


def ma_weights(m: int) -> np.ndarray:
    if m % 2 == 0:
        w = np.ones(m + 1)
        w[0] = w[-1] = 0.5
    else:
        w = np.ones(m)
    return w / m


def centered_moving_average(values, m: int) -> np.ndarray:
    """Centered m-term moving average; 2xm average when m is even.

    Returns an array the length of ``values`` with NaN on the ``m // 2``
    leading and trailing positions.
    """
    y = np.asarray(values, dtype=float)
    w = ma_weights(m)
    if len(y) < len(w):
        raise TooShortError(len(w), len(y))
    h = half_window(m)
    out = np.full(len(y), np.nan)
    out[h:len(y) - h] = np.convolve(y, w, mode="valid")
    return out


def detrend(values, trend, model) -> np.ndarray:
    model = _model(model)
    y = np.asarray(values, dtype=float)
    tr = np.asarray(trend, dtype=float)
    if model is DecompositionModel.ADDITIVE:
        return y - tr
    zero = np.flatnonzero(tr == 0)
    if zero.size:
        raise DivisionByZeroTrendError(int(zero[0]))
    return y / tr


def seasonal_indices(detrended, m: int, model) -> np.ndarray:
    """Per-position means of the detrended values, normalized.

    Position j collects indices t with t % m == j; NaN entries are skipped.
    """
    model = _model(model)
    d = np.asarray(detrended, dtype=float)
    idx = np.empty(m)
    for j in range(m):
        vals = d[j::m]
        vals = vals[np.isfinite(vals)]
        if vals.size == 0:
            raise EmptySeasonError(j)
        idx[j] = vals.mean()
    if model is DecompositionModel.ADDITIVE:
        return idx - idx.mean()
    return idx / idx.mean()


@dataclass(frozen=True, eq=False)
class DecompositionResult:
    model: DecompositionModel
    observed: np.ndarray
    trend: np.ndarray
    seasonal_indices: np.ndarray
    seasonal: np.ndarray
    residual: np.ndarray
    defined_range: Tuple[int, int]  # inclusive, 0-based

    @property
    def defined(self) -> slice:
        first, last = self.defined_range
        return slice(first, last + 1)

    def error_terms(self) -> np.ndarray:
        """Defined-range residuals centered on zero for the serial-correlation tests.

        Multiplicative residuals fluctuate around 1, so they are shifted by -1.
        """
        r = self.residual[self.defined]
        if self.model is DecompositionModel.MULTIPLICATIVE:
            return r - 1.0
        return r.copy()


def decompose(series: TimeSeries, model="additive") -> DecompositionResult:
    model = _model(model)
    validate(series)
    y = np.array(series.values)
    m = series.period_m
    if model is DecompositionModel.MULTIPLICATIVE:
        bad = np.flatnonzero(y <= 0)
        if bad.size:
            raise NonPositiveValuesError(int(bad[0]))

    trend = centered_moving_average(y, m)
    h = half_window(m)
    n = len(y)
    idx = seasonal_indices(detrend(y, trend, model), m, model)
    seasonal = idx[np.arange(n) % m]
    if model is DecompositionModel.ADDITIVE:
        resid = y - trend - seasonal
    else:
        resid = y / (trend * seasonal)

    for a in (trend, idx, seasonal, resid):
        a.setflags(write=False)
    y.setflags(write=False)
    return DecompositionResult(model, y, trend, idx, seasonal, resid, (h, n - 1 - h))
