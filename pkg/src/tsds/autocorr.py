"""Durbin-Watson and Breusch-Godfrey serial-correlation tests."""
from __future__ import annotations

import csv
import enum
import functools
import math
from dataclasses import dataclass
from importlib import resources
from typing import Dict, Optional, Tuple

import numpy as np

from . import dist
from .errors import (AllZeroResidualsError, RankDeficientAuxError,
                     RankDeficientError, TooShortError, TsdsError,
                     UnsupportedAlphaError)
from .ols import DesignMatrix, ols_fit
from .series import FrequencyLike, default_period

SUPPORTED_ALPHAS = (0.05, 0.01)


class DwDecision(enum.Enum):
    NO_AUTOCORRELATION = "no_autocorrelation"
    POSITIVE = "positive_autocorrelation"
    NEGATIVE = "negative_autocorrelation"
    INCONCLUSIVE = "inconclusive"


class BgDecision(enum.Enum):
    NO_AUTOCORRELATION = "no_autocorrelation"
    AUTOCORRELATION = "autocorrelation"


@dataclass(frozen=True)
class DwTestResult:
    dw: float
    rho_hat: float
    n: int
    k: int
    d_lower: float
    d_upper: float
    alpha: float
    decision: DwDecision


@dataclass(frozen=True)
class BgTestResult:
    lm: float
    k: int
    n_effective: int
    r2_aux: float
    critical_value: float
    p_value: float
    alpha: float
    decision: BgDecision


def _residuals(residuals):
    e = np.asarray(residuals, dtype=float).ravel()
    if e.size < 2:
        raise TooShortError(2, e.size)
    ss = float(e @ e)
    if ss == 0.0:
        raise AllZeroResidualsError("residuals are all zero")
    return e, ss


def dw_statistic(residuals) -> float:
    """sum (e_t - e_{t-1})^2 / sum e_t^2, in [0, 4]."""
    e, ss = _residuals(residuals)
    d = np.diff(e)
    return float(d @ d) / ss


def rho_hat(residuals, method: str = "ratio") -> float:
    """Lag-1 autocorrelation of the residuals.

    ``ratio`` is sum e_t e_{t-1} / sum e_t^2 with no re-centering, the form
    tied to the Durbin-Watson statistic; ``pearson`` correlates the two
    overlapping windows.
    """
    e, ss = _residuals(residuals)
    if method == "ratio":
        return float(e[1:] @ e[:-1]) / ss
    if method == "pearson":
        a, b = e[1:] - e[1:].mean(), e[:-1] - e[:-1].mean()
        den = math.sqrt(float(a @ a) * float(b @ b))
        if den == 0.0:
            raise AllZeroResidualsError("lagged windows have zero variance")
        return float(a @ b) / den
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------- critical values

@dataclass(frozen=True)
class DwTable:
    """Bounds keyed by (alpha, k) -> sorted arrays of n, d_l, d_u."""

    rows: Dict[Tuple[float, int], Tuple[np.ndarray, np.ndarray, np.ndarray]]

    @property
    def n_min(self):
        return min(int(v[0][0]) for v in self.rows.values())

    @property
    def n_max(self):
        return max(int(v[0][-1]) for v in self.rows.values())


def load_dw_table(path=None) -> DwTable:
    """Read a bounds CSV with columns n, k, alpha, d_l, d_u (default: bundled table)."""
    if path is None:
        return _bundled_table()
    with open(path, newline="") as fh:
        return _parse_table(fh)


@functools.lru_cache(maxsize=1)
def _bundled_table():
    with resources.files("tsds").joinpath("data/dw_bounds.csv").open("r", newline="") as fh:
        return _parse_table(fh)


def _parse_table(fh):
    acc = {}
    for row in csv.DictReader(fh):
        key = (round(float(row["alpha"]), 6), int(row["k"]))
        acc.setdefault(key, []).append((int(row["n"]), float(row["d_l"]), float(row["d_u"])))
    if not acc:
        raise TsdsError("empty Durbin-Watson table")
    rows = {}
    for key, items in acc.items():
        items.sort()
        arr = np.array(items, dtype=float)
        rows[key] = (arr[:, 0], arr[:, 1], arr[:, 2])
    return DwTable(rows)


def dw_bounds(n: int, k: int = 1, alpha: float = 0.05, table: Optional[DwTable] = None):
    """(d_lower, d_upper) for ``n`` observations and ``k`` regressors besides the intercept.

    Linear interpolation in n inside the table; beyond its largest n both
    bounds collapse to the normal approximation 2 - 2 z_alpha / sqrt(n).
    """
    if alpha not in SUPPORTED_ALPHAS:
        raise UnsupportedAlphaError(alpha)
    table = table or _bundled_table()
    key = (round(alpha, 6), int(k))
    if key not in table.rows:
        raise TsdsError(f"no Durbin-Watson bounds for k={k} at alpha={alpha}")
    ns, dl, du = table.rows[key]
    if n < ns[0]:
        raise TooShortError(int(ns[0]), n)
    if n > ns[-1]:
        c = 2.0 - 2.0 * dist.normal_quantile(1.0 - alpha) / math.sqrt(n)
        return c, c
    return float(np.interp(n, ns, dl)), float(np.interp(n, ns, du))


def dw_decide(dw: float, n: int, k: int = 1, alpha: float = 0.05,
              table: Optional[DwTable] = None) -> DwDecision:
    """Bounds-test decision; values above 2 are tested as 4 - dw for negative correlation."""
    dl, du = dw_bounds(n, k, alpha, table)
    d = dw if dw <= 2.0 else 4.0 - dw
    if d > du:
        return DwDecision.NO_AUTOCORRELATION
    if d < dl:
        return DwDecision.POSITIVE if dw <= 2.0 else DwDecision.NEGATIVE
    return DwDecision.INCONCLUSIVE


def dw_test(residuals, k: int = 1, alpha: float = 0.05,
            table: Optional[DwTable] = None) -> DwTestResult:
    e = np.asarray(residuals, dtype=float).ravel()
    dw = dw_statistic(e)
    dl, du = dw_bounds(e.size, k, alpha, table)
    return DwTestResult(dw=dw, rho_hat=rho_hat(e), n=e.size, k=k, d_lower=dl, d_upper=du,
                        alpha=alpha, decision=dw_decide(dw, e.size, k, alpha, table))


# ---------------------------------------------------------------- Breusch-Godfrey

def _lag_matrix(e, k, presample):
    T = e.size
    if presample == "drop":
        rows = np.arange(k, T)
        lags = np.column_stack([e[rows - j] for j in range(1, k + 1)])
    elif presample == "zero":
        rows = np.arange(T)
        padded = np.concatenate([np.zeros(k), e])
        lags = np.column_stack([padded[k - j:k - j + T] for j in range(1, k + 1)])
    else:
        raise ValueError(f"unknown presample handling {presample!r}")
    return rows, lags


def bg_test(y, X: DesignMatrix, k: int, alpha: float = 0.05,
            presample: str = "drop") -> BgTestResult:
    """Breusch-Godfrey LM test for serial correlation up to lag ``k``.

    The residuals of y on X are regressed on an intercept, the non-constant
    columns of X and k residual lags. With ``presample="drop"`` the first k
    observations are dropped, so LM = (T - k) R^2; ``"zero"`` pads the
    presample lags with zeros and keeps all T rows.
    """
    if alpha not in SUPPORTED_ALPHAS:
        raise UnsupportedAlphaError(alpha)
    if k < 1:
        raise ValueError("lag count must be >= 1")
    y = np.asarray(y, dtype=float).ravel()
    T = y.size
    n_reg = len(X.columns)
    if T <= k + n_reg + 2:
        raise TooShortError(k + n_reg + 3, T)

    e = ols_fit(X, y).residuals
    rows, lags = _lag_matrix(e, k, presample)
    cols = {name: col[rows] for name, col in X.columns.items()}
    for j in range(k):
        cols[f"resid_lag{j + 1}"] = lags[:, j]
    try:
        aux = ols_fit(DesignMatrix(cols, include_intercept=True), e[rows])
    except RankDeficientError as exc:
        raise RankDeficientAuxError(str(exc)) from None

    n_eff = rows.size
    r2 = min(max(aux.r2, 0.0), 1.0) if math.isfinite(aux.r2) else 0.0
    lm = n_eff * r2
    crit = dist.chi_square_quantile(1.0 - alpha, k)
    decision = BgDecision.AUTOCORRELATION if lm > crit else BgDecision.NO_AUTOCORRELATION
    return BgTestResult(lm=lm, k=k, n_effective=n_eff, r2_aux=r2, critical_value=crit,
                        p_value=dist.chi_square_sf(lm, k), alpha=alpha, decision=decision)


def choose_k(freq: FrequencyLike, residuals=None, max_lag: Optional[int] = None) -> int:
    """Lag count for the Breusch-Godfrey test.

    Without residuals: the seasonal rule (quarterly 4, daily 7, monthly 12,
    custom m). With residuals: the k in 1..max_lag (default 2m) minimizing
    the AIC of an autoregression of the residuals on their first k lags,
    all fits sharing the same estimation rows.
    """
    m = default_period(freq)
    if residuals is None:
        return m
    e = np.asarray(residuals, dtype=float).ravel()
    kmax = max_lag if max_lag is not None else 2 * m
    kmax = min(kmax, (e.size - 3) // 2)
    if kmax < 1:
        raise TooShortError(5, e.size)
    best_k, best_aic = 1, math.inf
    target = e[kmax:]
    for k in range(1, kmax + 1):
        cols = {f"lag{j}": e[kmax - j:e.size - j] for j in range(1, k + 1)}
        fit = ols_fit(DesignMatrix(cols, include_intercept=True), target)
        if fit.aic < best_aic:
            best_k, best_aic = k, fit.aic
    return best_k
