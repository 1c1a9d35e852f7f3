"""Ordinary least squares with a regression-summary diagnostic block."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from . import dist
from .errors import (DegenerateVarianceError, RankDeficientError,
                     TooFewRowsError, TsdsError)

RANK_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class DesignMatrix:
    """Named regressor columns, optionally preceded by an intercept."""

    columns: Dict[str, np.ndarray] = field(default_factory=dict)
    include_intercept: bool = True

    def __post_init__(self):
        cols = {str(k): np.asarray(v, dtype=float).ravel() for k, v in self.columns.items()}
        lengths = {len(v) for v in cols.values()}
        if len(lengths) > 1:
            raise TsdsError(f"regressor columns differ in length: {sorted(lengths)}")
        for name, v in cols.items():
            if not np.all(np.isfinite(v)):
                raise TsdsError(f"non-finite entry in regressor {name!r}")
        object.__setattr__(self, "columns", cols)

    @property
    def n(self):
        if self.columns:
            return len(next(iter(self.columns.values())))
        return None

    @property
    def names(self) -> List[str]:
        return (["const"] if self.include_intercept else []) + list(self.columns)

    def matrix(self, n=None) -> np.ndarray:
        rows = self.n if self.n is not None else n
        if rows is None:
            raise TsdsError("empty design matrix needs an explicit row count")
        parts = ([np.ones(rows)] if self.include_intercept else []) + list(self.columns.values())
        if not parts:
            raise TsdsError("design matrix has no columns")
        return np.column_stack(parts)


@dataclass(frozen=True, eq=False)
class OlsFit:
    names: List[str]
    coefficients: np.ndarray
    std_errors: np.ndarray
    t_stats: np.ndarray
    p_values: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    residuals: np.ndarray
    fitted: np.ndarray
    n: int
    k: int  # all estimated mean parameters, intercept included
    has_intercept: bool
    df_model: int
    df_resid: int
    ssr: float
    r2: float
    adj_r2: float
    f_stat: float
    f_pvalue: float
    log_likelihood: float
    aic: float
    bic: float
    skew: float
    kurtosis: float
    jarque_bera: float
    jb_pvalue: float
    omnibus: float
    omnibus_pvalue: float
    cond_no: float


def residual_moments(residuals) -> Tuple[float, float, float, float]:
    """Mean, population variance, skewness and (non-excess) kurtosis.

    Skewness and kurtosis are NaN when the variance is zero.
    """
    e = np.asarray(residuals, dtype=float)
    if e.size < 2:
        raise TooFewRowsError("need at least 2 residuals")
    mean = float(e.mean())
    d = e - mean
    m2 = float(np.mean(d * d))
    if m2 == 0.0:
        return mean, 0.0, math.nan, math.nan
    m3 = float(np.mean(d ** 3))
    m4 = float(np.mean(d ** 4))
    return mean, m2, m3 / m2 ** 1.5, m4 / m2 ** 2


def jarque_bera(residuals) -> Tuple[float, float]:
    e = np.asarray(residuals, dtype=float)
    if e.size < 4:
        raise TooFewRowsError("Jarque-Bera needs at least 4 residuals")
    _, var, s, k = residual_moments(e)
    if var == 0.0:
        raise DegenerateVarianceError("residuals have zero variance")
    jb = e.size / 6.0 * (s * s + (k - 3.0) ** 2 / 4.0)
    return jb, dist.chi_square_sf(jb, 2)


def _skew_z(s, n):
    # D'Agostino (1970) transform of sample skewness
    y = s * math.sqrt((n + 1) * (n + 3) / (6.0 * (n - 2)))
    beta2 = (3.0 * (n * n + 27 * n - 70) * (n + 1) * (n + 3)
             / ((n - 2.0) * (n + 5) * (n + 7) * (n + 9)))
    w2 = -1.0 + math.sqrt(2.0 * (beta2 - 1.0))
    delta = 1.0 / math.sqrt(0.5 * math.log(w2))
    alpha = math.sqrt(2.0 / (w2 - 1.0))
    ya = y / alpha
    return delta * math.log(ya + math.sqrt(ya * ya + 1.0))


def _kurt_z(b2, n):
    # Anscombe & Glynn (1983) transform of sample kurtosis
    mean = 3.0 * (n - 1) / (n + 1)
    var = 24.0 * n * (n - 2) * (n - 3) / ((n + 1.0) ** 2 * (n + 3) * (n + 5))
    x = (b2 - mean) / math.sqrt(var)
    sqrtbeta1 = (6.0 * (n * n - 5 * n + 2) / ((n + 7.0) * (n + 9))
                 * math.sqrt(6.0 * (n + 3) * (n + 5) / (n * (n - 2.0) * (n - 3))))
    a = 6.0 + 8.0 / sqrtbeta1 * (2.0 / sqrtbeta1 + math.sqrt(1.0 + 4.0 / sqrtbeta1 ** 2))
    term1 = 1.0 - 2.0 / (9.0 * a)
    denom = 1.0 + x * math.sqrt(2.0 / (a - 4.0))
    if denom == 0.0:
        return math.nan
    term2 = math.copysign(abs((1.0 - 2.0 / a) / denom) ** (1.0 / 3.0), denom)
    return (term1 - term2) / math.sqrt(2.0 / (9.0 * a))


def omnibus(residuals) -> Tuple[float, float]:
    """D'Agostino-Pearson K^2 normality statistic and its chi2(2) p-value.

    NaN for fewer than 8 observations or zero variance.
    """
    e = np.asarray(residuals, dtype=float)
    n = e.size
    if n < 8:
        return math.nan, math.nan
    _, var, s, b2 = residual_moments(e)
    if var == 0.0:
        return math.nan, math.nan
    k2 = _skew_z(s, n) ** 2 + _kurt_z(b2, n) ** 2
    return k2, dist.chi_square_sf(k2, 2)


def condition_number(a) -> float:
    """Largest over smallest singular value after scaling columns to unit norm."""
    a = np.asarray(a, dtype=float)
    norms = np.linalg.norm(a, axis=0)
    if np.any(norms == 0):
        return math.inf
    s = np.linalg.svd(a / norms, compute_uv=False)
    return math.inf if s[-1] == 0 else float(s[0] / s[-1])


def ols_fit(X: DesignMatrix, y) -> OlsFit:
    """Least-squares fit of ``y`` on ``X`` through a QR factorization."""
    y = np.asarray(y, dtype=float).ravel()
    n = y.size
    if X.n is not None and X.n != n:
        raise TsdsError(f"design has {X.n} rows but y has {n}")
    if not np.all(np.isfinite(y)):
        raise TsdsError("non-finite entry in response")
    a = X.matrix(n)
    k = a.shape[1]
    if n <= k:
        raise TooFewRowsError(f"need more than {k} rows, got {n}")

    cond = condition_number(a)
    if not cond < 1.0 / RANK_RTOL:
        raise RankDeficientError(f"design matrix is rank deficient (cond {cond:.3g})")

    q, r = np.linalg.qr(a)
    beta = np.linalg.solve(r, q.T @ y)
    r_inv = np.linalg.solve(r, np.eye(k))
    xtx_inv_diag = np.sum(r_inv * r_inv, axis=1)

    fitted = a @ beta
    resid = y - fitted
    ssr = float(resid @ resid)
    df_resid = n - k
    df_model = k - 1 if X.include_intercept else k

    sigma2 = ssr / df_resid
    se = np.sqrt(sigma2 * xtx_inv_diag)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = beta / se
    pvals = np.array([2.0 * dist.student_t_sf(abs(ti), df_resid) if np.isfinite(ti) else
                      (0.0 if np.isinf(ti) else math.nan) for ti in t])
    tcrit = dist.student_t_quantile(0.975, df_resid)
    ci_low, ci_high = beta - tcrit * se, beta + tcrit * se

    if X.include_intercept:
        centered = fitted - y.mean()
        ess = float(centered @ centered)
        tss = float(np.sum((y - y.mean()) ** 2))
    else:
        ess = float(fitted @ fitted)
        tss = float(y @ y)
    r2 = 1.0 - ssr / tss if tss > 0 else math.nan
    adj_r2 = 1.0 - (n - int(X.include_intercept)) / df_resid * (1.0 - r2)
    if df_model == 0:
        f_stat = f_p = math.nan
    elif ssr == 0.0:
        f_stat, f_p = math.inf, 0.0
    else:
        f_stat = (ess / df_model) / sigma2
        f_p = dist.f_sf(f_stat, df_model, df_resid)

    llf = -0.5 * n * (math.log(2.0 * math.pi) + math.log(ssr / n) + 1.0) if ssr > 0 else math.inf
    aic = 2.0 * k - 2.0 * llf
    bic = k * math.log(n) - 2.0 * llf

    _, var, skew, kurt = residual_moments(resid)
    if var > 0 and n >= 4:
        jb, jb_p = jarque_bera(resid)
    else:
        jb = jb_p = math.nan
    omni, omni_p = omnibus(resid)

    return OlsFit(
        names=X.names, coefficients=beta, std_errors=se, t_stats=t, p_values=pvals,
        ci_low=ci_low, ci_high=ci_high, residuals=resid, fitted=fitted,
        n=n, k=k, has_intercept=X.include_intercept, df_model=df_model, df_resid=df_resid,
        ssr=ssr, r2=r2, adj_r2=adj_r2, f_stat=f_stat, f_pvalue=f_p,
        log_likelihood=llf, aic=aic, bic=bic, skew=skew, kurtosis=kurt,
        jarque_bera=jb, jb_pvalue=jb_p, omnibus=omni, omnibus_pvalue=omni_p, cond_no=cond,
    )
