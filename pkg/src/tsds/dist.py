"""Normal, chi-square, Student-t and F distributions.

Built on the regularized incomplete gamma and beta functions (series /
continued-fraction evaluation). Quantiles invert the CDFs by bracketing
and bisection down to a 1e-3 wide interval, then safeguarded Newton steps.
Scalar functions only.
"""
from __future__ import annotations

import math

from .errors import BadProbabilityError

EPS = 1e-16
FPMIN = 1e-300
MAXIT = 10_000


# ---------------------------------------------------------------- special functions

def _gamma_series(a, x):
    ap = a
    term = total = 1.0 / a
    for _ in range(MAXIT):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_cfrac(a, x):
    # modified Lentz
    b = x + 1.0 - a
    c = 1.0 / FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, MAXIT):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < FPMIN:
            d = FPMIN
        c = b + an / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def gammainc_lower(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x)."""
    if x <= 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < a + 1.0:
        return _gamma_series(a, x)
    return 1.0 - _gamma_cfrac(a, x)


def gammainc_upper(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x)."""
    if x <= 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return 1.0 - _gamma_series(a, x)
    return _gamma_cfrac(a, x)


def _beta_cfrac(a, b, x):
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < FPMIN:
        d = FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, MAXIT):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            break
    return h


def betainc(a: float, b: float, x: float, y: float | None = None) -> float:
    """Regularized incomplete beta I_x(a, b).

    ``y`` optionally supplies 1 - x computed without cancellation.
    """
    if y is None:
        y = 1.0 - x
    if x <= 0.0:
        return 0.0
    if y <= 0.0:
        return 1.0
    lbt = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
           + a * math.log(x) + b * math.log(y))
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(lbt) * _beta_cfrac(a, b, x) / a
    return 1.0 - math.exp(lbt) * _beta_cfrac(b, a, y) / b


# ---------------------------------------------------------------- quantile inversion

def _check_p(p):
    if not (0.0 < p < 1.0):
        raise BadProbabilityError(f"probability must lie in (0, 1), got {p!r}")


def _invert(cdf, pdf, p, lo, hi, lower_bound=None):
    """Solve cdf(x) = p. ``lo``/``hi`` are expanded until they bracket p."""
    _check_p(p)
    while cdf(hi) < p:
        lo, hi = hi, hi * 2.0 if hi > 0 else 1.0
    while cdf(lo) > p:
        if lower_bound is not None:
            lo = lower_bound + (lo - lower_bound) / 2.0
        else:
            lo, hi = lo * 2.0 if lo < 0 else -1.0, lo
    while hi - lo > 1e-3 * max(1.0, abs(lo), abs(hi)):
        mid = 0.5 * (lo + hi)
        if cdf(mid) < p:
            lo = mid
        else:
            hi = mid
        if mid == lo == hi:
            break
    x = 0.5 * (lo + hi)
    for _ in range(500):
        err = cdf(x) - p
        if err == 0.0:
            return x
        if err < 0:
            lo = x
        else:
            hi = x
        dens = pdf(x)
        step = err / dens if dens > 0 else math.inf
        nxt = x - step
        if not (lo < nxt < hi):
            nxt = 0.5 * (lo + hi)
        if abs(nxt - x) <= 4 * EPS * abs(x) or hi - lo <= 4 * EPS * max(abs(lo), abs(hi)):
            return nxt
        x = nxt
    return x


# ---------------------------------------------------------------- normal

def normal_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def normal_sf(x: float) -> float:
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def normal_quantile(p: float) -> float:
    return _invert(normal_cdf, normal_pdf, p, -1.0, 1.0)


# ---------------------------------------------------------------- chi-square

def chi_square_pdf(x: float, k: float) -> float:
    if x <= 0.0:
        if k == 2:
            return 0.5 if x == 0.0 else 0.0
        return 0.0
    a = 0.5 * k
    return math.exp((a - 1.0) * math.log(x) - 0.5 * x - a * math.log(2.0) - math.lgamma(a))


def chi_square_cdf(x: float, k: float) -> float:
    return gammainc_lower(0.5 * k, 0.5 * x)


def chi_square_sf(x: float, k: float) -> float:
    return gammainc_upper(0.5 * k, 0.5 * x)


def chi_square_quantile(p: float, k: float) -> float:
    return _invert(lambda x: chi_square_cdf(x, k), lambda x: chi_square_pdf(x, k),
                   p, 0.0, max(1.0, float(k)), lower_bound=0.0)


# ---------------------------------------------------------------- Student t

def student_t_pdf(t: float, df: float) -> float:
    return math.exp(math.lgamma(0.5 * (df + 1)) - math.lgamma(0.5 * df)
                    - 0.5 * math.log(df * math.pi)
                    - 0.5 * (df + 1) * math.log1p(t * t / df))


def student_t_sf(t: float, df: float) -> float:
    """Upper tail P(T > t)."""
    t2 = t * t
    tail = 0.5 * betainc(0.5 * df, 0.5, df / (df + t2), t2 / (df + t2))
    return tail if t >= 0 else 1.0 - tail


def student_t_cdf(t: float, df: float) -> float:
    return student_t_sf(-t, df)


def student_t_quantile(p: float, df: float) -> float:
    return _invert(lambda t: student_t_cdf(t, df), lambda t: student_t_pdf(t, df), p, -1.0, 1.0)


# ---------------------------------------------------------------- F

def f_pdf(x: float, df1: float, df2: float) -> float:
    if x <= 0.0:
        return 0.0
    a, b = 0.5 * df1, 0.5 * df2
    return math.exp(a * math.log(df1) + b * math.log(df2) + (a - 1.0) * math.log(x)
                    - (a + b) * math.log(df2 + df1 * x)
                    - (math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)))


def f_sf(x: float, df1: float, df2: float) -> float:
    if x <= 0.0:
        return 1.0
    fx = df1 * x
    return betainc(0.5 * df2, 0.5 * df1, df2 / (df2 + fx), fx / (df2 + fx))


def f_cdf(x: float, df1: float, df2: float) -> float:
    if x <= 0.0:
        return 0.0
    if df1 * x > df2:
        return 1.0 - f_sf(x, df1, df2)
    fx = df1 * x
    return betainc(0.5 * df1, 0.5 * df2, fx / (fx + df2), df2 / (fx + df2))


def f_quantile(p: float, df1: float, df2: float) -> float:
    return _invert(lambda x: f_cdf(x, df1, df2), lambda x: f_pdf(x, df1, df2),
                   p, 0.0, 1.0, lower_bound=0.0)
