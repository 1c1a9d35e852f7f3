import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays
from scipy import stats

from tsds.errors import DegenerateVarianceError, RankDeficientError, TooFewRowsError
from tsds.ols import DesignMatrix, jarque_bera, ols_fit, omnibus, residual_moments


def test_exact_fit_no_intercept():
    f = ols_fit(DesignMatrix({"x": [1, 2, 3]}, include_intercept=False), [2, 4, 6])
    assert f.coefficients[0] == pytest.approx(2.0)
    np.testing.assert_allclose(f.residuals, 0, atol=1e-12)
    assert f.r2 == pytest.approx(1.0)


def test_standardized_single_column_cond_no():
    x = np.random.default_rng(0).normal(size=50)
    x = (x - x.mean()) / np.linalg.norm(x - x.mean())
    f = ols_fit(DesignMatrix({"x": x}, include_intercept=False), np.random.default_rng(1).normal(size=50))
    assert f"{f.cond_no:#.3g}" == "1.00"


def test_against_normal_equations(rng):
    X = rng.normal(size=(80, 3))
    y = X @ [1.0, -2.0, 0.5] + 3 + rng.normal(size=80)
    f = ols_fit(DesignMatrix({"a": X[:, 0], "b": X[:, 1], "c": X[:, 2]}), y)
    A = np.column_stack([np.ones(80), X])
    beta = np.linalg.solve(A.T @ A, A.T @ y)
    np.testing.assert_allclose(f.coefficients, beta, rtol=1e-10)
    resid = y - A @ beta
    s2 = resid @ resid / (80 - 4)
    np.testing.assert_allclose(f.std_errors, np.sqrt(s2 * np.diag(np.linalg.inv(A.T @ A))), rtol=1e-9)
    tcrit = stats.t.ppf(0.975, 76)
    np.testing.assert_allclose(f.ci_low, beta - tcrit * f.std_errors, rtol=1e-9)


def test_information_criteria_identities(rng):
    x = rng.normal(size=40)
    f = ols_fit(DesignMatrix({"x": x}), 2 * x + rng.normal(size=40))
    assert f.k == 2
    assert f.log_likelihood == pytest.approx(-20 * (math.log(2 * math.pi) + math.log(f.ssr / 40) + 1))
    assert f.aic == 2 * f.k - 2 * f.log_likelihood
    assert f.bic == f.k * math.log(f.n) - 2 * f.log_likelihood


def test_rank_deficient():
    x = np.arange(10.0)
    with pytest.raises(RankDeficientError):
        ols_fit(DesignMatrix({"a": x, "b": 2 * x}), x)


def test_too_few_rows():
    with pytest.raises(TooFewRowsError):
        ols_fit(DesignMatrix({"a": [1.0, 2.0]}), [1.0, 2.0])


def test_jarque_bera_alternating():
    jb, p = jarque_bera([1, -1, 1, -1])
    assert jb == pytest.approx(4 / 6 * (0 + (1 - 3) ** 2 / 4), abs=1e-12)
    assert p == pytest.approx(math.exp(-jb / 2))


def test_jarque_bera_degenerate():
    with pytest.raises(DegenerateVarianceError):
        jarque_bera([2.0] * 6)


def test_jarque_bera_null_acceptance():
    rng = np.random.default_rng(5)
    accepted = sum(jarque_bera(rng.normal(size=5000))[1] > 0.05 for _ in range(200))
    assert accepted >= 0.95 * 200 - 6  # binomial slack, about 2 sd


def test_moments():
    assert residual_moments([1, -1, 1, -1]) == (0.0, 1.0, 0.0, 1.0)
    mean, var, s, k = residual_moments([3.0] * 5)
    assert (mean, var) == (3.0, 0.0) and math.isnan(s) and math.isnan(k)
    assert residual_moments([-3, -1, 0.5, -0.5, 1, 3])[2] == 0.0


def test_omnibus_matches_scipy(rng):
    e = rng.standard_t(4, size=300)
    k2, p = omnibus(e)
    ref = stats.normaltest(e)
    assert k2 == pytest.approx(ref.statistic, rel=1e-10)
    assert p == pytest.approx(ref.pvalue, rel=1e-8)


@given(arrays(np.float64, st.integers(8, 40), elements=st.floats(-100, 100)),
       st.floats(-5, 5), st.booleans())
def test_fit_invariants(x, slope, intercept):
    if np.ptp(x) < 1e-3 or np.linalg.norm(x) < 1e-3:
        return
    noise = np.sin(np.arange(x.size) * 1.7) * 3
    y = slope * x + 1.5 + noise
    f = ols_fit(DesignMatrix({"x": x}, include_intercept=intercept), y)
    A = DesignMatrix({"x": x}, include_intercept=intercept).matrix()
    scale = max(1.0, np.abs(y).max() * np.abs(A).max() * x.size)
    np.testing.assert_allclose(A.T @ f.residuals, 0, atol=1e-9 * scale)
    if intercept:
        assert abs(f.residuals.sum()) <= 1e-8 * x.size * max(1.0, np.abs(y).max())
    if f.ssr > 1e-12 * (y @ y):
        assert f.f_stat == pytest.approx(f.t_stats[-1] ** 2, rel=1e-9)
        assert np.all(f.ci_low < f.coefficients) and np.all(f.coefficients < f.ci_high)
