import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from tsds.autocorr import (BgDecision, DwDecision, bg_test, choose_k, dw_bounds, dw_decide,
                           dw_statistic, dw_test, load_dw_table, rho_hat)
from tsds.errors import AllZeroResidualsError, TooShortError, UnsupportedAlphaError
from tsds.ols import DesignMatrix
from tsds.synthetic import ar1

nonzero_vectors = arrays(np.float64, st.integers(2, 200), elements=st.floats(-1e3, 1e3)).filter(
    lambda e: (e @ e) > 1e-6)


class TestDurbinWatson:
    def test_constant_is_zero(self):
        assert dw_statistic([2.0, 2.0, 2.0, 2.0]) == 0.0

    def test_alternating(self):
        assert dw_statistic([1, -1, 1, -1]) == pytest.approx(3.0)

    def test_errors(self):
        with pytest.raises(AllZeroResidualsError):
            dw_statistic([0.0, 0.0, 0.0])
        with pytest.raises(TooShortError):
            dw_statistic([1.0])

    def test_white_noise_near_two(self):
        rng = np.random.default_rng(11)
        assert dw_statistic(rng.normal(size=5000)) == pytest.approx(2.0, abs=0.06)

    @given(nonzero_vectors)
    def test_range(self, e):
        assert -1e-12 <= dw_statistic(e) <= 4 + 1e-12

    @given(nonzero_vectors)
    def test_exact_gap_to_rho(self, e):
        gap = (e[0] ** 2 + e[-1] ** 2) / (e @ e)
        assert abs(dw_statistic(e) - 2 * (1 - rho_hat(e))) == pytest.approx(gap, abs=1e-12)


class TestRhoHat:
    def test_constant(self):
        assert rho_hat([3.0] * 4) == pytest.approx(0.75)

    def test_alternating(self):
        assert rho_hat([1, -1, 1, -1]) == pytest.approx(-0.75)

    def test_ar1_recovery(self):
        e = ar1(10_000, 0.5, np.random.default_rng(2))
        assert rho_hat(e) == pytest.approx(0.5, abs=0.03)
        assert rho_hat(e, "pearson") == pytest.approx(0.5, abs=0.03)

    @given(nonzero_vectors)
    def test_bounded(self, e):
        assert -1 - 1e-12 <= rho_hat(e) <= 1 + 1e-12


class TestBounds:
    def test_bundled_table_shape(self):
        t = load_dw_table()
        assert (t.n_min, t.n_max) == (15, 200)
        assert set(t.rows) == {(a, k) for a in (0.05, 0.01) for k in range(1, 6)}

    @pytest.mark.parametrize("n, k, alpha, dl, du", [
        # published 5% and 1% bounds
        (15, 1, 0.05, 1.077, 1.361), (20, 2, 0.05, 1.100, 1.537), (40, 2, 0.05, 1.391, 1.600),
        (50, 3, 0.05, 1.421, 1.674), (100, 1, 0.05, 1.654, 1.694), (200, 5, 0.05, 1.718, 1.820),
        (15, 5, 0.05, 0.562, 2.220), (100, 1, 0.01, 1.522, 1.562),
    ])
    def test_against_published_values(self, n, k, alpha, dl, du):
        lo, hi = dw_bounds(n, k, alpha)
        assert lo == pytest.approx(dl, abs=6e-4)
        assert hi == pytest.approx(du, abs=6e-4)

    def test_interpolation_between_rows(self):
        lo45, hi45 = dw_bounds(45, 1)
        lo50, hi50 = dw_bounds(50, 1)
        lo, hi = dw_bounds(47, 1)
        assert lo == pytest.approx(lo45 + 0.4 * (lo50 - lo45))
        assert hi == pytest.approx(hi45 + 0.4 * (hi50 - hi45))

    def test_asymptotic_band(self):
        lo, hi = dw_bounds(400, 1, 0.05)
        assert lo == hi == pytest.approx(2 - 2 * 1.6448536269514722 / 20)

    def test_unsupported_alpha(self):
        with pytest.raises(UnsupportedAlphaError):
            dw_bounds(100, 1, 0.10)

    def test_below_table(self):
        with pytest.raises(TooShortError):
            dw_bounds(10, 1)


class TestDecide:
    @pytest.mark.parametrize("n", [15, 60, 100, 200, 1000])
    def test_two_is_no_autocorrelation(self, n):
        assert dw_decide(2.0, n, 1) is DwDecision.NO_AUTOCORRELATION

    def test_positive(self):
        assert dw_decide(0.4, 100, 1, 0.05) is DwDecision.POSITIVE

    def test_inconclusive(self):
        assert dw_decide(1.67, 100, 1, 0.05) is DwDecision.INCONCLUSIVE

    def test_negative_mirror(self):
        assert dw_decide(3.6, 100, 1) is DwDecision.NEGATIVE
        assert dw_decide(4 - 1.67, 100, 1) is DwDecision.INCONCLUSIVE

    def test_custom_table(self, tmp_path):
        p = tmp_path / "t.csv"
        p.write_text("n,k,alpha,d_l,d_u\n20,1,0.05,1.0,1.5\n40,1,0.05,1.2,1.7\n")
        assert dw_bounds(30, 1, 0.05, load_dw_table(p)) == pytest.approx((1.1, 1.6))

    def test_result_fields(self):
        e = np.random.default_rng(3).normal(size=120)
        r = dw_test(e)
        assert r.n == 120 and r.d_lower <= r.d_upper
        assert 0 <= r.dw <= 4 and -1 <= r.rho_hat <= 1
        assert r.dw - 2 * (1 - r.rho_hat) == pytest.approx(-(e[0] ** 2 + e[-1] ** 2) / (e @ e), abs=1e-12)


class TestBreuschGodfrey:
    def test_zero_r2_fixture(self):
        # centered lag-1 cross products vanish on rows 1..12
        y = np.array([1.0, 0, -1, 0] * 3 + [1.0])
        r = bg_test(y, DesignMatrix({}), 1)
        assert r.lm == pytest.approx(0.0, abs=1e-12)
        assert r.decision is BgDecision.NO_AUTOCORRELATION
        assert r.n_effective == 12

    def test_lm_identity_and_decision(self):
        rng = np.random.default_rng(8)
        x = rng.normal(size=150)
        y = 1 + x + ar1(150, 0.4, rng)
        r = bg_test(y, DesignMatrix({"x": x}), 3)
        assert r.lm == pytest.approx(r.n_effective * r.r2_aux, rel=1e-12)
        assert r.n_effective == 147
        assert (r.decision is BgDecision.AUTOCORRELATION) == (r.lm > r.critical_value)

    def test_zero_padding_keeps_rows(self):
        rng = np.random.default_rng(9)
        y = rng.normal(size=60)
        r = bg_test(y, DesignMatrix({}), 4, presample="zero")
        assert r.n_effective == 60

    def test_power_against_strong_ar1(self):
        rng = np.random.default_rng(10)
        hits = 0
        for _ in range(100):
            e = ar1(200, 0.9, rng)
            hits += bg_test(e, DesignMatrix({}), 1).decision is BgDecision.AUTOCORRELATION
        assert hits >= 99

    def test_too_short(self):
        with pytest.raises(TooShortError):
            bg_test(np.arange(5.0), DesignMatrix({"x": np.ones(5) * np.arange(5)}), 3)


class TestChooseK:
    @pytest.mark.parametrize("freq, k", [("daily", 7), ("quarterly", 4), ("monthly", 12), (9, 9)])
    def test_rule_of_thumb(self, freq, k):
        assert choose_k(freq) == k

    def test_aic_finds_ar3(self):
        rng = np.random.default_rng(12)
        n = 3000
        u = rng.normal(size=n + 100)
        e = np.zeros(n + 100)
        for t in range(3, n + 100):
            e[t] = 0.5 * e[t - 1] - 0.3 * e[t - 2] + 0.4 * e[t - 3] + u[t]
        e = e[100:]
        assert choose_k(5, e, max_lag=10) == 3


def test_dw_spread_matches_white_noise_theory():
    # var(dw) -> 4/n for white noise; this is what bounds how often dw lands within +-0.06
    n = 5000
    dws = np.array([dw_statistic(np.random.default_rng(10_000 + s).normal(size=n))
                    for s in range(2000)])
    assert dws.std() == pytest.approx(2 / np.sqrt(n), rel=0.05)
    assert dws.mean() == pytest.approx(2.0, abs=0.003)
