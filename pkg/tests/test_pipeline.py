import numpy as np
import pytest

from tsds.autocorr import BgDecision, BgTestResult, DwDecision, DwTestResult, dw_statistic, rho_hat
from tsds.decompose import DecompositionModel
from tsds.errors import InconclusivePolicyError, RhoOutOfRangeError, TooShortError
from tsds.io import format_report
from tsds.pipeline import (PipelineConfig, Verdict, _flag, cochrane_orcutt,
                           cochrane_orcutt_transform, detect, estimate_rho)
from tsds.series import TimeSeries
from tsds.synthetic import ar1, seasonal_series


class TestTransform:
    def test_rho_zero_is_identity(self):
        y = np.array([3.0, 1.0, 4.0, 1.0, 5.0, 9.0])
        x = np.array([2.0, 7.0, 1.0, 8.0, 2.0, 8.0])
        tr = cochrane_orcutt_transform(y, x, 0.0)
        np.testing.assert_array_equal(tr.y_transformed, y[1:])
        np.testing.assert_array_equal(tr.x_transformed, x[1:])
        assert len(tr.y_transformed) == len(y) - 1

    @pytest.mark.parametrize("rho", [-0.8, -0.3, 0.25, 0.6, 0.95])
    def test_noiseless_recovery(self, rho):
        x = np.cos(np.arange(30) * 0.7) + np.arange(30) * 0.1
        y = 4.0 + 2.5 * x
        tr = cochrane_orcutt_transform(y, x, rho)
        assert tr.refit.coefficients[1] == pytest.approx(2.5, abs=1e-9)
        assert tr.beta0_original == pytest.approx(4.0, abs=1e-9)

    @pytest.mark.parametrize("rho", [1.0, -1.0, 1.5])
    def test_rho_out_of_range(self, rho):
        with pytest.raises(RhoOutOfRangeError):
            cochrane_orcutt_transform(np.arange(5.0), np.arange(5.0), rho)

    def test_too_short(self):
        with pytest.raises(TooShortError):
            cochrane_orcutt_transform([1.0, 2.0], [1.0, 3.0], 0.2)

    def test_iteration_converges(self):
        rng = np.random.default_rng(4)
        x = rng.normal(size=2000)
        y = 1 + 2 * x + ar1(2000, 0.6, rng)
        tr, rounds = cochrane_orcutt(y, x, max_iterations=50)
        assert 1 < rounds < 50
        assert tr.rho_used == pytest.approx(0.6, abs=0.05)
        assert tr.refit.coefficients[1] == pytest.approx(2.0, abs=0.05)


class TestEstimateRho:
    def test_white_noise(self):
        e = np.random.default_rng(6).normal(size=5000)
        assert estimate_rho(e, "lag1") == pytest.approx(0.0, abs=0.03)
        assert estimate_rho(e, "dw") == pytest.approx(0.0, abs=0.03)

    def test_dw_route_is_clamped(self):
        assert estimate_rho([2.0, 2.0, 2.0, 2.0], "dw") == 0.999

    def test_methods_differ_by_endpoint_gap(self):
        e = np.random.default_rng(7).normal(size=50)
        gap = (e[0] ** 2 + e[-1] ** 2) / (2 * (e @ e))
        assert estimate_rho(e, "dw") - estimate_rho(e, "lag1") == pytest.approx(gap, abs=1e-12)


def _dw(decision):
    return DwTestResult(1.8, 0.1, 100, 1, 1.65, 1.69, 0.05, decision)


def _bg(decision):
    return BgTestResult(1.0, 7, 93, 0.01, 14.07, 0.5, 0.05, decision)


class TestPolicy:
    cfg = PipelineConfig()

    def test_tiebreak_uses_bg_only_when_inconclusive(self):
        notes = []
        assert _flag(_dw(DwDecision.INCONCLUSIVE), _bg(BgDecision.AUTOCORRELATION), self.cfg, notes)
        assert not _flag(_dw(DwDecision.NO_AUTOCORRELATION), _bg(BgDecision.AUTOCORRELATION), self.cfg, [])

    def test_inconclusive_with_clean_bg_carries_caveat(self):
        notes = []
        assert not _flag(_dw(DwDecision.INCONCLUSIVE), _bg(BgDecision.NO_AUTOCORRELATION), self.cfg, notes)
        assert any("caveat" in n for n in notes)

    def test_negative_counts_only_when_two_sided(self):
        assert not _flag(_dw(DwDecision.NEGATIVE), None, PipelineConfig(bg_policy="off"), [])
        assert _flag(_dw(DwDecision.NEGATIVE), None, PipelineConfig(bg_policy="off", dw_sides="both"), [])

    def test_either(self):
        cfg = PipelineConfig(bg_policy="either")
        assert _flag(_dw(DwDecision.NO_AUTOCORRELATION), _bg(BgDecision.AUTOCORRELATION), cfg, [])

    def test_inconclusive_without_bg_raises(self):
        with pytest.raises(InconclusivePolicyError):
            _flag(_dw(DwDecision.INCONCLUSIVE), None, PipelineConfig(bg_policy="off"), [])

    @pytest.mark.parametrize("kw", [dict(max_iterations=0), dict(alpha=0.1), dict(model="loess")])
    def test_config_validation(self, kw):
        with pytest.raises(ValueError):
            PipelineConfig(**kw)


class TestDetect:
    def test_clean_series(self):
        rep = detect(seasonal_series(seed=1))
        assert rep.verdict is Verdict.NO_ANOMALY
        assert rep.model is DecompositionModel.ADDITIVE
        assert rep.transform is None

    def test_injected_ar1(self):
        rep = detect(seasonal_series(seed=1, rho=0.6), PipelineConfig(remediation_enabled=True))
        assert rep.verdict is Verdict.POSSIBLE_ATTACK
        assert rep.dw_result.decision is DwDecision.POSITIVE
        tr = rep.transform
        assert tr is not None and tr.rho_used == pytest.approx(rep.dw_result.rho_hat)
        assert abs(tr.dw_after - 2) < abs(rep.dw_result.dw - 2)

    def test_both_models_give_two_blocks(self):
        rep = detect(seasonal_series(seed=2, rho=0.6), PipelineConfig(model="both"))
        assert [b.model for b in rep.blocks] == [DecompositionModel.ADDITIVE,
                                                 DecompositionModel.MULTIPLICATIVE]
        assert rep.verdict is Verdict.POSSIBLE_ATTACK
        assert (rep.verdict is Verdict.POSSIBLE_ATTACK) == any(b.flagged for b in rep.blocks)

    def test_fit_is_lagged_residual_regression(self):
        rep = detect(seasonal_series(seed=3))
        e = rep.blocks[0].decomposition.error_terms()
        fit = rep.blocks[0].fit
        assert fit.names == ["resid_lag1"] and fit.n == len(e) - 1
        assert fit.coefficients[0] == pytest.approx((e[1:] @ e[:-1]) / (e[:-1] @ e[:-1]))
        assert f"{fit.cond_no:#.3g}" == "1.00"

    def test_dw_is_on_decomposition_residuals(self):
        rep = detect(seasonal_series(seed=3))
        e = rep.blocks[0].decomposition.error_terms()
        assert rep.dw_result.dw == dw_statistic(e)
        assert rep.dw_result.rho_hat == rho_hat(e)

    def test_aic_lags(self):
        rep = detect(seasonal_series(seed=3), PipelineConfig(k_policy="aic"))
        assert 1 <= rep.bg_result.k <= 14

    def test_too_short(self):
        with pytest.raises(TooShortError):
            detect(TimeSeries(np.arange(1.0, 13.0), 7))

    def test_deterministic(self):
        cfg = PipelineConfig(model="both", remediation_enabled=True, max_iterations=3)
        a = format_report(detect(seasonal_series(seed=9, rho=0.5), cfg))
        b = format_report(detect(seasonal_series(seed=9, rho=0.5), cfg))
        assert a == b
