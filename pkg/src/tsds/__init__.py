"""Seasonal decomposition and residual serial-correlation tests for anomaly screening."""
from .autocorr import (BgDecision, BgTestResult, DwDecision, DwTestResult, bg_test,
                       choose_k, dw_bounds, dw_decide, dw_statistic, dw_test, rho_hat)
from .decompose import (DecompositionModel, DecompositionResult, centered_moving_average,
                        decompose, detrend, seasonal_indices)
from .ols import DesignMatrix, OlsFit, jarque_bera, ols_fit, residual_moments
from .pipeline import (AnomalyReport, ArTransformResult, PipelineConfig, Verdict,
                       cochrane_orcutt, cochrane_orcutt_transform, detect, estimate_rho)
from .series import Frequency, TimeSeries, default_period, validate

__version__ = "0.1.0"
