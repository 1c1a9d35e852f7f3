"""Plain-text regression summary and dependency-free SVG panels."""
from __future__ import annotations

import math
from typing import List

import numpy as np

from .decompose import DecompositionModel, DecompositionResult
from .ols import OlsFit

WIDTH = 78


def _g(fmt, x):
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "nan"
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return fmt % x


def render_summary_table(fit: OlsFit, title: str = "Prediction Error") -> str:
    """Fixed-width coefficient table followed by the diagnostic block."""
    lines = [title.center(WIDTH), "=" * WIDTH,
             f"{'':<16}{'coeff':>12}{'std err':>11}{'t':>11}{'[0.025':>13}{'0.975]':>11}",
             "-" * WIDTH]
    for i, name in enumerate(fit.names):
        lines.append(f"{name:<16.16}{_g('%.4f', fit.coefficients[i]):>12}"
                     f"{_g('%.3f', fit.std_errors[i]):>11}{_g('%.3f', fit.t_stats[i]):>11}"
                     f"{_g('%.3f', fit.ci_low[i]):>13}{_g('%.3f', fit.ci_high[i]):>11}")
    lines.append("=" * WIDTH)
    pairs = [
        ("F-statistic:", _g("%#.4g", fit.f_stat), "BIC:", _g("%#.4g", fit.bic)),
        ("R-squared:", _g("%#.3f", fit.r2), "Adj. R-squared:", _g("%#.3f", fit.adj_r2)),
        ("Log-Likelihood:", _g("%#.5g", fit.log_likelihood), "AIC:", _g("%#.4g", fit.aic)),
        ("Prob(Omnibus):", _g("%#.3f", fit.omnibus_pvalue), "Skew:", _g("%#.3f", fit.skew)),
        ("Jarque-Bera (JB):", _g("%.3f", fit.jarque_bera), "Prob(JB):", _g("%#.3g", fit.jb_pvalue)),
        ("Prob(F-statistic):", _g("%#.3g", fit.f_pvalue), "Omnibus:", _g("%#.3f", fit.omnibus)),
        ("Kurtosis:", _g("%#.3f", fit.kurtosis), "Cond. No.:", _g("%#.3g", fit.cond_no)),
        ("No. Observations:", str(fit.n), "Df Residuals:", str(fit.df_resid)),
    ]
    for a, av, b, bv in pairs:
        lines.append(f"{a:<20}{av:>16}   {b:<20}{bv:>16}")
    lines.append("=" * WIDTH)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- SVG

PANEL_W, PANEL_H, MARGIN_L, MARGIN_T, GAP = 760, 140, 70, 30, 30


def _path(xs, ys):
    parts: List[str] = []
    pen_up = True
    for x, y in zip(xs, ys):
        if not np.isfinite(y):
            pen_up = True
            continue
        parts.append(f"{'M' if pen_up else 'L'}{x:.2f},{y:.2f}")
        pen_up = False
    return " ".join(parts)


def render_decomposition_svg(result: DecompositionResult, title: str = "") -> str:
    """Four stacked line panels: observed, trend, seasonal, residual."""
    panels = [("observed", result.observed), ("trend", result.trend),
              ("seasonal", result.seasonal), ("residual", result.residual)]
    n = len(result.observed)
    base = 0.0 if result.model is DecompositionModel.ADDITIVE else 1.0
    height = MARGIN_T + len(panels) * (PANEL_H + GAP) + 10
    width = MARGIN_L + PANEL_W + 20
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
           f'<rect width="{width}" height="{height}" fill="white"/>',
           f'<text x="{MARGIN_L}" y="18" font-size="14">{_escape(title)}</text>']
    xs = MARGIN_L + np.arange(n) * (PANEL_W / max(n - 1, 1))
    for i, (name, data) in enumerate(panels):
        top = MARGIN_T + i * (PANEL_H + GAP)
        data = np.asarray(data, dtype=float)
        finite = data[np.isfinite(data)]
        lo, hi = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
        if hi == lo:
            lo, hi = lo - 0.5, hi + 0.5
        ys = top + PANEL_H - (data - lo) / (hi - lo) * PANEL_H
        out += [
            f'<rect x="{MARGIN_L}" y="{top}" width="{PANEL_W}" height="{PANEL_H}" '
            'fill="none" stroke="#888" stroke-width="0.5"/>',
            f'<text x="{MARGIN_L + 4}" y="{top + 12}">{name}</text>',
            f'<text x="{MARGIN_L - 4}" y="{top + 10}" text-anchor="end">{hi:.4g}</text>',
            f'<text x="{MARGIN_L - 4}" y="{top + PANEL_H}" text-anchor="end">{lo:.4g}</text>',
        ]
        if name in ("seasonal", "residual") and lo < base < hi:
            zy = top + PANEL_H - (base - lo) / (hi - lo) * PANEL_H
            out.append(f'<line x1="{MARGIN_L}" y1="{zy:.2f}" x2="{MARGIN_L + PANEL_W}" y2="{zy:.2f}" '
                       'stroke="#ccc" stroke-width="0.5"/>')
        out.append(f'<path d="{_path(xs, ys)}" fill="none" stroke="#1f77b4" stroke-width="1"/>')
    bottom = MARGIN_T + len(panels) * (PANEL_H + GAP) - GAP + 14
    out += [f'<text x="{MARGIN_L}" y="{bottom}">0</text>',
            f'<text x="{MARGIN_L + PANEL_W}" y="{bottom}" text-anchor="end">{n - 1}</text>',
            "</svg>"]
    return "\n".join(out) + "\n"


def _escape(s):
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
