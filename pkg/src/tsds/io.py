"""CSV ingestion, components CSV and the key=value report format."""
from __future__ import annotations

import csv
import math
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List

import numpy as np

from .decompose import DecompositionResult
from .errors import EmptyFileError, ParseError
from .pipeline import AnomalyReport
from .series import TimeSeries, validate

REPORT_VERSION = 1


def _parse_timestamp(text):
    try:
        return float(int(text))
    except ValueError:
        pass
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    dt = datetime.fromisoformat(text)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.timestamp()


def ingest(path, period_m: int, label: str | None = None) -> List[TimeSeries]:
    """Read a headered CSV (timestamp, value[, zone]) into validated series.

    Rows keep file order; with a zone column there is one series per zone,
    in order of first appearance. Line numbers in errors count the header
    as line 1.
    """
    path = Path(path)
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise ParseError(0, f"cannot read {path}: {exc.strerror or exc}") from None
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise EmptyFileError(f"{path} is empty")
        cols = [h.strip().lower() for h in header]
        for required in ("timestamp", "value"):
            if required not in cols:
                raise ParseError(1, f"missing column {required!r}")
        i_ts, i_val = cols.index("timestamp"), cols.index("value")
        i_zone = cols.index("zone") if "zone" in cols else None

        zones: Dict[str, tuple] = {}
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) < len(cols):
                raise ParseError(line, "missing value")
            ts_text, val_text = row[i_ts].strip(), row[i_val].strip()
            if not val_text:
                raise ParseError(line, "missing value")
            try:
                value = float(val_text)
            except ValueError:
                raise ParseError(line, "non-numeric value") from None
            if not math.isfinite(value):
                raise ParseError(line, "non-finite value")
            try:
                ts = _parse_timestamp(ts_text)
            except ValueError:
                raise ParseError(line, f"bad timestamp {ts_text!r}") from None
            zone = row[i_zone].strip() if i_zone is not None else (label or path.stem)
            ts_list, v_list = zones.setdefault(zone, ([], []))
            ts_list.append(ts)
            v_list.append(value)
    if not zones:
        raise EmptyFileError(f"{path} has no data rows")
    return [validate(TimeSeries(np.array(v), period_m, np.array(ts), label=z))
            for z, (ts, v) in zones.items()]


def _num(x) -> str:
    """Shortest round-tripping decimal text; locale independent."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return repr(float(x))


COMPONENT_COLUMNS = ("index", "timestamp", "observed", "trend", "seasonal", "residual")


def write_components(path, result: DecompositionResult, series: TimeSeries) -> None:
    """One row per observation; trend and residual are blank outside the defined range."""
    ts = series.timestamps
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COMPONENT_COLUMNS)
        for i in range(len(result.observed)):
            w.writerow([i, _num(ts[i]) if ts is not None else "", _num(result.observed[i]),
                        _num(result.trend[i]), _num(result.seasonal[i]), _num(result.residual[i])])


def read_components(path) -> Dict[str, np.ndarray]:
    """Inverse of write_components; blanks come back as NaN."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return {c: np.array([float(r[c]) if r[c] else np.nan for r in rows])
            for c in COMPONENT_COLUMNS}


# ---------------------------------------------------------------- report

def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return f"{x:.12g}"
    return str(x).replace("\n", " ")


def report_items(report: AnomalyReport) -> List[tuple]:
    items = [("report.version", REPORT_VERSION), ("series.label", report.series_label),
             ("series.n", len(report.blocks[0].decomposition.observed))]
    for b in report.blocks:
        p = b.model.value
        first, last = b.decomposition.defined_range
        f = b.fit
        items += [
            (f"{p}.defined_first", first), (f"{p}.defined_last", last),
            (f"{p}.fit.n", f.n), (f"{p}.fit.coef", f.coefficients[0]),
            (f"{p}.fit.std_err", f.std_errors[0]), (f"{p}.fit.t", f.t_stats[0]),
            (f"{p}.fit.r2", f.r2), (f"{p}.fit.f_stat", f.f_stat), (f"{p}.fit.f_pvalue", f.f_pvalue),
            (f"{p}.fit.log_likelihood", f.log_likelihood), (f"{p}.fit.aic", f.aic), (f"{p}.fit.bic", f.bic),
            (f"{p}.fit.jarque_bera", f.jarque_bera), (f"{p}.fit.jb_pvalue", f.jb_pvalue),
            (f"{p}.dw.statistic", b.dw_result.dw), (f"{p}.dw.rho_hat", b.dw_result.rho_hat),
            (f"{p}.dw.n", b.dw_result.n), (f"{p}.dw.d_lower", b.dw_result.d_lower),
            (f"{p}.dw.d_upper", b.dw_result.d_upper), (f"{p}.dw.alpha", b.dw_result.alpha),
            (f"{p}.dw.decision", b.dw_result.decision.value),
        ]
        if b.bg_result is not None:
            g = b.bg_result
            items += [(f"{p}.bg.lm", g.lm), (f"{p}.bg.k", g.k), (f"{p}.bg.n_effective", g.n_effective),
                      (f"{p}.bg.r2_aux", g.r2_aux), (f"{p}.bg.critical_value", g.critical_value),
                      (f"{p}.bg.p_value", g.p_value), (f"{p}.bg.decision", g.decision.value)]
        items.append((f"{p}.flagged", b.flagged))
        if b.transform is not None:
            t = b.transform
            items += [(f"{p}.transform.rho", t.rho_used), (f"{p}.transform.rounds", b.rounds),
                      (f"{p}.transform.beta0_original", t.beta0_original),
                      (f"{p}.transform.beta1", t.refit.coefficients[1]),
                      (f"{p}.transform.dw_after", t.dw_after)]
            if b.dw_after_result is not None:
                items.append((f"{p}.transform.dw_decision", b.dw_after_result.decision.value))
            if b.bg_after_result is not None:
                items += [(f"{p}.transform.bg_lm", b.bg_after_result.lm),
                          (f"{p}.transform.bg_decision", b.bg_after_result.decision.value)]
    items.append(("verdict", report.verdict.value))
    items += [(f"note.{i + 1}", line) for i, line in enumerate(report.narrative)]
    return items


def format_report(report: AnomalyReport) -> str:
    return "".join(f"{k}={_fmt(v)}\n" for k, v in report_items(report))


def parse_report(text: str) -> Dict[str, str]:
    out = {}
    for line in text.splitlines():
        if line:
            key, _, value = line.partition("=")
            out[key] = value
    return out
