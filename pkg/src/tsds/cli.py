"""Command-line entry point: tsds {decompose,dwtest,bgtest,detect,simulate}.

Exit status: 0 no anomaly evidence, 2 autocorrelation flagged (possible
cyber-attack), 1 operational error.
"""
from __future__ import annotations

import argparse
import os
import re
import sys
from pathlib import Path

from .autocorr import BgDecision, DwDecision, bg_test, choose_k, dw_test, load_dw_table
from .decompose import decompose
from .errors import TsdsError
from .io import format_report, ingest, write_components
from .pipeline import PipelineConfig, Verdict, detect
from .render import render_decomposition_svg, render_summary_table
from .series import default_period
from .synthetic import seasonal_series
from .ols import DesignMatrix

EXIT_OK, EXIT_ERROR, EXIT_FLAGGED = 0, 1, 2
FORMATS = ("text", "csv", "svg", "report")
DEFAULT_FORMATS = {"decompose": "text,csv,svg", "dwtest": "text", "bgtest": "text",
                   "detect": "text,report"}


def _formats(value):
    out = [f.strip() for f in value.split(",") if f.strip()]
    bad = [f for f in out if f not in FORMATS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown format(s): {', '.join(bad)}")
    return out


def _lags(value):
    if value == "aic":
        return value
    try:
        k = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError("--k takes a positive integer or 'aic'") from None
    if k < 1:
        raise argparse.ArgumentTypeError("--k must be >= 1")
    return k


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", required=True, help="CSV with timestamp,value[,zone]")
    per = common.add_mutually_exclusive_group(required=True)
    per.add_argument("--period", "-m", type=int, help="seasonal period m")
    per.add_argument("--frequency", choices=["daily", "monthly", "quarterly"])
    common.add_argument("--model", choices=["additive", "multiplicative", "both"], default="additive")
    common.add_argument("--k", type=_lags, default=None,
                        help="Breusch-Godfrey lags: integer or 'aic' (default: seasonal rule)")
    common.add_argument("--alpha", type=float, choices=[0.05, 0.01], default=0.05)
    common.add_argument("--remediate", action="store_true", help="apply the AR(1) transform when flagged")
    common.add_argument("--max-iterations", type=int, default=1)
    common.add_argument("--rho-method", choices=["lag1", "dw"], default="lag1")
    common.add_argument("--dw-sides", choices=["positive", "both"], default="positive")
    common.add_argument("--bg-policy", choices=["tiebreak", "either", "off"], default="tiebreak")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out-dir", default=".")
    common.add_argument("--format", type=_formats, default=None,
                        help=f"comma-separated subset of {','.join(FORMATS)}")
    common.add_argument("--dw-table", default=None, help="override the Durbin-Watson bounds CSV")

    p = argparse.ArgumentParser(prog="tsds", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in [("decompose", "write trend/seasonal/residual components"),
                        ("dwtest", "Durbin-Watson test on decomposition residuals"),
                        ("bgtest", "Breusch-Godfrey test on decomposition residuals"),
                        ("detect", "full pipeline with verdict")]:
        sub.add_parser(name, parents=[common], help=help_)

    sim = sub.add_parser("simulate", help="write a seeded synthetic series CSV")
    sim.add_argument("--output", "-o", required=True)
    sim.add_argument("--n", type=int, default=1000)
    sim.add_argument("--period", "-m", type=int, default=7)
    sim.add_argument("--rho", type=float, default=0.0, help="AR(1) coefficient of the noise")
    sim.add_argument("--seed", type=int, default=0)
    return p


def _color(text, code):
    if os.environ.get("TSDS_NO_COLOR") is not None or not sys.stdout.isatty():
        return text
    return f"\033[{code}m{text}\033[0m"


def _slug(label):
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", label) or "series"


def _config(args):
    k = args.k
    return PipelineConfig(
        model=args.model, alpha=args.alpha,
        k_policy="aic" if k == "aic" else "rule",
        lags=k if isinstance(k, int) else None,
        remediation_enabled=args.remediate, max_iterations=args.max_iterations,
        rho_method=args.rho_method, dw_sides=args.dw_sides, bg_policy=args.bg_policy,
        dw_table_path=args.dw_table)


def _cmd_decompose(args, series_list, config, formats, out):
    for s in series_list:
        for model in config.models:
            res = decompose(s, model)
            stem = out / f"{_slug(s.label)}_{model.value}"
            if "csv" in formats:
                write_components(f"{stem}_components.csv", res, s)
            if "svg" in formats:
                Path(f"{stem}.svg").write_text(render_decomposition_svg(res, f"{s.label} ({model.value})"))
            if "text" in formats:
                first, last = res.defined_range
                idx = " ".join(f"{v:.6g}" for v in res.seasonal_indices)
                sys.stdout.write(f"{s.label} [{model.value}] n={len(s)} m={s.period_m} "
                                 f"defined={first}..{last}\n  seasonal indices: {idx}\n")
    return EXIT_OK


def _cmd_dwtest(args, series_list, config, formats, out):
    table = load_dw_table(config.dw_table_path) if config.dw_table_path else None
    flagged = False
    for s in series_list:
        for model in config.models:
            r = dw_test(decompose(s, model).error_terms(), k=1, alpha=config.alpha, table=table)
            hit = r.decision is DwDecision.POSITIVE or (
                r.decision is DwDecision.NEGATIVE and config.dw_sides == "both")
            flagged |= hit
            sys.stdout.write(f"{s.label} [{model.value}] DW={r.dw:.4f} rho_hat={r.rho_hat:.4f} "
                             f"n={r.n} d_l={r.d_lower:.4f} d_u={r.d_upper:.4f} alpha={r.alpha} "
                             f"decision={r.decision.value}\n")
    return EXIT_FLAGGED if flagged else EXIT_OK


def _cmd_bgtest(args, series_list, config, formats, out):
    flagged = False
    for s in series_list:
        for model in config.models:
            e = decompose(s, model).error_terms()
            k = config.lags or (choose_k(s.period_m, e) if config.k_policy == "aic" else choose_k(s.period_m))
            r = bg_test(e[1:], DesignMatrix({"resid_lag1": e[:-1]}, include_intercept=False),
                        k, config.alpha, config.presample)
            flagged |= r.decision is BgDecision.AUTOCORRELATION
            sys.stdout.write(f"{s.label} [{model.value}] LM={r.lm:.4f} k={r.k} n={r.n_effective} "
                             f"R2_aux={r.r2_aux:.6f} critical={r.critical_value:.4f} "
                             f"p={r.p_value:.4g} decision={r.decision.value}\n")
    return EXIT_FLAGGED if flagged else EXIT_OK


def _cmd_detect(args, series_list, config, formats, out):
    flagged = False
    for s in series_list:
        rep = detect(s, config)
        flagged |= rep.verdict is Verdict.POSSIBLE_ATTACK
        if "text" in formats:
            block = []
            for b in rep.blocks:
                block.append(render_summary_table(b.fit, f"{s.label} {b.model.value} Prediction Error"))
            block += [f"  {line}\n" for line in rep.narrative[:-1]]
            verdict = rep.verdict.value
            code = "31" if rep.verdict is Verdict.POSSIBLE_ATTACK else "32"
            block.append(f"verdict: {_color(verdict, code)}\n\n")
            sys.stdout.write("".join(block))
        if "report" in formats:
            (out / f"{_slug(s.label)}_report.txt").write_text(format_report(rep))
        if "csv" in formats or "svg" in formats:
            _cmd_decompose(args, [s], config, [f for f in formats if f != "text"], out)
    return EXIT_FLAGGED if flagged else EXIT_OK


def _cmd_simulate(args):
    s = seasonal_series(n=args.n, m=args.period, rho=args.rho, seed=args.seed)
    with open(args.output, "w") as fh:
        fh.write("timestamp,value\n")
        for i, v in enumerate(s.values):
            fh.write(f"{i},{float(v)!r}\n")
    return EXIT_OK


COMMANDS = {"decompose": _cmd_decompose, "dwtest": _cmd_dwtest,
            "bgtest": _cmd_bgtest, "detect": _cmd_detect}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        m = args.period if args.period is not None else default_period(args.frequency)
        config = _config(args)
        formats = args.format or _formats(DEFAULT_FORMATS[args.command])
        out = Path(args.out_dir)
        if set(formats) - {"text"}:
            out.mkdir(parents=True, exist_ok=True)
        series_list = ingest(args.input, m)
        return COMMANDS[args.command](args, series_list, config, formats, out)
    except (TsdsError, ValueError, OSError) as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
