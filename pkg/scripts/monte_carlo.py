"""Monte Carlo size/power of the residual tests and of the full detector.

    python scripts/monte_carlo.py [--trials 2000] [--seed 0]

Prints, for a grid of AR(1) coefficients, the Breusch-Godfrey rejection rate on
regression errors and the detector's flag rate on synthetic seasonal series.
"""
import argparse

import numpy as np

from tsds.autocorr import BgDecision, bg_test
from tsds.ols import DesignMatrix
from tsds.pipeline import PipelineConfig, Verdict, detect
from tsds.synthetic import ar1, seasonal_series


def bg_rate(rho, k, trials, rng, presample="drop"):
    hits = 0
    for _ in range(trials):
        x = rng.normal(size=200)
        y = 1 + 0.5 * x + ar1(200, rho, rng)
        res = bg_test(y, DesignMatrix({"x": x}), k, presample=presample)
        hits += res.decision is BgDecision.AUTOCORRELATION
    return hits / trials


def detector_rate(rho, trials, seed, config):
    flagged = sum(detect(seasonal_series(rho=rho, seed=seed + i), config).verdict
                  is Verdict.POSSIBLE_ATTACK for i in range(trials))
    return flagged / trials


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)

    print("BG on regression errors, T=200, alpha=0.05")
    for k in (1, 7):
        for presample in ("drop", "zero"):
            rates = [bg_rate(r, k, args.trials // 4, rng, presample) for r in (0.0, 0.2, 0.5)]
            print(f"  k={k} {presample:5s} rho=0/0.2/0.5: " + " ".join(f"{v:.3f}" for v in rates))

    print("detector flag rate, n=1000, m=7")
    policies = {"default": PipelineConfig(),
                "two-sided DW": PipelineConfig(dw_sides="both"),
                "BG either": PipelineConfig(bg_policy="either")}
    for name, cfg in policies.items():
        rates = [detector_rate(r, args.trials // 20, args.seed, cfg) for r in (0.0, 0.15, 0.3, 0.6)]
        print(f"  {name:13s} rho=0/0.15/0.3/0.6: " + " ".join(f"{v:.2f}" for v in rates))


if __name__ == "__main__":
    main()
