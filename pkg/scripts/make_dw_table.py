"""Regenerate the Durbin-Watson bounds table shipped in ``tsds/data``.

The bounds d_L and d_U are the alpha-quantiles of the two bounding ratios

    d_L = sum_i nu_i z_i^2 / sum_i z_i^2,        i = 1 .. n-k'
    d_U = sum_i nu_{i+k'-1} z_i^2 / sum_i z_i^2,

where nu_j = 2(1 - cos(pi j / n)) are the eigenvalues of the first-difference
quadratic form, k' = k + 1 counts the intercept, and z_i are iid N(0, 1).
Each quantile is found by inverting Imhof's integral for P(sum (nu_i - d) z_i^2 < 0).

Usage: python scripts/make_dw_table.py [out.csv]
"""
import sys

import numpy as np
from scipy import integrate, optimize

N_GRID = list(range(15, 41)) + list(range(45, 101, 5)) + [150, 200]
K_GRID = [1, 2, 3, 4, 5]
ALPHAS = [0.05, 0.01]


def imhof_lower(weights):
    """P(sum w_i z_i^2 < 0) for iid standard normal z."""
    w = np.asarray(weights, dtype=float)

    def integrand(u):
        theta = 0.5 * np.sum(np.arctan(w * u))
        rho = np.exp(0.25 * np.sum(np.log1p((w * u) ** 2)))
        return np.sin(theta) / (u * rho)

    val, _ = integrate.quad(integrand, 0.0, np.inf, limit=2000, epsabs=1e-12, epsrel=1e-10)
    return 0.5 - val / np.pi


def bound(n, k, alpha, upper):
    kp = k + 1
    nu = 2.0 * (1.0 - np.cos(np.pi * np.arange(n) / n))
    lam = nu[kp:] if upper else nu[1:n - kp + 1]
    return optimize.brentq(lambda d: imhof_lower(lam - d) - alpha, lam.min() + 1e-9, lam.max() - 1e-9, xtol=1e-10)


def main(path):
    with open(path, "w") as fh:
        fh.write("n,k,alpha,d_l,d_u\n")
        for alpha in ALPHAS:
            for k in K_GRID:
                for n in N_GRID:
                    dl = bound(n, k, alpha, upper=False)
                    du = bound(n, k, alpha, upper=True)
                    fh.write(f"{n},{k},{alpha},{dl:.4f},{du:.4f}\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/tsds/data/dw_bounds.csv")
