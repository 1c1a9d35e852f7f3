"""Seeded synthetic series for Monte Carlo checks and demos."""
from __future__ import annotations

import numpy as np

from .series import TimeSeries

WEEKLY_PATTERN = (3.0, -1.0, 2.0, 0.5, -2.0, -1.5, -1.0)


def ar1(n: int, rho: float, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Stationary AR(1) path e_t = rho e_{t-1} + u_t, u_t ~ N(0, scale^2)."""
    u = rng.normal(scale=scale, size=n)
    e = np.empty(n)
    e[0] = u[0] / np.sqrt(1.0 - rho * rho)
    for t in range(1, n):
        e[t] = rho * e[t - 1] + u[t]
    return e


def seasonal_series(n: int = 1000, m: int = 7, rho: float = 0.0, seed: int = 0,
                    level: float = 50.0, slope: float = 0.02, noise: float = 1.0,
                    pattern=None, label: str = "synthetic") -> TimeSeries:
    """Linear trend + repeating seasonal pattern + (possibly AR(1)) noise.

    With the default level the series stays positive, so it also suits the
    multiplicative model.
    """
    rng = np.random.default_rng(seed)
    if pattern is None:
        pattern = WEEKLY_PATTERN if m == 7 else np.sin(2 * np.pi * np.arange(m) / m) * 2.0
    pattern = np.asarray(pattern, dtype=float)
    t = np.arange(n)
    y = level + slope * t + pattern[t % m] + ar1(n, rho, rng, noise)
    return TimeSeries(y, m, label=label)
