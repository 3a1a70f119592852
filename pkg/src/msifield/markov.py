"""Covariance propagation for scale-invariant Markov lattice fields.

The covariance of a separable Markov field sampled on a geometric lattice is
fully determined by per-axis variances and one-step covariances inside the
first scale interval.  Each axis is a scale-invariant Markov chain whose
covariance follows a product-of-ratios recursion; the two-dimensional field
covariance is the product of the axis factors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NegativeIndexError, ZeroVarianceError

__all__ = [
    "FirstScaleStats",
    "h_factor",
    "dsi_cov",
    "mmsi_cov",
    "cross_cov",
    "extend_stats",
    "check_ratio_periodicity",
]


@dataclass(frozen=True)
class FirstScaleStats:
    """Per-axis seed statistics of a scale-invariant Markov chain.

    ``variances[j]`` and ``lag1[j]`` are Var(X(alpha**j)) and
    Cov(X(alpha**j), X(alpha**(j+1))) for j = 0 .. period-1; ``hurst`` and
    ``alpha`` fix the scale-invariance rule that extends both beyond the
    first interval:  Var(X(alpha**(j+period))) = alpha**(2*period*hurst) * Var(X(alpha**j)).
    """

    period: int
    variances: tuple[float, ...]
    lag1: tuple[float, ...]
    hurst: float
    alpha: float

    def __post_init__(self):
        t = int(self.period)
        if t < 1:
            raise ValueError("period must be >= 1")
        var = tuple(float(v) for v in self.variances)
        cov = tuple(float(c) for c in self.lag1)
        if len(var) != t or len(cov) != t:
            raise ValueError(f"need exactly {t} variance and lag-1 entries")
        if any(not math.isfinite(v) for v in (*var, *cov, self.hurst, self.alpha)):
            raise ValueError("statistics must be finite")
        if any(v <= 0 for v in var):
            raise ZeroVarianceError("variances must be strictly positive")
        if not self.alpha > 1:
            raise ValueError("alpha must exceed 1")
        # Cauchy-Schwarz with the next variance, the last one extended by the
        # scale-invariance rule.
        growth = float(self.alpha) ** (2 * t * float(self.hurst))
        for j in range(t):
            nxt = var[(j + 1) % t] * (growth if j == t - 1 else 1.0)
            bound = math.sqrt(var[j] * nxt)
            if abs(cov[j]) > bound * (1 + 1e-12):
                raise ValueError(
                    f"lag-1 covariance {cov[j]} at offset {j} violates "
                    f"Cauchy-Schwarz bound {bound}"
                )
        object.__setattr__(self, "period", t)
        object.__setattr__(self, "variances", var)
        object.__setattr__(self, "lag1", cov)
        object.__setattr__(self, "hurst", float(self.hurst))
        object.__setattr__(self, "alpha", float(self.alpha))

    def ratio(self, j: int) -> float:
        """Periodic one-step ratio Cov(X_j, X_{j+1}) / Var(X_j)."""
        return self.lag1[j % self.period] / self.variances[j % self.period]

    def period_factor(self) -> float:
        """Product of the one-step ratios over one full period."""
        out = 1.0
        for j in range(self.period):
            out *= self.ratio(j)
        return out

    def variance_at(self, n: int) -> float:
        """Variance at lattice offset n >= 0, extended by scale invariance."""
        if n < 0:
            raise NegativeIndexError(f"lattice offset must be >= 0, got {n}")
        blocks, rem = divmod(n, self.period)
        return self.alpha ** (2 * blocks * self.period * self.hurst) * self.variances[rem]


def h_factor(stats: FirstScaleStats, r: int) -> float:
    """Cumulative ratio product h(alpha**r) = prod_{j=0..r} ratio_j for
    r >= 0, with h(alpha**-1) = 1.

    Beyond one period the product telescopes multiplicatively:
    h(alpha**(l*T + m - 1)) = h(alpha**(T-1))**l * h(alpha**(m-1)).
    """
    r = int(r)
    if r < -1:
        raise NegativeIndexError(f"h-factor exponent must be >= -1, got {r}")
    blocks, rem = divmod(r + 1, stats.period)
    out = stats.period_factor() ** blocks
    for j in range(rem):
        out *= stats.ratio(j)
    return out


def dsi_cov(stats: FirstScaleStats, n: int, lag: int) -> float:
    """Covariance Cov(X(alpha**n), X(alpha**(n+lag))) of the scale-invariant
    Markov chain, for n >= 0 and any integer lag.

    Non-negative lags decompose as lag = k*T + nu with 0 <= nu < T:

        Q_n(k*T + nu) = h(alpha**(T-1))**k * h(alpha**(nu+n-1))
                        / h(alpha**(n-1)) * Q_n(0).

    Negative lags reduce through the scale-invariant reflection
    Q_n(-k*T + nu) = alpha**(-2*k*T*H) * Q_{n+nu}(k*T - nu).
    """
    n = int(n)
    lag = int(lag)
    if n < 0:
        raise NegativeIndexError(f"lattice offset must be >= 0, got {n}")
    t = stats.period
    if lag >= 0:
        k, nu = divmod(lag, t)
        value = stats.period_factor() ** k * stats.variance_at(n)
        # h(alpha**(nu+n-1)) / h(alpha**(n-1)) telescopes to the ratios
        # between offsets n and n+nu.
        for j in range(n, n + nu):
            value *= stats.ratio(j)
        return value
    k = (-lag + t - 1) // t  # ceil(-lag / T)
    nu = k * t + lag
    return stats.alpha ** (-2 * k * t * stats.hurst) * dsi_cov(stats, n + nu, -lag)


def mmsi_cov(stats1: FirstScaleStats, stats2: FirstScaleStats,
             n: tuple[int, int], lag: tuple[int, int]) -> float:
    """Separable field covariance: the product of the two axis factors."""
    return dsi_cov(stats1, n[0], lag[0]) * dsi_cov(stats2, n[1], lag[1])


def cross_cov(stats1: FirstScaleStats, stats2: FirstScaleStats,
              k: tuple[int, int], j: tuple[int, int],
              n: tuple[int, int], tau: tuple[int, int]) -> float:
    """Cross-covariance of the T1*T2-variate self-similar field
    Y_{k}(n) = X(alpha1**(n1*T1 + k1), alpha2**(n2*T2 + k2)):

        Cov(Y_k(n), Y_j(n + tau)) = alpha**(2*n*T*H) * Q_k(tau*T + j - k)

    componentwise, with 0 <= k_i, j_i < T_i.  Whenever the componentwise lag
    tau_i*T_i + j_i - k_i is non-negative this reduces to the ratio-product
    form  alpha**(2*n*T*H) * h(alpha**(T-1))**tau * h(alpha**(j-1))
    / h(alpha**(k-1)) * Q_k(0); negative lags route through the reflection
    rule instead, where the ratio-product quotient is no longer the
    covariance.
    """
    out = 1.0
    for stats, ki, ji, ni, ti in zip((stats1, stats2), k, j, n, tau):
        if not 0 <= ki < stats.period or not 0 <= ji < stats.period:
            raise NegativeIndexError(
                f"component offsets must lie in [0, {stats.period}), got k={ki}, j={ji}"
            )
        if ni < 0:
            raise NegativeIndexError(f"block index must be >= 0, got {ni}")
        prefactor = stats.alpha ** (2 * ni * stats.period * stats.hurst)
        out *= prefactor * dsi_cov(stats, ki, ti * stats.period + ji - ki)
    return out


def extend_stats(stats: FirstScaleStats, periods: int) -> tuple[np.ndarray, np.ndarray]:
    """Variances and lag-1 covariances over ``periods`` full periods, produced
    by the scale-invariance extension rule."""
    if periods < 1:
        raise ValueError("periods must be >= 1")
    t = stats.period
    var = np.empty(periods * t)
    cov = np.empty(periods * t)
    for block in range(periods):
        factor = stats.alpha ** (2 * block * t * stats.hurst)
        for j in range(t):
            var[block * t + j] = factor * stats.variances[j]
            cov[block * t + j] = factor * stats.lag1[j]
    return var, cov


def check_ratio_periodicity(stats: FirstScaleStats, periods: int = 3,
                            extended: tuple[np.ndarray, np.ndarray] | None = None,
                            tol: float = 1e-10) -> bool:
    """Check that one-step ratios repeat with the period:
    lag1[j] / var[j] == lag1[j + T] / var[j + T] within relative ``tol``.

    With the default extension this holds by construction; passing an
    ``extended`` (variances, lag1) pair lets callers validate external or
    possibly corrupted tables.
    """
    var, cov = extend_stats(stats, periods) if extended is None else extended
    var = np.asarray(var, dtype=float)
    cov = np.asarray(cov, dtype=float)
    if var.shape != cov.shape or var.ndim != 1:
        raise ValueError("extended variances and covariances must be equal-length vectors")
    if np.any(var == 0):
        raise ZeroVarianceError("extended table contains a zero variance")
    t = stats.period
    ratios = cov / var
    if ratios.size <= t:
        return True
    a, b = ratios[:-t], ratios[t:]
    scale = np.maximum(np.abs(a), 1e-300)
    return bool(np.all(np.abs(a - b) <= tol * scale))
