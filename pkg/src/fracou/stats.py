"""Order-statistic summaries, Kolmogorov-Smirnov distance and autocovariance."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .errors import DomainError

# Conservative asymptotic 1% critical value of sqrt(n) * D_n.
KS_CRITICAL_1PCT = 1.63


def ks_critical_value(n: int, coefficient: float = KS_CRITICAL_1PCT) -> float:
    return coefficient / np.sqrt(n)


@dataclass(frozen=True)
class SampleSummary:
    count: int
    median: float
    q25: float
    q75: float
    min: float
    max: float
    # Moment summaries are meaningless for Cauchy-type limits; kept for
    # completeness and flagged by ``heavy_tailed``.
    mean: float = float("nan")
    std: float = float("nan")
    heavy_tailed: bool = False

    @property
    def iqr(self) -> float:
        return self.q75 - self.q25

    def as_dict(self) -> dict:
        return asdict(self)


def _nonempty(sample) -> np.ndarray:
    x = np.asarray(sample, dtype=float).ravel()
    if x.size == 0:
        raise DomainError("empty sample")
    return x


def summarize(sample, heavy_tailed: bool = False) -> SampleSummary:
    # sorting first makes every field, moments included, permutation invariant
    x = np.sort(_nonempty(sample))
    q25, median, q75 = np.quantile(x, [0.25, 0.5, 0.75], method="linear")
    std = float(np.std(x, ddof=1)) if x.size > 1 else float("nan")
    return SampleSummary(
        count=int(x.size), median=float(median), q25=float(q25), q75=float(q75),
        min=float(x.min()), max=float(x.max()), mean=float(x.mean()), std=std,
        heavy_tailed=heavy_tailed,
    )


def ks_statistic(sample, cdf: Callable) -> float:
    """Kolmogorov-Smirnov distance sup |F_n - F| between a sample and a continuous CDF."""
    x = np.sort(_nonempty(sample))
    n = x.size
    F = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))


def sample_autocovariance(series, lag: int) -> float:
    """Biased (1/n) sample autocovariance at ``lag``."""
    x = _nonempty(series)
    if int(lag) != lag or lag < 0 or lag >= x.size:
        raise DomainError(f"lag must be an integer in [0, {x.size}), got {lag}")
    lag = int(lag)
    d = x - x.mean()
    return float(np.dot(d[: x.size - lag], d[lag:]) / x.size)


def covariance_standard_error(x, y) -> float:
    """Standard error of the sample covariance of paired draws."""
    x = _nonempty(x)
    y = _nonempty(y)
    prod = (x - x.mean()) * (y - y.mean())
    return float(np.std(prod, ddof=1) / np.sqrt(x.size))
