"""Simulation of the non-ergodic fractional OU process dX = theta X dt + dB, X_0 = 0.

The exact scheme builds ``xi_t = int_0^t exp(-theta s) dB_s`` by Riemann-Stieltjes
sums and sets ``X_t = exp(theta t) xi_t``. Since the integrand is deterministic
and smooth, any evaluation point gives the same Young integral in the limit;
the left point is the default and the trapezoidal weight is available for
discretization studies. The Euler scheme is provided for comparison.

The ``*_values`` functions work on the last axis of an array of increments so
a whole batch of replications can be simulated at once.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .errors import DomainError
from .fgn import FgnSample, check_hurst
from .paths import PathSample

MAX_THETA_T = 700.0
XI_WEIGHTS = ("left", "trapezoid")


@dataclass(frozen=True)
class ModelParams:
    theta: float
    H: float

    def __post_init__(self):
        if not (np.isfinite(self.theta) and self.theta > 0):
            raise DomainError(f"theta must be positive (non-ergodic case), got {self.theta}")
        check_hurst(self.H)
        if self.H <= 0.5:
            warnings.warn(
                f"H={self.H} <= 1/2 lies outside the range covered by the estimator theory",
                stacklevel=3,
            )


def check_growth(theta: float, horizon: float) -> None:
    """Refuse horizons where exp(theta T) would leave the float range."""
    if theta * horizon > MAX_THETA_T:
        raise DomainError(
            f"theta*T = {theta * horizon:g} exceeds {MAX_THETA_T:g}; exp(theta*T) would overflow"
        )


def default_step(theta: float) -> float:
    """Default experiment step 1e-3 * min(1, 1/theta)."""
    return 1e-3 * min(1.0, 1.0 / theta)


def _weights(theta: float, dt: float, n: int, weighting: str) -> np.ndarray:
    t = np.arange(n + 1) * dt
    e = np.exp(-theta * t)
    if weighting == "left":
        return e[:-1]
    if weighting == "trapezoid":
        return 0.5 * (e[:-1] + e[1:])
    raise DomainError(f"unknown xi weighting {weighting!r}; choose from {XI_WEIGHTS}")


def xi_values(theta: float, dt: float, dB: np.ndarray, weighting: str = "left") -> np.ndarray:
    """Riemann-Stieltjes sums of exp(-theta s) dB_s, with a leading zero column."""
    dB = np.asarray(dB, dtype=float)
    n = dB.shape[-1]
    terms = dB * _weights(theta, dt, n, weighting)
    out = np.zeros(dB.shape[:-1] + (n + 1,))
    np.cumsum(terms, axis=-1, out=out[..., 1:])
    return out


def ou_exact_values(theta: float, dt: float, dB: np.ndarray, weighting: str = "left") -> np.ndarray:
    n = np.shape(dB)[-1]
    check_growth(theta, n * dt)
    growth = np.exp(theta * np.arange(n + 1) * dt)
    return growth * xi_values(theta, dt, dB, weighting)


def ou_euler_values(theta: float, dt: float, dB: np.ndarray) -> np.ndarray:
    dB = np.asarray(dB, dtype=float)
    n = dB.shape[-1]
    check_growth(theta, n * dt)
    out = np.zeros(dB.shape[:-1] + (n + 1,))
    # X_{k+1} = (1 + theta dt) X_k + dB_k as a first-order recursive filter
    out[..., 1:] = lfilter([1.0], [1.0, -(1.0 + theta * dt)], dB, axis=-1)
    return out


def forward_integral_values(theta: float, dt: float, dB: np.ndarray) -> np.ndarray:
    """Left-point sums of exp(-theta T) int_0^T exp(theta s) dB_s at the grid end."""
    dB = np.asarray(dB, dtype=float)
    n = dB.shape[-1]
    t = np.arange(n) * dt
    return dB @ np.exp(theta * (t - n * dt))


def simulate_xi(params: ModelParams, increments: FgnSample, weighting: str = "left") -> PathSample:
    values = xi_values(params.theta, increments.dt, increments.increments, weighting)
    return PathSample(increments.times(), values, params, increments.seed)


def simulate_ou_exact(params: ModelParams, increments: FgnSample, weighting: str = "left") -> PathSample:
    values = ou_exact_values(params.theta, increments.dt, increments.increments, weighting)
    return PathSample(increments.times(), values, params, increments.seed)


def simulate_ou_euler(params: ModelParams, increments: FgnSample) -> PathSample:
    values = ou_euler_values(params.theta, increments.dt, increments.increments)
    return PathSample(increments.times(), values, params, increments.seed)


SCHEMES = {
    "exact": simulate_ou_exact,
    "euler": simulate_ou_euler,
}


def simulate_ou(params: ModelParams, increments: FgnSample, scheme: str = "exact") -> PathSample:
    try:
        simulate = SCHEMES[scheme]
    except KeyError:
        raise DomainError(f"unknown scheme {scheme!r}; choose from {sorted(SCHEMES)}") from None
    return simulate(params, increments)
