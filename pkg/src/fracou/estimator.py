"""Pathwise least-squares estimation of the drift theta.

With the Young interpretation of int X dX the estimator has the closed form

    theta_hat = X_T^2 / (2 int_0^T X_s^2 ds),

so only the denominator is discretized (composite trapezoid on the path grid).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateInputError, DomainError
from .ou_sim import check_growth
from .paths import PathSample


@dataclass(frozen=True)
class EstimationResult:
    theta_hat: float
    integral_x2: float
    x_terminal: float
    horizon: float
    rescaled_error: Optional[float] = None


def _trapezoid_sq(values: np.ndarray, dt: float) -> np.ndarray:
    sq = np.square(values)
    return dt * (sq.sum(axis=-1) - 0.5 * (sq[..., 0] + sq[..., -1]))


def integral_x_squared(path: PathSample) -> float:
    """Composite trapezoid approximation of int_0^T X_s^2 ds."""
    dt = path.uniform_step()
    return float(_trapezoid_sq(path.values, dt))


def lse_batch(values: np.ndarray, dt: float):
    """Vectorized estimator over the last axis.

    Returns ``(theta_hat, integral_x2, x_terminal)`` arrays. Rows with an
    identically zero path give ``nan`` for ``theta_hat``.
    """
    values = np.asarray(values, dtype=float)
    if values.shape[-1] < 2:
        raise DomainError("need at least two grid points")
    # Rescale before squaring: X can reach exp(700) while X^2 cannot.
    scale = np.max(np.abs(values), axis=-1)
    safe = np.where(scale > 0, scale, 1.0)
    unit = values / safe[..., None]
    integral_unit = _trapezoid_sq(unit, dt)
    x_terminal = values[..., -1]
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        theta_hat = np.where(
            integral_unit > 0, np.square(unit[..., -1]) / (2.0 * integral_unit), np.nan
        )
        integral_x2 = integral_unit * np.square(safe)
    return theta_hat, integral_x2, x_terminal


def lse_theta(path: PathSample, theta_true: Optional[float] = None) -> EstimationResult:
    """Least-squares estimate of theta from a uniformly sampled path.

    Raises ``DegenerateInputError`` when the path is identically zero.
    """
    dt = path.uniform_step()
    theta_hat, integral, x_terminal = (float(v) for v in lse_batch(path.values, dt))
    if not np.isfinite(theta_hat):
        raise DegenerateInputError("path is identically zero; the estimator is 0/0")
    result = EstimationResult(theta_hat, integral, x_terminal, path.horizon)
    if theta_true is not None:
        result = EstimationResult(
            theta_hat, integral, x_terminal, path.horizon, rescaled_error(result, theta_true)
        )
    return result


def rescaled_error(result: EstimationResult, theta_true: float) -> float:
    """exp(theta T) (theta_hat - theta): tends in law to 2 theta times a standard Cauchy."""
    if not theta_true > 0:
        raise DomainError(f"theta_true must be positive, got {theta_true}")
    check_growth(theta_true, result.horizon)
    return float(np.exp(theta_true * result.horizon) * (result.theta_hat - theta_true))


def young_numerators(path: PathSample) -> tuple[float, float, float]:
    """Diagnostic comparison of representations of int_0^T X dX.

    Returns ``(closed, left_sum, corrected_sum)``: ``X_T^2 / 2``, the left-point
    Young sum ``sum X_k dX_k``, and that sum plus half the discrete quadratic
    variation. The corrected sum telescopes to ``closed``; the left sum differs
    by the quadratic variation, which vanishes under refinement when H > 1/2.
    """
    x = path.values
    dx = np.diff(x)
    left = float(np.sum(x[:-1] * dx))
    corrected = left + 0.5 * float(np.sum(dx * dx))
    return 0.5 * float(x[-1]) ** 2, left, corrected
