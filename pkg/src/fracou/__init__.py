"""Simulation and drift estimation for the non-ergodic fractional Ornstein-Uhlenbeck process."""

from .errors import DegenerateInputError, DomainError, FracOUError, NumericError
from .estimator import EstimationResult, integral_x_squared, lse_theta, rescaled_error
from .fgn import (FgnSample, fbm_covariance, fbm_path, fgn_autocovariance,
                  sample_fgn, sample_fgn_cholesky, sample_fgn_circulant)
from .ou_sim import ModelParams, simulate_ou, simulate_ou_euler, simulate_ou_exact, simulate_xi
from .paths import GridSpec, PathSample
from .theory import CauchyScaleLaw

__version__ = "0.1.0"

__all__ = [
    "CauchyScaleLaw", "DegenerateInputError", "DomainError", "EstimationResult", "FgnSample",
    "FracOUError", "GridSpec", "ModelParams", "NumericError", "PathSample", "fbm_covariance",
    "fbm_path", "fgn_autocovariance", "integral_x_squared", "lse_theta", "rescaled_error",
    "sample_fgn", "sample_fgn_cholesky", "sample_fgn_circulant", "simulate_ou",
    "simulate_ou_euler", "simulate_ou_exact", "simulate_xi",
]
