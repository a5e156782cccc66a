"""Exact sampling of fractional Gaussian noise and fBm covariance kernels.

Two exact samplers are provided. ``sample_fgn_circulant`` uses the
Davies-Harte circulant embedding and is the production path;
``sample_fgn_cholesky`` factors the full Toeplitz covariance and is kept as
an O(n^2)-memory oracle for the former.

Every sampler is a pure function of ``(H, n, dt, seed)``: Gaussian draws come
from a Philox counter-based generator keyed by the seed, so replications can
be generated in any order or in parallel.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import lapack

from .errors import DomainError, NumericError
from .paths import GridSpec, PathSample

logger = logging.getLogger(__name__)

CHOLESKY_MAX_N = 8192
EIGEN_CLAMP_RTOL = 1e-9
EMBEDDING_RETRIES = 1
_SEED_MASK = (1 << 64) - 1


def check_hurst(H: float) -> float:
    H = float(H)
    if not 0.0 < H < 1.0:
        raise DomainError(f"hurst must lie in (0, 1), got {H}")
    return H


def _check_seed(seed: int) -> int:
    if int(seed) != seed or not 0 <= seed <= _SEED_MASK:
        raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return int(seed)


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator keyed by a 64-bit seed."""
    return np.random.Generator(np.random.Philox(key=_check_seed(seed)))


@dataclass
class FgnSample:
    """``n`` consecutive fBm increments on a grid with step ``dt``."""

    increments: np.ndarray
    H: float
    dt: float
    seed: int | None = None

    def __post_init__(self):
        self.increments = np.asarray(self.increments, dtype=float)
        if self.increments.ndim != 1 or len(self.increments) == 0:
            raise DomainError("increments must be a non-empty 1-D array")
        if not self.dt > 0:
            raise DomainError(f"dt must be positive, got {self.dt}")

    @property
    def n(self) -> int:
        return len(self.increments)

    @property
    def grid(self) -> GridSpec:
        return GridSpec(self.n * self.dt, self.n)

    def times(self) -> np.ndarray:
        return np.arange(self.n + 1) * self.dt

    def aggregate(self, factor: int) -> "FgnSample":
        """Increments of the same path on a grid ``factor`` times coarser."""
        if factor < 1 or self.n % factor:
            raise DomainError(f"cannot aggregate {self.n} increments by {factor}")
        coarse = self.increments.reshape(-1, factor).sum(axis=1)
        return FgnSample(coarse, self.H, self.dt * factor, self.seed)


def fbm_covariance(H: float, t: float, s: float) -> float:
    """R_H(t, s) = E[B_t B_s] = (t^2H + s^2H - |t - s|^2H) / 2."""
    H = check_hurst(H)
    if t < 0 or s < 0:
        raise DomainError(f"times must be nonnegative, got t={t}, s={s}")
    h2 = 2.0 * H
    return 0.5 * (t**h2 + s**h2 - abs(t - s) ** h2)


def fgn_autocovariance(H: float, k, dt: float = 1.0):
    """Autocovariance at integer lag ``k`` of fBm increments with step ``dt``.

    Accepts scalar or array ``k``.
    """
    H = check_hurst(H)
    if not dt > 0:
        raise DomainError(f"dt must be positive, got {dt}")
    k = np.abs(np.asarray(k, dtype=float))
    h2 = 2.0 * H
    gamma = 0.5 * dt**h2 * ((k + 1.0) ** h2 - 2.0 * k**h2 + np.abs(k - 1.0) ** h2)
    return float(gamma) if gamma.ndim == 0 else gamma


def fgn_covariance_matrix(H: float, n: int, dt: float = 1.0) -> np.ndarray:
    lags = np.arange(n)
    gamma = fgn_autocovariance(H, lags, dt)
    return gamma[np.abs(lags[:, None] - lags[None, :])]


# ---------------------------------------------------------------------------
# Cholesky
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=8)
def _cholesky_factor(H: float, n: int, dt: float) -> np.ndarray:
    cov = fgn_covariance_matrix(H, n, dt)
    factor, info = lapack.dpotrf(cov, lower=1, clean=1)
    if info > 0:
        raise NumericError(
            f"fGn covariance (H={H}, n={n}) is not numerically positive definite: "
            f"leading minor of order {info} (pivot {info - 1}) fails"
        )
    if info < 0:
        raise NumericError(f"dpotrf: illegal argument {-info}")
    factor.flags.writeable = False
    return factor


def cholesky_factor(H: float, n: int, dt: float = 1.0) -> np.ndarray:
    """Lower Cholesky factor of the ``n x n`` fGn covariance matrix."""
    H = check_hurst(H)
    if n < 1 or n > CHOLESKY_MAX_N:
        raise DomainError(f"Cholesky sampler needs 1 <= n <= {CHOLESKY_MAX_N}, got {n}")
    return _cholesky_factor(H, int(n), float(dt))


def sample_fgn_cholesky(H: float, n: int, dt: float, seed: int) -> FgnSample:
    factor = cholesky_factor(H, n, dt)
    z = make_rng(seed).standard_normal(n)
    return FgnSample(factor @ z, H, dt, seed)


# ---------------------------------------------------------------------------
# Circulant embedding
# ---------------------------------------------------------------------------

def embedding_size(n: int) -> int:
    """First power of two >= 2(n - 1), and at least 2."""
    m = 2
    while m < 2 * (n - 1):
        m *= 2
    return m


def circulant_eigenvalues(H: float, n: int, dt: float = 1.0, size: int | None = None) -> np.ndarray:
    """Raw eigenvalues of the circulant matrix embedding ``n`` fGn lags."""
    m = embedding_size(n) if size is None else size
    half = m // 2
    gamma = fgn_autocovariance(H, np.arange(half + 1), dt)
    row = np.concatenate([gamma, gamma[half - 1:0:-1]])
    return np.fft.fft(row).real


@functools.lru_cache(maxsize=16)
def _embedding(H: float, n: int, dt: float) -> tuple[int, np.ndarray]:
    m = embedding_size(n)
    for attempt in range(EMBEDDING_RETRIES + 1):
        lam = circulant_eigenvalues(H, n, dt, m)
        tol = EIGEN_CLAMP_RTOL * lam.max()
        if lam.min() >= -tol:
            break
        if attempt < EMBEDDING_RETRIES:
            logger.info("negative circulant eigenvalue %.3g at m=%d; doubling", lam.min(), m)
            m *= 2
    else:
        raise NumericError(
            f"circulant embedding of size {m} for H={H}, n={n} has eigenvalue "
            f"{lam.min():.3g} below -{EIGEN_CLAMP_RTOL:g} * max"
        )
    if lam.min() < 0:
        logger.warning(
            "clamping %d slightly negative circulant eigenvalues (min %.3g) to zero",
            int(np.sum(lam < 0)), lam.min(),
        )
        lam = np.maximum(lam, 0.0)
    scale = np.sqrt(lam / m)
    scale.flags.writeable = False
    return m, scale


def _circulant_rows(H: float, n: int, dt: float, seeds: Sequence[int]) -> np.ndarray:
    m, scale = _embedding(H, n, dt)
    z = np.empty((len(seeds), m), dtype=complex)
    for row, seed in enumerate(seeds):
        draws = make_rng(seed).standard_normal((2, m))
        z[row].real = draws[0]
        z[row].imag = draws[1]
    return np.fft.fft(z * scale, axis=1).real[:, :n]


def sample_fgn_circulant(H: float, n: int, dt: float, seed: int) -> FgnSample:
    H = check_hurst(H)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not dt > 0:
        raise DomainError(f"dt must be positive, got {dt}")
    row = _circulant_rows(H, int(n), float(dt), [seed])[0]
    return FgnSample(row, H, dt, seed)


def sample_fgn_circulant_batch(H: float, n: int, dt: float, seeds: Sequence[int],
                               chunk: int = 32) -> np.ndarray:
    """Stack of circulant samples, row ``i`` identical to the single call with ``seeds[i]``."""
    H = check_hurst(H)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    out = np.empty((len(seeds), n))
    for start in range(0, len(seeds), chunk):
        part = seeds[start:start + chunk]
        out[start:start + len(part)] = _circulant_rows(H, int(n), float(dt), part)
    return out


GENERATORS = {
    "circulant": sample_fgn_circulant,
    "cholesky": sample_fgn_cholesky,
}


def sample_fgn(H: float, n: int, dt: float, seed: int, generator: str = "circulant") -> FgnSample:
    try:
        sampler = GENERATORS[generator]
    except KeyError:
        raise DomainError(f"unknown generator {generator!r}; choose from {sorted(GENERATORS)}") from None
    return sampler(H, n, dt, seed)


def fbm_path(increments: FgnSample) -> PathSample:
    """Cumulative sums of the increments, starting from B_0 = 0."""
    values = np.concatenate([[0.0], np.cumsum(increments.increments)])
    return PathSample(increments.times(), values, None, increments.seed)
