"""Seeded Monte Carlo campaigns for the drift estimator and its oracles.

Three campaigns are available:

* ``run_consistency``: median |theta_hat - theta| over several horizons, which
  must decrease in T (strong consistency).
* ``run_distribution``: rescaled errors exp(theta T)(theta_hat - theta) at one
  horizon, compared with the 2 theta C(1) Cauchy law by KS distance, quartiles
  and sign balance.
* ``run_variance_checks``: Monte Carlo second moments of xi_T, of the forward
  integral exp(-theta T) int_0^T exp(theta s) dB_s and of its covariance with
  B_s, against the quadrature oracles in ``theory``.

Replication ``i`` always uses ``derive_seed(base_seed, i)``, so results do not
depend on execution order. Aggregation folds over records in index order.
Gates are judged on medians and quartiles, never on means, because the
rescaled error has a Cauchy limit.
"""

from __future__ import annotations

import csv
import dataclasses
import logging
import os
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from . import theory
from .errors import DomainError, NumericError
from .estimator import lse_batch
from .fgn import check_hurst, sample_fgn_cholesky, sample_fgn_circulant_batch
from .ou_sim import (MAX_THETA_T, forward_integral_values, ou_euler_values,
                     ou_exact_values)
from .stats import covariance_standard_error, ks_statistic, summarize

logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB

RECORD_FIELDS = ("index", "seed", "T", "theta_hat", "rescaled_error", "integral_x2", "x_terminal")
VARIANCE_RECORD_FIELDS = ("index", "seed", "T", "xi_T", "forward_T", "b_s")
MODES = ("consistency", "distribution", "variance")
MAX_DEGENERATE_FRACTION = 1e-3
CHUNK = 64


def derive_seed(base_seed: int, index: int) -> int:
    """Seed of replication ``index``: one SplitMix64 output.

    ``z = base_seed + (index + 1) * 0x9E3779B97F4A7C15 (mod 2**64)``, then
    ``z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
    z *= 0x94D049BB133111EB; z ^= z >> 31`` (all mod 2**64). Each step is a
    bijection of 64-bit words and the counter is injective in ``index`` for
    ``index < 2**64``, so seeds never collide within a campaign.
    """
    z = (base_seed + (index + 1) * GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def derive_seeds(base_seed: int, indices) -> np.ndarray:
    """Vectorized ``derive_seed`` over an integer array."""
    idx = np.asarray(indices, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(base_seed & MASK64) + (idx + np.uint64(1)) * np.uint64(GOLDEN_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    return z ^ (z >> np.uint64(31))


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    theta: float = 1.0
    hurst: float = 0.7
    horizons: tuple = (5.0, 8.0, 10.0)
    steps_per_unit: int = 1000
    replications: int = 200
    base_seed: int = 101
    generator: str = "circulant"
    scheme: str = "exact"
    output_dir: Optional[str] = None
    # time s of B_s in the cross-covariance check
    cross_time: float = 1.0
    # gate tolerances
    consistency_tol: float = 1e-2
    ks_tol: float = 0.08
    iqr_rtol: float = 0.15
    positive_fraction_low: float = 0.45
    positive_fraction_high: float = 0.55
    variance_rtol: float = 0.05
    covariance_se: float = 4.0

    def __post_init__(self):
        object.__setattr__(self, "horizons", tuple(float(t) for t in self.horizons))
        if not (np.isfinite(self.theta) and self.theta > 0):
            raise DomainError(f"theta must be positive, got {self.theta}")
        check_hurst(self.hurst)
        if not self.horizons or min(self.horizons) <= 0:
            raise DomainError(f"horizons must be positive, got {self.horizons}")
        if int(self.replications) != self.replications or self.replications < 1:
            raise DomainError(f"replications must be >= 1, got {self.replications}")
        if int(self.steps_per_unit) != self.steps_per_unit or self.steps_per_unit < 100:
            raise DomainError(f"steps_per_unit must be an integer >= 100, got {self.steps_per_unit}")
        if self.theta * max(self.horizons) > MAX_THETA_T:
            raise DomainError(f"theta*T = {self.theta * max(self.horizons):g} exceeds {MAX_THETA_T:g}")
        for T in self.horizons:
            steps = T * self.steps_per_unit
            if abs(steps - round(steps)) > 1e-9 * steps:
                raise DomainError(f"horizon {T} is not a whole number of steps of 1/{self.steps_per_unit}")
        if self.generator not in ("circulant", "cholesky"):
            raise DomainError(f"generator must be 'circulant' or 'cholesky', got {self.generator!r}")
        if self.scheme not in ("exact", "euler"):
            raise DomainError(f"scheme must be 'exact' or 'euler', got {self.scheme!r}")
        if not 0 <= self.base_seed <= MASK64:
            raise DomainError(f"base_seed must be an unsigned 64-bit integer, got {self.base_seed}")

    @property
    def dt(self) -> float:
        return 1.0 / self.steps_per_unit

    def steps(self, T: float) -> int:
        return int(round(T * self.steps_per_unit))

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)

    def items(self) -> list[tuple[str, str]]:
        """Effective configuration as ``(key, text)`` pairs in field order."""
        out = []
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if f.name == "horizons":
                text = ", ".join(repr(t) for t in value)
            else:
                text = "" if value is None else str(value)
            out.append((f.name, text))
        return out

    def to_text(self) -> str:
        return "".join(f"{k} = {v}\n" for k, v in self.items())


_FIELD_TYPES = {
    "theta": float, "hurst": float, "steps_per_unit": int, "replications": int,
    "base_seed": int, "generator": str, "scheme": str, "output_dir": str,
    "cross_time": float, "consistency_tol": float, "ks_tol": float, "iqr_rtol": float,
    "positive_fraction_low": float, "positive_fraction_high": float,
    "variance_rtol": float, "covariance_se": float,
}


def _parse_value(key: str, text: str):
    text = text.strip()
    if key == "horizons":
        return tuple(float(v) for v in text.replace(",", " ").split())
    if key not in _FIELD_TYPES:
        raise DomainError(f"unknown config key {key!r}")
    if key == "output_dir":
        return text or None
    kind = _FIELD_TYPES[key]
    if kind is int:
        value = float(text)
        if value != int(value):
            raise ValueError(f"not an integer: {text}")
        return int(value)
    return kind(text)


def parse_config_text(text: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        try:
            values[key] = _parse_value(key, value)
        except ValueError as exc:
            raise DomainError(f"config line {lineno}: bad value for {key}: {exc}") from None
    return values


def load_config(path: Optional[str] = None, overrides: Optional[dict] = None,
                base: Optional[ExperimentConfig] = None) -> ExperimentConfig:
    """Defaults, then the config file, then ``overrides`` (later wins)."""
    values = dataclasses.asdict(base or ExperimentConfig())
    if path is not None:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise DomainError(f"cannot read config {path}: {exc}") from None
        values.update(parse_config_text(text))
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in values:
            raise DomainError(f"unknown config key {key!r}")
        values[key] = _parse_value(key, value) if isinstance(value, str) else value
    return ExperimentConfig(**values)


# Shipped acceptance configurations; ``configs/*.cfg`` mirror these.
DEFAULT_CONFIGS = {
    "consistency": ExperimentConfig(
        theta=1.0, hurst=0.7, horizons=(5.0, 8.0, 10.0), steps_per_unit=1000,
        replications=200, base_seed=101),
    "distribution": ExperimentConfig(
        theta=0.5, hurst=0.7, horizons=(12.0,), steps_per_unit=1000,
        replications=1000, base_seed=202),
    "variance": ExperimentConfig(
        theta=1.0, hurst=0.7, horizons=(8.0,), steps_per_unit=1000,
        replications=2000, base_seed=303),
}


# ---------------------------------------------------------------------------
# Records and reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReplicationRecord:
    index: int
    seed: int
    T: float
    theta_hat: float
    rescaled_error: float
    integral_x2: float
    x_terminal: float


@dataclass
class ExperimentReport:
    mode: str
    config: ExperimentConfig
    records: list
    metrics: list = field(default_factory=list)
    gates: dict = field(default_factory=dict)
    summaries: dict = field(default_factory=dict)
    histogram: Optional[list] = None
    duration: float = 0.0
    files: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.gates.values())

    def metric(self, name: str, horizon: Optional[float] = None) -> float:
        for m, h, v in self.metrics:
            if m == name and (horizon is None or h == horizon):
                return v
        raise KeyError((name, horizon))

    def add(self, name: str, horizon: Optional[float], value) -> None:
        self.metrics.append((name, horizon, float(value)))

    def report_rows(self) -> list[tuple[str, str, str]]:
        rows = [(f"config.{k}", "", v) for k, v in self.config.items()]
        rows.append(("mode", "", self.mode))
        for name, horizon, value in self.metrics:
            rows.append((name, "" if horizon is None else repr(horizon), repr(value)))
        for name, ok in self.gates.items():
            rows.append((f"gate.{name}", "", "pass" if ok else "fail"))
        rows.append(("wall_clock_seconds", "", repr(round(self.duration, 3))))
        return rows

    def write(self, output_dir: str) -> dict:
        os.makedirs(output_dir, exist_ok=True)
        prefix = os.path.join(output_dir, self.mode)
        files = {"records": f"{prefix}_records.csv", "report": f"{prefix}_report.csv",
                 "config": f"{prefix}_config.txt"}
        fields = VARIANCE_RECORD_FIELDS if self.mode == "variance" else RECORD_FIELDS
        _write_csv(files["records"], fields,
                   ([_fmt(getattr(r, f)) for f in fields] for r in self.records))
        _write_csv(files["report"], ("metric", "horizon", "value"), self.report_rows())
        with open(files["config"], "w") as fh:
            fh.write(self.config.to_text())
        if self.histogram is not None:
            files["histogram"] = f"{prefix}_histogram.csv"
            _write_csv(files["histogram"], ("bin_low", "bin_high", "count", "expected"),
                       ([_fmt(v) for v in row] for row in self.histogram))
        self.files = files
        return files


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_csv(path: str, header: Iterable[str], rows: Iterable) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def read_records(path: str) -> list[dict]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for row in rows:
        out.append({k: (int(v) if k in ("index", "seed") else float(v)) for k, v in row.items()})
    return out


# ---------------------------------------------------------------------------
# Simulation core
# ---------------------------------------------------------------------------

def simulate_increments(config: ExperimentConfig, T: float, indices) -> tuple[np.ndarray, np.ndarray]:
    """fBm increments on [0, T] for the given replication indices.

    Returns ``(seeds, dB)`` with ``dB`` of shape ``(len(indices), steps)``.
    """
    seeds = [derive_seed(config.base_seed, int(i)) for i in indices]
    n = config.steps(T)
    if config.generator == "circulant":
        dB = sample_fgn_circulant_batch(config.hurst, n, config.dt, seeds)
    else:
        dB = np.stack([sample_fgn_cholesky(config.hurst, n, config.dt, s).increments for s in seeds])
    return np.asarray(seeds, dtype=np.uint64), dB


def _ou_values(config: ExperimentConfig, dB: np.ndarray) -> np.ndarray:
    if config.scheme == "exact":
        return ou_exact_values(config.theta, config.dt, dB)
    return ou_euler_values(config.theta, config.dt, dB)


def estimation_records(config: ExperimentConfig, T: float) -> list[ReplicationRecord]:
    """Simulate and estimate every replication at horizon ``T``.

    Degenerate (all-zero) paths are skipped with a warning; more than 0.1% of
    them is treated as a numerical failure.
    """
    records, skipped = [], 0
    growth = np.exp(config.theta * T)
    for start in range(0, config.replications, CHUNK):
        indices = range(start, min(start + CHUNK, config.replications))
        seeds, dB = simulate_increments(config, T, indices)
        theta_hat, integral, x_T = lse_batch(_ou_values(config, dB), config.dt)
        for j, index in enumerate(indices):
            if not np.isfinite(theta_hat[j]):
                skipped += 1
                logger.warning("replication %d at T=%g is degenerate; skipped", index, T)
                continue
            records.append(ReplicationRecord(
                index=index, seed=int(seeds[j]), T=T, theta_hat=float(theta_hat[j]),
                rescaled_error=float(growth * (theta_hat[j] - config.theta)),
                integral_x2=float(integral[j]), x_terminal=float(x_T[j]),
            ))
    if skipped > MAX_DEGENERATE_FRACTION * config.replications:
        raise NumericError(f"{skipped} of {config.replications} replications degenerate at T={T}")
    return records


def _finish(report: ExperimentReport, started: float) -> ExperimentReport:
    report.duration = time.perf_counter() - started
    if report.config.output_dir:
        report.write(report.config.output_dir)
    return report


# ---------------------------------------------------------------------------
# Campaigns
# ---------------------------------------------------------------------------

def aggregate_consistency(config: ExperimentConfig, records) -> ExperimentReport:
    """Build the consistency report from records (also used to audit written CSVs)."""
    report = ExperimentReport("consistency", config, list(records))
    medians = []
    for T in config.horizons:
        rows = [r for r in records if _get(r, "T") == T]
        abs_err = [abs(_get(r, "theta_hat") - config.theta) for r in rows]
        errs = summarize(abs_err)
        resc = summarize([_get(r, "rescaled_error") for r in rows], heavy_tailed=True)
        report.summaries[T] = {"abs_error": errs, "rescaled_error": resc}
        report.add("count", T, errs.count)
        report.add("abs_error_median", T, errs.median)
        report.add("abs_error_q25", T, errs.q25)
        report.add("abs_error_q75", T, errs.q75)
        report.add("rescaled_error_median", T, resc.median)
        report.add("rescaled_error_q25", T, resc.q25)
        report.add("rescaled_error_q75", T, resc.q75)
        report.add("rescaled_error_mean", T, resc.mean)
        report.add("rescaled_error_heavy_tailed", T, 1)
        medians.append(errs.median)
    report.gates["median_abs_error_decreasing"] = bool(np.all(np.diff(medians) < 0))
    report.gates["final_median_below_tol"] = bool(medians[-1] < config.consistency_tol)
    return report


def _get(record, key):
    return record[key] if isinstance(record, dict) else getattr(record, key)


def run_consistency(config: ExperimentConfig) -> ExperimentReport:
    """Median |theta_hat - theta| per horizon; gates on strict decrease and final tolerance."""
    if len(config.horizons) < 2:
        raise DomainError("consistency run needs at least two horizons")
    if list(config.horizons) != sorted(set(config.horizons)):
        raise DomainError("horizons must be strictly increasing")
    started = time.perf_counter()
    records = []
    for T in config.horizons:
        records.extend(estimation_records(config, T))
    return _finish(aggregate_consistency(config, records), started)


def histogram_edges(scale: float) -> np.ndarray:
    """Fixed bin edges: 40 bins over +-10 scale units plus two open tail bins."""
    inner = scale * np.linspace(-10.0, 10.0, 41)
    return np.concatenate([[-np.inf], inner, [np.inf]])


def aggregate_distribution(config: ExperimentConfig, records) -> ExperimentReport:
    T = config.horizons[0]
    law = theory.CauchyScaleLaw.for_theta(config.theta)
    errors = np.array([_get(r, "rescaled_error") for r in records])
    report = ExperimentReport("distribution", config, list(records))
    summary = summarize(errors, heavy_tailed=True)
    report.summaries[T] = {"rescaled_error": summary}
    ks = ks_statistic(errors, law.cdf)
    iqr_ratio = summary.iqr / (2.0 * law.scale)
    positive = float(np.mean(errors > 0))
    report.add("count", T, summary.count)
    report.add("rescaled_error_median", T, summary.median)
    report.add("rescaled_error_q25", T, summary.q25)
    report.add("rescaled_error_q75", T, summary.q75)
    report.add("rescaled_error_mean", T, summary.mean)
    report.add("rescaled_error_heavy_tailed", T, 1)
    report.add("cauchy_scale", T, law.scale)
    report.add("ks_distance", T, ks)
    report.add("iqr_ratio", T, iqr_ratio)
    report.add("positive_fraction", T, positive)
    edges = histogram_edges(law.scale)
    counts, _ = np.histogram(errors, bins=edges)
    expected = len(errors) * np.diff(law.cdf(edges))
    report.histogram = [(lo, hi, int(c), e) for lo, hi, c, e in zip(edges[:-1], edges[1:], counts, expected)]
    report.gates["ks_below_tol"] = bool(ks < config.ks_tol)
    report.gates["iqr_within_tol"] = bool(abs(iqr_ratio - 1.0) <= config.iqr_rtol)
    report.gates["sign_balance"] = bool(
        config.positive_fraction_low <= positive <= config.positive_fraction_high)
    return report


def run_distribution(config: ExperimentConfig) -> ExperimentReport:
    """Rescaled errors at a single horizon against the 2 theta C(1) law."""
    if len(config.horizons) != 1:
        raise DomainError("distribution run needs exactly one horizon")
    theta_T = config.theta * config.horizons[0]
    if not 4.0 <= theta_T <= 20.0:
        raise DomainError(f"distribution run needs theta*T in [4, 20], got {theta_T:g}")
    started = time.perf_counter()
    records = estimation_records(config, config.horizons[0])
    return _finish(aggregate_distribution(config, records), started)


@dataclass(frozen=True)
class VarianceRecord:
    index: int
    seed: int
    T: float
    xi_T: float
    forward_T: float
    b_s: float


def variance_records(config: ExperimentConfig, T: float) -> list[VarianceRecord]:
    s_steps = config.cross_time * config.steps_per_unit
    if abs(s_steps - round(s_steps)) > 1e-9 * max(s_steps, 1.0) or not 0 < config.cross_time < T:
        raise DomainError(f"cross_time must be a grid point in (0, {T}), got {config.cross_time}")
    s_steps = int(round(s_steps))
    n = config.steps(T)
    xi_weights = np.exp(-config.theta * np.arange(n) * config.dt)
    records = []
    for start in range(0, config.replications, CHUNK):
        indices = range(start, min(start + CHUNK, config.replications))
        seeds, dB = simulate_increments(config, T, indices)
        xi_T = dB @ xi_weights
        fwd = forward_integral_values(config.theta, config.dt, dB)
        b_s = dB[:, :s_steps].sum(axis=1)
        for j, index in enumerate(indices):
            records.append(VarianceRecord(index, int(seeds[j]), T, float(xi_T[j]),
                                          float(fwd[j]), float(b_s[j])))
    return records


def aggregate_variance(config: ExperimentConfig, records) -> ExperimentReport:
    report = ExperimentReport("variance", config, list(records))
    theta, H, s = config.theta, config.hurst, config.cross_time
    for T in config.horizons:
        rows = [r for r in records if _get(r, "T") == T]
        xi = np.array([_get(r, "xi_T") for r in rows])
        fwd = np.array([_get(r, "forward_T") for r in rows])
        b_s = np.array([_get(r, "b_s") for r in rows])
        xi_mc, fwd_mc = np.var(xi, ddof=1), np.var(fwd, ddof=1)
        cov_mc = float(np.cov(b_s, fwd, ddof=1)[0, 1])
        cov_se = covariance_standard_error(b_s, fwd)
        xi_th = theory.xi_variance(theta, H, T)
        fwd_th = theory.forward_integral_variance(theta, H, T)
        cov_th = theory.cross_covariance_decay(theta, H, s, T)
        xi_gap = abs(xi_mc - xi_th) / xi_th
        fwd_gap = abs(fwd_mc - fwd_th) / fwd_th
        cov_z = abs(cov_mc - cov_th) / cov_se
        report.add("count", T, len(rows))
        report.add("xi_variance_mc", T, xi_mc)
        report.add("xi_variance_theory", T, xi_th)
        report.add("xi_variance_rel_gap", T, xi_gap)
        report.add("forward_variance_mc", T, fwd_mc)
        report.add("forward_variance_theory", T, fwd_th)
        report.add("forward_variance_rel_gap", T, fwd_gap)
        report.add("cross_covariance_mc", T, cov_mc)
        report.add("cross_covariance_theory", T, cov_th)
        report.add("cross_covariance_se", T, cov_se)
        report.add("cross_covariance_z", T, cov_z)
        report.gates[f"xi_variance_T{T:g}"] = bool(xi_gap < config.variance_rtol)
        report.gates[f"forward_variance_T{T:g}"] = bool(fwd_gap < config.variance_rtol)
        report.gates[f"cross_covariance_T{T:g}"] = bool(cov_z <= config.covariance_se)
    return report


def run_variance_checks(config: ExperimentConfig) -> ExperimentReport:
    """Monte Carlo variances and covariance against the quadrature oracles."""
    if config.hurst < 0.5:
        raise DomainError("variance oracles need H >= 1/2")
    started = time.perf_counter()
    records = []
    for T in config.horizons:
        records.extend(variance_records(config, T))
    return _finish(aggregate_variance(config, records), started)


RUNNERS = {
    "consistency": run_consistency,
    "distribution": run_distribution,
    "variance": run_variance_checks,
}


def run(mode: str, config: ExperimentConfig) -> ExperimentReport:
    try:
        runner = RUNNERS[mode]
    except KeyError:
        raise DomainError(f"unknown mode {mode!r}; choose from {MODES}") from None
    return runner(config)
