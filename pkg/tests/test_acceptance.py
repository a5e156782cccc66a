"""End-to-end acceptance criteria, each at its stated tolerance.

Every test prints one ``[acceptance N] PASS|FAIL`` line with the numbers
behind the verdict, then asserts. Run with ``pytest tests/test_acceptance.py -v``.
"""

import os

import numpy as np
import pytest

from fracou import experiment as E
from fracou import fgn, stats, theory
from fracou.cli import main
from fracou.errors import DegenerateInputError, DomainError
from fracou.estimator import lse_theta
from fracou.paths import PathSample

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SEED = 1


@pytest.fixture
def verdict(capsys):
    def report(number, title, checks):
        ok = all(c[1] for c in checks)
        details = "; ".join(f"{label} {'ok' if good else 'FAIL'} ({info})" for label, good, info in checks)
        with capsys.disabled():
            print(f"\n[acceptance {number}] {'PASS' if ok else 'FAIL'}: {title}: {details}")
        failed = [c[0] for c in checks if not c[1]]
        assert not failed, f"criterion {number} failed checks: {failed}"
    return report


def _config(name, **changes):
    return E.load_config(os.path.join(ROOT, "configs", f"{name}.cfg")).replace(output_dir=None, **changes)


def test_1_covariance_identity(verdict):
    # variance of n summed increments equals Var(B_{n dt}); gamma(0) enters n times
    checks = []
    for H in (0.55, 0.7, 0.9):
        for n in (2, 10, 100):
            k = np.arange(1, n)
            lhs = n * fgn.fgn_autocovariance(H, 0) + 2 * np.sum((n - k) * fgn.fgn_autocovariance(H, k))
            rel = abs(lhs / float(n) ** (2 * H) - 1)
            checks.append((f"H={H} n={n}", rel < 1e-10, f"rel {rel:.1e}"))
    verdict(1, "sum of increment covariances", checks)


def test_2_generator_exactness(verdict):
    sigma = fgn.fgn_covariance_matrix(0.7, 64)
    L = fgn.cholesky_factor(0.7, 64)
    err = float(np.max(np.abs(L @ L.T - sigma)))
    checks = [("cholesky n=64", err < 1e-10, f"max err {err:.1e}")]
    n = 2**16
    for H in (0.55, 0.7, 0.9):
        x = fgn.sample_fgn_circulant(H, n, 1.0, SEED).increments
        gaps = [abs(stats.sample_autocovariance(x, k) - fgn.fgn_autocovariance(H, k)) for k in range(6)]
        checks.append((f"circulant H={H}", max(gaps) < 0.02, f"max gap {max(gaps):.4f}"))
    verdict(2, "generator exactness", checks)


def test_3_xi_variance_oracle(verdict):
    closed = theory.xi_infinity_variance(1.0, 0.7)
    at_40 = theory.xi_variance(1.0, 0.7, 40.0)
    report = E.run_variance_checks(_config("variance_xi"))
    gap = report.metric("xi_variance_rel_gap", 10.0)
    checks = [
        ("gamma oracle", abs(closed - 0.621085) < 5e-7, f"{closed:.9f}"),
        ("quadrature at theta*t=40", abs(at_40 - closed) < 1e-6, f"diff {abs(at_40 - closed):.1e}"),
        ("MC Var(xi_10)", gap < 0.05,
         f"mc {report.metric('xi_variance_mc', 10.0):.5f} vs {report.metric('xi_variance_theory', 10.0):.5f}, "
         f"rel gap {gap:.4f}"),
    ]
    verdict(3, "variance of xi", checks)


def test_4_forward_integral_variance(verdict):
    config = _config("variance")
    T = config.horizons[0]
    report = E.run_variance_checks(config)
    gap = report.metric("forward_variance_rel_gap", T)
    z = report.metric("cross_covariance_z", T)
    decay = theory.cross_covariance_decay(1.0, 0.7, 1.0, 20.0)
    checks = [
        ("MC forward variance", gap < 0.05, f"rel gap {gap:.4f}"),
        ("cross covariance with B_1", z < 4.0, f"|z| {z:.2f}"),
        ("cross covariance at t=20 below 1e-3", decay < 1e-3, f"{decay:.5f}"),
    ]
    verdict(4, "forward integral variance", checks)


def test_5_consistency(verdict):
    report = E.run_consistency(_config("consistency"))
    medians = [report.metric("abs_error_median", T) for T in (5.0, 8.0, 10.0)]
    checks = [
        ("strictly decreasing", medians[0] > medians[1] > medians[2], ", ".join(f"{m:.2e}" for m in medians)),
        ("below 1e-2 at T=10", medians[2] < 1e-2, f"{medians[2]:.2e}"),
    ]
    verdict(5, "consistency", checks)


def test_6_cauchy_limit(verdict):
    config = _config("distribution")
    report = E.run_distribution(config)
    T = config.horizons[0]
    ks = report.metric("ks_distance", T)
    iqr = report.metric("rescaled_error_q75", T) - report.metric("rescaled_error_q25", T)
    iqr_gap = abs(iqr / (4 * config.theta) - 1)
    positive = report.metric("positive_fraction", T)
    checks = [
        ("KS distance", ks < 0.08, f"{ks:.4f}"),
        ("IQR vs 4 theta", iqr_gap < 0.15, f"rel gap {iqr_gap:.3f}"),
        ("positive fraction", 0.45 <= positive <= 0.55, f"{positive:.3f}"),
    ]
    verdict(6, "Cauchy limit of rescaled error", checks)


def test_7_correction_term(verdict):
    checks = []
    for t in (1.0, 5.0, 20.0):
        term = theory.skorohod_correction_term(1.0, 0.7, t)
        bound = t**1.4 / 2
        checks.append((f"t={t:g}", term <= bound, f"{term:.5f} <= {bound:.5f}"))
    damped = np.exp(-20.0) * theory.skorohod_correction_term(1.0, 0.7, 40.0)
    checks.append(("damped at t=40", damped < 1e-6, f"{damped:.1e}"))
    verdict(7, "correction term bounds", checks)


def _run(capsys, *argv):
    code = main(list(argv))
    out, _ = capsys.readouterr()
    return code, out


def test_8_degenerate_and_determinism(verdict, capsys, tmp_path):
    checks = []
    sim = ["simulate", "--theta", "1", "--hurst", "0.7", "--T", "5", "--steps", "500", "--seed", "9"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    _run(capsys, *sim, "--out", str(a))
    _run(capsys, *sim, "--out", str(b))
    checks.append(("simulate", a.read_bytes() == b.read_bytes(), "byte-identical"))
    est = [_run(capsys, "estimate", "--in", str(a), "--theta-true", "1") for _ in range(2)]
    checks.append(("estimate", est[0] == est[1] and est[0][0] == 0, "identical"))
    th = [_run(capsys, "theory", "--quantity", "xi-var", "--theta", "1", "--hurst", "0.7", "--t", "3")
          for _ in range(2)]
    checks.append(("theory", th[0] == th[1] and th[0][0] == 0, th[0][1].strip()))
    reports = []
    for name in ("x", "y"):
        out = tmp_path / name
        code, _ = _run(capsys, "experiment", "--mode", "consistency", "--horizons", "2,3",
                       "--steps-per-unit", "100", "--replications", "20", "--output-dir", str(out))
        rows = (out / "consistency_report.csv").read_text().splitlines()
        reports.append([r for r in rows if not r.startswith(("wall_clock", "config.output_dir"))])
        reports.append((out / "consistency_records.csv").read_bytes())
    checks.append(("experiment", reports[0] == reports[2] and reports[1] == reports[3], "identical"))

    zero = PathSample(np.linspace(0, 1, 11), np.zeros(11))
    try:
        lse_theta(zero)
        checks.append(("zero path", False, "no error"))
    except DegenerateInputError:
        checks.append(("zero path", True, "DegenerateInputError"))
    zpath = tmp_path / "zero.csv"
    zero.to_csv(str(zpath))
    code, _ = _run(capsys, "estimate", "--in", str(zpath))
    checks.append(("zero path exit", code == 1, f"exit {code}"))

    for label, args in [("H=1.2", ("1", "1.2", "1")), ("H=0", ("1", "0", "1")), ("theta=0", ("0", "0.7", "1")),
                        ("theta=-1", ("-1", "0.7", "1")), ("theta*T=800", ("1", "0.7", "800"))]:
        code, _ = _run(capsys, "simulate", "--theta", args[0], "--hurst", args[1], "--T", args[2],
                       "--steps", "10", "--seed", "1")
        checks.append((label, code == 1, f"exit {code}"))
    with pytest.raises(DomainError):
        E.ExperimentConfig(theta=1.0, horizons=(701.0,))
    verdict(8, "degenerate inputs and determinism", checks)
