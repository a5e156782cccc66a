"""Command-line front end: ``fracou {simulate,estimate,theory,experiment}``.

Exit codes: 0 success, 1 validation/domain error, 2 numerical failure,
3 an experiment gate failed. Logs and echoes go to stderr; data goes to
stdout unless an output path is given.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

from . import experiment, theory
from .errors import DomainError, NumericError
from .estimator import lse_theta
from .fgn import sample_fgn
from .ou_sim import MAX_THETA_T, ModelParams, simulate_ou
from .paths import GridSpec, PathSample

EXIT_OK, EXIT_DOMAIN, EXIT_NUMERIC, EXIT_GATE = 0, 1, 2, 3

log = logging.getLogger("fracou")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise DomainError(message)


def _need(args, *names):
    for name in names:
        if getattr(args, name.replace("-", "_")) is None:
            raise DomainError(f"--{name} is required for this quantity")


def _check_flag(ok: bool, flag: str, message: str) -> None:
    if not ok:
        raise DomainError(f"--{flag}: {message}")


def cmd_simulate(args) -> int:
    _check_flag(args.theta > 0, "theta", f"must be > 0 (non-ergodic case), got {args.theta}")
    _check_flag(0 < args.hurst < 1, "hurst", f"must lie in (0, 1), got {args.hurst}")
    _check_flag(args.T > 0, "T", f"must be > 0, got {args.T}")
    _check_flag(args.steps >= 1, "steps", f"must be >= 1, got {args.steps}")
    _check_flag(0 <= args.seed < 2**64, "seed", "must be an unsigned 64-bit integer")
    _check_flag(args.theta * args.T <= MAX_THETA_T, "T",
                f"theta*T = {args.theta * args.T:g} exceeds {MAX_THETA_T:g}")
    grid = GridSpec(args.T, args.steps)
    params = ModelParams(args.theta, args.hurst)
    increments = sample_fgn(args.hurst, grid.steps, grid.dt, args.seed, args.generator)
    path = simulate_ou(params, increments, args.scheme)
    print(f"grid: T={grid.horizon!r} steps={grid.steps} dt={grid.dt!r}; seed={args.seed}; "
          f"generator={args.generator}; scheme={args.scheme}", file=sys.stderr)
    if args.out:
        path.to_csv(args.out)
    else:
        sys.stdout.write(path.to_csv())
    return EXIT_OK


def cmd_estimate(args) -> int:
    source = sys.stdin if args.input == "-" else args.input
    path = PathSample.from_csv(source)
    result = lse_theta(path, args.theta_true)
    fields = ["theta_hat", "integral_x2", "x_terminal", "horizon"]
    if result.rescaled_error is not None:
        fields.append("rescaled_error")
    if args.format == "csv":
        print(",".join(fields))
        print(",".join(repr(getattr(result, f)) for f in fields))
    else:
        for f in fields:
            print(f"{f}: {getattr(result, f)!r}")
    return EXIT_OK


QUANTITIES = ("xi-inf-var", "xi-tail-var", "xi-var", "fwd-var", "skorohod-corr",
              "cross-cov", "cauchy-cdf", "cauchy-quantile")


def cmd_theory(args) -> int:
    q = args.quantity
    if q in ("cauchy-cdf", "cauchy-quantile"):
        _need(args, "theta")
        law = theory.CauchyScaleLaw.for_theta(args.theta)
        if q == "cauchy-cdf":
            _need(args, "x")
            value = theory.cauchy_cdf(args.x, law)
        else:
            p = args.p if args.p is not None else args.x
            if p is None:
                raise DomainError("--p is required for cauchy-quantile")
            value = theory.cauchy_quantile(p, law)
    else:
        _need(args, "theta", "hurst")
        if q == "xi-inf-var":
            value = theory.xi_infinity_variance(args.theta, args.hurst)
        else:
            _need(args, "t")
            if q == "xi-tail-var":
                value = theory.xi_tail_variance(args.theta, args.hurst, args.t)
            elif q == "xi-var":
                value = theory.xi_variance(args.theta, args.hurst, args.t)
            elif q == "fwd-var":
                value = theory.forward_integral_variance(args.theta, args.hurst, args.t)
            elif q == "skorohod-corr":
                value = theory.skorohod_correction_term(args.theta, args.hurst, args.t)
            else:
                _need(args, "s")
                value = theory.cross_covariance_decay(args.theta, args.hurst, args.s, args.t)
    print(f"{value:.12g}")
    return EXIT_OK


_OVERRIDES = ("theta", "hurst", "horizons", "steps_per_unit", "replications", "base_seed",
              "generator", "scheme", "output_dir", "cross_time")


def cmd_experiment(args) -> int:
    overrides = {key: getattr(args, key) for key in _OVERRIDES}
    config = experiment.load_config(args.config, overrides, base=experiment.DEFAULT_CONFIGS[args.mode])
    if config.output_dir is None:
        config = config.replace(output_dir=f"fracou_output/{args.mode}")
    for key, value in config.items():
        print(f"config {key} = {value}", file=sys.stderr)
    report = experiment.run(args.mode, config)
    for name, horizon, value in report.metrics:
        where = "" if horizon is None else f" T={horizon:g}"
        print(f"{name}{where}: {value!r}")
    for name, ok in report.gates.items():
        print(f"gate {name}: {'pass' if ok else 'FAIL'}")
    for kind, path in report.files.items():
        print(f"wrote {kind}: {path}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_GATE


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fracou", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="simulate one fractional OU path")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--hurst", type=float, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--scheme", choices=("exact", "euler"), default="exact")
    p.add_argument("--generator", choices=("circulant", "cholesky"), default="circulant")
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", help="least-squares estimate of theta from a path CSV")
    p.add_argument("--in", dest="input", required=True, help="path CSV ('-' for stdin)")
    p.add_argument("--theta-true", type=float)
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("theory", help="evaluate a closed-form or quadrature quantity")
    p.add_argument("--quantity", choices=QUANTITIES, required=True)
    p.add_argument("--theta", type=float)
    p.add_argument("--hurst", type=float)
    p.add_argument("--t", type=float)
    p.add_argument("--s", type=float)
    p.add_argument("--x", type=float)
    p.add_argument("--p", type=float)
    p.set_defaults(func=cmd_theory)

    p = sub.add_parser("experiment", help="run a seeded Monte Carlo campaign")
    p.add_argument("--mode", choices=experiment.MODES, required=True)
    p.add_argument("--config")
    p.add_argument("--theta", type=float)
    p.add_argument("--hurst", type=float)
    p.add_argument("--horizons", help="comma-separated list of T")
    p.add_argument("--steps-per-unit", dest="steps_per_unit", type=int)
    p.add_argument("--replications", type=int)
    p.add_argument("--base-seed", dest="base_seed", type=int)
    p.add_argument("--generator", choices=("circulant", "cholesky"))
    p.add_argument("--scheme", choices=("exact", "euler"))
    p.add_argument("--output-dir", dest="output_dir")
    p.add_argument("--cross-time", dest="cross_time", type=float)
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
