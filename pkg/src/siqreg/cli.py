"""Command-line surface: fit, simulate, replicate and diagnose subcommands.

All numeric CSV output is comma-separated with a header row, 17-significant-
digit floats and LF line endings, so a rerun with the same seed reproduces the
files byte for byte.  A line-oriented ``key=value`` config file may supply any
flag; explicit flags win.  Exit codes: 0 success, 2 configuration error,
3 numeric failure inside a chain.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import acf, effective_sample_size, fitted_link, normalize_draws, summarize
from .data import format_float, ingest_csv
from .reference import reference_mse
from .rng import RandomStream
from .sampler import Hyperparams, NumericFailure, SamplerConfig, run_chain
from .simulate import SimSpec, generate, run_replication_study

__all__ = ["main"]


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# File writers
# ---------------------------------------------------------------------------


def _cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format_float(value)


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_cell(v) for v in row) + "\n")


def write_meta(path, entries):
    with open(path, "w", newline="") as fh:
        for key, value in entries:
            fh.write(f"{key} = {value}\n")


def _bool_str(flag) -> str:
    return "true" if flag else "false"


# ---------------------------------------------------------------------------
# Config-file merging
# ---------------------------------------------------------------------------


def parse_config_file(path) -> dict:
    """Parse ``key=value`` lines; blank lines and '#' comments are skipped."""
    values = {}
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"no such config file: {path}")
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _coerce(key, text, kind):
    try:
        if kind is bool:
            low = text.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(text)
        return kind(text)
    except ValueError:
        raise ConfigError(f"config key {key!r}: cannot parse {text!r}") from None


def apply_config_file(args, types):
    """Fill unset args from the config file; unknown keys are rejected."""
    if not getattr(args, "config", None):
        return
    file_values = parse_config_file(args.config)
    for key, text in file_values.items():
        if key not in types:
            raise ConfigError(f"unknown config key {key!r}")
        if getattr(args, key) is None:
            setattr(args, key, _coerce(key, text, types[key]))


def _defaulted(args, defaults):
    for key, value in defaults.items():
        if getattr(args, key) is None:
            setattr(args, key, value)


# ---------------------------------------------------------------------------
# Shared sampler plumbing
# ---------------------------------------------------------------------------

SAMPLER_DEFAULTS = {
    "tau": 0.5,
    "iters": 10000,
    "burnin": 5000,
    "thin": 1,
    "seed": 0,
    "sigma_beta_prop": 0.1,
    "sigma_gamma_prop": 0.5,
    "jitter": 0.0,
    "no_autotune": False,
    "uncollapsed": False,
}

SAMPLER_TYPES = {
    "tau": float,
    "iters": int,
    "burnin": int,
    "thin": int,
    "seed": int,
    "sigma_beta_prop": float,
    "sigma_gamma_prop": float,
    "jitter": float,
    "no_autotune": bool,
    "uncollapsed": bool,
}


def add_sampler_flags(sub):
    sub.add_argument("--tau", type=float, help="quantile level in (0, 1)")
    sub.add_argument("--iters", type=int, help="total MCMC scans")
    sub.add_argument("--burnin", type=int, help="scans discarded as burn-in")
    sub.add_argument("--thin", type=int, help="keep every thin-th post-burn-in scan")
    sub.add_argument("--seed", type=int, help="master seed")
    sub.add_argument("--sigma-beta-prop", type=float, dest="sigma_beta_prop")
    sub.add_argument("--sigma-gamma-prop", type=float, dest="sigma_gamma_prop")
    sub.add_argument("--jitter", type=float, help="extra diagonal stabilizer")
    sub.add_argument(
        "--no-autotune",
        dest="no_autotune",
        action="store_const",
        const=True,
        help="disable burn-in proposal-scale tuning",
    )
    sub.add_argument(
        "--uncollapsed",
        action="store_const",
        const=True,
        help="use the uncollapsed beta/gamma updates (comparison runs)",
    )
    sub.add_argument("--config", help="key=value file supplying any flag")


def _sampler_objects(args):
    try:
        cfg = SamplerConfig(
            tau=args.tau,
            iterations=args.iters,
            burn_in=args.burnin,
            thin=args.thin,
            collapsed=not args.uncollapsed,
            seed=args.seed,
            autotune=not args.no_autotune,
        )
        hp = Hyperparams(
            sigma_beta_prop=args.sigma_beta_prop,
            sigma_gamma_prop=args.sigma_gamma_prop,
            jitter=args.jitter,
        )
    except ValueError as err:
        raise ConfigError(str(err)) from None
    return cfg, hp


def _sampler_meta(cfg, hp):
    return [
        ("version", __version__),
        ("tau", format_float(cfg.tau)),
        ("iterations", cfg.iterations),
        ("burn_in", cfg.burn_in),
        ("thin", cfg.thin),
        ("seed", cfg.seed),
        ("collapsed", _bool_str(cfg.collapsed)),
        ("autotune", _bool_str(cfg.autotune)),
        ("pilot_candidates", cfg.pilot_candidates),
        ("pilot_scans", cfg.pilot_scans),
        ("sigma_beta_prop", format_float(hp.sigma_beta_prop)),
        ("sigma_gamma_prop", format_float(hp.sigma_gamma_prop)),
        ("jitter", format_float(hp.jitter)),
        ("a_sigma", format_float(hp.a_sigma)),
        ("b_sigma", format_float(hp.b_sigma)),
        ("a_lambda", format_float(hp.a_lambda)),
        ("b_lambda", format_float(hp.b_lambda)),
        ("a_gamma", format_float(hp.a_gamma)),
        ("b_gamma", format_float(hp.b_gamma)),
    ]


# ---------------------------------------------------------------------------
# fit
# ---------------------------------------------------------------------------

ACF_MAX_LAG = 50
LINK_GRID_POINTS = 100


def command_fit(args) -> int:
    _defaulted(args, SAMPLER_DEFAULTS)
    cfg, hp = _sampler_objects(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        data = ingest_csv(args.data, args.response)
    except (OSError, ValueError) as err:
        raise ConfigError(str(err)) from None

    started = time.perf_counter()
    draws = run_chain(data, cfg, hp)
    wall = time.perf_counter() - started

    p = data.p
    beta_norm = normalize_draws(draws.beta)
    d = 1.0 / np.sum(draws.beta**2, axis=1)
    iterations = cfg.burn_in + cfg.thin * np.arange(1, draws.n_kept + 1)

    header = (
        ["iteration"]
        + [f"beta_raw_{j + 1}" for j in range(p)]
        + [f"beta_norm_{j + 1}" for j in range(p)]
        + ["d", "sigma", "lambda", "gamma"]
    )
    rows = (
        [int(iterations[k])]
        + list(draws.beta[k])
        + list(beta_norm[k])
        + [d[k], draws.sigma[k], draws.lam[k], draws.gamma[k]]
        for k in range(draws.n_kept)
    )
    write_csv(out / "chain.csv", header, rows)

    scalar_series = {}
    for j in range(p):
        scalar_series[f"beta_norm_{j + 1}"] = beta_norm[:, j]
    for j in range(p):
        scalar_series[f"beta_raw_{j + 1}"] = draws.beta[:, j]
    scalar_series["d"] = d
    scalar_series["sigma"] = draws.sigma
    scalar_series["lambda"] = draws.lam
    scalar_series["gamma"] = draws.gamma
    scalar_series["sigma_original"] = data.sigma_to_original(draws.sigma)
    summary_rows = []
    for name, series in scalar_series.items():
        s = summarize(series)
        summary_rows.append([name, s.mean, s.median, s.sd, s.q2_5, s.q97_5])
    write_csv(
        out / "summary.csv",
        ["parameter", "mean", "median", "sd", "q2.5", "q97.5"],
        summary_rows,
    )

    index_hat = data.X @ draws.beta.mean(axis=0)
    grid = np.linspace(index_hat.min(), index_hat.max(), LINK_GRID_POINTS)
    mean, lower, upper = fitted_link(draws, data, grid)
    write_csv(
        out / "fitted.csv",
        ["grid", "mean", "lower", "upper"],
        ([grid[i], mean[i], lower[i], upper[i]] for i in range(grid.shape[0])),
    )

    _write_acf_csv(out / "acf.csv", draws, min(ACF_MAX_LAG, draws.n_kept - 1))

    meta = [("command", "fit"), ("data", str(args.data)), ("response", args.response)]
    meta += _sampler_meta(cfg, hp)
    meta += [
        ("n", data.n),
        ("p", data.p),
        ("features", ",".join(data.feature_names)),
        ("frozen_sigma_beta_prop", format_float(draws.sigma_beta_prop)),
        ("frozen_sigma_gamma_prop", format_float(draws.sigma_gamma_prop)),
        ("accept_rate_beta", format_float(draws.beta_accept_rate)),
        ("accept_rate_gamma", format_float(draws.gamma_accept_rate)),
        ("wall_time_s", format_float(wall)),
    ]
    write_meta(out / "meta.txt", meta)
    print(f"wrote chain.csv, summary.csv, fitted.csv, acf.csv, meta.txt to {out}")
    return 0


def _safe_acf(name, values, max_lag):
    try:
        return acf(values, max_lag)
    except ValueError as err:
        print(f"warning: acf of {name} undefined ({err}); writing nan", file=sys.stderr)
        return np.full(max_lag + 1, np.nan)


def _write_acf_csv(path, draws, max_lag):
    p = draws.beta.shape[1]
    series = {f"acf_beta_{j + 1}": draws.beta[:, j] for j in range(p)}
    series["acf_sigma"] = draws.sigma
    series["acf_lambda"] = draws.lam
    series["acf_gamma"] = draws.gamma
    columns = {name: _safe_acf(name, values, max_lag) for name, values in series.items()}
    rows = ([lag] + [columns[name][lag] for name in series] for lag in range(max_lag + 1))
    write_csv(path, ["lag"] + list(series), rows)


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def command_simulate(args) -> int:
    _defaulted(args, {"tau": 0.5, "seed": 0, "n": 100})
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        spec = SimSpec(args.example, args.n, args.tau, replications=1, seed=args.seed)
    except ValueError as err:
        raise ConfigError(str(err)) from None
    data, truth = generate(spec.example_id, spec.n, spec.tau, RandomStream(spec.seed))

    X = data.original_X()
    y = data.original_y()
    write_csv(
        out / "dataset.csv",
        data.feature_names + [data.response_name],
        (list(X[i]) + [y[i]] for i in range(data.n)),
    )
    write_csv(out / "truth.csv", [f"beta_{j + 1}" for j in range(data.p)], [list(truth)])
    print(f"wrote dataset.csv and truth.csv to {out}")
    return 0


# ---------------------------------------------------------------------------
# replicate
# ---------------------------------------------------------------------------


def command_replicate(args) -> int:
    _defaulted(args, SAMPLER_DEFAULTS)
    _defaulted(args, {"replications": 20, "jobs": 1, "n": 100})
    cfg, hp = _sampler_objects(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        spec = SimSpec(args.example, args.n, args.tau, args.replications, seed=args.seed)
    except ValueError as err:
        raise ConfigError(str(err)) from None

    started = time.perf_counter()
    study = run_replication_study(spec, cfg, hp, jobs=args.jobs)
    wall = time.perf_counter() - started
    if study.failures:
        for failure in study.failures:
            print(f"warning: {failure}", file=sys.stderr)

    p = study.truth.shape[0]
    ref = reference_mse(spec.example_id, spec.n, spec.tau)
    mse_rows = []
    for j in range(p):
        row = [f"beta_{j + 1}", study.mse[j]]
        row.append(format_float(ref["bayes"][j]) if ref else "")
        row.append(format_float(ref["kernel"][j]) if ref else "")
        mse_rows.append(row)
    write_csv(
        out / "mse.csv",
        ["component", "mse", "ref_bayes_mse", "ref_kernel_mse"],
        mse_rows,
    )

    est_header = (
        ["replicate"]
        + [f"beta_{j + 1}" for j in range(p)]
        + ["sigma_mean", "accept_rate_beta", "accept_rate_gamma"]
    )
    est_rows = (
        [i]
        + list(study.estimates[i])
        + [study.sigma_means[i], study.beta_accept_rates[i], study.gamma_accept_rates[i]]
        for i in range(study.estimates.shape[0])
    )
    write_csv(out / "estimates.csv", est_header, est_rows)

    meta = [
        ("command", "replicate"),
        ("example", spec.example_id),
        ("n", spec.n),
        ("replications", spec.replications),
        ("jobs", args.jobs),
        ("failures", len(study.failures)),
    ]
    meta += _sampler_meta(cfg, hp)
    meta += [
        ("truth", ",".join(format_float(v) for v in study.truth)),
        ("wall_time_s", format_float(wall)),
    ]
    write_meta(out / "meta.txt", meta)
    print(f"wrote mse.csv, estimates.csv, meta.txt to {out}")
    return 0


# ---------------------------------------------------------------------------
# diagnose
# ---------------------------------------------------------------------------


def command_diagnose(args) -> int:
    _defaulted(args, {"max_lag": ACF_MAX_LAG})
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = Path(args.chain)
    if not path.exists():
        raise ConfigError(f"no such chain file: {path}")
    with open(path, newline="") as fh:
        header = fh.readline().strip().split(",")
        table = np.loadtxt(fh, delimiter=",", ndmin=2)
    wanted = [
        name
        for name in header
        if name.startswith("beta_raw_") or name in ("sigma", "lambda", "gamma")
    ]
    if not wanted:
        raise ConfigError(f"{path} has no chain columns; found {header}")
    series = {name: table[:, header.index(name)] for name in wanted}
    max_lag = min(args.max_lag, table.shape[0] - 1)

    columns = {name: _safe_acf(name, values, max_lag) for name, values in series.items()}
    rows = (
        [lag] + [columns[name][lag] for name in wanted] for lag in range(max_lag + 1)
    )
    write_csv(out / "acf.csv", ["lag"] + [f"acf_{n}" for n in wanted], rows)

    def safe_ess(name):
        try:
            return effective_sample_size(series[name])
        except ValueError as err:
            print(f"warning: ess of {name} undefined ({err}); writing nan", file=sys.stderr)
            return np.nan

    write_csv(
        out / "ess.csv",
        ["parameter", "ess"],
        ([name, safe_ess(name)] for name in wanted),
    )
    print(f"wrote acf.csv and ess.csv to {out}")
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="siqreg",
        description="Single-index quantile regression with a Gaussian-process link",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="fit one chain to a CSV dataset")
    fit.add_argument("--data", required=True, help="input CSV with a header row")
    fit.add_argument("--response", required=True, help="response column name")
    fit.add_argument("--out", required=True, help="output directory")
    add_sampler_flags(fit)
    fit.set_defaults(func=command_fit, types=dict(SAMPLER_TYPES))

    sim = sub.add_parser("simulate", help="write one benchmark dataset")
    sim.add_argument("--example", required=True, help="1, 2, 3, 4, 5a or 5b")
    sim.add_argument("--n", type=int, help="sample size")
    sim.add_argument("--tau", type=float, help="quantile level")
    sim.add_argument("--seed", type=int, help="generator seed")
    sim.add_argument("--out", required=True)
    sim.add_argument("--config", help="key=value file supplying any flag")
    sim.set_defaults(
        func=command_simulate, types={"n": int, "tau": float, "seed": int}
    )

    rep = sub.add_parser("replicate", help="replication study with an MSE table")
    rep.add_argument("--example", required=True, help="1, 2, 3, 4, 5a or 5b")
    rep.add_argument("--n", type=int, help="sample size")
    rep.add_argument("--replications", type=int, help="number of replicates")
    rep.add_argument("--jobs", type=int, help="parallel worker processes")
    rep.add_argument("--out", required=True)
    add_sampler_flags(rep)
    rep.set_defaults(
        func=command_replicate,
        types=dict(SAMPLER_TYPES, replications=int, jobs=int),
    )

    diag = sub.add_parser("diagnose", help="recompute ACF/ESS from a stored chain")
    diag.add_argument("--chain", required=True, help="chain.csv written by fit")
    diag.add_argument("--out", required=True)
    diag.add_argument("--max-lag", type=int, dest="max_lag")
    diag.add_argument("--config", help="key=value file supplying any flag")
    diag.set_defaults(func=command_diagnose, types={"max_lag": int})

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        apply_config_file(args, args.types)
        return args.func(args)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except NumericFailure as err:
        print(f"numeric failure: {err}", file=sys.stderr)
        if err.iteration is not None:
            print(f"  at iteration {err.iteration}", file=sys.stderr)
        if err.state is not None:
            print(
                f"  state snapshot: sigma={err.state.sigma:.6g} "
                f"lambda={err.state.lam:.6g} gamma={err.state.gamma:.6g} "
                f"beta={np.array2string(err.state.beta, precision=6)}",
                file=sys.stderr,
            )
        return 3


if __name__ == "__main__":
    sys.exit(main())
