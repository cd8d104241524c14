"""Command-line front end.

Subcommands

  trace            sampled decoherence history of one model
  qsl-sweep        QSL time, backflow and identity residual over a
                   detuning grid, one row per (delta, tau)
  nonmarkov-sweep  backflow and trapped population over a detuning grid
  pairs            random-pair backflow survey against the canonical pair
  validate         run the self-validation suites
  beta             physical band-edge scale from omega0 and dipole
  report           run the sweeps and pair survey, write CSVs plus
                   rendered PNG figures into a directory

Output is CSV (or JSON via --format json) with a leading '#' metadata line
echoing the physics configuration, so every file is reproducible from its
own header.  Floats are written with 17 significant digits.  Runs are
deterministic for a fixed seed regardless of --workers.

Exit codes: 0 success, 2 configuration error, 3 validation failure,
4 I/O error.
"""
import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__, nonmarkov, plotting, qsl, reservoirs
from .errors import ConfigError, QslsimError
from .validate import format_report, run_all_checks

WORKERS_ENV = "QSLSIM_WORKERS"
EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VALIDATION = 3
EXIT_IO = 4

IDENTITY_RESIDUAL_LIMIT = 1e-6

_SWEEP_HEADER = ["delta", "tau", "tau_qsl", "n_value", "p_tau",
                 "identity_residual"]
_NONMARKOV_HEADER = ["delta", "tau", "n_value", "p_tau"]
_TRACE_HEADER = ["t", "re_b", "im_b", "P", "dPdt", "epsilon", "gamma"]
_PAIRS_HEADER = ["pair_index", "integral"]

_DEFAULTS = {
    "model": "pbg", "delta": -10.0, "delta_min": -10.0, "delta_max": 10.0,
    "delta_steps": 201, "gamma0": 1.0, "lam": 5.0, "dt": 1e-3, "seed": 42,
    "n_pairs": 2000, "out": "-", "workers": None, "fmt": "csv",
    "config": None, "plot": False, "out_dir": "report",
    "omega0": None, "dipole": None, "tau": None,
}
_TAU_DEFAULTS = {"trace": "10", "qsl-sweep": "1,3,5,10",
                 "nonmarkov-sweep": "10", "pairs": "20", "report": "1,3,5,10"}

# config-file key -> (namespace destination, caster); accepts the long flag
# spelling with '-' or '_'
_CONFIG_KEYS = {
    "model": ("model", str), "delta": ("delta", float),
    "delta_min": ("delta_min", float), "delta_max": ("delta_max", float),
    "delta_steps": ("delta_steps", int), "tau": ("tau", str),
    "gamma0": ("gamma0", float), "lambda": ("lam", float),
    "dt": ("dt", float), "seed": ("seed", int),
    "n_pairs": ("n_pairs", int), "out": ("out", str),
    "workers": ("workers", int), "format": ("fmt", str),
    "out_dir": ("out_dir", str), "plot": ("plot", str),
    "omega0": ("omega0", float), "dipole": ("dipole", float),
}


def _fmt(x):
    return format(float(x), ".17g")


def build_parser():
    sup = argparse.SUPPRESS
    parser = argparse.ArgumentParser(
        prog="qslsim",
        description="Quantum-speed-limit and non-Markovianity simulator "
                    "for a qubit in band-gap and damped-cavity reservoirs.")
    parser.add_argument("--version", action="version",
                        version=f"qslsim {__version__}")
    sub = parser.add_subparsers(dest="cmd", required=True)

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--model", choices=("pbg", "jc"), default=sup,
                       help="reservoir model (default pbg)")
    model.add_argument("--delta", type=float, default=sup,
                       help="band-gap detuning in units of beta")
    model.add_argument("--gamma0", type=float, default=sup,
                       help="damped-cavity Markov rate")
    model.add_argument("--lambda", dest="lam", type=float, default=sup,
                       help="damped-cavity spectral width")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tau", type=str, default=sup,
                        help="driving time, or comma list for sweeps")
    common.add_argument("--dt", type=float, default=sup,
                        help="grid step (default 1e-3)")
    common.add_argument("--out", type=str, default=sup,
                        help="output path, '-' for stdout (default)")
    common.add_argument("--format", dest="fmt", choices=("csv", "json"),
                        default=sup, help="output format (default csv)")
    common.add_argument("--config", type=str, default=sup,
                        help="key=value config file; flags take precedence")
    common.add_argument("--plot", action="store_true", default=sup,
                        help="also render a PNG next to --out")

    sweep = argparse.ArgumentParser(add_help=False)
    sweep.add_argument("--delta-min", dest="delta_min", type=float,
                       default=sup)
    sweep.add_argument("--delta-max", dest="delta_max", type=float,
                       default=sup)
    sweep.add_argument("--delta-steps", dest="delta_steps", type=int,
                       default=sup)
    sweep.add_argument("--seed", type=int, default=sup)
    sweep.add_argument("--workers", type=int, default=sup,
                       help=f"worker processes (default ${WORKERS_ENV} "
                            "or logical cores)")

    sub.add_parser("trace", parents=[model, common],
                   help="sampled decoherence history")
    sub.add_parser("qsl-sweep", parents=[model, common, sweep],
                   help="QSL sweep over the detuning grid")
    sub.add_parser("nonmarkov-sweep", parents=[model, common, sweep],
                   help="backflow / trapping sweep over the detuning grid")
    pairs = sub.add_parser("pairs", parents=[model, common],
                           help="random-pair backflow survey")
    pairs.add_argument("--n-pairs", dest="n_pairs", type=int, default=sup)
    pairs.add_argument("--seed", type=int, default=sup)
    val = sub.add_parser("validate", help="run self-validation suites")
    val.add_argument("--format", dest="fmt", choices=("csv", "json"),
                     default=sup)
    val.add_argument("--config", type=str, default=sup)
    beta = sub.add_parser("beta", help="physical band-edge scale in Hz")
    beta.add_argument("--omega0", type=float, default=sup,
                      help="transition frequency in rad/s")
    beta.add_argument("--dipole", type=float, default=sup,
                      help="dipole moment in C m")
    beta.add_argument("--config", type=str, default=sup)
    report = sub.add_parser("report", parents=[model, common, sweep],
                            help="sweeps + pair survey with rendered figures")
    report.add_argument("--n-pairs", dest="n_pairs", type=int, default=sup)
    report.add_argument("--out-dir", dest="out_dir", type=str, default=sup)
    return parser


def _load_config_file(path):
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    for ln, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{ln}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        value = value.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{ln}: unknown config key {key!r}")
        dest, caster = _CONFIG_KEYS[key]
        try:
            values[dest] = caster(value)
        except ValueError:
            raise ConfigError(
                f"{path}:{ln}: bad value {value!r} for {key}") from None
    if isinstance(values.get("plot"), str):
        flag = values["plot"].lower()
        if flag not in ("true", "false", "0", "1", "yes", "no"):
            raise ConfigError(f"bad boolean for plot: {values['plot']!r}")
        values["plot"] = flag in ("true", "1", "yes")
    return values


def _merge_options(args):
    explicit = vars(args).copy()
    cmd = explicit.pop("cmd")
    merged = dict(_DEFAULTS)
    merged["tau"] = _TAU_DEFAULTS.get(cmd)
    config_path = explicit.get("config")
    if config_path:
        merged.update(_load_config_file(config_path))
    merged.update(explicit)
    merged["cmd"] = cmd
    return merged


def _parse_tau_list(spec, single=False):
    try:
        taus = [float(x) for x in str(spec).split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"bad tau list {spec!r}") from None
    if not taus or any(not (math.isfinite(v) and v > 0) for v in taus):
        raise ConfigError(f"tau values must be positive, got {spec!r}")
    if single and len(taus) != 1:
        raise ConfigError(f"this command takes a single tau, got {spec!r}")
    return taus


def _resolve_workers(opt):
    if opt.get("workers") is not None:
        workers = int(opt["workers"])
    elif os.environ.get(WORKERS_ENV):
        try:
            workers = int(os.environ[WORKERS_ENV])
        except ValueError:
            raise ConfigError(
                f"bad {WORKERS_ENV}={os.environ[WORKERS_ENV]!r}") from None
    else:
        workers = os.cpu_count() or 1
    if workers < 1:
        raise ConfigError(f"workers must be >= 1, got {workers}")
    return workers


def _build_model(opt):
    if opt["model"] == "pbg":
        return reservoirs.PbgModel(float(opt["delta"]))
    if opt["model"] == "jc":
        return reservoirs.JcModel(float(opt["gamma0"]), float(opt["lam"]))
    raise ConfigError(f"unknown model {opt['model']!r}")


def _meta_line(opt, taus):
    skip = {"cmd", "out", "workers", "config", "plot", "out_dir", "fmt",
            "tau"}
    parts = [f"tau={','.join(format(v, 'g') for v in taus)}"] if taus else []
    for key in sorted(_DEFAULTS):
        if key in skip or opt.get(key) is None:
            continue
        parts.append(f"{key}={opt[key]}")
    return f"# qslsim {__version__} command={opt['cmd']} " + " ".join(parts)


def _write_text(path, text):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _render_rows(opt, taus, header, rows):
    """Rows (list of dicts) to CSV or JSON text."""
    if opt["fmt"] == "json":
        payload = {"meta": {"version": __version__, "command": opt["cmd"],
                            "params": _meta_line(opt, taus)[2:]},
                   "rows": rows}
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    lines = [_meta_line(opt, taus), ",".join(header)]
    for row in rows:
        cells = []
        for key in header:
            v = row[key]
            if isinstance(v, str):
                cells.append(v)
            else:
                cells.append(_fmt(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _plot_target(opt):
    if opt["out"] == "-":
        raise ConfigError("--plot requires --out pointing to a file")
    return os.path.splitext(opt["out"])[0] + ".png"


# ---------------------------------------------------------------- sweeps

def _qsl_sweep_row(item):
    delta, tau, dt = item
    trace = reservoirs.sample_trace(reservoirs.PbgModel(delta), tau, dt)
    tau_qsl = qsl.qsl_time_excited_from_trace(trace)
    n_value = nonmarkov.blp_integral(nonmarkov.canonical_pair(), trace).value
    p_tau = float(trace.P[-1])
    via_identity = nonmarkov.qsl_from_nonmarkov(n_value, p_tau, trace.tau)
    return {"delta": delta, "tau": tau, "tau_qsl": tau_qsl,
            "n_value": n_value, "p_tau": p_tau,
            "identity_residual": abs(tau_qsl - via_identity) / trace.tau}


def _nonmarkov_sweep_row(item):
    delta, tau, dt = item
    trace = reservoirs.sample_trace(reservoirs.PbgModel(delta), tau, dt)
    n_value = nonmarkov.blp_integral(nonmarkov.canonical_pair(), trace).value
    return {"delta": delta, "tau": tau, "n_value": n_value,
            "p_tau": float(trace.P[-1])}


def _run_tasks(fn, items, workers):
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    chunk = max(1, len(items) // (workers * 4))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


def _delta_grid(opt):
    steps = int(opt["delta_steps"])
    if steps < 1:
        raise ConfigError(f"delta_steps must be >= 1, got {steps}")
    lo, hi = float(opt["delta_min"]), float(opt["delta_max"])
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo:
        raise ConfigError(f"bad delta range [{lo}, {hi}]")
    if steps == 1:
        return [lo]
    return [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]


def _check_dt(opt):
    dt = float(opt["dt"])
    if not (math.isfinite(dt) and dt > 0):
        raise ConfigError(f"dt must be positive, got {dt}")
    return dt


def _sweep_common(opt, row_fn):
    if opt["model"] != "pbg":
        raise ConfigError("sweeps scan the band-gap detuning; "
                          "use --model pbg (the damped-cavity model has no "
                          "delta axis)")
    taus = _parse_tau_list(opt["tau"])
    dt = _check_dt(opt)
    deltas = _delta_grid(opt)
    items = [(d, t, dt) for t in taus for d in deltas]
    rows = _run_tasks(row_fn, items, _resolve_workers(opt))
    rows.sort(key=lambda r: (r["tau"], r["delta"]))
    return taus, rows


def cmd_qsl_sweep(opt):
    taus, rows = _sweep_common(opt, _qsl_sweep_row)
    text = _render_rows(opt, taus, _SWEEP_HEADER, rows)
    _write_text(opt["out"], text)
    if opt["plot"]:
        plotting.plot_qsl_sweep(rows, _plot_target(opt))
    bad = [r for r in rows
           if r["identity_residual"] >= IDENTITY_RESIDUAL_LIMIT]
    if bad:
        first = bad[0]
        print(f"validation failure: {len(bad)} rows with identity residual "
              f">= {IDENTITY_RESIDUAL_LIMIT:g} (first at delta="
              f"{first['delta']:g}, tau={first['tau']:g})", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def cmd_nonmarkov_sweep(opt):
    taus, rows = _sweep_common(opt, _nonmarkov_sweep_row)
    text = _render_rows(opt, taus, _NONMARKOV_HEADER, rows)
    _write_text(opt["out"], text)
    if opt["plot"]:
        plotting.plot_nonmarkov_sweep(rows, _plot_target(opt))
    return EXIT_OK


def cmd_trace(opt):
    taus = _parse_tau_list(opt["tau"], single=True)
    dt = _check_dt(opt)
    model = _build_model(opt)
    trace = reservoirs.sample_trace(model, taus[0], dt)
    from .dynamics import rates_from_b
    from .errors import SingularRateError
    rows = []
    for k in range(trace.grid.size):
        row = {"t": trace.grid[k], "re_b": trace.b[k].real,
               "im_b": trace.b[k].imag, "P": trace.P[k],
               "dPdt": trace.dPdt[k]}
        try:
            rates = rates_from_b(trace.b[k], trace.b_dot[k])
            row["epsilon"] = rates.epsilon
            row["gamma"] = rates.gamma
        except SingularRateError:
            row["epsilon"] = ""
            row["gamma"] = ""
        rows.append(row)
    text = _render_rows(opt, taus, _TRACE_HEADER, rows)
    _write_text(opt["out"], text)
    if opt["plot"]:
        plotting.plot_trace(trace.grid, trace.P, trace.dPdt,
                            _plot_target(opt))
    return EXIT_OK


def cmd_pairs(opt):
    taus = _parse_tau_list(opt["tau"], single=True)
    dt = _check_dt(opt)
    n_pairs = int(opt["n_pairs"])
    if n_pairs < 1:
        raise ConfigError(f"n_pairs must be >= 1, got {n_pairs}")
    model = _build_model(opt)
    report = nonmarkov.blp_measure_sampled(model, taus[0], n_pairs,
                                           int(opt["seed"]), dt)
    rows = [{"pair_index": i, "integral": v}
            for i, v in enumerate(report.integrals)]
    rows.append({"pair_index": "canonical",
                 "integral": report.optimal_value})
    if opt["fmt"] == "csv":
        for row in rows[:-1]:
            row["pair_index"] = str(row["pair_index"])
    text = _render_rows(opt, taus, _PAIRS_HEADER, rows)
    _write_text(opt["out"], text)
    if opt["plot"]:
        plotting.plot_pairs(report.integrals, report.optimal_value,
                            _plot_target(opt))
    return EXIT_OK


def cmd_validate(opt):
    results = run_all_checks()
    if opt.get("fmt") == "json":
        payload = [{"suite": r.suite, "passed": r.passed, "worst": r.worst,
                    "tolerance": r.tolerance, "detail": r.detail}
                   for r in results]
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True)
                         + "\n")
    else:
        print(format_report(results))
    if all(r.passed for r in results):
        return EXIT_OK
    failed = next(r.suite for r in results if not r.passed)
    print(f"validation failure: first failing suite is {failed!r}",
          file=sys.stderr)
    return EXIT_VALIDATION


def cmd_beta(opt):
    if opt.get("omega0") is None or opt.get("dipole") is None:
        raise ConfigError("beta requires --omega0 and --dipole")
    value = reservoirs.physical_beta(float(opt["omega0"]),
                                     float(opt["dipole"]))
    print(f"beta_hz = {value:.17g}")
    return EXIT_OK


def cmd_report(opt):
    out_dir = opt["out_dir"]
    os.makedirs(out_dir, exist_ok=True)
    exit_code = EXIT_OK

    sweep_opt = dict(opt, cmd="qsl-sweep", fmt="csv", plot=False,
                     out=os.path.join(out_dir, "qsl_sweep.csv"))
    taus, rows = _sweep_common(sweep_opt, _qsl_sweep_row)
    _write_text(sweep_opt["out"],
                _render_rows(sweep_opt, taus, _SWEEP_HEADER, rows))
    plotting.plot_qsl_sweep(rows, os.path.join(out_dir, "qsl_sweep.png"))
    if any(r["identity_residual"] >= IDENTITY_RESIDUAL_LIMIT for r in rows):
        print("validation failure: identity residual above limit in sweep",
              file=sys.stderr)
        exit_code = EXIT_VALIDATION

    nm_opt = dict(opt, cmd="nonmarkov-sweep", fmt="csv", plot=False, tau="10",
                  out=os.path.join(out_dir, "nonmarkov_sweep.csv"))
    taus, rows = _sweep_common(nm_opt, _nonmarkov_sweep_row)
    _write_text(nm_opt["out"],
                _render_rows(nm_opt, taus, _NONMARKOV_HEADER, rows))
    plotting.plot_nonmarkov_sweep(
        rows, os.path.join(out_dir, "nonmarkov_sweep.png"))

    pairs_opt = dict(opt, cmd="pairs", fmt="csv", plot=False, tau="20",
                     model="pbg", out=os.path.join(out_dir, "pairs.csv"))
    report = nonmarkov.blp_measure_sampled(
        reservoirs.PbgModel(float(opt["delta"])), 20.0,
        int(opt["n_pairs"]), int(opt["seed"]), _check_dt(opt))
    rows = [{"pair_index": str(i), "integral": v}
            for i, v in enumerate(report.integrals)]
    rows.append({"pair_index": "canonical",
                 "integral": report.optimal_value})
    _write_text(pairs_opt["out"],
                _render_rows(pairs_opt, [20.0], _PAIRS_HEADER, rows))
    plotting.plot_pairs(report.integrals, report.optimal_value,
                        os.path.join(out_dir, "pairs.png"))

    trace_opt = dict(opt, cmd="trace", fmt="csv", plot=False, tau="10",
                     out=os.path.join(out_dir, "trace.csv"))
    cmd_trace(trace_opt)
    trace = reservoirs.sample_trace(
        reservoirs.PbgModel(float(opt["delta"])), 10.0, _check_dt(opt))
    plotting.plot_trace(trace.grid, trace.P, trace.dPdt,
                        os.path.join(out_dir, "trace.png"))
    print(f"report written to {out_dir}/", file=sys.stderr)
    return exit_code


_COMMANDS = {
    "trace": cmd_trace,
    "qsl-sweep": cmd_qsl_sweep,
    "nonmarkov-sweep": cmd_nonmarkov_sweep,
    "pairs": cmd_pairs,
    "validate": cmd_validate,
    "beta": cmd_beta,
    "report": cmd_report,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        opt = _merge_options(args)
        return _COMMANDS[opt["cmd"]](opt)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except QslsimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
