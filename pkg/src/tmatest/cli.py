"""Command-line interface: simulate, fit, test, mc, diagnose.

All randomness flows from a single ``--seed`` flag (default 0, never
time-based).  CSV output uses the shortest float representation that
round-trips exactly; JSON reports use 17 significant digits.  Exit codes:
0 success, 2 validation error, 3 data error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
import warnings

import numpy as np

from .diagnostics import acf, aic, ljung_box
from .estimate import fit_ma, profile_threshold, threshold_grid
from .exceptions import DataError, TmaTestError, ValidationError
from .lr_test import DEFAULT_STATISTIC_SCALE, run_test
from .mc import load_experiment_file, run_experiment
from .model import ModelOrders, TmaParams
from .residuals import residuals_ma, residuals_tma
from .simulate import DEFAULT_BURN_IN, InnovationSpec, gen_innovations, simulate_tma

DEFAULT_ALPHAS = (0.10, 0.05, 0.01)
DEFAULT_LB_LAGS = (11, 13, 15)


# ---------------------------------------------------------------------------
# Serialization helpers


def _format_float(x: float) -> str:
    if x != x:
        return "NaN"
    if x in (float("inf"), float("-inf")):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def dumps_json(obj, indent: int = 0) -> str:
    """Serialize to JSON with floats at 17 significant digits."""
    pad = " " * indent
    if isinstance(obj, dict):
        items = ",\n".join(
            f'{pad}  "{key}": {dumps_json(value, indent + 2).lstrip()}'
            for key, value in obj.items()
        )
        return f"{pad}{{\n{items}\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        items = ",\n".join(f"{pad}  {dumps_json(v, indent + 2).lstrip()}" for v in obj)
        return f"{pad}[\n{items}\n{pad}]"
    if isinstance(obj, bool) or isinstance(obj, np.bool_):
        return f"{pad}{'true' if obj else 'false'}"
    if isinstance(obj, (int, np.integer)):
        return f"{pad}{int(obj)}"
    if isinstance(obj, (float, np.floating)):
        return f"{pad}{_format_float(float(obj))}"
    if obj is None:
        return f"{pad}null"
    escaped = str(obj).replace("\\", "\\\\").replace('"', '\\"')
    return f'{pad}"{escaped}"'


def read_series_csv(path: str) -> np.ndarray:
    """Read the ``y`` column of a headed CSV; extra columns are ignored."""
    values: list[float] = []
    try:
        fh = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: file is empty") from None
        header = [h.strip() for h in header]
        if "y" in header:
            col = header.index("y")
        else:
            col = _pick_numeric_column(path, header)
        if len(header) > 1:
            warnings.warn(f"{path}: using column {header[col]!r}, ignoring the others")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if col >= len(row):
                raise DataError(f"{path}:{lineno}: missing column {header[col]!r}")
            cell = row[col].strip()
            try:
                values.append(float(cell))
            except ValueError:
                raise DataError(f"{path}:{lineno}: cannot parse {cell!r} as a number") from None
    if not values:
        raise DataError(f"{path}: no data rows")
    return np.asarray(values)


def _pick_numeric_column(path: str, header: list[str]) -> int:
    # Without a 'y' column, take the first header that is not obviously a
    # date/index label.
    for i, name in enumerate(header):
        if name.lower() not in ("date", "time", "index", "t", ""):
            return i
    raise DataError(f"{path}: no usable data column in header {header}")


def write_series_csv(path: str, y: np.ndarray) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("y\n")
            for value in y:
                fh.write(repr(float(value)) + "\n")
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from exc


def _emit(text: str, output: str | None) -> None:
    if output is None or output == "-":
        sys.stdout.write(text + "\n")
    else:
        try:
            with open(output, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            raise DataError(f"cannot write {output}: {exc}") from exc


def _parse_floats(text: str, name: str) -> tuple:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip() != "")
    except ValueError:
        raise ValidationError(f"cannot parse {name}={text!r} as comma-separated numbers") from None


def _parse_ints(text: str, name: str) -> tuple:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip() != "")
    except ValueError:
        raise ValidationError(f"cannot parse {name}={text!r} as comma-separated integers") from None


# ---------------------------------------------------------------------------
# Subcommands


def cmd_simulate(args) -> int:
    orders = ModelOrders(p=args.p, q=args.q, d=args.d)
    phi = np.asarray(_parse_floats(args.phi, "--phi"))
    psi = np.asarray(_parse_floats(args.psi, "--psi")) if args.psi else np.zeros(args.q)
    params = TmaParams(phi=phi, psi=psi, r=args.r)
    spec = InnovationSpec(
        distribution=args.dist, sigma=args.sigma, seed=args.seed, stream=args.stream,
        df=args.df,
    )
    innovations = gen_innovations(spec, args.n + args.burn_in)
    y = simulate_tma(orders, params, innovations, args.burn_in)
    write_series_csv(args.output, y)
    return 0


def cmd_fit(args) -> int:
    y = read_series_csv(args.input)
    if y.size < 50:
        raise DataError(f"{args.input}: need at least 50 rows, got {y.size}")
    lags = _parse_ints(args.lb_lags, "--lb-lags")
    report: dict = {}
    if args.model == "ma":
        fit = fit_ma(y, args.p)
        resid = residuals_ma(y, fit.params.phi).eps
        k_params = args.p
        report["model"] = "ma"
        report["orders"] = {"p": args.p}
        report["phi"] = list(fit.params.phi)
    else:
        orders = ModelOrders(p=args.p, q=args.q, d=args.d)
        grid = threshold_grid(y, args.beta1, args.beta2, args.grid_max)
        profile = profile_threshold(y, orders, grid)
        fit = profile.best()
        resid = residuals_tma(y, fit.params, orders).eps
        k_params = args.p + args.q
        report["model"] = "tma"
        report["orders"] = {"p": args.p, "q": args.q, "d": args.d}
        report["phi"] = list(fit.params.phi)
        report["psi"] = list(fit.params.psi)
        report["r_hat"] = profile.r_hat
    report["sse"] = fit.sse
    report["sigma2"] = fit.sigma2
    report["aic"] = aic(y.size, fit.sse, k_params)
    fitted = k_params if args.lb_df_convention == "adjusted" else 0
    report["ljung_box"] = [
        {
            "M": res.M,
            "Q": res.Q,
            "df": res.df,
            "p": res.p_value,
        }
        for res in (ljung_box(resid, M, fitted) for M in lags)
    ]
    _emit(dumps_json(report), args.output)
    return 0


def cmd_test(args) -> int:
    y = read_series_csv(args.input)
    orders = ModelOrders(p=args.p, q=args.q, d=args.d)
    alphas = _parse_floats(args.alphas, "--alphas")
    report = run_test(
        y,
        orders,
        beta1=args.beta1,
        beta2=args.beta2,
        alphas=alphas,
        replications=args.replications,
        seed=args.seed,
        grid_max_points=args.grid_max,
        statistic_scale=args.statistic_scale,
        method=args.method,
        bridge_grid_points=args.bridge_grid_points,
    )
    payload = {
        "lr_n": report.lr_n,
        "profile": [
            {"r": float(r), "value": float(v)}
            for r, v in zip(report.profile.grid.candidates, report.profile.values)
            if np.isfinite(v)
        ],
        "critical_values": [
            {"alpha": float(a), "q": float(qv)}
            for a, qv in zip(report.critical.alphas, report.critical.quantiles)
        ],
        "p_value": report.p_value,
        "method": report.method,
        "reject": [
            {"alpha": float(a), "reject": bool(report.reject[float(a)])} for a in alphas
        ],
    }
    _emit(dumps_json(payload), args.output)
    return 0


def cmd_mc(args) -> int:
    configs = load_experiment_file(args.config)
    lines = ["design,n,alpha,rate,stderr,replications,seed"]
    for config in configs:
        result = run_experiment(config, threads=args.threads)
        for alpha in config.alphas:
            rate = result.rejection_rates[alpha]
            stderr = result.mc_stderr[alpha]
            lines.append(
                f"{config.design},{config.n},{repr(float(alpha))},{repr(float(rate))},"
                f"{repr(float(stderr))},{config.replications},{config.base_seed}"
            )
    _emit("\n".join(lines), args.output)
    return 0


def cmd_diagnose(args) -> int:
    y = read_series_csv(args.input)
    lags = _parse_ints(args.lb_lags, "--lb-lags")
    max_lag = max(lags)
    rho = acf(y, min(max_lag, y.size - 1))
    payload = {
        "n": int(y.size),
        "acf": [{"lag": int(k), "rho": float(rho[k])} for k in range(1, rho.size)],
        "ljung_box": [
            {"M": res.M, "Q": res.Q, "df": res.df, "p": res.p_value}
            for res in (ljung_box(y, M, args.fitted_params) for M in lags)
        ],
    }
    _emit(dumps_json(payload), args.output)
    return 0


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tmatest",
        description="Simulation, estimation and sup-LR threshold testing for MA models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_orders(p_, q_default=1, d_default=1):
        p_.add_argument("--p", type=int, default=1, help="MA order")
        p_.add_argument("--q", type=int, default=q_default, help="shifted coefficient count")
        p_.add_argument("--d", type=int, default=d_default, help="threshold delay")

    sim = sub.add_parser("simulate", help="simulate a threshold MA path to CSV")
    add_orders(sim, d_default=2)
    sim.add_argument("--n", type=int, required=True, help="output length")
    sim.add_argument("--phi", required=True, help="comma-separated MA coefficients")
    sim.add_argument("--psi", default="", help="comma-separated shift coefficients (default 0)")
    sim.add_argument("--r", type=float, default=0.0, help="threshold")
    sim.add_argument("--sigma", type=float, default=1.0)
    sim.add_argument("--dist", default="standard-normal",
                     choices=("standard-normal", "student-t", "uniform-centered"))
    sim.add_argument("--df", type=float, default=None, help="student-t degrees of freedom")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--stream", type=int, default=0)
    sim.add_argument("--burn-in", dest="burn_in", type=int, default=DEFAULT_BURN_IN)
    sim.add_argument("-o", "--output", required=True, help="output CSV path")
    sim.set_defaults(func=cmd_simulate)

    fit = sub.add_parser("fit", help="fit an MA or threshold MA model to a CSV series")
    fit.add_argument("--input", "-i", required=True, help="input CSV path")
    fit.add_argument("--model", choices=("ma", "tma"), default="tma")
    add_orders(fit)
    fit.add_argument("--beta1", type=float, default=0.1)
    fit.add_argument("--beta2", type=float, default=0.9)
    fit.add_argument("--grid-max", dest="grid_max", type=int, default=60)
    fit.add_argument("--lb-lags", dest="lb_lags", default="11,13,15",
                     help="comma-separated Ljung-Box lag counts")
    fit.add_argument("--lb-df-convention", dest="lb_df_convention",
                     choices=("adjusted", "raw"), default="adjusted",
                     help="subtract fitted coefficient count from the df or not")
    fit.add_argument("-o", "--output", default=None, help="output JSON path (default stdout)")
    fit.set_defaults(func=cmd_fit)

    test = sub.add_parser("test", help="run the sup-LR threshold test on a CSV series")
    test.add_argument("--input", "-i", required=True)
    add_orders(test)
    test.add_argument("--beta1", type=float, default=0.1)
    test.add_argument("--beta2", type=float, default=0.9)
    test.add_argument("--alphas", default="0.10,0.05,0.01")
    test.add_argument("--replications", type=int, default=25_000)
    test.add_argument("--seed", type=int, default=0)
    test.add_argument("--grid-max", dest="grid_max", type=int, default=60)
    test.add_argument("--statistic-scale", dest="statistic_scale", type=float,
                      default=DEFAULT_STATISTIC_SCALE,
                      help="override the fit-improvement scaling convention")
    test.add_argument("--method", choices=("auto", "bridge", "kernel"), default="auto")
    test.add_argument("--bridge-grid-points", dest="bridge_grid_points", type=int, default=400)
    test.add_argument("-o", "--output", default=None)
    test.set_defaults(func=cmd_test)

    mc = sub.add_parser("mc", help="run Monte Carlo experiments from a JSON config")
    mc.add_argument("--config", "-c", required=True, help="experiment config JSON path")
    mc.add_argument("--threads", type=int, default=1, help="worker cap (results identical)")
    mc.add_argument("-o", "--output", default=None, help="output CSV path (default stdout)")
    mc.set_defaults(func=cmd_mc)

    diag = sub.add_parser("diagnose", help="ACF and Ljung-Box diagnostics for a CSV series")
    diag.add_argument("--input", "-i", required=True)
    diag.add_argument("--lb-lags", dest="lb_lags", default="11,13,15")
    diag.add_argument("--fitted-params", dest="fitted_params", type=int, default=0)
    diag.add_argument("-o", "--output", default=None)
    diag.set_defaults(func=cmd_diagnose)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TmaTestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except np.linalg.LinAlgError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
