"""Command-line surface tying the pipeline together.

Subcommands: ``simulate``, ``spectrum``, ``estimate``, ``predict``,
``evaluate``, ``fixtures``.  All randomness is seed-parameterized; numeric
output is fixed-format decimal with a caller-set digit count so runs can be
diffed.  Exit codes: 0 success, 2 usage error, 1 computation error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import fixtures as fx
from . import io as msio
from .errors import MsiFieldError
from .estimate import detect_scale_intervals, hurst_prime_dyadic, scale_from_breakpoints
from .model import Axis, Breakpoints
from .simulate import FbsKernel, SfbsKernel, SimulationPlan, simulate_gaussian
from .spectral import (
    PcCovarianceTable,
    density_from_r,
    density_h,
    r_from_q,
    r_h_from_q,
)
from .predict import prediction_report, lewis_class, mape

PROG = "msifield"


def _fmt(value: float, digits: int) -> str:
    return f"%.{digits}f" % value


def _pair(text: str, cast=float) -> tuple:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected two comma-separated values, got {text!r}")
    try:
        return (cast(parts[0]), cast(parts[1]))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_pair(text: str) -> tuple[int, int]:
    return _pair(text, int)


def _grid_shape(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected ROWSxCOLS, got {text!r}")
    return (int(parts[0]), int(parts[1]))


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(p) for p in text.split(","))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Simulate, analyze, estimate and predict two-dimensional "
                    "multi-scale-invariant Gaussian fields.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="detect scale intervals and estimate parameters")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--series", help="CSV series (single row or column)")
    src.add_argument("--grid", help="CSV grid; the series is its strip sums along --axis")
    p.add_argument("--header", action="store_true", help="skip one header line")
    p.add_argument("--axis", default="vertical", choices=[a.value for a in Axis])
    p.add_argument("--segments", type=int, default=3)
    p.add_argument("--limit", type=int, default=None,
                   help="use only the first N series values for detection")
    p.add_argument("--breakpoints", type=_float_list, default=None,
                   help="skip detection and use these breakpoints (comma-separated)")
    p.add_argument("--lambda-out", action="store_true",
                   help="print per-transition scale ratios")
    p.add_argument("--hurst-prime", action="store_true",
                   help="print the dyadic sheet-exponent estimate per interval")
    p.add_argument("--fit-out", default=None,
                   help="write the per-segment quadratic fit as CSV (index, observed, fitted)")
    p.add_argument("--plot", default=None, help="write an SVG of series, fits and breakpoints")
    p.add_argument("--digits", type=int, default=6)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("predict", help="predict rectangle totals from an initial rectangle")
    p.add_argument("--model", required=True, help="model JSON file")
    p.add_argument("--rects", required=True,
                   help="CSV of sub-rectangle totals, one row per rectangle")
    p.add_argument("--initial", type=_int_pair, default=(1, 1), metavar="K1,K2")
    p.add_argument("--report", default=None, help="write the full report as JSON")
    p.add_argument("--digits", type=int, default=6)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="MAPE and Lewis band for actual vs predicted totals")
    p.add_argument("--actual", required=True, help="CSV matrix of actual rectangle totals")
    p.add_argument("--predicted", required=True, help="CSV matrix of predicted totals")
    p.add_argument("--exclude", type=_int_pair, default=None, metavar="K1,K2",
                   help="rectangle to exclude (e.g. the prediction seed)")
    p.add_argument("--digits", type=int, default=6)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("simulate", help="draw one exact Gaussian sample on a grid")
    p.add_argument("--model", required=True, help="model JSON file")
    p.add_argument("--kernel", default="single",
                   choices=["single", "per-rectangle", "fbs"],
                   help="sheet kernel; 'fbs' uses the model's first sheet exponents")
    p.add_argument("--grid", type=_grid_shape, required=True, metavar="RxC")
    p.add_argument("--origin", type=_pair, default=(1.0, 1.0), metavar="T1,T2")
    p.add_argument("--spacing", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jitter", type=float, default=1e-10)
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--plot", default=None, help="write an SVG heat map of the sample")
    p.add_argument("--digits", type=int, default=6)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("spectrum", help="spectral coefficient and density tables of a PC field")
    p.add_argument("--cov", required=True,
                   help="long-format CSV of covariances: n1,n2,tau1,tau2,value")
    p.add_argument("--period", type=_int_pair, required=True, metavar="U1,U2")
    p.add_argument("--alpha", type=_pair, default=None, metavar="A1,A2",
                   help="geometric sampling base (enables the weighted tables)")
    p.add_argument("--hurst", type=_pair, default=None, metavar="H1,H2")
    p.add_argument("--resolution", type=int, default=128)
    p.add_argument("--out-prefix", required=True)
    p.add_argument("--digits", type=int, default=6)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("fixtures", help="list and validate the bundled case-study tables")
    p.add_argument("--validate", action="store_true", help="check SHA-256 checksums")
    p.set_defaults(func=cmd_fixtures)

    return parser


def _segment_fit(series: np.ndarray, bps: Breakpoints) -> np.ndarray:
    fitted = np.empty_like(series, dtype=float)
    fitted[:] = np.nan
    for n in range(1, bps.n_intervals + 1):
        lo, hi = bps.interval(n)
        lo_i, hi_i = int(round(lo)), int(round(hi))
        seg = series[lo_i:hi_i]
        if seg.size >= 3:
            x = np.arange(seg.size, dtype=float)
            coef = np.polyfit(x, seg, 2)
            fitted[lo_i:hi_i] = np.polyval(coef, x)
        else:
            fitted[lo_i:hi_i] = seg
    return fitted


def cmd_estimate(args) -> int:
    if args.grid is not None:
        grid = msio.load_grid(args.grid, header=args.header)
        series = msio.strip_sums(grid, args.axis)
    else:
        series = msio.load_series(args.series, axis=args.axis, header=args.header)
    values = series.values
    if args.limit is not None:
        values = values[: args.limit]
    if args.breakpoints is not None:
        bps = Breakpoints(args.breakpoints)
    else:
        bps = detect_scale_intervals(values, args.segments)
    print("breakpoints:", ",".join(_fmt(p, args.digits) for p in bps.points))
    if args.lambda_out:
        ratios = scale_from_breakpoints(bps)
        print("lambda:", ",".join(_fmt(r, args.digits) for r in ratios))
    if args.hurst_prime:
        hp = [hurst_prime_dyadic(series.values, bps, i)
              for i in range(1, bps.n_intervals + 1)]
        print("hurst_prime:", ",".join(_fmt(h, args.digits) for h in hp))
    if args.fit_out or args.plot:
        fitted = _segment_fit(values, bps)
    if args.fit_out:
        rows = np.column_stack([np.arange(1, values.size + 1), values, fitted])
        msio.write_matrix(args.fit_out, rows, digits=args.digits)
        print(f"fit written to {args.fit_out}")
    if args.plot:
        _plot_series(args.plot, values, fitted, bps)
        print(f"plot written to {args.plot}")
    return 0


def cmd_predict(args) -> int:
    model = msio.load_model(args.model)
    totals = msio.load_rectangle_totals(args.rects)
    report = prediction_report(totals, model, args.initial)
    for key in sorted(report.predicted):
        print(f"rect {key[0]},{key[1]}: actual={_fmt(report.actual[key], args.digits)} "
              f"predicted={_fmt(report.predicted[key], args.digits)}")
    print(f"mape: {_fmt(report.mape, args.digits)}")
    print(f"lewis: {report.lewis.value}")
    if args.report:
        Path(args.report).write_text(json.dumps(report.to_jsonable(), indent=2) + "\n")
        print(f"report written to {args.report}")
    return 0


def cmd_evaluate(args) -> int:
    actual = msio.read_csv_matrix(args.actual)
    predicted = msio.read_csv_matrix(args.predicted)
    if actual.shape != predicted.shape:
        raise MsiFieldError(
            f"shape mismatch: actual {actual.shape} vs predicted {predicted.shape}"
        )
    a = {(i + 1, j + 1): actual[i, j]
         for i in range(actual.shape[0]) for j in range(actual.shape[1])}
    p = {(i + 1, j + 1): predicted[i, j]
         for i in range(actual.shape[0]) for j in range(actual.shape[1])}
    exclude = {args.exclude} if args.exclude else set()
    gamma = mape(a, p, exclude=exclude)
    print(f"mape: {_fmt(gamma, args.digits)}")
    print(f"lewis: {lewis_class(gamma).value}")
    return 0


def cmd_simulate(args) -> int:
    model = msio.load_model(args.model)
    if args.kernel == "fbs":
        kernel = FbsKernel((model.hprime1[0], model.hprime2[0]))
    else:
        mode = "per_rectangle" if args.kernel == "per-rectangle" else "single"
        kernel = SfbsKernel(model, mode=mode)
    rows, cols = args.grid
    plan = SimulationPlan.grid(rows, cols, origin=args.origin,
                               spacing=args.spacing, seed=args.seed,
                               jitter=args.jitter)
    sample = simulate_gaussian(kernel, plan).reshape(rows, cols)
    msio.write_matrix(args.out, sample, digits=args.digits)
    print(f"sample written to {args.out} (seed={args.seed}, grid={rows}x{cols})")
    if args.plot:
        _plot_heatmap(args.plot, sample)
        print(f"plot written to {args.plot}")
    return 0


def _load_cov_table(path, period) -> PcCovarianceTable:
    arr = msio.read_csv_matrix(path)
    if arr.shape[1] != 5:
        raise MsiFieldError(
            f"covariance CSV needs columns n1,n2,tau1,tau2,value; got {arr.shape[1]} columns"
        )
    table = {}
    for n1, n2, t1, t2, v in arr:
        table[((int(n1), int(n2)), (int(t1), int(t2)))] = v
    return PcCovarianceTable.from_dict(period, table)


def _write_complex_table(path, lattice, lags, values, digits) -> None:
    rows = []
    for j1 in range(lattice.u[0]):
        for j2 in range(lattice.u[1]):
            for k, (t1, t2) in enumerate(lags):
                v = values[j1, j2, k]
                rows.append([j1, j2, t1, t2, v.real, v.imag])
    msio.write_matrix(path, np.asarray(rows), digits=digits)


def _write_density(path, dens, digits) -> None:
    rows = []
    u1, u2 = dens.lattice.u
    for j1 in range(u1):
        for j2 in range(u2):
            for a, f1 in enumerate(dens.freqs1):
                for b, f2 in enumerate(dens.freqs2):
                    v = dens.d[j1, j2, a, b]
                    rows.append([j1, j2, f1, f2, v.real, v.imag])
    msio.write_matrix(path, np.asarray(rows), digits=digits)


def cmd_spectrum(args) -> int:
    q = _load_cov_table(args.cov, args.period)
    r = r_from_q(q)
    prefix = args.out_prefix
    _write_complex_table(f"{prefix}_r.csv", q.lattice, q.lags, r.r, args.digits)
    print(f"coefficients written to {prefix}_r.csv")
    dens = density_from_r(r, resolution=args.resolution)
    _write_density(f"{prefix}_density.csv", dens, args.digits)
    print(f"density written to {prefix}_density.csv")
    if (args.alpha is None) != (args.hurst is None):
        raise MsiFieldError("--alpha and --hurst must be given together")
    if args.alpha is not None:
        rh = r_h_from_q(q, args.hurst, args.alpha)
        _write_complex_table(f"{prefix}_rh.csv", q.lattice, q.lags, rh.r, args.digits)
        print(f"weighted coefficients written to {prefix}_rh.csv")
        dh = density_h(rh, resolution=args.resolution)
        _write_density(f"{prefix}_density_h.csv", dh, args.digits)
        print(f"weighted density written to {prefix}_density_h.csv")
    return 0


def cmd_fixtures(args) -> int:
    for name, desc in fx.list_fixtures().items():
        print(f"{name}: {desc}")
    if args.validate:
        results = fx.validate_fixtures()
        bad = [name for name, ok in results.items() if not ok]
        for name, ok in results.items():
            print(f"{name}: {'OK' if ok else 'CHECKSUM MISMATCH'}")
        if bad:
            raise MsiFieldError(f"fixture validation failed for {bad}")
        print("all fixtures valid")
    return 0


def _plot_series(path, values, fitted, bps: Breakpoints) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(8, 4))
    ax.plot(np.arange(1, values.size + 1), values, "b.-", label="series", lw=0.8, ms=3)
    ax.plot(np.arange(1, values.size + 1), fitted, "k-", label="segment fit")
    for p in bps.points[1:-1]:
        ax.axvline(p, color="r", lw=1)
    ax.set_xlabel("strip")
    ax.set_ylabel("accumulated value")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _plot_heatmap(path, sample) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 4))
    im = ax.imshow(sample, origin="lower", aspect="auto")
    fig.colorbar(im, ax=ax)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (MsiFieldError, OSError, ValueError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
