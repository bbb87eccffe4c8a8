"""Command-line front end: scan, regimes, verify, plot.

Exit codes are a stable contract: 0 success, 1 parameter problems, 2 I/O
problems, 3 tolerance/consistency breaches, 4 malformed input files.
Option precedence is command-line flags > config file (--config, key=value
lines) > built-in defaults.  All times are dimensionless gamma*t (gamma
defaults to 1, matching how results are usually plotted).
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from typing import Sequence, TextIO

import numpy as np

from . import fock
from .correlations import CorrelationRecord, classical_correlations, detect_switch_time
from .errors import (
    CatcorrError,
    FormatError,
    ParameterError,
    PositivityError,
    ResolutionError,
    SupportError,
    TruncationError,
)
from .model import ModelParams, characteristic_times
from .scan import RegimeSegmentation, ScanConfig, scan, segment_regimes
from .svg import render_line_plot

__all__ = ["main", "console_main", "CSV_HEADER", "write_scan_csv", "read_scan_csv"]

CSV_HEADER = (
    "gamma_t,r11,r22,r33,r44,r14,r23,S_ab,S_a,S_b,I,C,D,concurrence,"
    "optimal_basis,regime"
)

EXIT_OK = 0
EXIT_PARAMS = 1
EXIT_IO = 2
EXIT_TOLERANCE = 3
EXIT_FORMAT = 4


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors rerouted to the params exit code."""

    def error(self, message: str):
        raise ParameterError(message)


def _g(value: float) -> str:
    """17-significant-digit serialization; round-trips float64 exactly."""
    return format(float(value), ".17g")


def write_scan_csv(
    stream: TextIO,
    records: Sequence[CorrelationRecord],
    segmentation: RegimeSegmentation | None,
) -> None:
    stream.write(CSV_HEADER + "\n")
    for rec in records:
        x = rec.xstate
        regime = segmentation.label_for(rec.gt) if segmentation is not None else ""
        row = [
            _g(rec.gt),
            _g(x.r11), _g(x.r22), _g(x.r33), _g(x.r44), _g(x.r14), _g(x.r23),
            _g(rec.s_joint), _g(rec.s_a), _g(rec.s_b),
            _g(rec.mutual_info), _g(rec.classical), _g(rec.discord),
            _g(rec.concurrence),
            rec.optimal_basis.tag,
            regime,
        ]
        stream.write(",".join(row) + "\n")


def read_scan_csv(path: str) -> tuple[list[str], list[dict[str, str]]]:
    """Header and rows of a scan CSV; FormatError on anything malformed."""
    try:
        with open(path, "r", encoding="utf-8", newline="") as handle:
            reader = csv.reader(handle)
            try:
                header = next(reader)
            except StopIteration:
                raise FormatError(f"{path}: empty CSV") from None
            if "gamma_t" not in header:
                raise FormatError(f"{path}: missing gamma_t column")
            rows = []
            for line_no, row in enumerate(reader, start=2):
                if len(row) != len(header):
                    raise FormatError(
                        f"{path}:{line_no}: expected {len(header)} fields, got {len(row)}"
                    )
                rows.append(dict(zip(header, row)))
    except OSError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    if not rows:
        raise FormatError(f"{path}: no data rows")
    return header, rows


def _load_config(path: str | None) -> dict[str, str]:
    if path is None:
        return {}
    config: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ParameterError(f"{path}:{line_no}: expected key=value")
            key, _, value = line.partition("=")
            config[key.strip()] = value.strip()
    return config


def _resolve(args, config: dict[str, str], name: str, cast, default=None, required=False):
    """flags > config file > default."""
    value = getattr(args, name, None)
    if value is None and name in config:
        value = cast(config[name])
    if value is None:
        value = default
    if value is None and required:
        raise ParameterError(f"missing required option --{name.replace('_', '-')}")
    return value


def _model_params(args, config) -> ModelParams:
    nbar = _resolve(args, config, "nbar", float, required=True)
    p = _resolve(args, config, "p", float, required=True)
    gamma = _resolve(args, config, "gamma", float, default=1.0)
    return ModelParams(nbar=nbar, p=p, gamma=gamma)


def build_parser() -> _Parser:
    parser = _Parser(prog="catcorr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_physics(p: argparse.ArgumentParser) -> None:
        p.add_argument("--nbar", type=float, help="mean photon number per mode")
        p.add_argument("--p", type=float, help="same-sign mixture weight in [0, 1]")
        p.add_argument("--gamma", type=float, help="cavity decay rate (default 1)")
        p.add_argument("--config", help="key=value config file (flags win)")

    p_scan = sub.add_parser("scan", help="sweep gamma*t and write a CSV of records")
    add_physics(p_scan)
    p_scan.add_argument("--tmin", type=float, help="first gamma*t (default 0, or 1e-4 for log)")
    p_scan.add_argument("--tmax", type=float, help="last gamma*t (default 6)")
    p_scan.add_argument("--points", type=int, help="grid points (default 2000)")
    p_scan.add_argument(
        "--spacing", choices=["linear", "log", "auto"],
        help="grid spacing (auto: log when nbar >= 5)",
    )
    p_scan.add_argument("--freeze-tol", dest="freeze_tol", type=float,
                        help="frozen-window tolerance in bits (default 2e-3)")
    p_scan.add_argument("--out", help="output CSV path", required=False)

    p_reg = sub.add_parser("regimes", help="print characteristic times; sweep them")
    add_physics(p_reg)
    p_reg.add_argument(
        "--sweep", nargs=2, metavar=("VAR", "A:B:N"),
        help="sweep nbar or p over N values from A to B and emit CSV",
    )
    p_reg.add_argument("--out", help="output CSV path for --sweep")

    p_ver = sub.add_parser("verify", help="cross-check analytics against the Fock oracle")
    add_physics(p_ver)
    p_ver.add_argument("--t", type=float, help="verify a single gamma*t point")
    p_ver.add_argument("--grid", choices=["default"], help="verify the standard sweep")
    p_ver.add_argument("--eta-identity", action="store_true", default=None,
                       help="sanity-check that the eta=1 channel is the identity")
    p_ver.add_argument("--truncation", type=int, help="override the Fock cutoff N")
    p_ver.add_argument("--seed", type=int, help="seed for --random-states (default 0)")
    p_ver.add_argument("--random-states", dest="random_states", type=int,
                       help="also compare the basis rule against brute force on N random states")

    p_plot = sub.add_parser("plot", help="render a scan CSV as a line-plot SVG")
    p_plot.add_argument("--in", dest="input", required=True, help="input CSV from scan")
    p_plot.add_argument("--out", required=True, help="output SVG path")
    p_plot.add_argument("--columns", help="comma-separated columns to draw (default I,C,D)")
    p_plot.add_argument("--title", help="plot title")
    p_plot.add_argument("--config", help="key=value config file (flags win)")
    return parser


def _cmd_scan(args) -> int:
    config = _load_config(args.config)
    params = _model_params(args, config)
    spacing = _resolve(args, config, "spacing", str, default="auto")
    if spacing == "auto":
        spacing = "log" if params.nbar >= 5.0 else "linear"
    default_tmin = 1e-4 if spacing == "log" else 0.0
    scan_config = ScanConfig(
        params=params,
        gt_min=_resolve(args, config, "tmin", float, default=default_tmin),
        gt_max=_resolve(args, config, "tmax", float, default=6.0),
        points=_resolve(args, config, "points", int, default=2000),
        spacing=spacing,
        freeze_tol=_resolve(args, config, "freeze_tol", float, default=2e-3),
    )
    out_path = _resolve(args, config, "out", str, required=True)

    records = scan(scan_config)
    times = characteristic_times(params)
    try:
        segmentation = segment_regimes(records, times, scan_config)
    except ResolutionError as exc:
        print(f"warning: {exc}; regime column left empty", file=sys.stderr)
        segmentation = None

    with open(out_path, "w", encoding="utf-8", newline="") as handle:
        write_scan_csv(handle, records, segmentation)
    print(f"wrote {len(records)} rows to {out_path}")
    if segmentation is not None and segmentation.boundaries:
        marks = ", ".join(f"{label} from gt={start:.6g}" for start, label in segmentation.boundaries)
        print(f"regimes: {marks}")
    return EXIT_OK


def _fmt_time(value: float | None, undefined: str) -> str:
    return f"{value:.12g}" if value is not None else undefined


def _cmd_regimes(args) -> int:
    config = _load_config(args.config)
    params = _model_params(args, config)
    sweep = getattr(args, "sweep", None)

    if sweep is not None:
        var, spec = sweep
        if var not in ("nbar", "p"):
            raise ParameterError(f"--sweep variable must be nbar or p, got {var!r}")
        try:
            a, b, n = spec.split(":")
            lo, hi, count = float(a), float(b), int(n)
        except ValueError:
            raise ParameterError(f"--sweep range must be A:B:N, got {spec!r}") from None
        if count < 1:
            raise ParameterError("--sweep needs N >= 1")
        out_path = _resolve(args, config, "out", str, required=True)
        with open(out_path, "w", encoding="utf-8", newline="") as handle:
            handle.write("nbar,p,ts,ts_numeric\n")
            for value in np.linspace(lo, hi, count):
                swept = ModelParams(
                    nbar=float(value) if var == "nbar" else params.nbar,
                    p=float(value) if var == "p" else params.p,
                    gamma=params.gamma,
                )
                times = characteristic_times(swept)
                numeric = _numeric_switch(swept)
                handle.write(
                    ",".join(
                        [
                            _g(swept.nbar),
                            _g(swept.p),
                            _g(times.ts) if times.ts is not None else "",
                            _g(numeric) if numeric is not None else "",
                        ]
                    )
                    + "\n"
                )
        print(f"wrote {count} sweep rows to {out_path}")
        return EXIT_OK

    times = characteristic_times(params)
    numeric = _numeric_switch(params)
    undefined_t1 = "undefined (nbar <= 1)"
    undefined_window = "undefined (no mesoscopic window)"
    undefined_ts = "undefined (no basis switch)"
    print(f"characteristic times for nbar={params.nbar:g}, p={params.p:g}, "
          f"gamma={params.gamma:g} (units 1/gamma)")
    rows = [
        ("t1 (plateau start)", _fmt_time(times.t1, undefined_t1)),
        ("t2 (plateau end)", _fmt_time(times.t2, "")
         + (f"  [{times.note}]" if times.note else "")),
        ("dfs span t2-t1", _fmt_time(times.dfs_span, undefined_window)),
        ("ts (closed form)", _fmt_time(times.ts, undefined_ts)),
        ("ts (bisection)", _fmt_time(numeric, "no crossing found")),
    ]
    width = max(len(name) for name, _ in rows)
    for name, value in rows:
        print(f"  {name:<{width}}  {value}")
    return EXIT_OK


def _numeric_switch(params: ModelParams) -> float | None:
    """Bisection switch time in units of 1/gamma, over a generous bracket."""
    hi = max(6.0, 3.0 * abs(math.log(params.nbar)) + 6.0)
    gt = detect_switch_time(params, (0.0, hi))
    return gt / params.gamma if gt is not None else None


def _cmd_verify(args) -> int:
    config = _load_config(args.config)
    truncation = _resolve(args, config, "truncation", int, default=None)
    seed = _resolve(args, config, "seed", int, default=0)
    random_states = _resolve(args, config, "random_states", int, default=None)
    t_point = _resolve(args, config, "t", float, default=None)
    grid = _resolve(args, config, "grid", str, default=None)
    eta_identity = bool(getattr(args, "eta_identity", None))

    if not (eta_identity or t_point is not None or grid or random_states):
        raise ParameterError(
            "verify needs at least one of --t, --grid, --eta-identity, --random-states"
        )

    status = EXIT_OK

    if eta_identity or t_point is not None:
        params = _model_params(args, config)
        if params.nbar > 10.0:
            print(
                f"warning: nbar={params.nbar:g} implies a "
                f"{(fock.default_truncation(params.nbar) + 1) ** 2}-dim two-mode space",
                file=sys.stderr,
            )

    if eta_identity:
        params = _model_params(args, config)
        N = truncation if truncation is not None else fock.default_truncation(params.nbar)
        rho = fock.initial_density(params, N)
        evolved = fock.apply_channel_both_modes(rho, fock.ChannelSpec(eta=1.0, truncation=N))
        dev = float(np.max(np.abs(evolved.matrix - rho.matrix)))
        ok = dev < 1e-12
        print(f"eta=1 identity: max deviation {dev:.3e} "
              f"({'ok' if ok else 'breach'}, tolerance 1e-12)")
        if not ok:
            status = EXIT_TOLERANCE

    if t_point is not None:
        params = _model_params(args, config)
        point = fock.verify_point(params, t_point, truncation=truncation)
        report = fock.VerifyReport(points=(point,), completeness_dev=0.0)
        print(f"point nbar={params.nbar:g} p={params.p:g} gt={t_point:g}:")
        print(f"  max matrix-entry error  {point.entry_error:.3e}  (tolerance 1e-8)")
        print(f"  leakage                 {point.leakage:.3e}  (tolerance 1e-10)")
        print(f"  largest non-X element   {point.max_non_x:.3e}")
        print(f"  discord gap vs brute    {point.discord_gap:.3e}  (tolerance 1e-6)")
        print(f"  truncation doubling     {point.doubling_dev:.3e}  (tolerance 1e-9)")
        failures = report.failures()
        if failures:
            for failure in failures:
                print(f"  BREACH: {failure}")
            status = EXIT_TOLERANCE

    if grid:
        report = fock.verify_grid(truncation=truncation)
        print(f"verify grid: {len(report.points)} points")
        print(f"  max matrix-entry error  {report.max_entry_error:.3e}  (tolerance 1e-8)")
        print(f"  max leakage             {report.max_leakage:.3e}  (tolerance 1e-10)")
        print(f"  max non-X element       {report.max_non_x:.3e}")
        print(f"  max discord gap         {report.max_discord_gap:.3e}  (tolerance 1e-6)")
        print(f"  max doubling deviation  {report.max_doubling_dev:.3e}  (tolerance 1e-9)")
        print(f"  Kraus completeness      {report.completeness_dev:.3e}  (tolerance 1e-10)")
        failures = report.failures()
        if failures:
            for failure in failures:
                print(f"  BREACH: {failure}")
            status = EXIT_TOLERANCE
        else:
            print("  all checks passed")

    if random_states:
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(random_states):
            x = fock.random_xstate(rng)
            gap = fock.brute_force_classical(x).value - classical_correlations(x).value
            worst = max(worst, gap)
        print(
            f"random states ({random_states}, seed {seed}): "
            f"max brute-force gain over the z/x rule = {worst:.3e} bits (reported, not gated)"
        )

    return status


def _cmd_plot(args) -> int:
    config = _load_config(args.config)
    columns_raw = _resolve(args, config, "columns", str, default="I,C,D")
    columns = [c.strip() for c in columns_raw.split(",") if c.strip()]
    if not columns:
        raise ParameterError("--columns must name at least one column")
    header, rows = read_scan_csv(args.input)
    for name in ["gamma_t"] + columns:
        if name not in header:
            raise FormatError(f"{args.input}: missing column {name!r}")

    def column(name: str) -> list[float]:
        out = []
        for i, row in enumerate(rows, start=2):
            try:
                out.append(float(row[name]))
            except ValueError:
                raise FormatError(
                    f"{args.input}:{i}: non-numeric value {row[name]!r} in {name!r}"
                ) from None
        return out

    x = column("gamma_t")
    series = [(name, column(name)) for name in columns]
    svg = render_line_plot(
        x,
        series,
        x_label="gamma*t",
        y_label="bits",
        title=_resolve(args, config, "title", str, default=None),
    )
    with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(svg)
    print(f"wrote {args.out}")
    return EXIT_OK


_COMMANDS = {
    "scan": _cmd_scan,
    "regimes": _cmd_regimes,
    "verify": _cmd_verify,
    "plot": _cmd_plot,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except ResolutionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except (TruncationError, SupportError, PositivityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except CatcorrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
