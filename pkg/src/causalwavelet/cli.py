"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric error.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
import time
from pathlib import Path

from . import alerts as alerts_mod
from . import gridio, render
from .errors import CausalWaveletError, DataError, UsageError
from .kernel import WaveletParams
from .series import CsvConfig, fill_gaps, load_csv, summary_stats
from .transform import Normalization, Quadrature, ScaleGrid, cwt, phase, power, scale_slice

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _bool(text):
    lowered = str(text).strip().lower()
    if lowered in {"1", "true", "yes", "on"}:
        return True
    if lowered in {"0", "false", "no", "off"}:
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def _positive(kind):
    def parse(text):
        value = kind(text)
        if not value > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
        return value

    return parse


def _nonnegative_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text!r}")
    return value


def _add_io(p, output_help):
    p.add_argument("--input", required=True, type=Path, help="input file")
    p.add_argument("--output", type=Path, help=output_help)
    p.add_argument("--config", type=Path, help="flat key = value config file (INI/TOML style)")


def _add_csv(p):
    g = p.add_argument_group("series CSV")
    g.add_argument("--date-column", default="date")
    g.add_argument("--value-column", default="value")
    g.add_argument("--delimiter", default=",")
    g.add_argument("--date-format", default=None, help="strptime format; default ISO-8601")
    g.add_argument("--sentinel", action="append", default=None, help="extra missing-value marker (repeatable)")
    g.add_argument("--allow-negative", action="store_true", help="keep negative values instead of masking them")
    g.add_argument("--max-gap-run", type=_nonnegative_int, default=12)
    g.add_argument("--max-gap-fraction", type=float, default=0.005)


def _add_wavelet(p):
    g = p.add_argument_group("wavelet")
    g.add_argument("--alpha", type=_positive(float), default=2.0)
    g.add_argument("--causal", type=_bool, nargs="?", const=True, default=True)
    g.add_argument("--no-causal", dest="causal", action="store_false")
    g.add_argument("--mlf-mode", choices=["auto", "series", "stretched"], default="auto")
    g.add_argument("--support-eps", type=float, default=1e-6)
    g.add_argument("--scales-min", type=_positive(float), default=2.0)
    g.add_argument("--scales-max", type=_positive(float), default=1024.0)
    g.add_argument("--scales-count", type=_positive(int), default=64)
    g.add_argument("--normalize", choices=[n.value for n in Normalization], default="global")
    g.add_argument("--quadrature", choices=[q.value for q in Quadrature], default="rectangle")
    g.add_argument("--remove-mean", type=_bool, default=True)
    g.add_argument("--workers", type=_positive(int), default=1)


def _add_alert(p):
    g = p.add_argument_group("alerts")
    g.add_argument("--slice-scale", type=_positive(float), default=40.0)
    g.add_argument("--threshold", type=float, default=0.5)
    g.add_argument("--min-separation", type=_nonnegative_int, default=30)
    g.add_argument("--min-support", type=float, default=0.9)
    g.add_argument("--events-file", type=Path)
    g.add_argument("--window", type=_nonnegative_int, default=15, help="matching window in days")


def build_parser():
    parser = _Parser(prog="causalwavelet", description="Causal generalized Morlet wavelet analysis")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("stats", help="summary moments of a daily series")
    _add_io(p, "JSON output (default: stdout)")
    _add_csv(p)

    p = sub.add_parser("transform", help="scalogram + power/phase grids")
    _add_io(p, "output directory")
    _add_csv(p)
    _add_wavelet(p)

    p = sub.add_parser("slice", help="power or phase at one scale")
    _add_io(p, "CSV output (default: stdout)")
    _add_csv(p)
    _add_wavelet(p)
    p.add_argument("--slice-scale", type=_positive(float), default=40.0)
    p.add_argument("--kind", choices=["power", "phase"], default="power")

    p = sub.add_parser("alerts", help="threshold-crossing warnings")
    _add_io(p, "JSON report (default: stdout)")
    _add_csv(p)
    _add_wavelet(p)
    _add_alert(p)

    p = sub.add_parser("render", help="grid CSV to PGM (optionally PNG)")
    _add_io(p, "PGM/PPM output path")
    p.add_argument("--png", type=Path, help="also write a PNG (needs Pillow)")
    p.add_argument("--colormap", choices=["gray", "heat"], default="gray")
    p.add_argument("--vmin", type=float, default=0.0)
    p.add_argument("--vmax", type=float, default=None)
    return parser


def _read_config(path: Path):
    text = path.read_text(encoding="utf-8")
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    cp.read_string("[__flat__]\n" + text)
    out = {}
    for section in cp.sections():
        for key, value in cp.items(section):
            out[key.replace("-", "_")] = value.strip().strip('"').strip("'")
    return out


def _apply_config(parser, sub, argv):
    """Re-parse with config-file values as defaults (command line wins)."""
    args = parser.parse_args(argv)
    if args.config is None:
        return args
    try:
        values = _read_config(args.config)
    except FileNotFoundError:
        raise DataError(f"config file not found: {args.config}") from None
    except configparser.Error as exc:
        raise UsageError(f"{args.config}: {exc}") from None
    subparser = sub.choices[args.command]
    actions = {a.dest: a for a in subparser._actions}
    defaults = {}
    for key, raw in values.items():
        action = actions.get(key)
        if action is None or key in {"help", "config", "input", "output"}:
            raise UsageError(f"{args.config}: unknown key {key!r} for '{args.command}'")
        if action.type is not None:
            try:
                defaults[key] = action.type(raw)
            except (argparse.ArgumentTypeError, ValueError) as exc:
                raise UsageError(f"{args.config}: bad value for {key}: {exc}") from None
        elif action.const is not None and action.nargs == 0:
            defaults[key] = _bool(raw)
        elif action.choices and raw not in action.choices:
            raise UsageError(f"{args.config}: {key} must be one of {sorted(action.choices)}")
        else:
            defaults[key] = [raw] if key == "sentinel" else raw
    subparser.set_defaults(**defaults)
    return parser.parse_args(argv)


def _csv_config(args):
    sentinels = CsvConfig().sentinels + tuple(args.sentinel or ())
    return CsvConfig(
        date_column=args.date_column,
        value_column=args.value_column,
        delimiter=args.delimiter,
        date_format=args.date_format,
        sentinels=sentinels,
        negative_is_missing=not args.allow_negative,
    )


def _load_series(args):
    if not args.input.is_file():
        raise DataError(f"input file not found: {args.input}")
    series = load_csv(args.input, _csv_config(args))
    return fill_gaps(series, max_run=args.max_gap_run, max_fraction=args.max_gap_fraction)


def _wavelet_params(args):
    mode = None if args.mlf_mode == "auto" else args.mlf_mode
    return WaveletParams.create(args.alpha, args.causal, mode, args.support_eps)


def _scalogram(args):
    """Scalogram from a series CSV, or loaded from a CWSG file."""
    if gridio.is_scalogram_file(args.input):
        return gridio.read_scalogram(args.input)
    grid = ScaleGrid.log_spaced(args.scales_min, args.scales_max, args.scales_count)
    series = _load_series(args)
    return cwt(
        series,
        grid,
        _wavelet_params(args),
        remove_mean=args.remove_mean,
        quadrature=args.quadrature,
        workers=args.workers,
    )


def _emit_text(text, output):
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def run_stats(args):
    stats = summary_stats(_load_series(args))
    _emit_text(json.dumps(stats.as_dict(), indent=2) + "\n", args.output)


def run_transform(args):
    if args.output is None:
        raise UsageError("transform needs --output DIRECTORY")
    start = time.perf_counter()
    outdir = args.output
    targets = [outdir / "scalogram.cwsg", outdir / "power.csv", outdir / "phase.csv"]
    written = []
    try:
        sc = _scalogram(args)
        elapsed = time.perf_counter() - start
        outdir.mkdir(parents=True, exist_ok=True)
        gridio.write_scalogram(targets[0], sc)
        written.append(targets[0])
        pw = power(sc, args.normalize)
        gridio.write_grid_csv(targets[1], pw.values, sc.grid.scales, sc.time_anchor)
        written.append(targets[1])
        gridio.write_grid_csv(targets[2], phase(sc).values, sc.grid.scales, sc.time_anchor)
        written.append(targets[2])
    except BaseException:
        for path in targets:
            if path in written or path.exists():
                path.unlink(missing_ok=True)
        raise
    n, m = sc.shape
    print(f"transform: {n} times x {m} scales in {elapsed:.3f} s", file=sys.stderr)
    if pw.degenerate:
        print("warning: power grid is identically zero; left unnormalized", file=sys.stderr)


def run_slice(args):
    sc = _scalogram(args)
    grid = power(sc, args.normalize) if args.kind == "power" else phase(sc)
    sl = scale_slice(grid, args.slice_scale)
    lines = [f"date,{args.kind},support_fraction"]
    for i, (v, f) in enumerate(zip(sl.values, sl.support_fraction)):
        lines.append(f"{sc.date_at(i).isoformat()},{float(v):.9g},{float(f):.9g}")
    print(f"slice: nearest grid scale {sl.scale:.6g}", file=sys.stderr)
    _emit_text("\n".join(lines) + "\n", args.output)


def run_alerts(args):
    config = alerts_mod.AlertConfig(args.slice_scale, args.threshold, args.min_separation, args.min_support)
    sc = _scalogram(args)
    pw = power(sc, Normalization.GLOBAL_MAX)
    sl = scale_slice(pw, config.scale_days)
    events = alerts_mod.detect_warnings(sl, config=config)
    report = None
    if args.events_file is not None:
        if not args.events_file.is_file():
            raise DataError(f"events file not found: {args.events_file}")
        official = alerts_mod.load_event_dates(args.events_file)
        report = alerts_mod.compare_events(events, official, args.window)
    payload = alerts_mod.warning_report(events, report)
    _emit_text(json.dumps(payload, indent=2) + "\n", args.output)


def run_render(args):
    if args.output is None:
        raise UsageError("render needs --output PATH")
    if not args.input.is_file():
        raise DataError(f"input file not found: {args.input}")
    values, _, _ = gridio.read_grid_csv(args.input)
    gray = render.to_gray(values, args.vmin, args.vmax)
    if args.colormap == "heat":
        pixels = render.apply_colormap(gray)
        render.write_ppm(args.output, pixels)
    else:
        pixels = gray
        render.write_pgm(args.output, gray)
    if args.png is not None:
        render.write_png(args.png, pixels)


COMMANDS = {
    "stats": run_stats,
    "transform": run_transform,
    "slice": run_slice,
    "alerts": run_alerts,
    "render": run_render,
}


def main(argv=None) -> int:
    parser = build_parser()
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    try:
        args = _apply_config(parser, sub, argv)
        COMMANDS[args.command](args)
    except CausalWaveletError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
