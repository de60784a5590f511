"""``driftfield`` command line.

Exit codes: 0 ok / no drift, 3 drift detected, 1 any error.
Config precedence: flags > ``--config`` JSON (or ``$DRIFTFIELD_CONFIG``) > defaults.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import fields
from pathlib import Path

from .core import DriftConfig, fit_baseline
from .errors import DriftFieldError, IoError
from .geometry import DEFAULT_FRACTIONS, snapshot_series
from .ingest import load_csv, load_embedding_table, parse_csv_rows
from .monitor import evaluate_batch
from .report import baseline_from_dict, baseline_to_dict, dumps
from .textdrift import text_drift

EXIT_OK, EXIT_ERROR, EXIT_DRIFT = 0, 1, 3
DEFAULT_DIM = 64
_CFG_FIELDS = {f.name for f in fields(DriftConfig)}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("drift configuration")
    g.add_argument("--config", help="JSON config file (falls back to $DRIFTFIELD_CONFIG)")
    g.add_argument("--k", dest="fade_k", type=float, help="fading-influence rate (default 1.0)")
    g.add_argument("--alpha", type=float, help="weight of the mean shift (default 1.0)")
    g.add_argument("--beta", type=float, help="weight of the covariance shift (default 1.0)")
    g.add_argument("--threshold", type=float, help="drift threshold T (default inf: report only)")
    g.add_argument("--bandwidth", dest="bandwidth_override", type=_floats, help="comma-separated KDE bandwidths")
    g.add_argument("--reduce-dims", dest="reduce_dims", type=int)
    g.add_argument("--kl-floor", dest="kl_floor", type=float)
    g.add_argument("--eig-tol", dest="eig_tol", type=float)
    g.add_argument("--step-scale", dest="step_scale", type=float)
    g.add_argument("--seed", type=int, help="seed for the fallback embedder (default 42)")


def _load_config_file(path) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise IoError(f"Io: cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise DriftFieldError("config file must hold a JSON object")
    return data


def resolve_settings(args) -> dict:
    """Merge defaults, config file and flags into a flat settings dict."""
    path = getattr(args, "config", None) or os.environ.get("DRIFTFIELD_CONFIG")
    settings = _load_config_file(path) if path else {}
    for key, value in vars(args).items():
        if value is not None and key not in ("func", "config", "command"):
            settings[key] = value
    if settings.get("threshold") in ("inf", "Infinity"):
        settings["threshold"] = math.inf
    return settings


def build_config(settings: dict) -> DriftConfig:
    return DriftConfig(**{k: v for k, v in settings.items() if k in _CFG_FIELDS})


def _read_baseline(path):
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise IoError(f"Io: cannot read baseline {path}: {exc}") from exc
    try:
        return baseline_from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise DriftFieldError(f"invalid baseline file {path}: {exc}") from exc


def _write(path, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise IoError(f"Io: cannot write {path}: {exc}") from exc


def cmd_baseline(args) -> int:
    cfg = build_config(resolve_settings(args))
    summary = fit_baseline(load_csv(args.input, has_header=args.header), cfg)
    _write(args.out, dumps(baseline_to_dict(summary, cfg.to_dict()), indent=1) + "\n")
    return EXIT_OK


def _flatten(prefix: str, value, rows: list) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, rows)
    elif isinstance(value, list):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, "true" if value is True else "false" if value is False else value))


def report_as_csv(report: dict) -> str:
    rows: list = []
    _flatten("", report, rows)
    return "metric,value\n" + "".join(f"{k},{v}\n" for k, v in rows)


def cmd_detect(args) -> int:
    cfg = build_config(resolve_settings(args))
    baseline = _read_baseline(args.baseline)
    report = evaluate_batch(baseline, load_csv(args.new, has_header=args.header), cfg)
    payload = report.to_dict()
    if args.format == "csv":
        sys.stdout.write(report_as_csv(payload))
    else:
        sys.stdout.write(dumps(payload) + "\n")
    return EXIT_DRIFT if report.drifted else EXIT_OK


def _read_text(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise IoError(f"Io: cannot read {path}: {exc}") from exc


def cmd_text_drift(args) -> int:
    settings = resolve_settings(args)
    table = load_embedding_table(args.embeddings) if args.embeddings else None
    result = text_drift(
        _read_text(args.original),
        _read_text(args.drifted),
        table,
        seed=int(settings.get("seed", 42)),
        dim=int(settings.get("dim", DEFAULT_DIM)),
    )
    sys.stdout.write(dumps(result) + "\n")
    return EXIT_OK


def cmd_snapshots(args) -> int:
    settings = resolve_settings(args)
    cfg = build_config(settings)
    fractions = settings.get("fractions", list(DEFAULT_FRACTIONS))
    base = load_csv(args.baseline, has_header=args.header)
    new = load_csv(args.new, has_header=args.header)
    series = snapshot_series(base, new, fractions, cfg)
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"Io: cannot create {out}: {exc}") from exc
    names = []
    for i, frame in enumerate(series.frames):
        name = f"frame_{i:03d}.json"
        _write(out / name, dumps(frame.to_dict()) + "\n")
        names.append(name)
    sys.stdout.write(dumps({"frames": names, "fractions": series.fractions, "display_scale": series.scale}) + "\n")
    return EXIT_OK


def cmd_stream(args) -> int:
    cfg = build_config(resolve_settings(args))
    baseline = _read_baseline(args.baseline)
    if args.batch_size < 1:
        raise DriftFieldError("--batch-size must be >= 1")
    any_drift = False
    skipped = 0
    rows: list[str] = []

    def emit(lines):
        nonlocal skipped, any_drift
        batch = parse_csv_rows(lines)
        report = evaluate_batch(baseline, batch, cfg)
        payload = report.to_dict()
        payload["skipped_rows"] = skipped
        skipped = 0
        any_drift |= report.drifted
        sys.stdout.write(dumps(payload) + "\n")
        sys.stdout.flush()

    for lineno, line in enumerate(sys.stdin, start=1):
        if not line.strip():
            continue
        try:
            row = parse_csv_rows([line])
            if row.d != baseline.dim:
                raise DriftFieldError(f"expected {baseline.dim} fields, got {row.d}")
        except DriftFieldError as exc:
            print(f"driftfield stream: skipping line {lineno}: {exc}", file=sys.stderr)
            skipped += 1
            continue
        rows.append(line)
        if len(rows) == args.batch_size:
            emit(rows)
            rows = []
    if rows:
        emit(rows)
    return EXIT_DRIFT if any_drift else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="driftfield", description="Deformation-based drift detection.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("baseline", help="fit a baseline file from a CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--header", action="store_true", help="first CSV row holds feature names")
    _add_config_flags(p)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("detect", help="score a CSV batch against a baseline file")
    p.add_argument("--baseline", required=True)
    p.add_argument("--new", required=True)
    p.add_argument("--header", action="store_true")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    _add_config_flags(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("text-drift", help="compare two plain-text files")
    p.add_argument("--original", required=True)
    p.add_argument("--drifted", required=True)
    p.add_argument("--embeddings", help="token<TAB>comma-separated vector table")
    p.add_argument("--dim", type=int, help=f"fallback embedding size (default {DEFAULT_DIM})")
    p.add_argument("--seed", type=int, help="fallback embedding seed (default 42)")
    p.add_argument("--config")
    p.set_defaults(func=cmd_text_drift)

    p = sub.add_parser("snapshots", help="write deformation frames as JSON")
    p.add_argument("--baseline", required=True, help="baseline CSV")
    p.add_argument("--new", required=True, help="new-data CSV")
    p.add_argument("--fractions", type=_floats, help="comma-separated t values (default 0,0.25,0.5,0.75,1)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--header", action="store_true")
    _add_config_flags(p)
    p.set_defaults(func=cmd_snapshots)

    p = sub.add_parser("stream", help="score CSV rows from stdin in fixed-size batches")
    p.add_argument("--baseline", required=True)
    p.add_argument("--batch-size", dest="batch_size", type=int, required=True)
    _add_config_flags(p)
    p.set_defaults(func=cmd_stream)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR
    try:
        return args.func(args)
    except (DriftFieldError, RuntimeError, ValueError, OSError) as exc:
        print(f"driftfield {args.command}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
