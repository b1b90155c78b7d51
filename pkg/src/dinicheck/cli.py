"""Command-line interface.

Usage::

    dinicheck gallery list
    dinicheck analyze --seq monotone_sqrt --ns 1..128:geometric
    dinicheck analyze --seq "x/(1+n*x^2)" --limit "0*x" --interval 0 1 --format text
    dinicheck analyze --config analysis.json --out report.json
    dinicheck curves --seq tent_spike --ns 2,4,8 --grid 257 --out tent.csv

Exit codes: 0 success, 1 usage error, 2 evaluation/domain error,
3 config parse error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from ._validation import (
    DEFAULT_NS_SPEC,
    check_grid_size,
    check_interval,
    check_ladder,
    check_n_list,
    resolve_sequence,
)
from .criteria import DEFAULT_DELTA_LADDER, DEFAULT_ETA_LADDER
from .errors import ClassificationError, ConfigError, DinicheckError, DomainError, ExpressionSyntaxError
from .funcspace import GALLERY, make_uniform_grid
from .metrics import DEFAULT_GRID_SIZE
from .report import DEFAULT_TOLERANCES, ClassifyConfig, classify, emit_curves, emit_report

EXIT_OK, EXIT_USAGE, EXIT_EVAL, EXIT_CONFIG = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class AnalysisConfig:
    sequence: str
    limit: str | None = None
    interval: dict | None = None
    ns: object = DEFAULT_NS_SPEC
    grid_size: int = DEFAULT_GRID_SIZE
    delta_ladder: list = field(default_factory=lambda: list(DEFAULT_DELTA_LADDER))
    width_ladder: list | None = None
    eta_ladder: list = field(default_factory=lambda: list(DEFAULT_ETA_LADDER))
    tolerances: dict = field(default_factory=dict)

    @classmethod
    def from_json(cls, text: str) -> "AnalysisConfig":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from None
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        unknown = sorted(set(doc) - set(cls.__dataclass_fields__))
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        if "sequence" not in doc:
            raise ConfigError("config needs a 'sequence' entry")
        bad_tol = sorted(set(doc.get("tolerances") or {}) - set(DEFAULT_TOLERANCES))
        if bad_tol:
            raise ConfigError(f"unknown tolerance keys: {', '.join(bad_tol)}")
        try:
            cfg = cls(**doc)
            cfg.validate()
        except (TypeError, ValueError, KeyError) as exc:
            raise ConfigError(str(exc)) from None
        return cfg

    def validate(self) -> None:
        if not isinstance(self.sequence, str):
            raise ValueError("'sequence' must be a string")
        check_interval(self.interval)
        check_n_list(self.ns if isinstance(self.ns, str) else list(self.ns))
        check_grid_size(self.grid_size)
        for name in ("delta_ladder", "width_ladder", "eta_ladder"):
            check_ladder(getattr(self, name), name)

    def classify_config(self) -> ClassifyConfig:
        return ClassifyConfig(
            grid_size=check_grid_size(self.grid_size),
            delta_ladder=check_ladder(self.delta_ladder, "delta_ladder"),
            width_ladder=check_ladder(self.width_ladder, "width_ladder"),
            eta_ladder=check_ladder(self.eta_ladder, "eta_ladder"),
            tolerances={**DEFAULT_TOLERANCES, **{k: float(v) for k, v in self.tolerances.items()}},
        )


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dinicheck", description="Diagnose uniform convergence of function sequences.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gal = sub.add_parser("gallery", help="built-in example sequences")
    gal.add_argument("action", choices=["list"])

    ana = sub.add_parser("analyze", help="classify a sequence and print the report")
    ana.add_argument("--seq", help="gallery id or expression in x and n")
    ana.add_argument("--limit", help="limit expression in x (required for expressions)")
    ana.add_argument("--interval", nargs=2, type=float, metavar=("A", "B"))
    ana.add_argument("--ns", default=None, help="lo..hi[:step|geometric] or comma list")
    ana.add_argument("--grid", type=int, default=None)
    ana.add_argument("--format", choices=["json", "text"], default="json")
    ana.add_argument("--out")
    ana.add_argument("--config", help="JSON file with analysis settings")

    cur = sub.add_parser("curves", help="write f and f_n samples plus the sup deviation trend as CSV")
    cur.add_argument("--seq", required=True)
    cur.add_argument("--limit")
    cur.add_argument("--interval", nargs=2, type=float, metavar=("A", "B"))
    cur.add_argument("--ns", required=True)
    cur.add_argument("--grid", type=int, default=DEFAULT_GRID_SIZE)
    cur.add_argument("--out", required=True)
    return parser


def _write(text: str, out: str | None, stdout) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        stdout.write(text)


def _trend_path(out: str) -> Path:
    p = Path(out)
    return p.with_name(f"{p.stem}_trend{p.suffix}")


def _cmd_gallery(args, stdout) -> int:
    for gid, entry in GALLERY.items():
        stdout.write(f"{gid:<20} {entry.example:<10} {entry.description}\n")
    return EXIT_OK


def _cmd_analyze(args, stdout) -> int:
    if args.config:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        cfg = AnalysisConfig.from_json(text)
        # explicit flags override the file
        if args.seq:
            cfg.sequence = args.seq
        if args.limit:
            cfg.limit = args.limit
        if args.interval:
            cfg.interval = {"a": args.interval[0], "b": args.interval[1]}
        if args.ns:
            cfg.ns = args.ns
        if args.grid:
            cfg.grid_size = args.grid
    else:
        if not args.seq:
            raise UsageError("analyze needs --seq or --config")
        cfg = AnalysisConfig(
            sequence=args.seq,
            limit=args.limit,
            interval=None if args.interval is None else {"a": args.interval[0], "b": args.interval[1]},
            ns=args.ns or DEFAULT_NS_SPEC,
            grid_size=args.grid or DEFAULT_GRID_SIZE,
        )
    try:
        interval = check_interval(cfg.interval)
        ns = check_n_list(cfg.ns if isinstance(cfg.ns, str) else list(cfg.ns))
        settings = cfg.classify_config()
    except (TypeError, KeyError) as exc:
        raise UsageError(str(exc)) from None
    try:
        seq, lim = resolve_sequence(cfg.sequence, cfg.limit, interval)
    except ExpressionSyntaxError as exc:
        if args.config and not (args.seq or args.limit):
            raise ConfigError(f"expression in config: {exc}") from None
        raise
    report = classify(seq, lim, interval, ns, settings)
    _write(emit_report(report, args.format), args.out, stdout)
    return EXIT_OK


def _cmd_curves(args, stdout) -> int:
    interval = check_interval(args.interval)
    ns = check_n_list(args.ns, min_len=1)
    seq, lim = resolve_sequence(args.seq, args.limit, interval)
    if interval is not None and interval != seq.domain:
        seq = dataclasses.replace(seq, domain=interval)
        lim = dataclasses.replace(lim, domain=interval)
    if args.grid < 2:
        raise UsageError(f"--grid must be >= 2, got {args.grid}")
    grid = make_uniform_grid(seq.domain, args.grid)
    curves, trend = emit_curves(seq, lim, ns, grid)
    _write(curves, args.out, stdout)
    _write(trend, str(_trend_path(args.out)), stdout)
    return EXIT_OK


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        handler = {"gallery": _cmd_gallery, "analyze": _cmd_analyze, "curves": _cmd_curves}[args.command]
        return handler(args, stdout)
    except UsageError as exc:
        stderr.write(f"error [usage]: {exc}\n")
        return EXIT_USAGE
    except ConfigError as exc:
        stderr.write(f"error [config]: {exc}\n")
        return EXIT_CONFIG
    except ExpressionSyntaxError as exc:
        stderr.write(f"error [parse]: {exc}\n")
        return EXIT_USAGE
    except ClassificationError as exc:
        cause_stage = getattr(exc.cause, "stage", exc.stage)
        stderr.write(f"error [{cause_stage}] during {exc.stage}: {exc.cause}\n")
        return EXIT_EVAL
    except DomainError as exc:
        stderr.write(f"error [eval]: {exc}\n")
        return EXIT_EVAL
    except DinicheckError as exc:
        stderr.write(f"error [{exc.stage}]: {exc}\n")
        return EXIT_EVAL
    except (ValueError, KeyError, TypeError) as exc:
        stderr.write(f"error [usage]: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
