"""``walk-induction <command> --config <path> [--seed u64] [--out path] [--format json|csv]``.

Exit status: 0 when every asserted identity holds, 1 when one fails, 2 for
configuration errors (including malformed actions), 3 when the support cap
stopped an exact computation, 4 when the entropy comparison is inconclusive.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import reports
from .acceptance import run_all
from .chain import frac_str
from .config import RunConfig, bundled, bundled_names, load
from .errors import ConfigError, SupportCapExceeded, WalkInductionError

COMMANDS = ("kac", "hit", "tails", "boundary", "entropy", "abramov", "verify-all")
FLOAT_DIGITS = 12


def normalize(obj):
    """JSON-safe copy with exact rationals as strings and floats at fixed precision."""
    if isinstance(obj, dict):
        return {str(k): normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [normalize(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return frac_str(obj)
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return round(obj, FLOAT_DIGITS)
    return str(obj)


def dumps_json(report: dict) -> str:
    return json.dumps(normalize(report), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def dumps_csv(outcome: reports.Outcome) -> str:
    buf = io.StringIO()
    rows = normalize(outcome.table)
    if not rows:
        rows = [{"key": k, "value": v} for k, v in _flatten(normalize(outcome.report))]
    keys: list[str] = []
    for row in rows:
        keys.extend(k for k in row if k not in keys)
    writer = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _run_command(command: str, cfg: RunConfig) -> reports.Outcome:
    if command == "verify-all":
        return reports.verify_config(cfg)
    return reports.COMMANDS[command](cfg)


def _acceptance_suite() -> reports.Outcome:
    results = run_all()
    for r in results:
        sys.stderr.write(r.line() + "\n")
    status = reports.OK if all(r.ok for r in results) else reports.FAILED
    report = {"command": "verify-all", "criteria": [r.to_json() for r in results],
              "status": status}
    table = [{"criterion": r.number, "title": r.title, "ok": r.ok} for r in results]
    return reports.Outcome(report, status, table)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="walk-induction", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="path to a JSON run config, or the name of a bundled one")
    parser.add_argument("--seed", type=int, help="override the config seed (unsigned 64-bit)")
    parser.add_argument("--out", help="write the result here instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"), help="output format (default json)")
    parser.add_argument("--list-configs", action="store_true", help="list bundled configs and exit")
    return parser


def _resolve_config(ref: str) -> RunConfig:
    if Path(ref).is_file():
        return load(ref)
    if ref in bundled_names():
        return bundled(ref)
    return load(ref)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.list_configs:
        print("\n".join(bundled_names()))
        return 0
    cfg = None
    try:
        if args.config:
            cfg = _resolve_config(args.config)
            if args.seed is not None:
                if not 0 <= args.seed < 2**64:
                    raise ConfigError("seed must be an unsigned 64-bit integer")
                cfg = cfg.with_params(seed=args.seed)
        elif args.command != "verify-all":
            raise ConfigError(f"{args.command} needs --config")
        outcome = _acceptance_suite() if cfg is None else _run_command(args.command, cfg)
    except ConfigError as exc:
        return _fail(reports.CONFIG_ERROR, "config error", exc)
    except SupportCapExceeded as exc:
        return _fail(reports.SUPPORT_CAP, "support cap exceeded", exc,
                     {"achieved": exc.achieved})
    except WalkInductionError as exc:
        return _fail(reports.CONFIG_ERROR, type(exc).__name__, exc)
    fmt = args.format or (cfg.output.get("format", "json") if cfg else "json")
    out = args.out or (cfg.output.get("path") if cfg else None)
    if cfg is not None:
        outcome.report.setdefault("settings", cfg.params.to_dict())
    text = dumps_csv(outcome) if fmt == "csv" else dumps_json(outcome.report)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    return outcome.status


def _fail(status: int, kind: str, exc: Exception, extra: dict | None = None) -> int:
    payload = {"error": kind, "type": type(exc).__name__, "message": str(exc), "status": status}
    payload.update(extra or {})
    sys.stderr.write(dumps_json(payload))
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
