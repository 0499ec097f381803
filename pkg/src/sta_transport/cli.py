"""Command-line entry point.

Verbs: run <scenario>, sweep, validate <path-file>, scaling-table.
Errors leave as machine-readable JSON on stderr with a nonzero exit code.
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import ConfigError, load_config
from .scenarios import SCENARIO_NAMES, run_scenario, scenario_config, validate_path
from .trajectory import JunctionMismatch
from .trap import TrapParams

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_INVALID = 3


def _add_common(parser):
    parser.add_argument("--config", help="INI config file with unit-annotated values")
    parser.add_argument("--seed", type=int, help="override the ensemble seed")
    parser.add_argument("--samples", type=int, help="override the ensemble sample count")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--workers", type=int, help="worker processes for sweeps")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sta-transport",
        description="Tweezer transport experiments: scenario runner and path tools.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    run_p = sub.add_parser("run", help="run a named scenario")
    run_p.add_argument("scenario", choices=sorted(SCENARIO_NAMES))
    _add_common(run_p)

    sweep_p = sub.add_parser("sweep", help="survival map over duration and distance")
    _add_common(sweep_p)

    val_p = sub.add_parser("validate", help="check a path description file")
    val_p.add_argument("path_file")
    val_p.add_argument("--config", help="INI config file (trap section is used)")

    tab_p = sub.add_parser("scaling-table", help="per-kind capacity table")
    _add_common(tab_p)

    return parser


def _error_payload(kind: str, exc: Exception) -> dict:
    payload = {"type": kind, "message": str(exc)}
    if isinstance(exc, ConfigError):
        payload["key"] = exc.key
    if isinstance(exc, JunctionMismatch):
        payload["index"] = exc.index
        payload["kind"] = exc.kind
        payload["detail"] = exc.detail
    return {"error": payload}


def _fail(code: int, kind: str, exc: Exception) -> int:
    print(json.dumps(_error_payload(kind, exc), sort_keys=True), file=sys.stderr)
    return code


def _run_verb(scenario: str, args) -> int:
    file_cfg = load_config(args.config)
    cfg = scenario_config(
        scenario,
        file_cfg,
        seed=args.seed,
        samples=args.samples,
        out=args.out,
        workers=args.workers,
    )
    manifest = run_scenario(cfg)
    summary = {
        "scenario": manifest.scenario,
        "out": str(cfg.out_dir),
        "seed": manifest.seed,
        "outputs": sorted(manifest.outputs),
        "duration_s": round(manifest.duration_s, 3),
    }
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK


def _validate_verb(args) -> int:
    trap = None
    if args.config:
        file_cfg = load_config(args.config)
        trap_cfg = file_cfg.get("trap", {})
        if trap_cfg:
            base = TrapParams.reference()
            trap = TrapParams(
                depth=trap_cfg.get("depth", base.depth),
                width=trap_cfg.get("width", base.width),
                waist=trap_cfg.get("waist"),
                omega0=trap_cfg.get("frequency"),
            )
    report = validate_path(args.path_file, trap)
    print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK if report["valid"] else EXIT_INVALID


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.verb == "run":
            return _run_verb(args.scenario, args)
        if args.verb == "sweep":
            return _run_verb("fig2", args)
        if args.verb == "scaling-table":
            return _run_verb("scaling-table", args)
        if args.verb == "validate":
            return _validate_verb(args)
        raise ValueError(f"unknown verb {args.verb!r}")
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, "config", exc)
    except JunctionMismatch as exc:
        return _fail(EXIT_INVALID, "junction", exc)
    except Exception as exc:  # pragma: no cover - last-resort reporting
        return _fail(EXIT_ERROR, type(exc).__name__, exc)


if __name__ == "__main__":
    sys.exit(main())
