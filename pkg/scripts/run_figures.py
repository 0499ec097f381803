#!/usr/bin/env python3
"""Run every named scenario and collect the outputs under one directory.

Writes results/<scenario>/ with the scenario's CSV/JSON outputs plus a
manifest carrying the resolved config and per-file checksums. Sample-count
and seed overrides apply to all scenarios, so a quick pass with, say,
--samples 100 finishes in well under a minute.
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from sta_transport.scenarios import SCENARIO_NAMES, run_scenario, scenario_config


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "scenario",
        nargs="*",
        choices=[[], *sorted(SCENARIO_NAMES)],
        help="scenarios to run (default: all)",
    )
    parser.add_argument("--out", default="results", help="output root directory")
    parser.add_argument("--samples", type=int, help="override ensemble sample counts")
    parser.add_argument("--seed", type=int, help="override the ensemble seed")
    parser.add_argument("--workers", type=int, help="worker processes for sweeps")
    args = parser.parse_args(argv)

    names = args.scenario or list(SCENARIO_NAMES)
    for name in names:
        cfg = scenario_config(
            name,
            seed=args.seed,
            samples=args.samples,
            out=str(Path(args.out) / name),
            workers=args.workers,
        )
        started = time.monotonic()
        manifest = run_scenario(cfg)
        elapsed = time.monotonic() - started
        files = ", ".join(sorted(manifest.outputs))
        print(f"{name:13s} {elapsed:6.1f} s  seed={manifest.seed}  {files}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
