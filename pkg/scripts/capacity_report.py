#!/usr/bin/env python3
"""Print the transport-capacity table for the reference trap.

For each drive kind and duration: the farthest distance the trap can carry
an atom before the designed motion spills over the well depth, and the
vibrational excitation left behind when transporting exactly that far.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from sta_transport import TrapParams
from sta_transport.heating import scaling_table


def _fmt_l(l):
    return f"{l * 1e3:8.2f} mm" if l >= 1e-3 else f"{l * 1e6:8.2f} um"


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--t-f",
        type=float,
        nargs="+",
        default=[100e-6, 300e-6, 1e-3],
        metavar="SECONDS",
        help="transport durations in seconds",
    )
    args = parser.parse_args(argv)

    trap = TrapParams.reference()
    print(f"{'kind':6s} {'t_f':>10s} {'max distance':>14s} {'dn final':>10s} {'dn peak':>10s}")
    for report in scaling_table(args.t_f, trap):
        print(
            f"{report.kind:6s} {report.t_f * 1e6:8.1f} us {_fmt_l(report.l_max):>14s}"
            f" {report.delta_n_final:10.4g} {report.delta_n_max:10.4g}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
