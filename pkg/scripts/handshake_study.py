#!/usr/bin/env python3
"""Paired study of the two handshakes: ATTR and PPR with sign tests.

For each (protocol, activity) pair this runs the 10-channel symmetric
scenario under both handshakes on paired seeds and prints the ratios plus
one-sided sign-test p-values for "three-way beats two-way".

Usage: python scripts/handshake_study.py [--runs 50] [--nodes 10] [--seed 90210]
"""

import argparse
import sys

from crhop.engine import Scenario
from crhop.experiment import run_cell
from crhop.metrics import compare


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--runs", type=int, default=50)
    parser.add_argument("--nodes", type=int, default=10)
    parser.add_argument("--seed", type=int, default=90210)
    args = parser.parse_args(argv)

    print(f"{'protocol':8} {'activity':8} {'attr3':>8} {'attr2':>8} {'ratio':>6} "
          f"{'p_attr':>9} {'ppr3':>7} {'ppr2':>7} {'p_ppr':>9}")
    for protocol in ("mdmca", "mrcs", "mmca", "memca"):
        for activity in ("zero", "high"):
            cells = {}
            for handshake in ("3wh", "2wh"):
                sc = Scenario(nodes=args.nodes, channels=10, mode="sym",
                              activity=activity, protocol=protocol,
                              handshake=handshake, max_slots=20_000)
                cells[handshake] = run_cell(sc, args.runs, args.seed)
            summary = compare(cells["3wh"], cells["2wh"])
            print(f"{protocol:8} {activity:8} {cells['3wh'].attr_slots:8.1f} "
                  f"{cells['2wh'].attr_slots:8.1f} {summary.attr_ratio:6.3f} "
                  f"{summary.attr_p_value:9.2e} {cells['3wh'].ppr:7.2f} "
                  f"{cells['2wh'].ppr:7.2f} {summary.ppr_p_value:9.2e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
