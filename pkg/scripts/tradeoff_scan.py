"""Best information gain against filter success probability as x runs from 1/sqrt(2) to 1."""

import argparse
import sys

from realtele.sweep import sweep_tradeoff, tradeoff_csv, tradeoff_x_values


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=21)
    ap.add_argument("--grid", type=int, default=41)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    rows = sweep_tradeoff(tradeoff_x_values(args.points), args.grid, args.workers)
    sys.stdout.write(tradeoff_csv(rows))


if __name__ == "__main__":
    main()
