#!/usr/bin/env python3
"""Closed-form verification experiment.

Runs the verification ledger over a seeded grid of generic parameter points
at two step counts and reports the (grid-uniform) classification of each
reference equation, plus the residual ranges.
"""

import argparse
from collections import defaultdict

from spinphase.verify import EQUATION_IDS, random_generic_params, verify_grid


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--grid", type=int, default=25)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--steps", type=int, default=8192)
    args = parser.parse_args()

    grid = random_generic_params(args.grid, seed=args.seed)
    residuals = defaultdict(list)
    classifications = {}
    for steps in (args.steps, 2 * args.steps):
        for report in verify_grid(grid, steps=steps):
            for item in report.items:
                residuals[item.equation_id].append(item.residual)
                previous = classifications.setdefault(item.equation_id, item.classification)
                if previous != item.classification:
                    raise SystemExit(
                        f"classification of {item.equation_id} changed at steps={steps}"
                    )

    print(f"{args.grid} generic points, seed {args.seed}, steps {args.steps} and {2 * args.steps}")
    print(f"{'equation_id':<26}{'classification':<16}{'residual range'}")
    for eq_id in EQUATION_IDS:
        r = residuals[eq_id]
        print(f"{eq_id:<26}{classifications[eq_id]:<16}[{min(r):.3e}, {max(r):.3e}]")


if __name__ == "__main__":
    main()
