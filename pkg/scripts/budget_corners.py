#!/usr/bin/env python3
"""Noise-quanta budget over the millikelvin operating corners.

Sweeps bath temperature and mechanical relaxation time across the quoted
next-generation ranges (50-100 mK, 1e3-1e4 s) and prints the budget CSV.
"""

import argparse
import sys

from qndsim import BudgetInputs, budget_sweep
from qndsim.budget import budget_csv_rows


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=None, help="write CSV here instead of stdout")
    args = parser.parse_args()

    base = BudgetInputs(
        temperature=0.05, omega1=1e4, tau1=1e4, omega2=1e8, tau2=1.0,
        dt=1e-2, amplifier_quanta=1.0, mass=1e-3,
    )
    axes = {
        "temperature": [0.05, 0.1],
        "tau1": [1e3, 1e4],
        "omega2": [1e7, 1e8],
    }
    lines = budget_csv_rows(budget_sweep(base, axes))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write("\n".join(lines) + "\n")
    else:
        for line in lines:
            print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
