#!/usr/bin/env python3
"""Run the randomized two-tuple inequality battery and print the report.

Example:
    python3 scripts/run_battery.py --seeds 20 --dims 3 4 5 6 --table
"""

import argparse
import sys

from ncdomains import RegularPolynomial, run_battery


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=10, help="number of seeded pairs")
    ap.add_argument("--seed0", type=int, default=0, help="first seed")
    ap.add_argument("--dims", type=int, nargs="+", default=[3, 4, 5])
    ap.add_argument("--no-swap", action="store_true",
                    help="skip the swapped-order dilation")
    ap.add_argument("--tol", type=float, default=1e-6, help="slack tolerance")
    ap.add_argument("--table", action="store_true", help="human-readable table")
    args = ap.parse_args(argv)

    z = RegularPolynomial.single_variable([1.0])
    rep = run_battery(z, z, seeds=range(args.seed0, args.seed0 + args.seeds),
                      dims=args.dims, tol=args.tol,
                      with_swapped=not args.no_swap)
    sys.stdout.write(rep.render_table() if args.table else rep.render())
    return 0 if rep.passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
