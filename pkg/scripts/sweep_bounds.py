#!/usr/bin/env python3
"""Sweep the eigensystem-count bound over a range of primes and print a
CSV table (one row per prime; split/ramified primes are skipped).

Usage: python3 scripts/sweep_bounds.py [--lo 3] [--hi 31] [--alpha -1]
       [--r 1] [--s 1] [--N 3]
"""

import argparse
import csv
import sys

from ssp.count import SignatureParams, eigensystem_bound
from ssp.errors import ValidationError
from ssp.groups import is_prime


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lo", type=int, default=3)
    ap.add_argument("--hi", type=int, default=31)
    ap.add_argument("--alpha", type=int, default=-1)
    ap.add_argument("--r", type=int, default=1)
    ap.add_argument("--s", type=int, default=1)
    ap.add_argument("--N", type=int, default=3)
    args = ap.parse_args()

    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(
        ["p", "superspecial_bound_ceiling", "irr_sum_bound", "final_bound", "exponent", "note"]
    )
    for p in range(args.lo, args.hi + 1):
        if not is_prime(p):
            continue
        try:
            params = SignatureParams(p=p, alpha=args.alpha, r=args.r, s=args.s, N=args.N)
        except ValidationError as e:
            writer.writerow([p, "", "", "", "", f"skipped: {e}"])
            continue
        rep = eigensystem_bound(params)
        writer.writerow(
            [
                p,
                rep.superspecial_bound_ceiling,
                rep.irr_sum_bound,
                rep.final_bound,
                rep.asymptotic_exponent,
                "",
            ]
        )


if __name__ == "__main__":
    main()
