#!/usr/bin/env python3
"""Print formula-vs-enumeration tables for the small finite groups.

Every row runs the closed-form order and the exhaustive matrix
enumeration; a mismatch anywhere exits nonzero.

Usage: python3 scripts/group_orders.py [--primes 3,5]
"""

import argparse
import sys
import time

from ssp.groups import (
    gl2_order_enumerated,
    gsp_order_enumerated,
    gusplit_group_elements,
    order_gsp_mod,
    order_gusplit,
    order_su,
    order_u,
    su_group_elements,
    unitary_group_elements,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--primes", default="3,5")
    args = ap.parse_args()
    primes = [int(x) for x in args.primes.split(",")]

    failures = 0
    print(f"{'group':<24} {'formula':>10} {'enumerated':>10} {'time':>8}")
    for p in primes:
        rows = [
            (f"SU_2(F_{p**2})", order_su(2, p), lambda p=p: len(su_group_elements(2, p))),
            (f"U_1(F_{p**2})", order_u(1, p), lambda p=p: len(unitary_group_elements(1, p))),
            (f"U_2(F_{p**2})", order_u(2, p), lambda p=p: len(unitary_group_elements(2, p))),
            (
                f"G(U_1xU_1)(F_{p**2})",
                order_gusplit(1, 1, p),
                lambda p=p: len(gusplit_group_elements(1, 1, p)),
            ),
            (
                f"G(U_2xU_0)(F_{p**2})",
                order_gusplit(2, 0, p),
                lambda p=p: len(gusplit_group_elements(2, 0, p)),
            ),
            (f"GSp_2(Z/{p})", order_gsp_mod(1, p), lambda p=p: gl2_order_enumerated(p)),
            (f"GSp_4(F_{p})", order_gsp_mod(2, p), lambda p=p: gsp_order_enumerated(2, p)),
        ]
        for name, formula, thunk in rows:
            t0 = time.monotonic()
            enum = thunk()
            dt = time.monotonic() - t0
            mark = "" if enum == formula else "  <-- MISMATCH"
            if enum != formula:
                failures += 1
            print(f"{name:<24} {formula:>10} {enum:>10} {dt:>7.2f}s{mark}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
