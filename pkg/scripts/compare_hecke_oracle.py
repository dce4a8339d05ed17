"""Compare the explicit T_1 formula with the convolution oracle on every basic section.

    python3 scripts/compare_hecke_oracle.py --p 3 --radius 2
"""

import argparse
import time

from metaplectic_modp import padic_field
from metaplectic_modp.hecke import basic_sections, hecke_apply, hecke_apply_oracle
from metaplectic_modp.weights import all_weights


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--f", type=int, default=1)
    ap.add_argument("--radius", type=int, default=2, help="basics supported in the ball of this radius")
    args = ap.parse_args()

    F = padic_field(args.p, args.f)
    mismatches = 0
    print("weight  basics  mismatches  seconds")
    for r in all_weights(F):
        t0 = time.perf_counter()
        bad = 0
        basics = basic_sections(F, r, args.radius)
        for b in basics:
            if hecke_apply(F, r, b) != hecke_apply_oracle(F, 1, r, r, b):
                bad += 1
        mismatches += bad
        print(f"{str(r):7s} {len(basics):6d}  {bad:10d}  {time.perf_counter() - t0:7.1f}")
    return 1 if mismatches else 0


if __name__ == "__main__":
    raise SystemExit(main())
