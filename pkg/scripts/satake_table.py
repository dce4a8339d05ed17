"""Tabulate Satake values S(T_n)(h~(p)^m) by brute force next to the expected tau_{-n} values.

    python3 scripts/satake_table.py --p 5 --max-n 2
"""

import argparse

from metaplectic_modp import padic_field
from metaplectic_modp.hecke import satake_eval, satake_expected
from metaplectic_modp.weights import all_weights, is_admissible_pair


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--f", type=int, default=1)
    ap.add_argument("--max-n", type=int, default=2)
    args = ap.parse_args()

    F = padic_field(args.p, args.f)
    pairs = [(r, s) for r in all_weights(F) for s in all_weights(F) if is_admissible_pair(F, r, s)]
    print("n  r       s       m   value  expected  (+count,+sum)  (-count,-sum)")
    for n in range(args.max_n + 1):
        for r, s in pairs:
            for m in range(-n - 1, n + 2):
                v = satake_eval(F, n, r, s, m, depth=n + abs(m))
                exp = satake_expected(F, n, r, s, m)
                flag = "" if v.value == exp else "  MISMATCH"
                print(f"{n}  {str(r):7s} {str(s):7s} {m:3d} {v.value:6d} {exp:9d}  "
                      f"{str(v.by_sign[1]):13s}  {str(v.by_sign[-1]):13s}{flag}")


if __name__ == "__main__":
    main()
