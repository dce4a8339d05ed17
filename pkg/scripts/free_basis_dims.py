"""Free-basis sizes and cokernel dimensions of T_1 - lambda on balls of increasing radius.

    python3 scripts/free_basis_dims.py --p 3 --max-N 3
"""

import argparse

from metaplectic_modp import padic_field
from metaplectic_modp.hecke import ball_dim, cokernel_dim, free_basis
from metaplectic_modp.weights import all_weights


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--f", type=int, default=1)
    ap.add_argument("--max-N", type=int, default=3)
    args = ap.parse_args()

    F = padic_field(args.p, args.f)
    print("weight  N  ball_dim  basis  generators_per_sphere  coker(lam=0)  coker(lam=1)")
    for r in all_weights(F):
        for N in range(args.max_N + 1):
            B = free_basis(F, r, N)
            gens = [len(B.generators[j]) for j in range(N + 1)]
            print(f"{str(r):7s} {N}  {ball_dim(F, r, N):8d}  {len(B.elements):5d}  {str(gens):21s}"
                  f"  {cokernel_dim(F, r, 0, N):12d}  {cokernel_dim(F, r, 1, N):12d}")


if __name__ == "__main__":
    main()
