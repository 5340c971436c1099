#!/usr/bin/env python3
"""Tabulate the largest na/r with eta_L < 1 and eta_U < 1 for n = 1..N (power laws, C = D = 1)."""
import argparse

from scipy.optimize import brentq

from dimred.reduction import GeometryParams, eta_lower, eta_upper


def threshold(eta, n, const):
    # eta is increasing in x = na/r; solve eta(x) = 1 on a log scale
    f = lambda lx: eta(GeometryParams(n, 1.0, 1.0, 10**lx / n), const) - 1
    return 10 ** brentq(f, -40, 2)


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--D", type=float, default=1.0)
    args = p.parse_args()
    print("n,x_lower,x_upper")
    for n in range(1, args.n_max + 1):
        print(f"{n},{threshold(eta_lower, n, args.D)!r},{threshold(eta_upper, n, args.C)!r}")


if __name__ == "__main__":
    main()
