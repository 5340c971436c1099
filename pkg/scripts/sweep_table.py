#!/usr/bin/env python3
"""Print the fixed-coupling oracle sweep as a table (runs or reuses cached points).

    python3 scripts/sweep_table.py [--g 4] [--ratios 0.1,0.05,0.02] [--r-over-ell 0.1,0.05]
"""
import argparse
from pathlib import Path

from dimred.acceptance import oracle_geometries, oracle_points, point_envelope
from dimred.cache import Cache


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--g", type=float, default=4.0)
    p.add_argument("--ratios", default="0.1,0.05,0.02")
    p.add_argument("--r-over-ell", default="0.1,0.05")
    p.add_argument("--cache", type=Path, default=Path("out/.cache"))
    p.add_argument("--workers", type=int, default=1)
    args = p.parse_args()
    ratios = tuple(float(x) for x in args.ratios.split(","))
    rl = tuple(float(x) for x in args.r_over_ell.split(","))
    geoms = oracle_geometries(args.g, ratios, rl)
    points = oracle_points(geoms, Cache(args.cache), args.workers)
    print(f"{'r/ell':>6} {'a/r':>6} {'excess_1':>12} {'E_1d^1':>12} {'ratio-1':>10} {'upper_1':>10} {'overlap':>10}")
    for geom, pt in zip(geoms, points):
        sp = pt
        env = point_envelope(geom, pt)[0]
        print(f"{geom.r_over_ell:6.3g} {geom.a_over_r:6.3g} {sp['excess'][0]:12.6f} {sp['E_1d'][0]:12.6f} "
              f"{sp['excess'][0] / sp['E_1d'][0] - 1:10.3e} {env.upper_k[0]:10.4g} {sp['overlaps'][0]:10.6f}")


if __name__ == "__main__":
    main()
