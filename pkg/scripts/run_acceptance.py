#!/usr/bin/env python3
"""Run the acceptance criteria and write out/acceptance.csv.

    python3 scripts/run_acceptance.py [--criteria 1,2,7] [--out out] [--workers 2]
"""
import argparse
import sys
from pathlib import Path

from dimred import acceptance, report
from dimred.cache import Cache


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--criteria", default=None)
    p.add_argument("--out", type=Path, default=Path("out"))
    p.add_argument("--workers", type=int, default=1)
    args = p.parse_args()
    only = [int(c) for c in args.criteria.split(",")] if args.criteria else None
    results = acceptance.run_all(only, Cache(args.out / ".cache"), args.workers, echo=print)
    report.write_csv(args.out / "acceptance.csv", "acceptance",
                     ((r.number, r.title, "PASS" if r.passed else "FAIL", r.elapsed, r.budget)
                      for r in results))
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria pass")
    return 0 if passed == len(results) else 3


if __name__ == "__main__":
    sys.exit(main())
