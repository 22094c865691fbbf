#!/usr/bin/env python3
"""Run the full verification battery and print one line per battery."""
import argparse
import sys

from asphere.suite import RunConfig, run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--samples", type=int, default=None, help="override every battery's sample count")
    ap.add_argument("--fixtures", default=None)
    args = ap.parse_args()

    report = run_suite(RunConfig(seed=args.seed, samples=args.samples, fixtures_dir=args.fixtures))
    for b in report.batteries:
        counters = " ".join(f"{k}={v}" for k, v in b.counters)
        print(f"{'ok  ' if b.passed else 'FAIL'} {b.name:45s} {b.samples:5d} samples  {counters}")
        for line in b.detail:
            print(f"      {line}")
    print(f"\nseed {report.seed}: {'all batteries passed' if report.passed else 'FAILURES PRESENT'}")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
