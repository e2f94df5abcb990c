"""Replay every published worked example and report pass/fail per case."""

import argparse
import sys

from holonomia.repro import CASES, run_cases


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--group", type=int, default=None, help="only cases of this criterion group")
    ap.add_argument("--list", action="store_true", help="list case names and exit")
    args = ap.parse_args()
    cases = [c for c in CASES if args.group is None or c.group == args.group]
    if args.list:
        for c in cases:
            print(f"{c.group}  {c.name}")
        return 0
    ok = run_cases(cases)
    print(f"{sum(1 for _ in cases)} cases, {'all passed' if ok else 'FAILURES'}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
