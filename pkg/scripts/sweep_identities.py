#!/usr/bin/env python3
"""Full identity sweep with per-combination timing.

Runs every identity check over the preset families and the standard index
sets (depth 1..3, mixed types included), printing one line per (family, D)
with the slowest combinations flagged.  Exits nonzero if anything fails.

Usage:
    python3 scripts/sweep_identities.py [--n-hi 8] [--seed 0]
"""

import argparse
import sys
import time

from miop.families import PRESETS
from miop.multiindex import IndexSet
from miop.verify import run_all

SETS = ("I1", "II1", "I1,I2", "I1,II1", "I1,I2,I3", "I1,I2,II1")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-hi", type=int, default=8, help="upper row index")
    ap.add_argument("--seed", type=int, default=0, help="permutation probe seed")
    args = ap.parse_args()

    failures = 0
    timings = []
    for key in ("l-default", "j-default", "w-default", "aw-default"):
        fp = PRESETS[key]
        for label in SETS:
            D = IndexSet.parse(label)
            t0 = time.perf_counter()
            reports = run_all(fp, D, (-D.M - 1, args.n_hi), seed=args.seed)
            dt = time.perf_counter() - t0
            ok = all(r.passed for r in reports)
            failures += 0 if ok else 1
            timings.append((dt, key, label))
            mark = "ok  " if ok else "FAIL"
            print(f"{mark} {fp.family:2s} D={{{label}}}  {len(reports)} identities  {dt:6.2f}s")
            if not ok:
                for r in reports:
                    if not r.passed:
                        print("     " + r.one_line())

    timings.sort(reverse=True)
    print("\nslowest combinations:")
    for dt, key, label in timings[:3]:
        print(f"  {dt:6.2f}s  {key} D={{{label}}}")
    print(f"\ntotal {sum(t for t, _, _ in timings):.1f}s, {failures} failing combinations")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
