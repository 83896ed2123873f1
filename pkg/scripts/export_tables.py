#!/usr/bin/env python3
"""Batch export of pair artifacts and recurrence tables.

Writes, for each preset family and index set, the JSON artifact with
(Xi_D, P_{D,0..N}) and the depth-M coefficient table, using the same
serialization as the CLI so files are byte-reproducible.

Usage:
    python3 scripts/export_tables.py --out-dir build/artifacts [--N 6]
"""

import argparse
import pathlib
import sys

from miop.cli import main as cli_main

SETS = ("I1", "II1", "I1,I2", "I1,II1", "I1,I2,II1")
PRESET_KEYS = ("l-default", "j-default", "w-default", "aw-default")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="build/artifacts")
    ap.add_argument("--N", type=int, default=6)
    args = ap.parse_args()

    out_dir = pathlib.Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rc = 0
    for key in PRESET_KEYS:
        for label in SETS:
            slug = label.replace(",", "_").lower()
            pair_path = out_dir / f"{key}_{slug}.json"
            rc |= cli_main(
                ["gen", "--preset", key, "--D", label, "--N", str(args.N),
                 "--out", str(pair_path)]
            )
            depth = label.count(",") + 1
            table_path = out_dir / f"{key}_{slug}_rtable.csv"
            rc |= cli_main(
                ["rtable", "--preset", key, "--M", str(depth),
                 "--window", f"{-depth - 1}..{args.N}",
                 "--format", "csv", "--out", str(table_path)]
            )
            print(f"wrote {pair_path} and {table_path}")
    return rc


if __name__ == "__main__":
    sys.exit(main())
