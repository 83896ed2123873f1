#!/usr/bin/env python3
"""Orthogonality report across classical and deformed parameter points.

Prints the quadrature-versus-formula relative error grid for the classical
families, the deformed L/J cases, and the shipped Wilson/Askey-Wilson
parameter points whose deformed weights carry no discrete mass (those are
the only difference-family points where the continuous integral equals the
full norm).

Usage:
    python3 scripts/ortho_report.py [--n-max 3]
"""

import argparse
import sys

from miop.families import PRESETS, FamilyParams
from miop.multiindex import IndexSet
from miop.quad import DIFFERENCE_ORTHO_PRESETS, ortho_grid

CASES = [
    (PRESETS["l-default"], ""),
    (PRESETS["j-default"], ""),
    (PRESETS["w-default"], ""),
    (PRESETS["aw-default"], ""),
    (PRESETS["l-default"], "I1"),
    (PRESETS["l-default"], "I1,II1"),
    (PRESETS["j-default"], "I1,II1"),
]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=3)
    args = ap.parse_args()

    cases = list(CASES) + [
        (FamilyParams(fam, lam, q=q), label)
        for fam, lam, q, label in DIFFERENCE_ORTHO_PRESETS
    ]
    worst_overall = 0.0
    for fp, label in cases:
        D = IndexSet.parse(label)
        rows = ortho_grid(fp, D, args.n_max)
        worst = max(rel for *_, rel in rows)
        worst_overall = max(worst_overall, worst)
        params = ",".join(str(v) for v in fp.lam) + (f";q={fp.q}" if fp.q else "")
        print(f"{fp.family:2s} D={{{label or 'empty'}}} ({params}): "
              f"{len(rows)} integrals, worst rel err {worst:.2e}")
    print(f"\nworst over all cases: {worst_overall:.2e}")
    return 0 if worst_overall < 1e-7 else 1


if __name__ == "__main__":
    sys.exit(main())
