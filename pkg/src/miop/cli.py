"""Command-line front end: construction, tables, verification, quadrature.

Subcommands
    gen     build (Xi_D, P_{D,0..N}) and emit a JSON artifact
    rtable  build the recurrence coefficient table, JSON or CSV
    verify  run the identity checks; exit 0 iff everything passes
    ortho   numerical orthogonality grid as CSV rows

Outputs are deterministic: exact scalars serialize as strings, JSON keys
are sorted, floats use shortest round-trip repr, and payloads carry no
timestamps.  Every artifact embeds a provenance block with the resolved
configuration and a digest of the content, so results are traceable to
(family, lambda, D, N) alone.

The worker count for the verification sweep comes from MIOP_WORKERS
(default 1).  --seed feeds only the randomized permutation probe; no
mathematical output depends on it.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import __version__
from .errors import ConfigurationError, MiopError
from .families import PRESETS, FamilyParams
from .multiindex import IndexSet, build
from .quad import QuadratureSpec, ortho_grid
from .rtable import build_rtable
from .verify import IDENTITY_TAGS, run_all

_DIFFERENCE_FLAG = "--enable-difference-weights"

# default verification sweep: every family, one same-type and one mixed
# index set per depth M = 1..3
_SWEEP_SETS = ("I1", "II1", "I1,I2", "I1,II1", "I1,I2,I3", "I1,I2,II1")
_SWEEP_PRESETS = ("l-default", "j-default", "w-default", "aw-default")


@dataclass
class RunConfig:
    """Validated invocation: resolved family parameters plus subcommand flags."""

    fp: Optional[FamilyParams]
    D: Optional[IndexSet] = None
    N: int = 8
    M: Optional[int] = None
    window: Optional[tuple] = None
    n_range: Optional[tuple] = None
    identities: Optional[list] = None
    seed: int = 0
    fmt: str = "json"
    out: Optional[str] = None
    difference_weights: bool = False
    spec: Optional[QuadratureSpec] = None
    preset: Optional[str] = None


def _parse_fraction(text: str, flag: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigurationError(f"{flag} expects an exact rational, got {text!r}") from exc


def _parse_range(text: str, flag: str) -> tuple:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise ConfigurationError(f"{flag} expects LO..HI, got {text!r}")
    try:
        pair = (int(lo), int(hi))
    except ValueError as exc:
        raise ConfigurationError(f"{flag} expects integers, got {text!r}") from exc
    if pair[0] > pair[1]:
        raise ConfigurationError(f"{flag}: empty range {text!r}")
    return pair


def _resolve_family(args) -> tuple:
    """Build FamilyParams from --preset or the inline parameter flags."""
    if args.preset is not None:
        if args.preset not in PRESETS:
            known = ", ".join(sorted(PRESETS))
            raise ConfigurationError(f"unknown preset {args.preset!r} (known: {known})")
        fp = PRESETS[args.preset]
        if args.family is not None and args.family != fp.family:
            raise ConfigurationError(
                f"--family {args.family} contradicts preset {args.preset} ({fp.family})"
            )
        return fp, args.preset
    if args.family is None:
        raise ConfigurationError("either --preset or --family is required")
    family = args.family
    if family == "L":
        if args.g is None:
            raise ConfigurationError("family L needs --g")
        lam = (_parse_fraction(args.g, "--g"),)
    elif family == "J":
        if args.g is None or args.h is None:
            raise ConfigurationError("family J needs --g and --h")
        lam = (_parse_fraction(args.g, "--g"), _parse_fraction(args.h, "--h"))
    else:
        if args.a is None:
            raise ConfigurationError(f"family {family} needs --a A1,A2,A3,A4")
        parts = [p for p in args.a.split(",") if p]
        if len(parts) != 4:
            raise ConfigurationError(f"--a expects four comma-separated rationals, got {args.a!r}")
        lam = tuple(_parse_fraction(p, "--a") for p in parts)
    q = None
    if family == "AW":
        if args.q is None:
            raise ConfigurationError("family AW needs --q")
        q = _parse_fraction(args.q, "--q")
    elif args.q is not None:
        raise ConfigurationError("--q applies to family AW only")
    return FamilyParams(family, lam, q=q), None


def _config_block(config: RunConfig) -> dict:
    obj = config.fp.to_json()
    if config.preset:
        obj["preset"] = config.preset
    if config.D is not None:
        obj["D"] = config.D.to_json()
    return obj


def _provenance(config: RunConfig, payload: dict) -> dict:
    body = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return {
        "tool": "miop",
        "version": __version__,
        "config": _config_block(config),
        "content_sha256": hashlib.sha256(body.encode()).hexdigest(),
    }


def _emit(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _emit_json(config: RunConfig, payload: dict) -> None:
    payload = dict(payload)
    payload["provenance"] = _provenance(config, payload)
    _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", config.out)


# -- gen -------------------------------------------------------------------------


def cmd_gen(config: RunConfig) -> int:
    pair = build(config.fp, config.D, n_max=config.N)
    payload = pair.to_json()
    payload["degree_Xi"] = pair.Xi.degree
    _emit_json(config, payload)
    return 0


# -- rtable ----------------------------------------------------------------------


def cmd_rtable(config: RunConfig) -> int:
    table = build_rtable(config.fp, config.M, config.window)
    rows = table.to_rows(all_levels=True)
    if config.fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["s", "n", "k", "coeffs"])
        for row in rows:
            writer.writerow([row["s"], row["n"], row["k"], ";".join(row["coeffs"])])
        _emit(buf.getvalue(), config.out)
    else:
        payload = {
            "M": table.M,
            "window": list(table.window),
            "rows": rows,
        }
        _emit_json(config, payload)
    return 0


# -- verify ----------------------------------------------------------------------


def _sweep_task(task: tuple) -> list:
    fp, label, n_lo, n_hi, seed, identities = task
    D = IndexSet.parse(label)
    lo = min(n_lo, -D.M - 1)
    reports = run_all(fp, D, (lo, n_hi), seed=seed, identities=identities)
    out = []
    for rep in reports:
        out.append(
            {
                "summary": rep.summary(),
                "rows": list(rep.stream()),
                "line": rep.one_line(),
                "passed": rep.passed,
            }
        )
    return out


def _verify_tasks(config: RunConfig) -> list:
    lo, hi = config.n_range or (-4, 8)
    if config.fp is not None and config.D is not None:
        labels = [config.D.label()]
        fps = [config.fp]
    elif config.fp is not None:
        labels = list(_SWEEP_SETS)
        fps = [config.fp]
    else:
        labels = list(_SWEEP_SETS)
        fps = [PRESETS[key] for key in _SWEEP_PRESETS]
    return [
        (fp, label, lo, hi, config.seed, config.identities)
        for fp in fps
        for label in labels
    ]


def cmd_verify(config: RunConfig) -> int:
    tasks = _verify_tasks(config)
    workers = int(os.environ.get("MIOP_WORKERS", "1"))
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_task, tasks))
    else:
        results = [_sweep_task(t) for t in tasks]

    lines = []
    stream = []
    all_pass = True
    first_witness = None
    for group in results:
        for item in group:
            lines.append(item["line"])
            stream.extend(item["rows"])
            if not item["passed"] and first_witness is None:
                s = item["summary"]
                first_witness = f"{s['identity']} {s['family']} D={s['D']}: {s['witness']}"
            all_pass &= item["passed"]

    if config.fmt == "json":
        text = "".join(json.dumps(obj, sort_keys=True, default=str) + "\n" for obj in stream)
    else:
        text = "".join(line + "\n" for line in lines)
    verdict = "PASS" if all_pass else f"FAIL  {first_witness}"
    _emit(text + verdict + "\n", config.out)
    return 0 if all_pass else 1


# -- ortho -----------------------------------------------------------------------


def cmd_ortho(config: RunConfig) -> int:
    if config.fp.is_difference and not config.difference_weights:
        raise ConfigurationError(
            f"quadrature weights for family {config.fp.family} are optional; "
            f"pass {_DIFFERENCE_FLAG} to enable them"
        )
    lo, hi = config.n_range or (0, 4)
    if lo != 0:
        raise ConfigurationError("--n grid must start at 0")
    rows = ortho_grid(config.fp, config.D, hi, spec=config.spec)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "m", "integral", "expected", "rel_err"])
    for n, m, integral, expected, rel in rows:
        # float() strips numpy scalar types so the CSV carries plain reprs
        writer.writerow([n, m, repr(float(integral)), repr(float(expected)), repr(float(rel))])
    _emit(buf.getvalue(), config.out)
    return 0


# -- argument wiring ---------------------------------------------------------------


def _add_family_flags(sub) -> None:
    sub.add_argument("--family", choices=["L", "J", "W", "AW"], help="family tag")
    sub.add_argument("--preset", help="named parameter preset")
    sub.add_argument("--g", help="exact rational g (L, J)")
    sub.add_argument("--h", help="exact rational h (J)")
    sub.add_argument("--a", help="four comma-separated rationals a1,a2,a3,a4 (W, AW)")
    sub.add_argument("--q", help="exact rational base q in (0,1) (AW)")
    sub.add_argument("--out", help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="miop",
        description="multi-indexed orthogonal polynomials: exact construction and checks",
    )
    parser.add_argument("--version", action="version", version=f"miop {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    gen = subs.add_parser("gen", help="construct (Xi_D, P_{D,n}) as JSON")
    _add_family_flags(gen)
    gen.add_argument("--D", default="", help="index set, e.g. I1,II2")
    gen.add_argument("--N", type=int, default=8, help="largest polynomial index")

    rt = subs.add_parser("rtable", help="recurrence coefficient table")
    _add_family_flags(rt)
    rt.add_argument("--M", type=int, required=True, help="table depth")
    rt.add_argument("--window", default=None, help="row range LO..HI")
    rt.add_argument("--format", choices=["json", "csv"], default="json")

    ver = subs.add_parser("verify", help="run identity checks")
    _add_family_flags(ver)
    ver.add_argument("--D", default=None, help="index set; omit for the preset sweep")
    ver.add_argument("--identity", choices=list(IDENTITY_TAGS) + ["all"], default="all")
    ver.add_argument("--n-range", default=None, help="row range LO..HI")
    ver.add_argument("--seed", type=int, default=0, help="seed for the permutation probe")
    ver.add_argument("--format", choices=["json", "lines"], default="lines")

    orth = subs.add_parser("ortho", help="orthogonality quadrature grid as CSV")
    _add_family_flags(orth)
    orth.add_argument("--D", default="", help="index set")
    orth.add_argument("--n", default="0..4", help="grid range 0..N")
    orth.add_argument(_DIFFERENCE_FLAG, action="store_true", dest="difference_weights")
    orth.add_argument("--scheme", choices=["auto", "gauss-legendre", "tanh-sinh"], default="auto")
    orth.add_argument("--rtol", type=float, default=None)
    orth.add_argument("--nodes", type=int, default=None)

    return parser


def _config_from_args(args) -> RunConfig:
    if args.command == "verify" and args.preset is None and args.family is None:
        if args.D is not None:
            raise ConfigurationError("--D needs --family or --preset")
        fp, preset = None, None
    else:
        fp, preset = _resolve_family(args)
    config = RunConfig(fp=fp, preset=preset, out=args.out)
    if args.command == "gen":
        config.D = IndexSet.parse(args.D)
        if args.N < 0:
            raise ConfigurationError("--N must be nonnegative")
        config.N = args.N
    elif args.command == "rtable":
        if args.M < 0:
            raise ConfigurationError("--M must be nonnegative")
        config.M = args.M
        config.window = (
            _parse_range(args.window, "--window") if args.window else (-args.M - 1, 8)
        )
        config.fmt = args.format
    elif args.command == "verify":
        config.D = IndexSet.parse(args.D) if args.D is not None else None
        config.n_range = _parse_range(args.n_range, "--n-range") if args.n_range else None
        config.identities = None if args.identity == "all" else [args.identity]
        config.seed = args.seed
        config.fmt = args.format
    elif args.command == "ortho":
        config.D = IndexSet.parse(args.D)
        config.n_range = _parse_range(args.n, "--n")
        config.difference_weights = args.difference_weights
        if args.scheme != "auto" or args.rtol is not None or args.nodes is not None:
            spec = QuadratureSpec(
                scheme=args.scheme if args.scheme != "auto" else "gauss-legendre",
                nodes=args.nodes or 64,
                rtol=args.rtol or 1e-11,
            )
            config.spec = spec
    return config


_COMMANDS = {
    "gen": cmd_gen,
    "rtable": cmd_rtable,
    "verify": cmd_verify,
    "ortho": cmd_ortho,
}


_RANGE_FLAGS = {"--window", "--n-range", "--n"}


def _join_range_flags(argv: list) -> list:
    """Fuse `--window -3..10` into `--window=-3..10` so argparse does not
    mistake the leading-dash value for an option string."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _RANGE_FLAGS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            else:
                out.append(f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_join_range_flags(sys.argv[1:] if argv is None else list(argv)))
    try:
        config = _config_from_args(args)
        return _COMMANDS[args.command](config)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MiopError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
