"""Exact verification of the recurrence structure of multi-indexed polynomials.

Every check here is an identity between exact polynomials: a failure is a
bug (or a non-generic parameter point), never a tolerance question.  The
central statement is the (3+2M)-term recurrence

    sum_{k=-M-1}^{M+1} R^[M]_{n,k}(eta) P_{D,n+k}(eta) = 0   for all n in Z,

with P_{D,m} = 0 for m < 0.  Rows with n < 0 hold for structural reasons
(the coefficient table vanishes where it must) and are reported with
status "structural"; they are asserted under the default out-of-range
coefficient convention only.  Rows with n >= 0 must also survive the
override probe that redefines B_{-1} := 7, which certifies that the
verified identity does not depend on the convention.

Genericity of a parameter point is an explicit, checkable hypothesis:
the leading recurrence coefficient R^[M]_{n,M+1} (a constant) must be
nonzero and deg P_{D,n} must equal ell + n over the tested range.  The
probe raises GenericityError with a diagnostic instead of letting a
downstream check fail obscurely.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import GenericityError, LeadingCoefficientZero
from .exact import Poly, format_scalar
from .families import FamilyParams, shifted, three_term
from .multiindex import IndexSet, MultiIndexedPair, build
from .rtable import (
    RTable,
    build_rtable,
    check_rprop,
    check_rprop2_rprop3,
    check_vanishing_region,
)

IDENTITY_TAGS = (
    "rrp",
    "rrp-override",
    "rtable-shift",
    "vanishing",
    "regeneration",
    "seed-proportionality",
    "prefix-chain",
    "permutation",
    "degrees",
)


@dataclass
class VerificationReport:
    """Outcome of one identity over one index set: per-n rows plus summary."""

    identity: str
    fp: FamilyParams
    D: IndexSet
    n_range: Optional[tuple]
    rows: list = field(default_factory=list)

    def add(self, status: str, n: Optional[int] = None, witness: Optional[str] = None, **extra):
        row = {"n": n, "status": status, "witness": witness}
        row.update(extra)
        self.rows.append(row)

    @property
    def passed(self) -> bool:
        return all(r["status"] != "fail" for r in self.rows)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    @property
    def witness(self) -> Optional[str]:
        for r in self.rows:
            if r["status"] == "fail":
                return f"n={r['n']}: {r['witness']}"
        return None

    def summary(self) -> dict:
        obj = {
            "identity": self.identity,
            "family": self.fp.family,
            "lambda": self.fp.to_json(),
            "D": self.D.to_json(),
            "n_range": list(self.n_range) if self.n_range else None,
            "status": self.status,
            "witness": self.witness,
        }
        return obj

    def stream(self):
        """One JSON-ready object per check row, deterministic order."""
        base = {
            "identity": self.identity,
            "family": self.fp.family,
            "D": self.D.label(),
        }
        for r in sorted(self.rows, key=lambda r: (r.get("s", -1), r["n"] if r["n"] is not None else -(10**9))):
            obj = dict(base)
            obj.update(r)
            yield obj

    def one_line(self) -> str:
        tail = "" if self.passed else f"  [{self.witness}]"
        rng = f" n={self.n_range[0]}..{self.n_range[1]}" if self.n_range else ""
        return f"{self.status.upper():4s} {self.identity} {self.fp.family} D={{{self.D.label()}}}{rng}{tail}"


def _first_bad_coeff(p: Poly) -> str:
    for i, c in enumerate(p.coeffs):
        if c:
            return f"eta^{i} coefficient {format_scalar(c)}"
    return "zero"


def _rrp_residual(table: RTable, pair: MultiIndexedPair, M: int, n: int) -> Poly:
    acc = Poly.zero()
    for k in range(-M - 1, M + 2):
        acc = acc + table.entry(M, n, k) * pair.P_of(n + k)
    return acc


def _needed_pair(fp, D, n_range, pair):
    n_max = n_range[1] + D.M + 1
    if pair is None or pair.n_max < n_max:
        pair = build(fp, D, n_max=n_max)
    return pair


def check_rrp(
    fp: FamilyParams,
    D: IndexSet,
    n_range: tuple,
    pair: Optional[MultiIndexedPair] = None,
    table: Optional[RTable] = None,
    coeffs=None,
    identity: str = "rrp",
) -> VerificationReport:
    """The (3+2M)-term recurrence as an exact zero polynomial for each n.

    For M = 0 this is the classical three-term recurrence itself.  Rows
    with n < 0 are reported as "structural" when they hold.
    """
    M = D.M
    report = VerificationReport(identity, fp, D, n_range)
    pair = _needed_pair(fp, D, n_range, pair)
    if table is None:
        table = build_rtable(fp, M, n_range, coeffs=coeffs)
    for n in range(n_range[0], n_range[1] + 1):
        res = _rrp_residual(table, pair, M, n)
        if res.is_zero:
            report.add("structural" if n < 0 else "pass", n=n)
        else:
            report.add("fail", n=n, witness=_first_bad_coeff(res))
    return report


def check_rrp_override(
    fp: FamilyParams,
    D: IndexSet,
    n_range: tuple,
    pair: Optional[MultiIndexedPair] = None,
) -> VerificationReport:
    """RRP for n >= 0 with the out-of-range convention altered (B_-1 := 7).

    A_-1 = 0 is kept: it is what makes the table, and hence the identity,
    insensitive to the rest of the convention for nonnegative n.
    """
    lo = max(0, n_range[0])

    def coeffs(n):
        if n == -1:
            zero = Fraction(0)
            return (zero, Fraction(7), zero)
        return three_term(fp, n)

    return check_rrp(fp, D, (lo, n_range[1]), pair=pair, coeffs=coeffs, identity="rrp-override")


def regenerate_from_initial(
    fp: FamilyParams,
    D: IndexSet,
    N: int,
    pair: Optional[MultiIndexedPair] = None,
    table: Optional[RTable] = None,
) -> VerificationReport:
    """Rebuild P_{D,M+1..N} from the first M+1 members via the recurrence.

    Each step divides by the constant R^[M]_{n,M+1}; a zero there means
    the parameter point is non-generic and raises LeadingCoefficientZero.
    """
    M = D.M
    report = VerificationReport("regeneration", fp, D, (M + 1, N))
    if pair is None or pair.n_max < N:
        pair = build(fp, D, n_max=N)
    if table is None:
        table = build_rtable(fp, M, (0, max(N - M - 1, 0)))
    regenerated = {n: pair.P_of(n) for n in range(M + 1)}
    for n in range(0, N - M):
        lead = table.entry(M, n, M + 1)
        if lead.degree > 0:
            raise LeadingCoefficientZero(f"leading entry at n={n} is not constant")
        c = lead(0)
        if not c:
            raise LeadingCoefficientZero(
                f"R^[{M}]_{{{n},{M + 1}}} = 0 at this parameter point"
            )
        acc = Poly.zero()
        for k in range(-M - 1, M + 1):
            m = n + k
            p = regenerated.get(m, Poly.zero()) if m >= 0 else Poly.zero()
            acc = acc + table.entry(M, n, k) * p
        cand = acc * (Fraction(-1) / c)
        regenerated[n + M + 1] = cand
        if cand == pair.P_of(n + M + 1):
            report.add("pass", n=n + M + 1)
        else:
            diff = cand - pair.P_of(n + M + 1)
            report.add("fail", n=n + M + 1, witness=_first_bad_coeff(diff))
    return report


def check_seed_proportionality(fp: FamilyParams, D: IndexSet) -> VerificationReport:
    """P_{D,0}(eta; lambda) = c * Xi_D(eta; lambda + delta), c recorded."""
    report = VerificationReport("seed-proportionality", fp, D, None)
    pair = build(fp, D, n_max=0)
    pair_s = build(shifted(fp), D, n_max=0)
    p0, xi_s = pair.P_of(0), pair_s.Xi
    if p0.degree != xi_s.degree:
        report.add("fail", witness=f"deg P_0 = {p0.degree} vs deg Xi(shifted) = {xi_s.degree}")
        return report
    c = p0.lc / xi_s.lc
    if not c:
        report.add("fail", witness="proportionality constant is zero")
    elif p0 == xi_s * c:
        note = f"c = {format_scalar(c)}"
        if pair.p_radicand != 1 or pair_s.xi_radicand != 1:
            note += (
                f" (stored-scale; radicands {format_scalar(pair.p_radicand)}"
                f" / {format_scalar(pair_s.xi_radicand)})"
            )
        report.add("pass", witness=note)
    else:
        report.add("fail", witness=_first_bad_coeff(p0 - xi_s * c))
    return report


def check_prefix_chain(fp: FamilyParams, D: IndexSet, n_range: tuple) -> VerificationReport:
    """RRP at every prefix depth s = 0..M with the depth-s table R^[s]."""
    report = VerificationReport("prefix-chain", fp, D, n_range)
    for s in range(D.M + 1):
        Ds = D.prefix(s)
        sub = check_rrp(fp, Ds, n_range)
        for row in sub.rows:
            report.add(row["status"], n=row["n"], witness=row["witness"], s=s, prefix=Ds.label())
    return report


def check_degrees(
    fp: FamilyParams, D: IndexSet, n_range: tuple, pair: Optional[MultiIndexedPair] = None
) -> VerificationReport:
    """deg Xi = ell and deg P_{D,n} = ell + n over the tested range."""
    report = VerificationReport("degrees", fp, D, n_range)
    hi = n_range[1]
    if pair is None or pair.n_max < hi:
        pair = build(fp, D, n_max=hi)
    if pair.Xi.degree == D.ell:
        report.add("pass", witness=f"deg Xi = {D.ell}")
    else:
        report.add("fail", witness=f"deg Xi = {pair.Xi.degree}, expected ell = {D.ell}")
    for n in range(max(0, n_range[0]), hi + 1):
        d = pair.P_of(n).degree
        if d == D.ell + n:
            report.add("pass", n=n)
        else:
            report.add("fail", n=n, witness=f"deg P = {d}, expected {D.ell + n}")
    return report


def genericity_probe(fp: FamilyParams, D: IndexSet, n_range: tuple) -> None:
    """Abort (GenericityError) unless the preset behaves generically.

    Checks the two hypotheses the identity statements rely on: the
    leading table entries R^[M]_{n,M+1} are nonzero constants and the
    degree law deg P_{D,n} = ell + n holds.
    """
    M = D.M
    lo, hi = max(0, n_range[0]), n_range[1]
    table = build_rtable(fp, M, (lo, hi))
    for n in range(lo, hi + 1):
        lead = table.entry(M, n, M + 1)
        if lead.is_zero:
            raise GenericityError(
                f"R^[{M}]_{{{n},{M + 1}}} vanishes at {fp.family} lambda={fp.lam};"
                " pick a different preset"
            )
    deg = check_degrees(fp, D, (lo, hi))
    if not deg.passed:
        raise GenericityError(
            f"degree law fails at {fp.family} lambda={fp.lam} D={{{D.label()}}}:"
            f" {deg.witness}; pick a different preset"
        )


def check_permutation(
    fp: FamilyParams, D: IndexSet, n_max: int = 3, seed: int = 0
) -> VerificationReport:
    """A random column permutation changes the pair by a global sign only."""
    report = VerificationReport("permutation", fp, D, (0, n_max))
    rng = random.Random(seed)
    perm = list(range(D.M))
    rng.shuffle(perm)
    base = build(fp, D, n_max=n_max)
    other = build(fp, D.permute(tuple(perm)), n_max=n_max)
    if base.Xi.lc == other.Xi.lc:
        sign = Fraction(1)
    elif base.Xi.lc == -other.Xi.lc:
        sign = Fraction(-1)
    else:
        report.add("fail", witness=f"perm {perm}: |leading coefficient| changed")
        return report
    objects = [("Xi", base.Xi, other.Xi)] + [
        (f"P_{n}", base.P_of(n), other.P_of(n)) for n in range(n_max + 1)
    ]
    for name, a, b in objects:
        if a == b * sign:
            report.add("pass", witness=f"perm {perm}, sign {'+' if sign > 0 else '-'}1 ({name})")
        else:
            report.add("fail", witness=f"perm {perm}: {name} not matched by global sign")
    return report


def check_rtable_shift(
    fp: FamilyParams,
    D: IndexSet,
    n_range: tuple,
    table: Optional[RTable] = None,
) -> VerificationReport:
    """Derivative law of the R-table (L/J) or the two half-shift laws (W/AW).

    Both reduce level s to level s-1, so a single depth-M table exercises
    every level at once; one row per level is reported.
    """
    M = D.M
    window = (min(n_range[0], -M - 1), n_range[1])
    report = VerificationReport("rtable-shift", fp, D, window)
    if table is None:
        table = build_rtable(fp, M, window)
    if fp.is_difference:
        bad = check_rprop2_rprop3(fp, M, window, table=table)
    else:
        bad = check_rprop(table)
    bad_by_s = {}
    for row in bad:
        bad_by_s.setdefault(row["s"], row)
    for s in range(M + 1):
        if s in bad_by_s:
            row = bad_by_s[s]
            report.add(
                "fail",
                n=row["n"],
                s=s,
                witness=f"level {s} entry (n={row['n']}, k={row['k']})"
                + (f" [{row['id']}]" if "id" in row else ""),
            )
        else:
            report.add("pass", s=s, witness=f"level {s} reduces to level {s - 1}")
    return report


def check_vanishing(
    fp: FamilyParams,
    D: IndexSet,
    n_range: tuple,
    table: Optional[RTable] = None,
) -> VerificationReport:
    """R^[s]_{n,k} = 0 on the triangle -s-1 <= n <= -1, -n <= k <= s+1."""
    M = D.M
    window = (min(n_range[0], -M - 1), n_range[1])
    report = VerificationReport("vanishing", fp, D, window)
    if table is None:
        table = build_rtable(fp, M, window)
    bad = {(row["s"], row["n"], row["k"]) for row in check_vanishing_region(table, M)}
    for s in range(M + 1):
        mine = sorted(t for t in bad if t[0] == s)
        if mine:
            _, n, k = mine[0]
            report.add("fail", n=n, s=s, witness=f"nonzero entry at level {s}, (n={n}, k={k})")
        else:
            count = sum(s + 2 + n for n in range(-s - 1, 0))
            report.add("pass", s=s, witness=f"{count} entries vanish at level {s}")
    return report


def run_all(
    fp: FamilyParams,
    D: IndexSet,
    n_range: tuple,
    seed: int = 0,
    identities: Optional[list] = None,
) -> list:
    """All identity checks for one (fp, D), preceded by the genericity probe."""
    wanted = identities or list(IDENTITY_TAGS)
    genericity_probe(fp, D, n_range)
    pair = _needed_pair(fp, D, n_range, None)
    table = build_rtable(fp, D.M, (min(n_range[0], -D.M - 1), n_range[1]))
    reports = []
    if "rrp" in wanted:
        reports.append(check_rrp(fp, D, n_range, pair=pair, table=table))
    if "rrp-override" in wanted:
        reports.append(check_rrp_override(fp, D, n_range, pair=pair))
    if "rtable-shift" in wanted:
        reports.append(check_rtable_shift(fp, D, n_range, table=table))
    if "vanishing" in wanted:
        reports.append(check_vanishing(fp, D, n_range, table=table))
    if "regeneration" in wanted:
        reports.append(regenerate_from_initial(fp, D, max(n_range[1], D.M + 1), pair=pair))
    if "seed-proportionality" in wanted:
        reports.append(check_seed_proportionality(fp, D))
    if "prefix-chain" in wanted:
        reports.append(check_prefix_chain(fp, D, n_range))
    if "permutation" in wanted:
        reports.append(check_permutation(fp, D, seed=seed))
    if "degrees" in wanted:
        reports.append(check_degrees(fp, D, n_range, pair=pair))
    reports.sort(key=lambda r: (r.fp.family, r.D.label(), r.identity))
    return reports
