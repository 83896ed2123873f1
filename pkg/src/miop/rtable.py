"""Recurrence coefficient tables R^[s]_{n,k}.

The table holds, for each level -1 <= s <= M and integer n in a window, the
band of polynomials R^[s]_{n,k}(eta) with |k| <= s+1.  Level -1 is the seed
row R^[-1]_{n,0} = 1.  For L and J the recursion acts directly on
polynomials in eta:

    R^[s]_{n,k} = A_n R^[s-1]_{n+1,k-1} + (B_n - eta) R^[s-1]_{n,k}
                  + C_n R^[s-1]_{n-1,k+1}.

For W and AW the recursion lives in the x-picture,

    Rx^[s]_{n,k}(x) = A_n Rx^[s-1]_{n+1,k-1}(x + i gamma/2)
                      + (B_n - eta(x - i s gamma/2)) Rx^[s-1]_{n,k}(x + i gamma/2)
                      + C_n Rx^[s-1]_{n-1,k+1}(x + i gamma/2),

and every level is self-conjugate and symmetric, hence exactly reducible
to a polynomial in eta; the reduced and x-picture forms are both stored.

Because the recursion at level s reads neighbours n-1 and n+1 of level
s-1, each level is stored on the requested window widened by (M - s) on
both sides, so all lookups during construction stay inside stored rows.

Three structural identities are checkable:
  * the eta-derivative lowers the level: d/deta R^[s] = -(s+1) R^[s-1]
    (L/J),
  * the odd half-difference of R^[s] factors through R^[s-1], and R^[s]
    rebuilds from even halves of level s-1 plus a level s-2 correction
    (W/AW),
  * the depth-M table vanishes on the triangle -M-1 <= n <= -1,
    -n <= k <= M+1 (all families), given the zero convention for
    out-of-range coefficients with A_{-1} = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Union

from .errors import ConfigurationError
from .exact import GaussianRational, LaurentPoly, Poly, format_scalar
from .families import (
    FamilyParams,
    carrier_one,
    carrier_zero,
    eta_at,
    reduce_to_eta,
    three_term,
    x_shift,
)

Carrier = Union[Poly, LaurentPoly]
CoeffFn = Callable[[int], tuple]

_HALF = Fraction(1, 2)
_HALF_I = GaussianRational(0, Fraction(1, 2))


def _check_window(window) -> tuple:
    lo, hi = int(window[0]), int(window[1])
    if lo > hi:
        raise ConfigurationError(f"empty window {window!r}")
    return (lo, hi)


@dataclass
class RTable:
    """Frozen band of recurrence polynomials; read-only after construction."""

    fp: FamilyParams
    M: int
    window: tuple
    entries: dict = field(repr=False)
    xentries: Optional[dict] = field(default=None, repr=False)

    def level_window(self, s: int) -> tuple:
        lo, hi = self.window
        pad = self.M - s
        return (lo - pad, hi + pad)

    def entry(self, s: int, n: int, k: int) -> Poly:
        """R^[s]_{n,k} in eta; zero outside the band |k| <= s+1."""
        return self.entries.get((s, n, k), Poly.zero())

    def xentry(self, s: int, n: int, k: int) -> Carrier:
        """x-picture entry for difference families; zero outside the band."""
        if self.xentries is None:
            raise ConfigurationError("x-picture entries exist for W and AW only")
        out = self.xentries.get((s, n, k))
        if out is None:
            return carrier_zero(self.fp)
        return out

    def to_rows(self, all_levels: bool = False) -> list:
        """Deterministic flat listing for export: depth M, or every level."""
        rows = []
        lo, hi = self.window
        for s in range(0 if all_levels else self.M, self.M + 1):
            for n in range(lo, hi + 1):
                for k in range(-s - 1, s + 2):
                    p = self.entry(s, n, k)
                    rows.append(
                        {
                            "s": s,
                            "n": n,
                            "k": k,
                            "coeffs": [format_scalar(c) for c in p.coeffs],
                        }
                    )
        return rows


def _default_coeffs(fp: FamilyParams) -> CoeffFn:
    return lambda n: three_term(fp, n)


def build_rtable_LJ(
    fp: FamilyParams, M: int, window, coeffs: Optional[CoeffFn] = None
) -> RTable:
    """Fill levels -1..M of the eta-picture table for the L and J families."""
    if fp.family not in ("L", "J"):
        raise ConfigurationError("build_rtable_LJ requires family L or J")
    window = _check_window(window)
    if M < 0:
        raise ConfigurationError("depth M must be >= 0")
    coeffs = coeffs or _default_coeffs(fp)
    lo, hi = window
    entries: dict = {}
    for n in range(lo - M - 1, hi + M + 2):
        entries[(-1, n, 0)] = Poly.one()
    eta = Poly.variable()
    zero = Poly.zero()

    def get(s, n, k):
        return entries.get((s, n, k), zero)

    for s in range(M + 1):
        pad = M - s
        for n in range(lo - pad, hi + pad + 1):
            A, B, C = coeffs(n)
            for k in range(-s - 1, s + 2):
                val = (
                    get(s - 1, n + 1, k - 1) * A
                    + (B - eta) * get(s - 1, n, k)
                    + get(s - 1, n - 1, k + 1) * C
                )
                entries[(s, n, k)] = val
    return RTable(fp, M, window, entries)


def build_rtable_WAW(
    fp: FamilyParams, M: int, window, coeffs: Optional[CoeffFn] = None
) -> RTable:
    """Fill the x-picture table for W/AW and reduce every entry to eta."""
    if not fp.is_difference:
        raise ConfigurationError("build_rtable_WAW requires family W or AW")
    window = _check_window(window)
    if M < 0:
        raise ConfigurationError("depth M must be >= 0")
    coeffs = coeffs or _default_coeffs(fp)
    lo, hi = window
    one = carrier_one(fp)
    zero = carrier_zero(fp)
    xentries: dict = {}
    entries: dict = {}
    for n in range(lo - M - 1, hi + M + 2):
        xentries[(-1, n, 0)] = one
        entries[(-1, n, 0)] = Poly.one()

    def get(s, n, k):
        return xentries.get((s, n, k), zero)

    for s in range(M + 1):
        pad = M - s
        eta_arg = eta_at(fp, Fraction(-s, 2))
        shifted_cache: dict = {}

        def up(s1, n, k):
            # level s-1 entry evaluated at x + i gamma/2
            key = (s1, n, k)
            got = shifted_cache.get(key)
            if got is None:
                got = x_shift(fp, get(s1, n, k), _HALF)
                shifted_cache[key] = got
            return got

        for n in range(lo - pad, hi + pad + 1):
            A, B, C = coeffs(n)
            for k in range(-s - 1, s + 2):
                val = (
                    up(s - 1, n + 1, k - 1) * A
                    + (B - eta_arg) * up(s - 1, n, k)
                    + up(s - 1, n - 1, k + 1) * C
                )
                xentries[(s, n, k)] = val
                entries[(s, n, k)] = reduce_to_eta(fp, val)
    return RTable(fp, M, window, entries, xentries)


def build_rtable(
    fp: FamilyParams, M: int, window, coeffs: Optional[CoeffFn] = None
) -> RTable:
    """Family-dispatching front door."""
    if fp.is_difference:
        return build_rtable_WAW(fp, M, window, coeffs)
    return build_rtable_LJ(fp, M, window, coeffs)


# -- structural identity checks ------------------------------------------------


def check_rprop(table: RTable) -> list:
    """Violations of d/deta R^[s]_{n,k} = -(s+1) R^[s-1]_{n,k} (L/J)."""
    if table.fp.is_difference:
        raise ConfigurationError("check_rprop applies to L and J tables")
    bad = []
    for (s, n, k), p in sorted(table.entries.items()):
        if s < 0:
            continue
        lhs = p.derivative()
        rhs = table.entry(s - 1, n, k) * Fraction(-(s + 1))
        if lhs != rhs:
            bad.append({"s": s, "n": n, "k": k, "lhs": lhs, "rhs": rhs})
    return bad


def check_rprop2_rprop3(
    fp: FamilyParams,
    M: int,
    window,
    table: Optional[RTable] = None,
    coeffs: Optional[CoeffFn] = None,
) -> list:
    """Violations of the two half-shift identities for W/AW tables.

    First identity: the odd half of a level-s entry equals the odd half of
    eta at displacement (s+1)/2 times the level s-1 entry at rest.  Second:
    a level-s entry rebuilds from even halves of level s-1 with the
    coefficient recursion, corrected by a level s-2 term; at s = 0 the
    correction factor is identically zero.
    """
    if not fp.is_difference:
        raise ConfigurationError("check_rprop2_rprop3 requires family W or AW")
    if table is None:
        table = build_rtable_WAW(fp, M, window, coeffs)
    coeffs = coeffs or _default_coeffs(fp)
    M = table.M
    lo, hi = table.window
    bad = []

    def halves(p):
        return x_shift(fp, p, -_HALF), x_shift(fp, p, _HALF)

    for s in range(M + 1):
        pad = M - s
        d_up = eta_at(fp, Fraction(s + 1, 2))
        d_dn = eta_at(fp, Fraction(-(s + 1), 2))
        e_up = eta_at(fp, Fraction(s, 2))
        e_dn = eta_at(fp, Fraction(-s, 2))
        corr = (e_dn - e_up) ** 2 * Fraction(1, 4)
        for n in range(lo - pad, hi + pad + 1):
            A, B, C = coeffs(n)
            for k in range(-s - 1, s + 2):
                cur = table.xentry(s, n, k)
                c_dn, c_up = halves(cur)
                minus = (c_dn - c_up) * _HALF_I
                rhs2 = (d_dn - d_up) * (-_HALF_I) * table.xentry(s - 1, n, k)
                if minus != rhs2:
                    bad.append({"id": "half-difference", "s": s, "n": n, "k": k})

                def plus(s1, n1, k1):
                    a, b = halves(table.xentry(s1, n1, k1))
                    return (a + b) * _HALF

                rhs3 = (
                    plus(s - 1, n + 1, k - 1) * A
                    + (B - (e_dn + e_up) * _HALF) * plus(s - 1, n, k)
                    + plus(s - 1, n - 1, k + 1) * C
                )
                if s >= 1:
                    rhs3 = rhs3 - corr * table.xentry(s - 2, n, k)
                if cur != rhs3:
                    bad.append({"id": "even-half-rebuild", "s": s, "n": n, "k": k})
    return bad


def check_vanishing_region(table: RTable, M: Optional[int] = None) -> list:
    """Violations of R^[s]_{n,k} = 0 on -s-1 <= n <= -1, -n <= k <= s+1.

    Checked at every level s <= M, each of which is itself a depth-s table.
    """
    M = table.M if M is None else M
    lo, hi = table.window
    if lo > -M - 1 or hi < -1:
        raise ConfigurationError(
            f"window {table.window} does not cover the vanishing region of depth {M}"
        )
    bad = []
    for s in range(M + 1):
        for n in range(-s - 1, 0):
            for k in range(-n, s + 2):
                if not table.entry(s, n, k).is_zero:
                    bad.append({"s": s, "n": n, "k": k})
    return bad
