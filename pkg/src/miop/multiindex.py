"""Construction of denominator and multi-indexed polynomials.

An index set D lists virtual states (type I or II, each with a degree).
From D and a parameter point the module builds the pair

    Xi_D(eta)     denominator polynomial, generically of degree ell, and
    P_{D,n}(eta)  multi-indexed polynomial, generically of degree ell+n,

with ell = sum(d_j) - M(M-1)/2 + 2 M_I M_II.

For L and J the construction is a Wronskian in eta whose columns carry
non-polynomial gauge factors (exp(eta), powers of eta and (1 +- eta)/2).
Each column is represented as gauge times polynomial and differentiated
with the product rule, tracking the gauge exponent exactly; the printed
prefactors then cancel all gauges up to a nonpositive integer power of
the base, which is divided out exactly.  A failed cancellation raises
NonPolynomialResult.

For W and AW the construction is a Casoratian-style determinant over the
x-picture.  Entries combine r-factors (Pochhammer or q-Pochhammer chains
with kappa powers), virtual polynomials evaluated on the symmetric point
ladder x + i((R+1)/2 - j) gamma, and for the P determinant one extra
column carrying the classical polynomial.  The determinant is multiplied
by its i-phase, divided exactly by the printed normalization and by
phi_M, and reduced to a polynomial in eta.  InexactDivision or
ReductionFailure signal implementation errors, never expected states.

For AW the alpha prefactors contribute (a1 a2 q^-R)^e (a3 a4 q^-R)^e'
with half-integer exponents.  The part representable in the scalar tower
is folded into the coefficients; a residual square root of a rational,
when present, is detached and recorded on the pair as a radicand
(norm tag): the verbatim object is sqrt(radicand) times the stored
polynomial.  The tag is independent of n, so every identity checked
downstream is insensitive to it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import ConfigurationError, InexactDivision, NonPolynomialResult
from .exact import (
    GaussianRational,
    I,
    LaurentPoly,
    Poly,
    PolyMatrix,
    Scalar,
    det,
    format_scalar,
    q_pow,
    rational_sqrt,
    sqrt_q,
)
from .families import (
    FamilyParams,
    VirtualStateData,
    carrier_one,
    classical_poly,
    classical_poly_x,
    phi_x,
    poly_to_x,
    shifted,
    twisted,
    virtual_poly,
    x_shift,
)

Carrier = Union[Poly, LaurentPoly]

_ENTRY_RE = re.compile(r"^(I{1,2})(\d+)$")


# -- index sets ----------------------------------------------------------------


@dataclass(frozen=True)
class IndexSet:
    """Ordered list of virtual state labels; order matters only up to sign."""

    entries: tuple

    def __post_init__(self):
        entries = tuple(self.entries)
        object.__setattr__(self, "entries", entries)
        for e in entries:
            if not isinstance(e, VirtualStateData):
                raise ConfigurationError(f"index set entries must be virtual state labels, got {e!r}")
        for t in ("I", "II"):
            degs = [e.v for e in entries if e.type == t]
            if len(degs) != len(set(degs)):
                raise ConfigurationError(f"duplicate type-{t} degrees in index set")
        if self.M >= 1 and self.ell < 1:
            raise ConfigurationError(
                f"index set {self.label()} has ell = {self.ell} < 1"
            )

    @classmethod
    def from_pairs(cls, pairs) -> "IndexSet":
        return cls(tuple(VirtualStateData(t, int(v)) for t, v in pairs))

    @classmethod
    def parse(cls, text: str) -> "IndexSet":
        """Parse a compact label such as "I1,II2" or "" for the empty set."""
        text = text.strip()
        if not text:
            return cls(())
        entries = []
        for tok in text.split(","):
            m = _ENTRY_RE.match(tok.strip())
            if not m:
                raise ConfigurationError(f"cannot parse index entry {tok!r}")
            entries.append(VirtualStateData(m.group(1), int(m.group(2))))
        return cls(tuple(entries))

    @property
    def M(self) -> int:
        return len(self.entries)

    @property
    def M1(self) -> int:
        return sum(1 for e in self.entries if e.type == "I")

    @property
    def M2(self) -> int:
        return sum(1 for e in self.entries if e.type == "II")

    @property
    def d1(self) -> tuple:
        return tuple(e.v for e in self.entries if e.type == "I")

    @property
    def d2(self) -> tuple:
        return tuple(e.v for e in self.entries if e.type == "II")

    @property
    def ell(self) -> int:
        total = sum(e.v for e in self.entries)
        return total - self.M * (self.M - 1) // 2 + 2 * self.M1 * self.M2

    def prefix(self, s: int) -> "IndexSet":
        return IndexSet(self.entries[:s])

    def permute(self, perm) -> "IndexSet":
        if sorted(perm) != list(range(self.M)):
            raise ConfigurationError(f"{perm!r} is not a permutation of 0..{self.M - 1}")
        return IndexSet(tuple(self.entries[i] for i in perm))

    def label(self) -> str:
        return ",".join(f"{e.type}{e.v}" for e in self.entries)

    def to_json(self) -> list:
        return [[e.type, e.v] for e in self.entries]


def ell(D) -> int:
    """Degree of the denominator polynomial for the index set D."""
    if not isinstance(D, IndexSet):
        D = IndexSet.from_pairs(D)
    return D.ell


# -- result container ----------------------------------------------------------


@dataclass
class MultiIndexedPair:
    """Xi_D plus the map n -> P_{D,n}, with any detached scale radicands.

    The verbatim objects are sqrt(xi_radicand) * Xi and
    sqrt(p_radicand) * P[n]; both radicands are 1 except for AW index sets
    whose alpha prefactors leave an irreducible rational square root.
    """

    fp: FamilyParams
    D: IndexSet
    Xi: Poly
    P: dict
    xi_radicand: Fraction = Fraction(1)
    p_radicand: Fraction = Fraction(1)

    @property
    def n_max(self) -> int:
        return max(self.P)

    def P_of(self, n: int) -> Poly:
        if n < 0:
            return Poly.zero()
        got = self.P.get(n)
        if got is None:
            raise ConfigurationError(
                f"P_{{D,{n}}} not built (n_max = {self.n_max})"
            )
        return got

    def to_json(self) -> dict:
        obj = self.fp.to_json()
        obj["D"] = self.D.to_json()
        obj["ell"] = self.D.ell
        obj["Xi"] = [format_scalar(c) for c in self.Xi.coeffs]
        obj["P"] = {
            str(n): [format_scalar(c) for c in p.coeffs]
            for n, p in sorted(self.P.items())
        }
        obj["norm_sqrt"] = {
            "Xi": format_scalar(self.xi_radicand),
            "P": format_scalar(self.p_radicand),
        }
        return obj


@dataclass
class WeightDescriptor:
    """Data needed by the float backend to evaluate the deformed weight."""

    fp: FamilyParams
    D: IndexSet
    shifted_fp: FamilyParams
    Xi: Poly
    c_F: Optional[Fraction]


def weight_descriptor(fp: FamilyParams, D: IndexSet, pair: "MultiIndexedPair" = None) -> WeightDescriptor:
    if pair is None:
        pair = build(fp, D, n_max=0)
    c_F = {"L": Fraction(2), "J": Fraction(-4)}.get(fp.family)
    return WeightDescriptor(fp, D, twisted(fp, D.M1, D.M2), pair.Xi, c_F)


# -- L/J: gauge-factored Wronskians ---------------------------------------------


@dataclass
class _GaugeColumn:
    """One Wronskian column written as exp(eps*eta) * base^c0 * p(eta)."""

    p: Poly
    eps: int = 0
    base: Optional[Poly] = None
    base_id: str = ""
    b: Fraction = Fraction(0)
    c0: Fraction = Fraction(0)


def _ladder(col: _GaugeColumn, depth: int) -> list:
    """Polynomial parts of the first `depth` derivatives of the column."""
    rows = [col.p]
    c = col.c0
    for _ in range(1, depth):
        p = rows[-1]
        if col.base is None:
            rows.append(p * col.eps + p.derivative())
        else:
            rows.append(col.base * p * col.eps + p * (c * col.b) + col.base * p.derivative())
            c = c - 1
    return rows


def _wronskian(columns: list, depth: int, printed: dict, printed_eps: int) -> Poly:
    """Gauge-cancelled Wronskian times the printed prefactor, as a Poly.

    printed maps base ids to the exponents of the printed prefactor;
    printed_eps is the printed exponent of exp(eta).  The per-column gauge
    exponents are accumulated against these and must cancel to nonpositive
    integers, which are divided out exactly.
    """
    if sum(c.eps for c in columns) + printed_eps != 0:
        raise NonPolynomialResult("exponential gauge factors do not cancel")
    exps = dict(printed)
    bases = {}
    mat = []
    ladders = [_ladder(c, depth) for c in columns]
    for r in range(depth):
        row = []
        for c, rows in zip(columns, ladders):
            entry = rows[r]
            if c.base is not None:
                entry = entry * c.base ** (depth - 1 - r)
            row.append(entry)
        mat.append(row)
    for c in columns:
        if c.base is not None:
            bases[c.base_id] = c.base
            exps[c.base_id] = exps.get(c.base_id, Fraction(0)) + c.c0 - (depth - 1)
    d = det(PolyMatrix(mat))
    divisor = Poly.one()
    for base_id, e in sorted(exps.items()):
        if e == 0:
            continue
        if e.denominator != 1 or e > 0:
            raise NonPolynomialResult(
                f"gauge base {base_id!r} leaves exponent {e} after cancellation"
            )
        divisor = divisor * bases[base_id] ** (-int(e))
    try:
        return d.exact_div(divisor)
    except InexactDivision as exc:
        raise NonPolynomialResult(f"gauge division failed: {exc}") from exc


def _lj_columns(fp: FamilyParams, D: IndexSet) -> list:
    half = Fraction(1, 2)
    eta = Poly.variable()
    cols = []
    if fp.family == "L":
        for v in D.d1:
            cols.append(_GaugeColumn(p=virtual_poly(fp, VirtualStateData("I", v)), eps=1))
        for v in D.d2:
            cols.append(
                _GaugeColumn(
                    p=virtual_poly(fp, VirtualStateData("II", v)),
                    base=eta,
                    base_id="eta",
                    b=Fraction(1),
                    c0=half - fp.g,
                )
            )
    else:
        jp = (eta + 1) * half
        jm = (1 - eta) * half
        for v in D.d1:
            cols.append(
                _GaugeColumn(
                    p=virtual_poly(fp, VirtualStateData("I", v)),
                    base=jp,
                    base_id="jp",
                    b=half,
                    c0=half - fp.h,
                )
            )
        for v in D.d2:
            cols.append(
                _GaugeColumn(
                    p=virtual_poly(fp, VirtualStateData("II", v)),
                    base=jm,
                    base_id="jm",
                    b=-half,
                    c0=half - fp.g,
                )
            )
    return cols


def _lj_printed(fp: FamilyParams, D: IndexSet, for_P: bool):
    half = Fraction(1, 2)
    s = half if for_P else -half
    M1, M2 = D.M1, D.M2
    if fp.family == "L":
        return {"eta": (M1 + fp.g + s) * M2}, -M1
    return {"jm": (M1 + fp.g + s) * M2, "jp": (M2 + fp.h + s) * M1}, 0


def build_LJ(fp: FamilyParams, D: IndexSet, n_max: int = 8) -> MultiIndexedPair:
    """Wronskian construction of (Xi_D, P_{D,0..n_max}) for L and J."""
    if fp.family not in ("L", "J"):
        raise ConfigurationError("build_LJ requires family L or J")
    if D.M == 0:
        return MultiIndexedPair(fp, D, Poly.one(), {n: classical_poly(fp, n) for n in range(n_max + 1)})
    cols = _lj_columns(fp, D)
    printed, printed_eps = _lj_printed(fp, D, for_P=False)
    Xi = _wronskian(cols, D.M, printed, printed_eps)
    printed_P, printed_eps_P = _lj_printed(fp, D, for_P=True)
    P = {}
    for n in range(n_max + 1):
        cols_n = cols + [_GaugeColumn(p=classical_poly(fp, n))]
        P[n] = _wronskian(cols_n, D.M + 1, printed_P, printed_eps_P)
    return MultiIndexedPair(fp, D, Xi, P)


# -- W/AW: Casoratian-style determinants ----------------------------------------


def _poch_pm(a: Scalar, sign: int, m: int) -> Poly:
    """(a + sign*ix)_m as a polynomial in x over Gaussian rationals."""
    out = Poly.one("x")
    imag = GaussianRational(0, Fraction(sign))
    for t in range(m):
        out = out * Poly([a + t, imag], var="x")
    return out


def _qpoch_z(u: Scalar, q: Fraction, power: int, m: int) -> LaurentPoly:
    """(u z^power; q)_m as a Laurent polynomial (power is +1 or -1)."""
    out = LaurentPoly.one()
    for t in range(m):
        c = u * q_pow(q, t)
        if power == 1:
            out = out * LaurentPoly(0, [1, -c])
        else:
            out = out * LaurentPoly(-1, [-c, 1])
    return out


def _r_poly(fp: FamilyParams, ks: tuple, j: int, R: int) -> Carrier:
    """Polynomial content of an r-factor for row j of a size-R determinant.

    Includes the kappa power (half-integer power of 1/q for AW) but not
    the alpha prefactor, which is handled once per determinant.
    """
    if fp.family == "W":
        out = Poly.one("x")
        for k in ks:
            a = fp.lam[k - 1] - Fraction(R - 1, 2)
            out = out * _poch_pm(a, +1, j - 1) * _poch_pm(a, -1, R - j)
        return out
    out = LaurentPoly.monomial(R + 1 - 2 * j)
    for k in ks:
        u = fp.lam[k - 1] * q_pow(fp.q, -(R - 1), 2)
        out = out * _qpoch_z(u, fp.q, 1, j - 1) * _qpoch_z(u, fp.q, -1, R - j)
    # kappa = 1/q: exponent (R-1)^2/2 - (j-1)(R-j)
    e_num = -((R - 1) ** 2) + 2 * (j - 1) * (R - j)
    return out * q_pow(fp.q, e_num, 2)


def _alpha_scale(fp: FamilyParams, R: int, e1: Fraction, e2: Fraction):
    """(a1 a2 q^-R)^e1 (a3 a4 q^-R)^e2 split into tower scalar and radicand."""
    if fp.family == "W":
        return Fraction(1), Fraction(1)
    a = fp.lam
    qR = fp.q ** (-R)
    rational = Fraction(1)
    rad = Fraction(1)
    for u, e in ((a[0] * a[1] * qR, Fraction(e1)), (a[2] * a[3] * qR, Fraction(e2))):
        n = e.numerator // e.denominator
        rational *= Fraction(u) ** n
        if e - n:
            rad *= Fraction(u)
    root = rational_sqrt(rad)
    if root is not None:
        return rational * root, Fraction(1)
    root = rational_sqrt(rad / fp.q)
    if root is not None:
        return rational * root * sqrt_q(fp.q), Fraction(1)
    return rational, rad


def _norm_divisor(fp: FamilyParams, R: int, lim34: int, lim12: int):
    """The printed normalization (A or B): carrier polynomial and scalar."""
    scalar: Scalar = Fraction(1)
    if fp.family == "W":
        poly: Carrier = Poly.one("x")
        for ks, lim in (((3, 4), lim34), ((1, 2), lim12)):
            for k in ks:
                a = fp.lam[k - 1] - Fraction(R - 1, 2)
                for j in range(1, lim + 1):
                    poly = poly * _poch_pm(a, +1, j) * _poch_pm(a, -1, j)
        return poly, scalar
    poly = LaurentPoly.one()
    for ks, lim in (((3, 4), lim34), ((1, 2), lim12)):
        for k in ks:
            ak = fp.lam[k - 1]
            u = ak * q_pow(fp.q, -(R - 1), 2)
            for j in range(1, lim + 1):
                scalar = scalar * ak ** (-j) * q_pow(fp.q, j * (j + 1) // 2, 2)
                poly = poly * _qpoch_z(u, fp.q, 1, j) * _qpoch_z(u, fp.q, -1, j)
    return poly, scalar


def phi_M(fp: FamilyParams, M: int) -> Carrier:
    """The auxiliary product phi_M; identically 1 for M <= 1."""
    if M < 0:
        raise ConfigurationError("phi_M needs M >= 0")
    if M <= 1:
        return carrier_one(fp)
    phi = phi_x(fp)
    out = phi ** (M // 2)
    for k in range(1, M - 1):
        pair = x_shift(fp, phi, Fraction(-k, 2)) * x_shift(fp, phi, Fraction(k, 2))
        out = out * pair ** ((M - k) // 2)
    return out


def _phase(R: int) -> GaussianRational:
    return I ** ((R * (R - 1) // 2) % 4)


def _casoratian_matrix(fp: FamilyParams, D: IndexSet, R: int, last: Optional[Carrier]):
    """Rows j=1..R over the point ladder; columns X (type I), Y (type II),
    and when `last` is given the extra column r^II r^I last(x_j)."""
    r1 = {j: _r_poly(fp, (1, 2), j, R) for j in range(1, R + 1)}
    r2 = {j: _r_poly(fp, (3, 4), j, R) for j in range(1, R + 1)}
    xi1 = {v: poly_to_x(fp, virtual_poly(fp, VirtualStateData("I", v))) for v in D.d1}
    xi2 = {v: poly_to_x(fp, virtual_poly(fp, VirtualStateData("II", v))) for v in D.d2}
    mat = []
    for j in range(1, R + 1):
        c = Fraction(R + 1, 2) - j
        row = [r2[j] * x_shift(fp, xi1[v], c) for v in D.d1]
        row += [r1[j] * x_shift(fp, xi2[v], c) for v in D.d2]
        if last is not None:
            row.append(r2[j] * r1[j] * x_shift(fp, last, c))
        mat.append(row)
    return mat


def _assemble(fp: FamilyParams, mat, R: int, lim34: int, lim12: int, e1, e2):
    from .families import reduce_to_eta

    d = det(PolyMatrix(mat)) * _phase(R)
    norm_poly, norm_scalar = _norm_divisor(fp, R, lim34, lim12)
    scale, rad = _alpha_scale(fp, R, e1, e2)
    d = d.exact_div(norm_poly * phi_M(fp, R))
    d = d * (scale / norm_scalar)
    return reduce_to_eta(fp, d), rad


def build_WAW(fp: FamilyParams, D: IndexSet, n_max: int = 8) -> MultiIndexedPair:
    """Determinant construction of (Xi_D, P_{D,0..n_max}) for W and AW."""
    if not fp.is_difference:
        raise ConfigurationError("build_WAW requires family W or AW")
    if D.M == 0:
        return MultiIndexedPair(fp, D, Poly.one(), {n: classical_poly(fp, n) for n in range(n_max + 1)})
    M, M1, M2 = D.M, D.M1, D.M2
    half = Fraction(1, 2)
    Xi, xi_rad = _assemble(
        fp,
        _casoratian_matrix(fp, D, M, None),
        M,
        max(M1 - 1, 0),
        max(M2 - 1, 0),
        -(M - 1) * M2 * half,
        -(M - 1) * M1 * half,
    )
    P = {}
    p_rad = Fraction(1)
    mat_fixed = _casoratian_matrix(fp, D, M + 1, classical_poly_x(fp, 0))
    for n in range(n_max + 1):
        mat = (
            mat_fixed
            if n == 0
            else _casoratian_matrix(fp, D, M + 1, classical_poly_x(fp, n))
        )
        P[n], p_rad = _assemble(
            fp,
            mat,
            M + 1,
            M1,
            M2,
            -M * (M2 + 1) * half,
            -M * (M1 + 1) * half,
        )
    return MultiIndexedPair(fp, D, Xi, P, xi_rad, p_rad)


def build(fp: FamilyParams, D: IndexSet, n_max: int = 8) -> MultiIndexedPair:
    """Family-dispatching front door."""
    if fp.is_difference:
        return build_WAW(fp, D, n_max)
    return build_LJ(fp, D, n_max)


def permuted(fp: FamilyParams, D: IndexSet, perm, n_max: int = 8) -> MultiIndexedPair:
    """The pair built from a permutation of D; equals build(fp, D) up to sign."""
    return build(fp, D.permute(perm), n_max)
