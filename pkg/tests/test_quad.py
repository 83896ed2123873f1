"""Tests for the float backend: weights, quadrature, norms, orthogonality."""

import math
from fractions import Fraction as F

import mpmath
import pytest

from miop.errors import ConfigurationError, NonConvergent, PoleEncountered
from miop.exact import Poly
from miop.families import PRESETS, FamilyParams, energy, virtual_energy
from miop.multiindex import IndexSet, build
from miop.quad import (
    DIFFERENCE_ORTHO_PRESETS,
    FloatPoly,
    QuadratureSpec,
    classical_norm,
    expected_norm,
    integrate_gl,
    integrate_ts,
    ortho_grid,
    orthogonality_check,
    pairwise_sum,
    weight,
)

EMPTY = IndexSet.parse("")


class TestFloatPoly:
    def test_mirrors_exact(self):
        p = Poly([F(1, 3), F(-2), F(5, 7)])
        fpoly = FloatPoly.from_exact(p)
        assert fpoly(0.0) == pytest.approx(1 / 3, rel=1e-15)
        assert fpoly(2.0) == pytest.approx(1 / 3 - 4 + 20 / 7, rel=1e-14)

    def test_compensated_horner_beats_naive(self):
        # (x-1)^4 evaluated just off 1: condition number ~1e17, so plain
        # Horner loses every digit while the compensated loop keeps ~1e-12.
        coeffs = [F(1), F(-4), F(6), F(-4), F(1)]
        x = 1.0001
        exact = float((F(x) - 1) ** 4)
        fpoly = FloatPoly.from_exact(Poly(list(coeffs)))
        naive = 0.0
        for c in reversed(coeffs):
            naive = naive * x + float(c)
        assert abs(fpoly(x) - exact) <= 1e-12 * abs(exact)
        assert abs(naive - exact) > 1e-4 * abs(exact)


class TestPairwiseSum:
    def test_matches_fsum_and_is_deterministic(self):
        vals = [((-1) ** k) * (1.0 + k) * 10.0 ** ((k * 7) % 13) for k in range(200)]
        total = pairwise_sum(vals)
        assert total == pairwise_sum(list(vals))
        assert total == pytest.approx(math.fsum(vals), rel=1e-12)

    def test_small_lists(self):
        assert pairwise_sum([]) == 0.0
        assert pairwise_sum([3.5]) == 3.5
        assert pairwise_sum([1.0, 2.0, 3.0, 4.0]) == 10.0


class TestQuadratureSpec:
    def test_rejects_unknown_scheme(self):
        with pytest.raises(ConfigurationError):
            QuadratureSpec(scheme="simpson")

    def test_doubling_contract_reported(self):
        spec = QuadratureSpec(scheme="gauss-legendre", nodes=8, rtol=1e-12)
        res = integrate_gl(math.cos, 0.0, 1.0, spec)
        assert res.value == pytest.approx(math.sin(1.0), rel=1e-14)
        assert res.err_estimate <= spec.rtol * abs(res.value)

    def test_nonconvergent_when_levels_exhausted(self):
        spec = QuadratureSpec(scheme="gauss-legendre", nodes=2, rtol=1e-15, max_levels=1)
        with pytest.raises(NonConvergent):
            integrate_gl(lambda x: math.exp(-x) * math.sin(40 * x), 0.0, 6.0, spec)

    def test_tanh_sinh_gaussian(self):
        spec = QuadratureSpec(scheme="tanh-sinh", rtol=1e-12)
        res = integrate_ts(lambda x: math.exp(-x * x), 0.0, 12.0, spec)
        assert res.value == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-13)


class TestWeight:
    def test_laguerre_frozen_point(self):
        fp = FamilyParams("L", (F(3, 2),))
        assert weight(fp, EMPTY, 1.0) == pytest.approx(math.exp(-1.0), rel=1e-15)

    def test_domain_rejected(self):
        fp = PRESETS["l-default"]
        with pytest.raises(ValueError):
            weight(fp, EMPTY, -1.0)
        with pytest.raises(ValueError):
            weight(PRESETS["j-default"], EMPTY, 2.0)

    def test_deformed_laguerre_positive_on_interval(self):
        fp = PRESETS["l-default"]
        D = IndexSet.parse("I1")
        for k in range(1, 60):
            assert weight(fp, D, 0.2 * k) > 0.0

    def test_pole_refused(self):
        # Mixed-type Wilson deformation at these parameters has a denominator
        # zero inside (0, inf); the scan must refuse rather than integrate.
        fp = FamilyParams("W", (F(2), F(7, 4), F(8, 5), F(17, 10)))
        with pytest.raises(PoleEncountered):
            orthogonality_check(fp, IndexSet.parse("I1,II1"), 0, 0)


class TestClassicalNorms:
    def test_laguerre_h0_frozen(self):
        assert classical_norm(FamilyParams("L", (F(3, 2),)), 0) == pytest.approx(0.5, rel=1e-14)

    def test_jacobi_h0_gamma_formula(self):
        fp = PRESETS["j-default"]
        g, h = [float(v) for v in fp.lam]
        ref = (
            mpmath.gamma(g + 0.5)
            * mpmath.gamma(h + 0.5)
            / (2 * (g + h) * mpmath.gamma(g + h))
        )
        assert classical_norm(fp, 0) == pytest.approx(float(ref), rel=1e-13)

    @pytest.mark.parametrize("key", ["l-default", "j-default"])
    def test_classical_quadrature_norms(self, key):
        fp = PRESETS[key]
        for n in range(9):
            integral, expected, rel = orthogonality_check(fp, EMPTY, n, n)
            assert rel < 1e-9, (key, n, integral, expected)

    @pytest.mark.parametrize("key", ["w-default", "aw-default"])
    def test_difference_quadrature_norms(self, key):
        fp = PRESETS[key]
        for n in range(4):
            integral, expected, rel = orthogonality_check(fp, EMPTY, n, n)
            assert rel < 1e-10, (key, n, integral, expected)

    def test_classical_offdiagonal(self):
        for key in ("l-default", "j-default"):
            _, _, rel = orthogonality_check(PRESETS[key], EMPTY, 1, 4)
            assert rel < 1e-10


class TestExpectedNorm:
    def test_single_deletion_product(self):
        fp = PRESETS["l-default"]  # g = 7/3
        D = IndexSet.parse("I1")
        gap = energy(fp, 1) - virtual_energy(fp, D.entries[0])
        g = F(7, 3)
        assert gap == 4 + 4 * (g + 1 + F(1, 2))
        assert expected_norm(fp, D, 1) == pytest.approx(
            float(gap) * classical_norm(fp, 1), rel=1e-14
        )

    def test_empty_set_reduces_to_classical(self):
        fp = PRESETS["j-default"]
        assert expected_norm(fp, EMPTY, 3) == classical_norm(fp, 3)


class TestDeformedOrthogonality:
    # Virtual energies must stay below the ground state (type I: h > v + 1/2
    # for J, any v for L; type II: g > v + 1/2), so the v = 2 rows move h or g
    # above 5/2 where the defaults sit below it.
    @pytest.mark.parametrize(
        "fp,label",
        [
            (PRESETS["l-default"], "I1"),
            (PRESETS["l-default"], "II1"),
            (PRESETS["l-default"], "I1,I2"),
            (PRESETS["l-default"], "I1,II1"),
            (PRESETS["j-default"], "I1"),
            (FamilyParams("J", (F(11, 4), F(9, 4))), "II2"),
            (FamilyParams("J", (F(7, 3), F(11, 4))), "I1,I2"),
            (PRESETS["j-default"], "I1,II1"),
        ],
    )
    def test_lj_product_formula(self, fp, label):
        D = IndexSet.parse(label)
        pair = build(fp, D, n_max=4)
        diag = {}
        for n in range(3):
            integral, expected, rel = orthogonality_check(fp, D, n, n, pair=pair)
            assert rel < 1e-7, (fp.family, label, n, integral, expected)
            diag[n] = integral
        for n, m in [(0, 1), (0, 2), (1, 2)]:
            integral, _, rel = orthogonality_check(fp, D, n, m, pair=pair)
            assert rel < 1e-8, (fp.family, label, n, m, integral)

    def test_difference_presets(self):
        # Shipped parameter points where the deformed W/AW weight carries no
        # discrete mass, so the continuous integral equals the full norm.
        for fam, lam, q, label in DIFFERENCE_ORTHO_PRESETS:
            fp = FamilyParams(fam, lam, q=q)
            D = IndexSet.parse(label)
            pair = build(fp, D, n_max=2)
            for n in range(2):
                integral, expected, rel = orthogonality_check(fp, D, n, n, pair=pair)
                assert rel < 1e-10, (fam, label, n, integral, expected)
            _, _, rel = orthogonality_check(fp, D, 0, 2, pair=pair)
            assert rel < 1e-10, (fam, label, "offdiag")

    def test_missing_bound_state_is_detected_as_deficit(self):
        # At these parameters the type-I deformation owns a bound state
        # outside the continuous band; the continuous integral must fall
        # short of the product formula by a visible margin (not fail noisily).
        fp = FamilyParams("AW", (F(1, 4), F(1, 5), F(1, 3), F(1, 2)), q=F(1, 4))
        integral, expected, rel = orthogonality_check(fp, IndexSet.parse("I1"), 0, 0)
        assert rel > 1e-3
        assert integral < expected


class TestOrthoGrid:
    def test_grid_shape_and_pass(self):
        rows = ortho_grid(PRESETS["l-default"], IndexSet.parse("I1"), 2)
        assert len(rows) == 6
        for n, m, integral, expected, rel in rows:
            assert rel < (1e-7 if n == m else 1e-8)
