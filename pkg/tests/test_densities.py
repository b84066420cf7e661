import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from alpha_selfaction import densities as dn
from alpha_selfaction.series import FIRST, SECOND, generate_family, product_density
from alpha_selfaction.terms import LogPolySeries

HALF = Fraction(1, 2)
UNIT = (lambda s: 1.0, lambda s: 1.0)


class TestSphericalHarmonics:
    def test_monopole_constant(self):
        for theta, phi in ((0.1, 0.2), (1.5, 3.0), (2.9, 5.5)):
            assert dn.spherical_harmonic(0, 0, theta, phi) == pytest.approx(
                0.5 / math.sqrt(math.pi)
            )

    @pytest.mark.parametrize("l,m", [(0, 0), (1, -1), (1, 0), (1, 1), (2, 2), (2, -1)])
    def test_normalization(self, l, m):
        quad = dn.AngularQuadrature()
        val = quad.integrate(
            lambda th, ph: abs(dn.spherical_harmonic(l, m, th, ph)) ** 2
        )
        assert val.real == pytest.approx(1.0, abs=1e-12)
        assert abs(val.imag) < 1e-14

    def test_orthogonality(self):
        quad = dn.AngularQuadrature()
        val = quad.integrate(
            lambda th, ph: np.conj(dn.spherical_harmonic(1, 0, th, ph))
            * dn.spherical_harmonic(1, 1, th, ph)
        )
        assert abs(val) < 1e-12

    def test_domain_error(self):
        with pytest.raises(ValueError):
            dn.spherical_harmonic(1, 2, 0.3, 0.4)

    def test_coarse_quadrature_rejected(self):
        with pytest.raises(ValueError):
            dn.AngularQuadrature(n_theta=4).nodes()


class TestOperatorTable:
    def test_sixteen_rows(self):
        assert len(dn.OPERATOR_TABLE) == 16

    def test_family_sizes(self):
        by_label = {}
        for row in dn.OPERATOR_TABLE:
            by_label.setdefault(row.label, []).append(row)
        assert len(by_label["four_vector"]) == 4
        assert len(by_label["pseudo_four_vector"]) == 4
        assert len(by_label["invariant"]) == 1
        assert len(by_label["pseudo_invariant"]) == 1
        assert len(by_label["polarization_tensor"]) == 6

    def test_printed_rows_match_except_pseudo_invariant(self):
        report = dn.compare_printed_rows()
        mismatched = [r for r in report if not r["matches_printed"]]
        assert len(mismatched) == 1
        bad = mismatched[0]
        assert bad["operator_id"] == "gamma2345"
        # printed (3,4) entry; the matrices give (3,1)
        assert [3, 1] in bad["mismatched_entries"]
        assert [3, 4] in bad["mismatched_entries"]

    def test_spin_row_is_diagonal_pattern(self):
        mat = dn.operator_matrix("i_gamma23")
        assert np.allclose(mat, np.diag([-1, 1, -1, 1]))

    def test_magnetization_row(self):
        mat = dn.operator_matrix("i_gamma235")
        assert np.allclose(mat, np.diag([-1, 1, 1, -1]))


class TestBispinorAssembly:
    def test_first_structure_m_plus(self):
        st = dn.build_bispinor(FIRST, HALF, UNIT)
        assert st.structure[0].harmonic == (1, 0)
        assert st.structure[0].prefactor == pytest.approx(1 / math.sqrt(3))
        assert st.structure[1].harmonic == (1, 1)
        assert st.structure[1].prefactor == pytest.approx(-math.sqrt(2 / 3))
        assert st.structure[2].harmonic == (0, 0)
        assert st.structure[2].prefactor == pytest.approx(1j)
        assert st.structure[3].harmonic is None

    def test_second_structure_m_plus(self):
        st = dn.build_bispinor(SECOND, HALF, UNIT)
        assert st.structure[0].harmonic == (0, 0)
        assert st.structure[0].prefactor == pytest.approx(1j)
        assert st.structure[1].harmonic is None
        assert st.structure[2].harmonic == (1, 0)
        assert st.structure[2].prefactor == pytest.approx(1 / math.sqrt(3))
        assert st.structure[3].prefactor == pytest.approx(-math.sqrt(2 / 3))

    def test_first_structure_m_minus(self):
        st = dn.build_bispinor(FIRST, -HALF, UNIT)
        assert st.structure[0].harmonic == (1, -1)
        assert st.structure[0].ratio_sq == Fraction(2, 3)
        assert st.structure[2].harmonic is None
        assert st.structure[3].harmonic == (0, 0)

    def test_prefactor_arithmetic_at_general_j(self):
        st = dn.build_bispinor(FIRST, HALF, UNIT, j=HALF)
        assert st.structure[0].ratio_sq == Fraction(1, 3)
        assert float(st.structure[0].ratio_sq) == pytest.approx((1 / math.sqrt(3)) ** 2)

    def test_m_out_of_range(self):
        with pytest.raises(ValueError):
            dn.build_bispinor(FIRST, Fraction(3, 2), UNIT)


class TestBilinearDensities:
    def test_time_component_collapse(self):
        alpha = 0.0073
        first = generate_family(FIRST, 2)
        second = generate_family(SECOND, 2)
        left = dn.build_bispinor(
            FIRST, HALF,
            (lambda s: first.eval_F(s, alpha), lambda s: first.eval_G(s, alpha)),
        )
        right = dn.build_bispinor(
            FIRST, HALF,
            (lambda s: second.eval_F(s, alpha), lambda s: second.eval_G(s, alpha)),
        )
        y00sq = (0.5 / math.sqrt(math.pi)) ** 2
        for s in (0.25, 0.8):
            ff = first.eval_F(s, alpha) * second.eval_F(s, alpha)
            gg = first.eval_G(s, alpha) * second.eval_G(s, alpha)
            target = y00sq * (ff + gg)
            for theta, phi in ((0.3, 0.0), (1.2, 2.5), (2.8, 4.0)):
                val = dn.bilinear_density(left, "gamma1", right, s, theta, phi)
                assert val == pytest.approx(target, abs=1e-12)
                assert abs(val.imag) < 1e-15

    def test_charge_flips_monopole_sign_relative_to_energy(self):
        left = dn.build_bispinor(FIRST, HALF, UNIT)
        right = dn.build_bispinor(FIRST, HALF, UNIT)
        theta, phi = 0.9, 1.7
        y00sq = (0.5 / math.sqrt(math.pi)) ** 2
        energy = dn.bilinear_density(left, "gamma1", right, 0.5, theta, phi)
        charge = dn.bilinear_density(left, "gamma5", right, 0.5, theta, phi)
        # same l=1 part, opposite monopole part: difference is 2*G*g*Y00^2
        assert (energy - charge).real == pytest.approx(2 * y00sq, abs=1e-14)

    def test_zero_state_gives_zero(self):
        zero = (lambda s: 0.0, lambda s: 0.0)
        left = dn.build_bispinor(FIRST, HALF, zero)
        right = dn.build_bispinor(FIRST, HALF, UNIT)
        assert dn.bilinear_density(left, "gamma2", right, 0.4, 1.0, 2.0) == 0.0


EXPECTED_ELECTRON = {
    ("energy", 1): {"|Y_{1,0}|^2": Fraction(1, 3), "|Y_{1,1}|^2": Fraction(2, 3)},
    ("spin_z", 1): {"|Y_{1,0}|^2": Fraction(-1, 3), "|Y_{1,1}|^2": Fraction(2, 3)},
    ("charge", 1): {"|Y_{1,0}|^2": Fraction(1, 3), "|Y_{1,1}|^2": Fraction(2, 3)},
    ("magnetization_z", 1): {"|Y_{1,0}|^2": Fraction(-1, 3), "|Y_{1,1}|^2": Fraction(2, 3)},
    ("energy", -1): {"|Y_{1,0}|^2": Fraction(1, 3), "|Y_{1,-1}|^2": Fraction(2, 3)},
    ("spin_z", -1): {"|Y_{1,0}|^2": Fraction(1, 3), "|Y_{1,-1}|^2": Fraction(-2, 3)},
    ("charge", -1): {"|Y_{1,0}|^2": Fraction(1, 3), "|Y_{1,-1}|^2": Fraction(2, 3)},
    ("magnetization_z", -1): {"|Y_{1,0}|^2": Fraction(1, 3), "|Y_{1,-1}|^2": Fraction(-2, 3)},
}


class TestAngularReduction:
    @pytest.mark.parametrize("name,sgn", sorted(EXPECTED_ELECTRON))
    def test_electron_rows(self, name, sgn):
        table = dn.angular_reduce(dn.NAMED_ROWS[name], dn.ELECTRON, Fraction(sgn, 2))
        got = {e.harmonic: e.fraction for e in table.entries}
        assert got == EXPECTED_ELECTRON[(name, sgn)]
        assert all(e.radial_product == "Ff" for e in table.entries)

    @pytest.mark.parametrize("name", ["energy", "spin_z"])
    def test_gamma5_free_rows_match_between_particles(self, name):
        e = dn.angular_reduce(dn.NAMED_ROWS[name], dn.ELECTRON, HALF)
        p = dn.angular_reduce(dn.NAMED_ROWS[name], dn.POSITRON, HALF)
        assert [x.fraction for x in e.entries] == [x.fraction for x in p.entries]
        assert [x.fraction for x in e.monopole] == [x.fraction for x in p.monopole]

    @pytest.mark.parametrize("name", ["charge", "magnetization_z"])
    def test_gamma5_rows_flip_between_particles(self, name):
        e = dn.angular_reduce(dn.NAMED_ROWS[name], dn.ELECTRON, HALF)
        p = dn.angular_reduce(dn.NAMED_ROWS[name], dn.POSITRON, HALF)
        assert [x.fraction for x in e.entries] == [-x.fraction for x in p.entries]

    def test_positron_charge_row_negated(self):
        p = dn.angular_reduce(dn.NAMED_ROWS["charge"], dn.POSITRON, HALF)
        got = {e.harmonic: e.fraction for e in p.entries}
        assert got == {"|Y_{1,0}|^2": Fraction(-1, 3), "|Y_{1,1}|^2": Fraction(-2, 3)}
        assert all(e.radial_product == "Kk" for e in p.entries)

    def test_monopole_kept_separate(self):
        t = dn.angular_reduce(dn.NAMED_ROWS["energy"], dn.ELECTRON, HALF)
        assert len(t.monopole) == 1
        assert t.monopole[0].radial_product == "Gg"
        assert t.monopole[0].fraction == 1

    def test_cross_harmonics_vanish_for_all_operators(self):
        worst = 0.0
        for op_id in dn.OPERATORS:
            for particle in (dn.ELECTRON, dn.POSITRON):
                for m in (HALF, -HALF):
                    t = dn.angular_reduce(op_id, particle, m)
                    for _, magnitude in t.vanishing:
                        worst = max(worst, magnitude)
        assert worst < 1e-12


class TestSymmetries:
    def _density_on_grid(self, op_id):
        left = dn.build_bispinor(FIRST, HALF, UNIT)
        right = dn.build_bispinor(FIRST, HALF, UNIT)
        thetas = np.linspace(0.1, math.pi - 0.1, 7)
        phis = np.linspace(0.0, 2 * math.pi, 9)
        return np.array(
            [
                [dn.bilinear_density(left, op_id, right, 0.5, th, ph) for ph in phis]
                for th in thetas
            ]
        )

    def test_energy_and_charge_spherically_symmetric(self):
        for op in ("gamma1", "gamma5"):
            grid = self._density_on_grid(op)
            assert np.max(np.abs(grid - grid[0, 0])) < 1e-12

    def test_spin_and_magnetization_azimuthally_symmetric(self):
        for op in ("i_gamma23", "i_gamma235"):
            grid = self._density_on_grid(op)
            # independent of phi, but genuinely theta-dependent
            assert np.max(np.abs(grid - grid[:, :1])) < 1e-12
            assert np.max(np.abs(grid - grid[0, 0])) > 1e-3


class TestInvariants:
    def test_invariants_match_products(self):
        first = generate_family(FIRST, 2)
        second = generate_family(SECOND, 2)
        i1, i2 = dn.invariants_I1_I2(first, second)
        gg = product_density(first, second, "GG")
        ff = product_density(first, second, "FF")
        assert i1.shift(s=2) == LogPolySeries(gg.terms)
        assert i2.shift(s=2) == LogPolySeries(ff.terms)

    def test_pointwise_combinations_reduce_to_invariants(self):
        alpha, beta = 0.0073, 0.0073**2 / 8
        first = generate_family(FIRST, 2)
        second = generate_family(SECOND, 2)
        left = dn.build_bispinor(
            FIRST, HALF,
            (lambda s: first.eval_damped(s, alpha, beta)[0],
             lambda s: first.eval_damped(s, alpha, beta)[1]),
        )
        right = dn.build_bispinor(
            FIRST, HALF,
            (lambda s: second.eval_damped(s, alpha, beta)[0],
             lambda s: second.eval_damped(s, alpha, beta)[1]),
        )
        i1, i2 = dn.invariants_I1_I2(first, second)
        for s in (0.3, 0.75):
            w2 = math.exp(-2 * beta / s)
            gg = i1.eval_numeric(s, alpha) * w2
            ff = i2.eval_numeric(s, alpha) * w2
            for theta, phi in ((0.7, 0.2), (2.1, 4.4)):
                vec = dn.bilinear_density(left, "gamma1", right, s, theta, phi)
                g5 = dn.bilinear_density(left, "gamma5", right, s, theta, phi)
                assert 2 * math.pi * (vec - g5).real == pytest.approx(gg, rel=1e-10)
                assert 2 * math.pi * (vec + g5).real == pytest.approx(ff, rel=1e-10)

    def test_sum_matches_time_component(self):
        first = generate_family(FIRST, 1)
        second = generate_family(SECOND, 1)
        i1, i2 = dn.invariants_I1_I2(first, second)
        left = dn.build_bispinor(FIRST, HALF, UNIT)
        right = dn.build_bispinor(FIRST, HALF, UNIT)
        # with unit radials the time component is 2 * Y00^2, and I1+I2 maps to
        # (Ff + Gg) = 2 under the same substitution
        val = dn.bilinear_density(left, "gamma1", right, 0.5, 1.0, 1.0)
        assert 4 * math.pi * val.real == pytest.approx(2.0, abs=1e-13)
