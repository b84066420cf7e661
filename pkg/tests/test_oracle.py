import math

import numpy as np
import pytest

from alpha_selfaction.oracle import (
    DEFAULT_GRID,
    OracleIntegrationError,
    compare_series_ode,
    continuity_check,
    fig1_data,
    integrate_ode,
    laplacian_ndim,
    locate_g_zero,
    _ode_on_grid,
)
from alpha_selfaction.series import FIRST, SECOND, generate_family

ALPHA = 0.0073


class TestIntegrateOde:
    def test_first_family_matches_order1_series_midway(self):
        fam = generate_family(FIRST, 1)
        (_, (f_ode, g_ode)), = _ode_on_grid(ALPHA, FIRST, [0.5])
        g_ser = fam.eval_G(0.5, ALPHA)
        # truncation error is the next correction, of relative size ~alpha^4
        assert abs(g_ode - g_ser) / abs(g_ode) < 10 * ALPHA**4

    def test_second_family_initial_condition(self):
        traj = integrate_ode(ALPHA, SECOND, 0.4)
        s0, f0, g0 = traj.samples[0]
        assert (s0, f0, g0) == (1.0, 1.0, 0.0)

    def test_zero_coupling_trajectory_constant(self):
        traj = integrate_ode(0.0, FIRST, 0.3)
        for _, f, g in traj.samples:
            assert f == 0.0
            assert g == 1.0

    def test_samples_monotone_inward(self):
        traj = integrate_ode(ALPHA, FIRST, 0.25)
        ss = [s for s, _, _ in traj.samples]
        assert all(a > b for a, b in zip(ss, ss[1:]))
        assert all(0 < s <= 1 for s in ss)

    def test_s_stop_validation(self):
        with pytest.raises(ValueError):
            integrate_ode(ALPHA, FIRST, 1.5)


class TestCompareSeriesOde:
    @pytest.fixture(scope="class")
    def errors(self):
        return [compare_series_ode(order, ALPHA) for order in (0, 1, 2)]

    def test_order2_below_threshold(self, errors):
        assert errors[2] < 1e-10

    def test_strictly_decreasing(self, errors):
        assert errors[0] > errors[1] > errors[2]

    def test_order0_scale(self, errors):
        # dominated by the first dropped correction, of order alpha^2
        assert 1e-7 < errors[0] < 1e-3

    def test_zero_coupling_error_vanishes(self):
        assert compare_series_ode(0, 0.0) < 1e-13

    def test_empty_grid_rejected(self):
        with pytest.raises(ValueError):
            compare_series_ode(1, ALPHA, [])

    def test_tolerance_halving_stability(self):
        a = compare_series_ode(2, ALPHA, tol=1e-12)
        b = compare_series_ode(2, ALPHA, tol=5e-13)
        assert abs(a - b) <= 10 * 1e-12 + 0.5 * max(a, b)


class TestWronskian:
    def test_two_by_two_determinant_scales_as_inverse_square(self):
        grid = list(np.linspace(0.1, 1.0, 19))
        first = dict((s, y) for s, y in _ode_on_grid(ALPHA, FIRST, grid))
        second = dict((s, y) for s, y in _ode_on_grid(ALPHA, SECOND, grid))
        det_at_one = -1.0  # [[F, G], [f, g]] at s=1 is [[0, 1], [1, 0]]
        for s in grid:
            F, G = first[s]
            f, g = second[s]
            det = F * g - G * f
            assert abs(det) >= 0.99 * abs(det_at_one)
            assert det * s**2 == pytest.approx(det_at_one, rel=1e-9)


class TestContinuity:
    def test_gaps_vanish_at_matching_radius(self):
        rep = continuity_check(ALPHA, ALPHA**2 / 8)
        assert rep.max_gap < 1e-14
        assert set(rep.gaps) == {"G", "F", "f", "g"}

    def test_exterior_products_identically_zero(self):
        rep = continuity_check(ALPHA, ALPHA**2 / 8)
        assert rep.exterior_product_max == 0.0

    def test_domain(self):
        with pytest.raises(ValueError):
            continuity_check(-1.0, 1e-5)


class TestProfileData:
    @pytest.fixture(scope="class")
    def data(self):
        return fig1_data(ALPHA, ALPHA**2 / 8, 200)

    def test_row_count_and_header(self, data):
        assert len(data.rows) == 200
        assert data.header == ("s", "F", "G", "f", "g", "Gg", "Ff")

    def test_zero_location(self, data):
        assert data.g_zero**2 == pytest.approx(ALPHA**2 / 12, rel=0.05)

    def test_all_functions_vanish_at_origin_edge(self, data):
        first_row = data.rows[0]
        assert all(abs(v) < 1e-20 for v in first_row[1:])

    def test_products_null_beyond_matching_radius(self, data):
        for row in data.rows:
            if row[0] > 1.0:
                assert row[5] == 0.0 and row[6] == 0.0

    def test_single_zero_crossing_of_g(self, data):
        signs = [r[2] > 0 for r in data.rows if r[0] <= 1.0 and r[2] != 0.0]
        crossings = sum(signs[i] != signs[i + 1] for i in range(len(signs) - 1))
        assert crossings == 1

    def test_sample_validation(self):
        with pytest.raises(ValueError):
            fig1_data(ALPHA, 1e-5, 1)


class TestLaplacian:
    @pytest.mark.parametrize("n,expected", [(2, 1.0), (3, 0.0), (4, -1.0), (5, -2.0)])
    def test_coefficient(self, n, expected):
        chk = laplacian_ndim(n)
        assert chk.coefficient == expected
        assert chk.rel_error < 1e-9

    def test_three_dimensions_numerically_flat(self):
        chk = laplacian_ndim(3)
        assert abs(chk.fd_coefficient) < 1e-9

    def test_point_is_unit_radius(self):
        chk = laplacian_ndim(4)
        assert math.fsum(x * x for x in chk.point) == pytest.approx(1.0, rel=1e-12)

    def test_dimension_validation(self):
        with pytest.raises(ValueError):
            laplacian_ndim(1)
