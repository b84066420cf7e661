import math

import numpy as np
import pytest

from alpha_selfaction.eigen import (
    CLOSED_FORM_CONSTANT,
    EQ64_CLOSED,
    FULL_SERIES_MODE,
    EigenConfig,
    NoSignChangeError,
    eigenvalue_lambda,
    eq64_residual,
    eq64_sides,
    lambda_exponent,
    refine_alpha,
    solve_alpha,
)

EULER_MASCHERONI = 0.5772156649015329


class TestLambdaExponent:
    def test_small_alpha_limit(self):
        assert lambda_exponent(1e-12) == pytest.approx(1.0, abs=2e-6)

    def test_reference_value(self):
        assert lambda_exponent(0.0073) == pytest.approx(1.0 / (1.0 + 0.085440), abs=1e-6)
        assert lambda_exponent(0.0073) == pytest.approx(0.921286, abs=1e-6)

    def test_quarter(self):
        assert lambda_exponent(0.25) == pytest.approx(2.0 / 3.0, rel=1e-15)

    def test_domain(self):
        with pytest.raises(ValueError):
            lambda_exponent(1.5)


class TestClosedResidual:
    def test_sides_nearly_balance_near_quoted_root(self):
        lhs, rhs = eq64_residual(0.007292)
        assert abs(lhs - rhs) < 0.02 * max(abs(lhs), abs(rhs))

    def test_bracketing_signs(self):
        r_low = eq64_sides(0.004).residual
        r_high = eq64_sides(0.012).residual
        assert (r_low > 0) != (r_high > 0)

    def test_closed_constant_is_euler_plus_five_sixths(self):
        assert abs(CLOSED_FORM_CONSTANT - (EULER_MASCHERONI + 5.0 / 6.0)) < 2e-6

    def test_omega_identity_at_root(self):
        res = solve_alpha(EigenConfig())
        x = math.sqrt(res.alpha_root - res.beta_implied)
        assert math.cosh(x) ** 2 - math.sinh(x) ** 2 == pytest.approx(1.0, abs=1e-14)

    def test_omega_small_argument_expansions(self):
        for t in (1e-4, 1e-3, 1e-2):
            omega1 = math.cosh(math.sqrt(t)) ** 2
            omega2 = math.sinh(math.sqrt(t)) ** 2
            assert omega1 - 1.0 == pytest.approx(t, rel=2 * t)
            assert omega2 == pytest.approx(t, rel=2 * t)
        # finite-difference slope of omega1 in t at 0 is 1
        h = 1e-6
        slope = (math.cosh(math.sqrt(h)) ** 2 - 1.0) / h
        assert slope == pytest.approx(1.0, abs=1e-5)


class TestSolveAlpha:
    def test_closed_root_near_quoted_value(self):
        res = solve_alpha(EigenConfig(bracket=(0.005, 0.01), tol=1e-10))
        assert abs(res.alpha_root - 0.007292) < 1e-5
        assert res.relative_residual <= 1e-10

    def test_wide_bracket_same_root(self):
        narrow = solve_alpha(EigenConfig(bracket=(0.005, 0.01)))
        wide = solve_alpha(EigenConfig(bracket=(0.001, 0.05)))
        assert wide.alpha_root == pytest.approx(narrow.alpha_root, abs=1e-12)

    def test_unique_sign_change_on_wide_scan(self):
        xs = np.arange(0.001, 0.05, 1e-4)
        vals = [eq64_sides(float(x)).residual for x in xs]
        changes = sum((vals[i] > 0) != (vals[i + 1] > 0) for i in range(len(vals) - 1))
        assert changes == 1

    def test_no_sign_change_raises(self):
        with pytest.raises(NoSignChangeError):
            solve_alpha(EigenConfig(bracket=(0.02, 0.04)))

    def test_full_series_order2_in_interval(self):
        res = solve_alpha(EigenConfig(mode=FULL_SERIES_MODE, series_order=2))
        assert 0.00729 <= res.alpha_root <= 0.00731

    def test_magnitude_ordering_of_integrals(self):
        res = solve_alpha(EigenConfig(mode=FULL_SERIES_MODE, series_order=2))
        sides = eq64_sides(res.alpha_root, FULL_SERIES_MODE, 2)
        i56, i57, i59 = sides.integrals
        assert i57 > i56 > 0

    def test_residual_decomposition_consistent(self):
        res = solve_alpha(EigenConfig())
        assert res.lhs == pytest.approx(res.omega1_term - res.omega2_term, rel=1e-15)
        assert res.rhs == pytest.approx(res.lambda_term, rel=1e-15)

    def test_bad_config_rejected(self):
        with pytest.raises(ValueError):
            EigenConfig(bracket=(0.01, 0.005))
        with pytest.raises(ValueError):
            EigenConfig(mode="closed_form")


class TestRefinement:
    @pytest.fixture(scope="class")
    def table(self):
        return refine_alpha(2)

    def test_baseline_is_closed_root(self, table):
        closed = solve_alpha(EigenConfig())
        assert table.rows[0].alpha_root == closed.alpha_root
        assert table.rows[0].mode == EQ64_CLOSED

    def test_order_one_close_to_closed_root(self, table):
        assert abs(table.rows[1].alpha_root - table.rows[0].alpha_root) < 1e-4

    def test_changes_contract_strongly(self, table):
        d1, d2 = table.changes
        assert d2 <= d1 / 100.0

    def test_final_value_and_uncertainty(self, table):
        assert 0.00729 <= table.final_alpha <= 0.00731
        assert table.uncertainty == table.changes[-1]

    def test_order_validation(self):
        with pytest.raises(ValueError):
            refine_alpha(0)


class TestEigenvalueLambda:
    def test_positive_below_one(self):
        val = eigenvalue_lambda(0.0073, 0.0073**2 / 8)
        assert 0.0 < val < 1.0

    def test_matches_power_form(self):
        a, b = 0.0073, 0.0073**2 / 8
        assert eigenvalue_lambda(a, b) == (a - b) ** (1.0 / (1.0 + math.sqrt(a)))
