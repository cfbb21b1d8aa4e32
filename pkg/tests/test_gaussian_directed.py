"""Tests for the closed-form directed Gaussian model.

The normalization constant is known exactly here, which makes this module
its own oracle: the Monte Carlo estimator must agree with the closed form
at a well-behaved point, the finite-n correction is an explicit log term,
and every smoothness claim can be checked by finite differences.
"""

import math

import numpy as np
import pytest

from wergm.errors import DivergenceError, InputValidationError
from wergm.gaussian_directed import (
    BETA2_MAX,
    GaussianModelParams,
    directed_stats,
    psi_inf,
    psi_n_exact,
    psi_n_monte_carlo,
)


class TestDirectedStats:
    def test_hand_worked_two_by_two(self):
        e, s = directed_stats([[1.0, 2.0], [3.0, 4.0]])
        assert e == 2.5
        assert s == (3.0**2 + 7.0**2) / 8.0  # row sums 3 and 7

    def test_zero_matrix(self):
        assert directed_stats(np.zeros((4, 4))) == (0.0, 0.0)

    def test_constant_matrix(self):
        for n, c in ((3, 0.5), (6, -1.25)):
            e, s = directed_stats(np.full((n, n), c))
            np.testing.assert_allclose(e, c, rtol=1e-14)
            np.testing.assert_allclose(s, c * c, rtol=1e-14)

    def test_scaling_linearity(self):
        rng = np.random.default_rng(15)
        w = rng.standard_normal((5, 5))
        e, s = directed_stats(w)
        e3, s3 = directed_stats(3.0 * w)
        np.testing.assert_allclose(e3, 3.0 * e, rtol=1e-13)
        np.testing.assert_allclose(s3, 9.0 * s, rtol=1e-13)

    def test_asymmetric_allowed_but_nonsquare_rejected(self):
        directed_stats([[0.0, 1.0], [2.0, 0.0]])  # fine: directed model
        with pytest.raises(InputValidationError):
            directed_stats(np.zeros((2, 3)))


class TestClosedForm:
    def test_free_point_is_half(self):
        params = GaussianModelParams(1.0, 0.0)
        assert psi_inf(params) == 0.5
        assert psi_n_exact(params, 10) == 0.5

    def test_finite_n_correction_is_explicit_log(self):
        # The gap is -log(1-2*beta2)/(2n): positive for beta2 > 0 and
        # negative for beta2 < 0, with magnitude |log(1-2*beta2)|/(2n).
        for beta1, beta2, n in ((0.0, 0.25, 3), (0.0, -1.0, 7), (0.0, 0.4, 50)):
            params = GaussianModelParams(beta1, beta2)
            gap = psi_n_exact(params, n) - psi_inf(params)
            assert abs(gap) == abs(math.log(1.0 - 2.0 * beta2)) / (2.0 * n)
            assert (gap > 0.0) == (beta2 > 0.0)

    def test_finite_n_correction_with_edge_term(self):
        params = GaussianModelParams(2.0, 0.3)
        gap = psi_n_exact(params, 7) - psi_inf(params)
        np.testing.assert_allclose(
            gap, abs(math.log(0.4)) / 14.0, rtol=1e-13
        )

    def test_even_in_beta1(self):
        for beta1, beta2 in ((1.5, 0.2), (0.7, -3.0)):
            assert psi_inf(GaussianModelParams(beta1, beta2)) == psi_inf(
                GaussianModelParams(-beta1, beta2)
            )

    def test_increasing_in_beta2(self):
        values = [
            psi_inf(GaussianModelParams(1.0, b2)) for b2 in np.linspace(-1, 0.45, 30)
        ]
        assert np.all(np.diff(values) > 0.0)

    def test_second_derivative_bounded_below_cap(self):
        # 4*beta1^2/(1-2*beta2)^3 stays finite up to beta2 = 0.45.
        h = 1e-5
        for beta2 in (0.0, 0.2, 0.45):
            fd2 = (
                psi_inf(GaussianModelParams(1.0, beta2 + h))
                - 2.0 * psi_inf(GaussianModelParams(1.0, beta2))
                + psi_inf(GaussianModelParams(1.0, beta2 - h))
            ) / h**2
            analytic = 4.0 / (1.0 - 2.0 * beta2) ** 3
            np.testing.assert_allclose(fd2, analytic, rtol=1e-3)
            assert math.isfinite(fd2)

    def test_divergence_refused(self):
        with pytest.raises(DivergenceError):
            GaussianModelParams(1.0, 0.5)
        with pytest.raises(DivergenceError):
            GaussianModelParams(0.0, 1.0)
        GaussianModelParams(0.0, BETA2_MAX)  # boundary itself is accepted

    def test_non_finite_rejected(self):
        with pytest.raises(InputValidationError):
            GaussianModelParams(math.nan, 0.0)


class TestMonteCarlo:
    def test_matches_closed_form_at_tame_point(self):
        params = GaussianModelParams(1.0, 0.0)
        estimate, std_error = psi_n_monte_carlo(params, 10, 100_000, seed=12345)
        assert abs(estimate - psi_n_exact(params, 10)) <= 2.0 * std_error

    def test_zero_parameters_exact(self):
        estimate, std_error = psi_n_monte_carlo(
            GaussianModelParams(0.0, 0.0), 5, 1000, seed=0
        )
        assert estimate == 0.0
        assert std_error == 0.0

    def test_reproducible(self):
        params = GaussianModelParams(0.5, 0.1)
        a = psi_n_monte_carlo(params, 8, 5000, seed=77)
        b = psi_n_monte_carlo(params, 8, 5000, seed=77)
        assert a == b

    def test_sample_floor_enforced(self):
        with pytest.raises(InputValidationError):
            psi_n_monte_carlo(GaussianModelParams(0.0, 0.0), 5, 99, seed=1)

    def test_positive_n_required(self):
        with pytest.raises(InputValidationError):
            psi_n_exact(GaussianModelParams(0.0, 0.0), 0)
