"""Tests for the critical-corner locator.

The strongest oracle is exactness at p = 2: the curvature profile is even
in the tilt, so theta0 = 0, u0 = 1/2, and the corner is (-3, 3) in closed
form.  For general p the dual identities m(B(theta)) * n(theta) = 1 and
f(B(theta)) = g(theta) must hold pointwise, the two independent
optimizations must land on the same spot, and the four-decimal reference
values are checked at 5e-4.
"""

import numpy as np
import pytest

from wergm.critical import (
    critical_table,
    f_of_u,
    find_theta0,
    g_of_theta,
    m_of_u,
    n_of_theta,
)
from wergm.cramer import UNIFORM01, log_mgf_d1
from wergm.errors import InputValidationError

# Four-decimal reference values: p -> (theta0, n(theta0), u0, m(u0), g(theta0)).
REFERENCE = {
    2: (0.0, 0.3333, 0.5, 3.0, 3.0),
    3: (1.3251, 0.5575, 0.6073, 1.7937, 1.3222),
    5: (2.9869, 0.8324, 0.7183, 1.2014, 0.1059),
    10: (5.6256, 1.0894, 0.8259, 0.9180, -1.1723),
}


class TestDualIdentities:
    @pytest.mark.parametrize("p", [2, 3, 5, 10])
    def test_m_n_product_is_one(self, p):
        for theta in np.linspace(-8.0, 8.0, 33):
            u = log_mgf_d1(UNIFORM01, float(theta))
            assert abs(m_of_u(p, u) * n_of_theta(p, float(theta)) - 1.0) <= 1e-10

    @pytest.mark.parametrize("p", [2, 3, 5, 10])
    def test_f_equals_g_along_dual_pairs(self, p):
        for theta in np.linspace(-8.0, 8.0, 33):
            u = log_mgf_d1(UNIFORM01, float(theta))
            assert abs(f_of_u(p, u) - g_of_theta(p, float(theta))) <= 1e-10

    def test_zero_tilt_closed_forms(self):
        # n(0) = p(p-1)/3 * (1/2)^(p-1) and g(0) = 3/(p-1).
        for p in (2, 3, 5, 10):
            np.testing.assert_allclose(
                n_of_theta(p, 0.0), p * (p - 1) / 3.0 * 0.5 ** (p - 1), rtol=1e-13
            )
            np.testing.assert_allclose(g_of_theta(p, 0.0), 3.0 / (p - 1), rtol=1e-13)

    def test_curvature_profile_vanishes_at_large_tilt(self):
        # n(p, theta) ~ 2p(p-1)/theta^2 * B^(p-2) for large tilts.
        for p in (2, 3):
            assert n_of_theta(p, 300.0) < 1e-3
            assert n_of_theta(p, -300.0) < 1e-3

    def test_tradeoff_function_grows_at_large_tilt(self):
        for p in (2, 3, 5, 10):
            floor = g_of_theta(p, find_theta0(p).theta0)
            assert g_of_theta(p, 30.0) > floor + 10.0
            assert g_of_theta(p, -30.0) > floor + 10.0


class TestFindTheta0:
    def test_p2_corner_is_exact(self):
        data = find_theta0(2)
        assert abs(data.theta0) <= 1e-8
        np.testing.assert_allclose(data.u0, 0.5, atol=1e-9)
        np.testing.assert_allclose(data.n_theta0, 1.0 / 3.0, atol=1e-9)
        np.testing.assert_allclose(data.m_u0, 3.0, atol=1e-9)
        np.testing.assert_allclose(data.beta1_c, -3.0, atol=1e-9)
        np.testing.assert_allclose(data.beta2_c, 3.0, atol=1e-9)

    @pytest.mark.parametrize("p", [2, 3, 5, 10])
    def test_matches_reference_values(self, p):
        theta0, n0, u0, m0, g0 = REFERENCE[p]
        data = find_theta0(p)
        np.testing.assert_allclose(data.theta0, theta0, atol=5e-4)
        np.testing.assert_allclose(data.n_theta0, n0, atol=5e-4)
        np.testing.assert_allclose(data.u0, u0, atol=5e-4)
        np.testing.assert_allclose(data.m_u0, m0, atol=5e-4)
        np.testing.assert_allclose(data.g_theta0, g0, atol=5e-4)
        np.testing.assert_allclose(data.f_u0, g0, atol=5e-4)

    @pytest.mark.parametrize("p", [2, 3, 5, 10])
    def test_corner_consistency(self, p):
        data = find_theta0(p)
        np.testing.assert_allclose(data.u0, log_mgf_d1(UNIFORM01, data.theta0),
                                   atol=1e-10)
        assert abs(data.m_u0 * data.n_theta0 - 1.0) <= 1e-9
        assert abs(data.f_u0 - data.g_theta0) <= 1e-9
        assert data.beta1_c == -data.f_u0
        assert data.beta2_c == data.m_u0

    @pytest.mark.parametrize("p", [2, 3, 5, 10])
    def test_theta0_is_the_grid_optimum(self, p):
        data = find_theta0(p)
        grid = np.linspace(0.0, 20.0, 4001)
        n_values = [n_of_theta(p, float(t)) for t in grid]
        g_values = [g_of_theta(p, float(t)) for t in grid]
        assert abs(grid[int(np.argmax(n_values))] - data.theta0) <= 6e-3
        assert abs(grid[int(np.argmin(g_values))] - data.theta0) <= 6e-3

    def test_u0_increases_with_p(self):
        u0s = [find_theta0(p).u0 for p in (2, 3, 4, 5, 7, 10)]
        assert u0s[0] == 0.5
        assert np.all(np.diff(u0s) > 0.0)

    def test_rejects_bad_p(self):
        with pytest.raises(InputValidationError):
            find_theta0(1)

    def test_table_order_preserved(self):
        rows = critical_table([5, 2, 10])
        assert [row.p for row in rows] == [5, 2, 10]
