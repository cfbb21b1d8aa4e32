"""Tests for the log-MGF / rate-function layer.

Oracles used here, in decreasing order of strength:

- closed forms (uniform(0,1) log-MGF at theta=1, fair-coin entropy rate);
- Legendre duality identities that must hold to solver precision;
- central finite differences for every derivative;
- a coarse brute-force sup over a tilt grid, which lower-bounds the rate
  function and approaches it as the grid refines.
"""

import math

import numpy as np
import pytest

from wergm import cramer
from wergm.cramer import (
    BERNOULLI_HALF,
    SERIES_RADIUS,
    THETA_MAX,
    UNIFORM01,
    dual_theta,
    endpoint_rate,
    finite_support,
    log_mgf,
    log_mgf_d1,
    log_mgf_d2,
    rate,
    rate_d1,
    rate_d2,
    support_interval,
)
from wergm.errors import (
    InputValidationError,
    SupportError,
    ThetaCapError,
    WergmError,
)

THREE_ATOMS = finite_support([(0.2, 0.25), (0.5, 0.5), (0.9, 0.25)])


def coin_rate_closed_form(u: float) -> float:
    """log 2 minus the Shannon entropy of a u-coin."""
    return math.log(2.0) + u * math.log(u) + (1.0 - u) * math.log(1.0 - u)


def brute_force_rate(dist, u: float, theta_grid) -> float:
    """sup over a finite tilt grid of theta*u - log M(theta)."""
    return max(theta * u - log_mgf(dist, theta) for theta in theta_grid)


class TestLogMgf:
    def test_zero_tilt_is_zero(self):
        for dist in (UNIFORM01, BERNOULLI_HALF, THREE_ATOMS):
            assert log_mgf(dist, 0.0) == 0.0

    def test_uniform_closed_form_at_one(self):
        np.testing.assert_allclose(
            log_mgf(UNIFORM01, 1.0), math.log(math.e - 1.0), rtol=1e-14
        )
        np.testing.assert_allclose(
            log_mgf(UNIFORM01, -1.0), math.log(1.0 - math.exp(-1.0)), rtol=1e-14
        )

    def test_uniform_reflection_identity(self):
        # M(-t) = exp(-t) M(t) for the uniform law on (0, 1).
        for theta in (0.3, 0.7, 2.0, 15.0, 300.0):
            np.testing.assert_allclose(
                log_mgf(UNIFORM01, -theta),
                log_mgf(UNIFORM01, theta) - theta,
                rtol=1e-13,
                atol=1e-13,
            )

    def test_coin_closed_form(self):
        for theta in (-3.0, -0.2, 0.0, 0.4, 5.0):
            expected = math.log((1.0 + math.exp(theta)) / 2.0)
            np.testing.assert_allclose(
                log_mgf(BERNOULLI_HALF, theta), expected, rtol=1e-14, atol=1e-14
            )

    def test_finite_support_direct_sum(self):
        rng = np.random.default_rng(20260816)
        values = np.array([v for v, _ in THREE_ATOMS.atoms])
        probs = np.array([q for _, q in THREE_ATOMS.atoms])
        for theta in rng.uniform(-30.0, 30.0, size=12):
            expected = math.log(float(np.sum(probs * np.exp(theta * values))))
            np.testing.assert_allclose(
                log_mgf(THREE_ATOMS, theta), expected, rtol=1e-12, atol=1e-12
            )

    def test_series_and_direct_branches_agree_at_switch(self):
        # The small-tilt series and the exact expressions must agree to
        # 1e-12 at the radius where evaluation switches between them.
        for theta in (SERIES_RADIUS, -SERIES_RADIUS):
            s = theta * theta
            series_logm = 0.5 * theta + s * cramer._horner_even(
                cramer._LOGM_SERIES, s
            )
            series_mean = 0.5 + theta * cramer._horner_even(cramer._B_SERIES, s)
            series_var = cramer._horner_even(cramer._A_SERIES, s)
            np.testing.assert_allclose(
                series_logm, log_mgf(UNIFORM01, theta), rtol=1e-12, atol=1e-12
            )
            np.testing.assert_allclose(
                series_mean, log_mgf_d1(UNIFORM01, theta), rtol=1e-12, atol=1e-12
            )
            np.testing.assert_allclose(
                series_var, log_mgf_d2(UNIFORM01, theta), rtol=1e-12, atol=1e-12
            )

    def test_derivatives_match_finite_differences(self):
        h = 1e-5
        for dist in (UNIFORM01, BERNOULLI_HALF, THREE_ATOMS):
            for theta in (-8.0, -1.1, -0.2, 0.05, 0.9, 4.0):
                fd1 = (log_mgf(dist, theta + h) - log_mgf(dist, theta - h)) / (
                    2.0 * h
                )
                fd2 = (
                    log_mgf_d1(dist, theta + h) - log_mgf_d1(dist, theta - h)
                ) / (2.0 * h)
                np.testing.assert_allclose(
                    log_mgf_d1(dist, theta), fd1, rtol=1e-8, atol=1e-8
                )
                np.testing.assert_allclose(
                    log_mgf_d2(dist, theta), fd2, rtol=1e-6, atol=1e-8
                )

    def test_mean_saturates_without_overflow(self):
        assert 0.0 < log_mgf_d1(UNIFORM01, -699.0) < 1e-2
        assert 1.0 - 1e-2 < log_mgf_d1(UNIFORM01, 699.0) < 1.0
        assert log_mgf_d2(UNIFORM01, 699.0) > 0.0

    def test_tilt_cap_enforced(self):
        with pytest.raises(ThetaCapError):
            log_mgf(UNIFORM01, THETA_MAX + 1.0)
        with pytest.raises(ThetaCapError):
            log_mgf_d1(UNIFORM01, -THETA_MAX - 1.0)


class TestDualTheta:
    def test_round_trip_across_support(self):
        for dist in (UNIFORM01, BERNOULLI_HALF):
            for u in np.linspace(0.01, 0.99, 49):
                pair = dual_theta(dist, float(u))
                assert abs(pair.u - u) <= 1e-10
                assert abs(log_mgf_d1(dist, pair.theta) - u) <= 1e-10

    def test_round_trip_finite_support(self):
        lo, hi = support_interval(THREE_ATOMS)
        for u in np.linspace(lo + 0.02, hi - 0.02, 23):
            pair = dual_theta(THREE_ATOMS, float(u))
            assert abs(log_mgf_d1(THREE_ATOMS, pair.theta) - u) <= 1e-10

    def test_zero_tilt_at_prior_mean(self):
        np.testing.assert_allclose(dual_theta(UNIFORM01, 0.5).theta, 0.0, atol=1e-12)
        np.testing.assert_allclose(
            dual_theta(BERNOULLI_HALF, 0.5).theta, 0.0, atol=1e-12
        )

    def test_table_tilts_recovered(self):
        # Tilt/mean pairs tabulated to four decimals for the uniform law.
        np.testing.assert_allclose(
            dual_theta(UNIFORM01, 0.6073).theta, 1.3251, atol=5e-4
        )
        np.testing.assert_allclose(
            dual_theta(UNIFORM01, 0.8259).theta, 5.6256, atol=5e-3
        )

    def test_unreachable_mean_raises_cap_error(self):
        # The uniform mean 1e-6 needs a tilt of about -1e6, beyond the cap.
        with pytest.raises(ThetaCapError):
            dual_theta(UNIFORM01, 1e-6)

    def test_outside_support_raises(self):
        for bad in (-0.5, 0.0, 1.0, 1.5):
            with pytest.raises(SupportError):
                dual_theta(UNIFORM01, bad)


class TestRate:
    def test_zero_at_prior_mean(self):
        assert rate(UNIFORM01, 0.5) <= 1e-15
        assert abs(rate_d1(UNIFORM01, 0.5)) <= 1e-12
        assert rate(BERNOULLI_HALF, 0.5) <= 1e-15

    def test_uniform_symmetry(self):
        for u in np.linspace(0.02, 0.98, 25):
            assert abs(rate(UNIFORM01, float(u)) - rate(UNIFORM01, float(1 - u))) <= 1e-10

    def test_coin_entropy_closed_form(self):
        for u in np.linspace(0.05, 0.95, 19):
            np.testing.assert_allclose(
                rate(BERNOULLI_HALF, float(u)),
                coin_rate_closed_form(float(u)),
                rtol=1e-12,
                atol=1e-12,
            )

    def test_matches_brute_force_sup(self):
        theta_grid = np.linspace(-60.0, 60.0, 240001)
        for dist in (UNIFORM01, BERNOULLI_HALF, THREE_ATOMS):
            lo, hi = support_interval(dist)
            for u in np.linspace(lo + 0.1, hi - 0.1, 7):
                exact = rate(dist, float(u))
                coarse = brute_force_rate(dist, float(u), theta_grid)
                assert coarse <= exact + 1e-12
                np.testing.assert_allclose(exact, coarse, atol=5e-6)

    def test_legendre_identity(self):
        for u in (0.1, 0.37, 0.5, 0.81, 0.97):
            pair = dual_theta(UNIFORM01, u)
            expected = pair.theta * u - log_mgf(UNIFORM01, pair.theta)
            np.testing.assert_allclose(rate(UNIFORM01, u), expected, atol=1e-12)
            np.testing.assert_allclose(rate_d1(UNIFORM01, u), pair.theta, atol=1e-9)
            np.testing.assert_allclose(
                rate_d2(UNIFORM01, u),
                1.0 / log_mgf_d2(UNIFORM01, pair.theta),
                rtol=1e-10,
            )

    def test_derivatives_match_finite_differences(self):
        h = 1e-6
        for u in (0.15, 0.4, 0.73, 0.9):
            fd1 = (rate(UNIFORM01, u + h) - rate(UNIFORM01, u - h)) / (2.0 * h)
            fd2 = (rate_d1(UNIFORM01, u + h) - rate_d1(UNIFORM01, u - h)) / (2.0 * h)
            np.testing.assert_allclose(rate_d1(UNIFORM01, u), fd1, rtol=1e-6, atol=1e-6)
            np.testing.assert_allclose(rate_d2(UNIFORM01, u), fd2, rtol=1e-5)

    def test_convexity_on_grid(self):
        grid = np.linspace(0.02, 0.98, 97)
        values = [rate(UNIFORM01, float(u)) for u in grid]
        second = np.diff(values, 2)
        assert np.all(second > 0.0)

    def test_endpoint_rates(self):
        assert endpoint_rate(UNIFORM01) == (math.inf, math.inf)
        np.testing.assert_allclose(
            endpoint_rate(BERNOULLI_HALF), (math.log(2.0), math.log(2.0)), rtol=1e-15
        )
        lo_rate, hi_rate = endpoint_rate(THREE_ATOMS)
        np.testing.assert_allclose(lo_rate, -math.log(0.25), rtol=1e-15)
        np.testing.assert_allclose(hi_rate, -math.log(0.25), rtol=1e-15)


class TestFiniteSupportValidation:
    def test_single_atom_rejected(self):
        with pytest.raises(InputValidationError):
            finite_support([(0.5, 1.0)])

    def test_nonpositive_probability_rejected(self):
        with pytest.raises(InputValidationError):
            finite_support([(0.2, 0.0), (0.8, 1.0)])

    def test_probabilities_must_sum_to_one(self):
        with pytest.raises(InputValidationError):
            finite_support([(0.2, 0.6), (0.8, 0.6)])

    def test_duplicate_values_rejected(self):
        with pytest.raises(InputValidationError):
            finite_support([(0.5, 0.5), (0.5, 0.5)])

    def test_error_records_name_module_and_parameter(self):
        with pytest.raises(WergmError) as excinfo:
            dual_theta(UNIFORM01, 2.0)
        record = excinfo.value.record()
        assert record["module"] == "cramer"
        assert record["offending_parameter"] == "u"
        assert record["message"]
