"""The incentive family: response function, optimal scaling, oracles."""

import math

import numpy as np
import pytest

from modpot.dogleg import (
    DoglegParams,
    brute_force_sigma,
    incentive_value,
    rho,
    rho_inverse,
    sigma,
    sigma_log_limit,
)
from modpot.errors import DomainError

from helpers import bisect_root

HALF = DoglegParams(0.5, 2.0)
QUAD = DoglegParams(1.0, 2.0)


class TestParams:
    def test_validation(self):
        with pytest.raises(DomainError):
            DoglegParams(0.0, 2.0)
        with pytest.raises(DomainError):
            DoglegParams(1.2, 2.0)
        with pytest.raises(DomainError):
            DoglegParams(0.5, 0.9)
        with pytest.raises(DomainError):
            DoglegParams(1.0, 1.0)  # excluded corner

    def test_conjugate_exponent(self):
        assert DoglegParams(0.5, 2.0).q == 2.0
        assert abs(DoglegParams(0.25, 4.0).q - 4.0 / 3.0) <= 1e-15
        with pytest.raises(DomainError):
            _ = DoglegParams(0.5, 1.0).q


class TestIncentiveValue:
    def test_boundary_zero_is_exact(self):
        assert incentive_value(HALF, 1.0, 1.0) == 0.0
        for params in (HALF, QUAD, DoglegParams(0.25, 3.0)):
            assert incentive_value(params, 2.7, 1.0) == 0.0

    def test_rest_value(self):
        assert incentive_value(HALF, 1.0, 0.0) == 1.0

    def test_direct_substitution(self):
        # (mu/(p alpha)) (1 - q_u^{p/2})^alpha = (2/2) (1 - 1/4) = 0.75
        assert abs(incentive_value(QUAD, 2.0, 0.25) - 0.75) <= 1e-15

    def test_domain(self):
        with pytest.raises(DomainError):
            incentive_value(HALF, 1.0, 1.5)
        with pytest.raises(DomainError):
            incentive_value(HALF, 0.0, 0.5)


class TestRho:
    def test_known_values(self):
        assert abs(rho(HALF, 1.0 / math.sqrt(2.0)) - 1.0) <= 1e-14
        assert rho(HALF, 0.0) == 0.0
        expected = 0.5 * 0.75**-0.25
        assert abs(rho(DoglegParams(0.75, 2.0), 0.5) - expected) <= 1e-15

    def test_strictly_increasing(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            params = DoglegParams(1.0 - rng.uniform(0, 0.99), 1.0 + 4.0 * rng.uniform())
            values = [rho(params, s) for s in np.linspace(0.01, 0.99, 60)]
            assert all(a < b for a, b in zip(values, values[1:]))

    def test_domain(self):
        with pytest.raises(DomainError):
            rho(HALF, 1.0)
        assert rho(QUAD, 1.0) == 1.0  # alpha = 1 extends to s = 1


class TestRhoInverse:
    def test_known_values(self):
        assert abs(rho_inverse(HALF, 1.0) - 1.0 / math.sqrt(2.0)) <= 1e-12
        assert rho_inverse(HALF, 0.0) == 0.0

    def test_against_bisection_oracle(self):
        params = DoglegParams(0.25, 3.0)
        oracle = bisect_root(lambda s: rho(params, s) - 2.0, 0.0, 1.0 - 1e-12)
        assert abs(rho_inverse(params, 2.0) - oracle) <= 1e-10

    def test_monotone_round_trip(self):
        """rho_inverse(rho(s)) = s to 1e-10 across the family."""
        worst = 0.0
        for alpha in (0.1, 0.25, 0.5, 0.75, 0.9, 0.99):
            for p in (1.0, 1.5, 2.0, 3.0, 5.0):
                params = DoglegParams(alpha, p)
                for k in range(1, 100):
                    s = 0.01 * k
                    worst = max(worst, abs(rho_inverse(params, rho(params, s)) - s))
        assert worst <= 1e-10

    def test_p_equal_one_range_edge(self):
        params = DoglegParams(0.3, 1.0)
        assert rho_inverse(params, 1.0) == 0.0
        with pytest.raises(DomainError):
            rho_inverse(params, 0.5)

    def test_requires_alpha_below_one(self):
        with pytest.raises(DomainError):
            rho_inverse(QUAD, 0.5)


class TestSigma:
    def test_saturating_family(self):
        assert sigma(QUAD, 0.5) == 0.5
        assert sigma(QUAD, 3.0) == 1.0
        assert sigma(DoglegParams(1.0, 3.0), 0.25) == 0.5

    def test_reciprocal_pair_closed_form(self):
        assert abs(sigma(HALF, 1.0) - 1.0 / math.sqrt(2.0)) <= 1e-14

    def test_range(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            params = DoglegParams(1.0 - rng.uniform(0, 1), 1.0 + 4.0 * rng.uniform())
            value = sigma(params, 10.0 * rng.uniform())
            assert 0.0 <= value <= 1.0

    def test_strictly_interior_below_one(self):
        """For alpha < 1 the optimum never reaches the boundary."""
        for alpha in (0.25, 0.5, 0.75, 0.9):
            for p in (1.0, 2.0, 5.0):
                for ell in (0.1, 1.0, 10.0):
                    assert sigma(DoglegParams(alpha, p), ell) < 1.0

    def test_p_equal_one_endpoint_convention(self):
        """Below the response range the endpoint s = 0 is optimal."""
        params = DoglegParams(0.3, 1.0)
        assert sigma(params, 0.5) == 0.0
        assert sigma(params, 1.0) == 0.0
        assert sigma(params, 2.0) > 0.0
        assert abs(sigma(params, 2.0) - brute_force_sigma(params, 2.0, 20001)) <= 1e-4


class TestSigmaLogLimit:
    def test_quadratic_closed_form(self):
        assert abs(sigma_log_limit(2.0, 1.0) - (math.sqrt(5.0) - 1.0) / 2.0) <= 1e-14
        assert sigma_log_limit(2.0, 0.0) == 0.0

    def test_against_bisection_oracle(self):
        oracle = bisect_root(lambda s: s * s / (1.0 - s**3) - 2.0, 0.0, 1.0 - 1e-12)
        assert abs(sigma_log_limit(3.0, 2.0) - oracle) <= 1e-10

    def test_homotopy_is_monotone(self):
        """The family scalings approach the log-penalty scaling from above."""
        for p in (2.0,):
            for ell in (0.1, 1.0, 10.0):
                target = sigma_log_limit(p, ell)
                gaps = [
                    abs(sigma(DoglegParams(alpha, p), ell) - target)
                    for alpha in (0.5, 0.1, 0.01, 0.001)
                ]
                assert all(a > b for a, b in zip(gaps, gaps[1:]))
                assert gaps[-1] < 1e-2


class TestBruteForceOracle:
    def test_grid_argmax_values(self):
        assert abs(brute_force_sigma(QUAD, 0.5, 2001) - 0.5) <= 1.0 / 2000.0
        assert brute_force_sigma(HALF, 0.0, 101) == 0.0
        assert abs(brute_force_sigma(HALF, 1.0, 20001) - 0.7071) <= 1e-4

    def test_grid_size_validation(self):
        with pytest.raises(DomainError):
            brute_force_sigma(HALF, 1.0, 100)

    def test_oracle_agreement(self):
        """Closed-form scaling matches the grid argmax within 2 spacings."""
        rng = np.random.default_rng(42)
        grid_n = 20001
        tol = 2.0 / (grid_n - 1)
        for _ in range(200):
            alpha = 1.0 - rng.uniform(0.0, 1.0)
            p = 1.0 + 4.0 * rng.uniform()
            ell = 10.0 * rng.uniform()
            if alpha == 1.0 and p == 1.0:
                continue
            params = DoglegParams(alpha, p)
            assert abs(sigma(params, ell) - brute_force_sigma(params, ell, grid_n)) <= tol
