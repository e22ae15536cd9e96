"""Numerical kernels: root finding, singular quadrature, elliptic integrals."""

import math

import numpy as np
import pytest
import scipy.special as sp

from modpot.errors import ConvergenceError, DomainError
from modpot.numerics import (
    RootProblem,
    SingularEnd,
    carlson_rd,
    carlson_rf,
    elliptic_e,
    elliptic_f,
    find_root,
    integrate_singular,
)


class TestFindRoot:
    def test_sqrt_two(self):
        root = find_root(RootProblem(lambda x: x * x - 2.0, (1.0, 2.0)))
        assert abs(root - math.sqrt(2.0)) <= 1e-12

    def test_newton_path(self):
        root = find_root(
            RootProblem(lambda x: x * x - 2.0, (1.0, 2.0), fprime=lambda x: 2.0 * x)
        )
        assert abs(root - math.sqrt(2.0)) <= 1e-12

    def test_response_function_inversion(self):
        """rho_{1/2,2}(s) - 1 has its root at 1/sqrt(2)."""
        root = find_root(
            RootProblem(lambda s: s / math.sqrt(1.0 - s * s) - 1.0, (0.0, 0.999))
        )
        assert abs(root - 1.0 / math.sqrt(2.0)) <= 1e-12

    def test_decreasing_objective(self):
        """tau_{1/4,2}(w) = w**(-3/4) (1 + w) crosses 2.52269... at w = 0.5."""
        target = 0.5**-0.75 * 1.5

        def objective(w):
            return w**-0.75 * (1.0 + w) - target

        root = find_root(RootProblem(objective, (0.05, 0.999)))
        assert abs(root - 0.5) <= 1e-6

    def test_no_sign_change(self):
        with pytest.raises(DomainError, match="sign change"):
            find_root(RootProblem(lambda x: x * x + 1.0, (0.0, 1.0)))

    def test_result_stays_in_bracket(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            shift = rng.uniform(-0.9, 0.9)
            root = find_root(RootProblem(lambda x, s=shift: math.tanh(x - s), (-1.0, 1.0)))
            assert -1.0 <= root <= 1.0
            assert abs(root - shift) <= 1e-10

    def test_iteration_budget(self):
        with pytest.raises(ConvergenceError):
            find_root(RootProblem(lambda x: x, (-1.0, 2.0), rel_tol=1e-30, max_iter=3))


class TestIntegrateSingular:
    def test_upper_inverse_sqrt(self):
        value, err = integrate_singular(
            lambda x: 1.0 / math.sqrt(1.0 - x), 0.0, 1.0, SingularEnd.UPPER, abs_tol=1e-12
        )
        assert abs(value - 2.0) <= 1e-12

    def test_lower_inverse_sqrt(self):
        value, err = integrate_singular(
            lambda x: x**-0.5, 0.0, 1.0, SingularEnd.LOWER, abs_tol=1e-12
        )
        assert abs(value - 2.0) <= 1e-12
        assert err >= abs(value - 2.0)

    @pytest.mark.parametrize(
        "f,a,b,exact",
        [
            (math.sin, 0.0, math.pi, 2.0),
            (lambda x: x**20, 0.0, 1.0, 1.0 / 21.0),
            (lambda x: math.exp(-x * x), -2.0, 2.0, math.sqrt(math.pi) * math.erf(2.0)),
        ],
    )
    def test_smooth_pairs_error_estimate_bounds_truth(self, f, a, b, exact):
        value, err = integrate_singular(f, a, b, SingularEnd.NONE, abs_tol=1e-12)
        assert abs(value - exact) <= 1e-12
        assert err >= abs(value - exact)

    def test_singular_pair_error_estimate(self):
        """sqrt singularity handled by substitution: estimate bounds truth."""
        value, err = integrate_singular(
            lambda x: math.cos(x) / math.sqrt(x), 0.0, 1.0, SingularEnd.LOWER,
            abs_tol=1e-12,
        )
        # 2 * sum (-1)^n / ((4n+1) (2n)!) from the cosine series.
        exact = 2.0 * sum(
            (-1.0) ** n / ((4 * n + 1) * math.factorial(2 * n)) for n in range(12)
        )
        assert abs(value - exact) <= 1e-12
        assert err >= abs(value - exact)

    def test_empty_and_reversed_intervals(self):
        assert integrate_singular(math.sin, 1.0, 1.0) == (0.0, 0.0)
        with pytest.raises(DomainError):
            integrate_singular(math.sin, 1.0, 0.0)

    def test_non_finite_integrand(self):
        with pytest.raises(DomainError, match="non-finite"):
            integrate_singular(lambda x: math.nan, 0.0, 1.0)

    def test_subdivision_budget(self):
        with pytest.raises(ConvergenceError):
            integrate_singular(
                lambda x: math.sqrt(abs(x - 0.37)), 0.0, 1.0, abs_tol=0.0, max_depth=4
            )


class TestElliptic:
    def test_zero_angle(self):
        for m in (-3.0, -1.0, 0.0, 0.5):
            assert elliptic_f(0.0, m) == 0.0
            assert elliptic_e(0.0, m) == 0.0

    def test_circular_case(self):
        assert abs(elliptic_f(math.pi / 2.0, 0.0) - math.pi / 2.0) <= 1e-15
        assert abs(elliptic_e(math.pi / 2.0, 0.0) - math.pi / 2.0) <= 1e-15

    def test_negative_parameter_against_quadrature(self):
        """F(pi/4 | -1) pinned by direct quadrature of the defining integral."""
        phi, m = math.pi / 4.0, -1.0
        oracle, _ = integrate_singular(
            lambda t: 1.0 / math.sqrt(1.0 - m * math.sin(t) ** 2), 0.0, phi,
            abs_tol=1e-13,
        )
        assert abs(elliptic_f(phi, m) - oracle) <= 1e-12
        oracle_e, _ = integrate_singular(
            lambda t: math.sqrt(1.0 - m * math.sin(t) ** 2), 0.0, phi, abs_tol=1e-13
        )
        assert abs(elliptic_e(phi, m) - oracle_e) <= 1e-12

    def test_against_scipy(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            phi = rng.uniform(0.0, math.pi / 2.0)
            m = rng.uniform(-6.0, 0.95)
            if m * math.sin(phi) ** 2 >= 1.0:
                continue
            assert abs(elliptic_f(phi, m) - sp.ellipkinc(phi, m)) <= 1e-12
            assert abs(elliptic_e(phi, m) - sp.ellipeinc(phi, m)) <= 1e-12

    def test_carlson_against_scipy(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            x, y, z = rng.uniform(0.01, 10.0, size=3)
            assert abs(carlson_rf(x, y, z) - sp.elliprf(x, y, z)) <= 1e-13 * abs(
                sp.elliprf(x, y, z)
            ) + 1e-15
            assert abs(carlson_rd(x, y, z) - sp.elliprd(x, y, z)) <= 1e-13 * abs(
                sp.elliprd(x, y, z)
            ) + 1e-15

    def test_legendre_relation(self):
        """E(m) K(1-m) + E(1-m) K(m) - K(m) K(1-m) = pi/2 on (0, 1)."""
        for m in (0.1, 0.3, 0.5, 0.7, 0.9):
            big_k = elliptic_f(math.pi / 2.0, m)
            big_e = elliptic_e(math.pi / 2.0, m)
            comp_k = elliptic_f(math.pi / 2.0, 1.0 - m)
            comp_e = elliptic_e(math.pi / 2.0, 1.0 - m)
            residual = big_e * comp_k + comp_e * big_k - big_k * comp_k - math.pi / 2.0
            assert abs(residual) <= 1e-10

    def test_modulus_convention_flag(self):
        """The modulus convention squares the second argument."""
        phi = 0.8
        assert abs(
            elliptic_f(phi, 0.6, convention="modulus") - elliptic_f(phi, 0.36)
        ) <= 1e-15
        with pytest.raises(DomainError):
            elliptic_f(phi, 0.5, convention="bogus")

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            elliptic_f(2.0, 0.5)  # angle beyond pi/2
        with pytest.raises(DomainError):
            carlson_rf(-1.0, 1.0, 1.0)
        with pytest.raises(DomainError):
            carlson_rd(1.0, 1.0, 0.0)
