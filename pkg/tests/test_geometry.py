"""Control-region geometry: covector maps and the feedback control."""

import math

import numpy as np
import pytest

from modpot import (
    AffineControlSystem,
    CotangentPoint,
    DoglegParams,
    PotentialContext,
)
from modpot.errors import ConfigurationError, DomainError
from modpot.geometry import ell, lambda_map, optimal_control, vector_field
from modpot.potential import control_hamiltonian
from modpot.projectile import (
    ProjectileScenario,
    RadiusProfile,
    build_system,
)

from helpers import constant_matrix_system, grid_hamiltonian_max, random_planar_system

HALF = DoglegParams(0.5, 2.0)
QUAD = DoglegParams(1.0, 2.0)


def reciprocal_speed_system() -> AffineControlSystem:
    scn = ProjectileScenario(
        c=2.0, mu_ratio=1.0, x_f=0.1, y_f=1.0,
        radius_profile=RadiusProfile.RECIPROCAL, params=HALF,
    )
    return build_system(scn)


def unit_speed_system(mu: float = 1.0) -> AffineControlSystem:
    scn = ProjectileScenario(
        c=2.0, mu_ratio=mu, x_f=0.5, y_f=1.0,
        radius_profile=RadiusProfile.UNIT, params=HALF,
    )
    return build_system(scn)


class TestLambdaMap:
    def test_linear_in_covector(self):
        sys = unit_speed_system()
        pt = CotangentPoint(np.array([1.0, 0.0]), np.zeros(2))
        np.testing.assert_allclose(lambda_map(sys, pt), np.zeros(2))

    def test_reciprocal_speed_profile(self):
        """With form x^2 I at x = 2, the covector is scaled by 1/4."""
        sys = reciprocal_speed_system()
        pt = CotangentPoint(np.array([2.0, 0.0]), np.array([0.0, 1.0]))
        np.testing.assert_allclose(lambda_map(sys, pt), [0.0, 0.25], atol=1e-15)

    def test_single_control_direction(self):
        sys = constant_matrix_system(np.array([[1.0], [0.0]]), np.eye(1))
        pt = CotangentPoint(np.array([0.0, 0.0]), np.array([3.0, 4.0]))
        np.testing.assert_allclose(lambda_map(sys, pt), [3.0])

    def test_rejects_non_spd_form(self):
        sys = constant_matrix_system(np.eye(2), -np.eye(2))
        pt = CotangentPoint(np.zeros(2), np.ones(2))
        with pytest.raises(ConfigurationError):
            lambda_map(sys, pt)

    def test_dimension_check(self):
        sys = unit_speed_system()
        with pytest.raises(DomainError):
            lambda_map(sys, CotangentPoint(np.zeros(3), np.ones(3)))


class TestEll:
    def test_zero_covector(self):
        sys = unit_speed_system()
        assert ell(sys, CotangentPoint(np.array([1.0, 0.0]), np.zeros(2))) == 0.0

    def test_reciprocal_profile_magnitude(self):
        """ell = r(x) |psi| for the isotropic speed-disc form."""
        sys = reciprocal_speed_system()
        pt = CotangentPoint(np.array([2.0, 0.0]), np.array([0.0, 1.0]))
        assert abs(ell(sys, pt) - 0.5) <= 1e-14

    def test_single_control(self):
        sys = constant_matrix_system(np.array([[1.0], [0.0]]), np.eye(1))
        pt = CotangentPoint(np.zeros(2), np.array([3.0, 4.0]))
        assert abs(ell(sys, pt) - 3.0) <= 1e-14

    def test_defining_identity(self):
        """Q_z(lambda) = psi . (X(z, lambda) - f(z)) for random systems."""
        rng = np.random.default_rng(17)
        for _ in range(100):
            sys = random_planar_system(rng)
            z = rng.normal(size=2)
            psi = rng.normal(size=2)
            pt = CotangentPoint(z, psi)
            lam = lambda_map(sys, pt)
            g = np.asarray(sys.form(z))
            q_lam = float(lam @ g @ lam)
            pairing = float(psi @ (np.asarray(sys.control_fields(z)) @ lam))
            assert abs(q_lam - pairing) <= 1e-10 * (1.0 + abs(q_lam))
            assert abs(ell(sys, pt) - math.sqrt(max(q_lam, 0.0))) <= 1e-12


class TestOptimalControl:
    def test_zero_branch(self):
        sys = unit_speed_system()
        pt = CotangentPoint(np.array([1.0, 0.0]), np.zeros(2))
        np.testing.assert_allclose(optimal_control(sys, HALF, pt), np.zeros(2))

    def test_saturating_family_scaling(self):
        sys = unit_speed_system()
        pt = CotangentPoint(np.array([1.0, 0.0]), np.array([0.0, 0.5]))
        np.testing.assert_allclose(
            optimal_control(sys, QUAD, pt), [0.0, 0.5], atol=1e-14
        )

    def test_reciprocal_pair_projection_form(self):
        """For alpha p = 1 the control is lambda / sqrt(mu^q + ell^q)^(2-q)..."""
        sys = unit_speed_system()
        pt = CotangentPoint(np.array([1.0, 0.0]), np.array([0.0, 1.0]))
        np.testing.assert_allclose(
            optimal_control(sys, HALF, pt), [0.0, 1.0 / math.sqrt(2.0)], atol=1e-14
        )

    def test_against_grid_argmax(self):
        """The feedback control maximizes the parametrized Hamiltonian."""
        rng = np.random.default_rng(23)
        for _ in range(50):
            sys = random_planar_system(rng)
            params = DoglegParams(1.0 - rng.uniform(0, 0.9), 1.0 + 3.0 * rng.uniform())
            ctx = PotentialContext(sys, params)
            pt = CotangentPoint(rng.normal(size=2), rng.normal(size=2))
            u_star = optimal_control(sys, params, pt)
            h_star = control_hamiltonian(ctx, pt, u_star)
            h_grid = grid_hamiltonian_max(ctx, pt, grid_n=41, refine_rounds=0)
            assert h_star >= h_grid - 1e-6

    def test_admissibility(self):
        """Q_z(u*) <= 1 always, strictly below 1 for alpha < 1."""
        rng = np.random.default_rng(29)
        for _ in range(100):
            sys = random_planar_system(rng)
            z = rng.normal(size=2)
            psi = 3.0 * rng.normal(size=2)
            g = np.asarray(sys.form(z))
            u_sat = optimal_control(sys, QUAD, CotangentPoint(z, psi))
            assert float(u_sat @ g @ u_sat) <= 1.0 + 1e-12
            u_int = optimal_control(sys, DoglegParams(0.5, 2.0), CotangentPoint(z, psi))
            assert float(u_int @ g @ u_int) < 1.0

    def test_moderation_scaling_equivariance(self):
        """Scaling mu by c rescales the feedback argument by 1/c."""
        from modpot.dogleg import sigma as sigma_fn

        rng = np.random.default_rng(31)
        base = random_planar_system(rng)
        for c in (0.5, 2.0, 7.0):
            scaled = AffineControlSystem(
                state_dim=base.state_dim,
                control_dim=base.control_dim,
                drift=base.drift,
                control_fields=base.control_fields,
                form=base.form,
                mu=lambda z, c=c: c * base.mu(z),
                unmoderated_cost=base.unmoderated_cost,
            )
            pt = CotangentPoint(rng.normal(size=2), rng.normal(size=2))
            ell_value = ell(base, pt)
            lam = lambda_map(base, pt)
            expected = sigma_fn(HALF, ell_value / (c * base.mu(pt.z))) * lam / ell_value
            np.testing.assert_allclose(
                optimal_control(scaled, HALF, pt), expected, atol=1e-13
            )


class TestVectorField:
    def test_drift_only(self):
        sys = constant_matrix_system(np.eye(2), np.eye(2), drift=np.array([1.0, -2.0]))
        np.testing.assert_allclose(
            vector_field(sys, np.zeros(2), np.zeros(2)), [1.0, -2.0]
        )

    def test_controlled_velocity(self):
        sys = unit_speed_system()
        np.testing.assert_allclose(
            vector_field(sys, np.array([1.0, 0.0]), np.array([-0.3, 0.4])),
            [-0.3, 0.4],
        )

    def test_affine_sum(self):
        sys = constant_matrix_system(
            np.array([[0.0], [1.0]]), np.eye(1), drift=np.array([1.0, 0.0])
        )
        np.testing.assert_allclose(
            vector_field(sys, np.zeros(2), np.array([0.5])), [1.0, 0.5]
        )

    def test_inadmissible_control(self):
        sys = unit_speed_system()
        with pytest.raises(DomainError):
            vector_field(sys, np.array([1.0, 0.0]), np.array([2.0, 0.0]))
