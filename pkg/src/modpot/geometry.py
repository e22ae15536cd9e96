"""Affine control systems with ellipsoidal admissible control regions.

A system evolves as ``zdot = f(z) + M_z u`` where the columns of ``M_z`` are
the control vector fields, and the admissible controls at ``z`` form the
unit ball of a positive-definite quadratic form, ``Q_z(u) <= 1``.  Writing
``G_z`` for the matrix of the form (``Q_z(u) = u^T G_z u``) and
``L_z = G_z^{-1}``, the covector maps are

    lambda(psi) = L_z M_z^T psi,      ell(psi)^2 = Q_z(lambda(psi)),

and the incentive-optimal control is the boundary direction
``nu = lambda / ell`` rescaled by the optimal scaling from
:mod:`modpot.dogleg`:

    u* = sigma(ell / mu(z)) * nu        (u* = 0 when ell = 0).

Systems are immutable after construction and all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .dogleg import DoglegParams, sigma
from .errors import ConfigurationError, DomainError, ModpotError

__all__ = [
    "AffineControlSystem",
    "CotangentPoint",
    "form_matrix",
    "lambda_map",
    "ell",
    "optimal_control",
    "vector_field",
]

# Below this multiple of mu(z), ell is treated as zero to avoid 0/0 in the
# boundary direction nu = lambda / ell.
_ELL_ZERO_FACTOR = 1e-14


@dataclass(frozen=True)
class AffineControlSystem:
    """Immutable bundle of the state-dependent data of a control system.

    ``form(z)`` must return the symmetric positive-definite matrix of the
    control-region quadratic form (checked by Cholesky factorization at each
    evaluation; n and k are small, so no caching).  ``mu`` is the positive
    moderation strength and ``unmoderated_cost`` the state-only cost term;
    ``cost_grad`` optionally supplies its analytic gradient, otherwise
    consumers fall back to central finite differences.
    """

    state_dim: int
    control_dim: int
    drift: Callable[[np.ndarray], np.ndarray]
    control_fields: Callable[[np.ndarray], np.ndarray]
    form: Callable[[np.ndarray], np.ndarray]
    mu: Callable[[np.ndarray], float]
    unmoderated_cost: Callable[[np.ndarray], float]
    cost_grad: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def mu_checked(self, z: np.ndarray) -> float:
        value = float(self.mu(z))
        if value <= 0.0:
            raise ConfigurationError(f"mu(z) = {value} must be positive at z = {z}")
        return value


@dataclass(frozen=True)
class CotangentPoint:
    """A state z paired with a covector psi in the same coordinate chart."""

    z: np.ndarray
    psi: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "z", np.asarray(self.z, dtype=float))
        object.__setattr__(self, "psi", np.asarray(self.psi, dtype=float))
        if self.z.shape != self.psi.shape:
            raise DomainError(
                f"state shape {self.z.shape} != covector shape {self.psi.shape}"
            )


def _check_point(sys: AffineControlSystem, pt: CotangentPoint) -> None:
    if pt.z.shape != (sys.state_dim,):
        raise DomainError(
            f"point dimension {pt.z.shape} does not match state_dim {sys.state_dim}"
        )


def form_matrix(sys: AffineControlSystem, z: np.ndarray) -> np.ndarray:
    """The SPD matrix of Q_z, validated by Cholesky factorization."""
    g = np.asarray(sys.form(z), dtype=float)
    if g.shape != (sys.control_dim, sys.control_dim):
        raise ConfigurationError(f"form matrix shape {g.shape} at z = {z}")
    try:
        np.linalg.cholesky(g)
    except np.linalg.LinAlgError as exc:
        raise ConfigurationError(f"form matrix not SPD at z = {z}") from exc
    return g


def lambda_map(sys: AffineControlSystem, pt: CotangentPoint) -> np.ndarray:
    """Image of the covector under L_z M_z^T (a control-space vector)."""
    _check_point(sys, pt)
    g = form_matrix(sys, pt.z)
    m = np.asarray(sys.control_fields(pt.z), dtype=float)
    return np.linalg.solve(g, m.T @ pt.psi)


def ell(sys: AffineControlSystem, pt: CotangentPoint) -> float:
    """Form-magnitude sqrt(Q_z(lambda(psi))) of the mapped covector.

    Equals sqrt(psi . (X(z, lambda) - f(z))) as well; the equality is
    asserted in the test suite.
    """
    _check_point(sys, pt)
    g = form_matrix(sys, pt.z)
    m = np.asarray(sys.control_fields(pt.z), dtype=float)
    lam = np.linalg.solve(g, m.T @ pt.psi)
    radicand = float(lam @ g @ lam)
    if radicand < -1e-14:
        raise ModpotError(f"negative Q_z(lambda) = {radicand}: broken SPD form")
    return np.sqrt(max(radicand, 0.0))


def optimal_control(
    sys: AffineControlSystem, params: DoglegParams, pt: CotangentPoint
) -> np.ndarray:
    """Incentive-optimal control u* = sigma(ell/mu) * lambda / ell.

    Returns the zero control when ell vanishes.  The result is always
    admissible: Q_z(u*) = sigma^2 <= 1, with strict inequality for
    alpha < 1.
    """
    _check_point(sys, pt)
    g = form_matrix(sys, pt.z)
    m = np.asarray(sys.control_fields(pt.z), dtype=float)
    lam = np.linalg.solve(g, m.T @ pt.psi)
    ell_value = np.sqrt(max(float(lam @ g @ lam), 0.0))
    mu_value = sys.mu_checked(pt.z)
    if ell_value < _ELL_ZERO_FACTOR * mu_value:
        return np.zeros(sys.control_dim)
    scaling = sigma(params, ell_value / mu_value)
    return (scaling / ell_value) * lam


def vector_field(sys: AffineControlSystem, z: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Controlled velocity f(z) + M_z u for an admissible control."""
    z = np.asarray(z, dtype=float)
    u = np.asarray(u, dtype=float)
    g = form_matrix(sys, z)
    q_u = float(u @ g @ u)
    if q_u > 1.0 + 1e-12:
        raise DomainError(f"control with Q_z(u) = {q_u} is inadmissible")
    return np.asarray(sys.drift(z), dtype=float) + np.asarray(
        sys.control_fields(z), dtype=float
    ) @ u
