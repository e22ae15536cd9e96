"""Moderation potentials and the synthesis Hamiltonian.

For a system with ellipsoidal control regions, the pointwise maximum of the
control-parametrized Hamiltonian over admissible controls,

    chi(psi_z) = max_u  psi . X(z, u) + incentive(z, u),

has a closed reduced form: with ``a0 = psi . f(z)`` the drift pairing and
``r = ell_mu`` the normalized covector magnitude,

    chi(psi_z) = a0 + mu(z) * chi_hat(r).

The canonical Hamiltonian flow of ``H = chi - unmoderated_cost`` generates
candidate optimal trajectories directly, replacing the parametrized family
of maximum-principle Hamiltonians.  This module provides ``chi_hat`` and
its inverse, the conserved-quantity reparametrizations ``tau``/``sigma_hat``
(which express the optimal scaling through ``phi = (cost + h) / mu``), and
the Hamiltonian itself.

Reduced-function facts used throughout (all tested):

* ``chi_hat(rho(s)) = tau(1 - s**p)`` with
  ``tau(w) = w**(alpha-1) * (1 + (1/(alpha*p) - 1) * w)`` strictly
  decreasing;
* ``sigma_hat(chi_hat(r)) = sigma(r)`` (feedback consistency);
* for ``alpha * p = 1``: ``chi_hat(r) = (r**q + 1)**(1/q)`` and
  ``sigma_hat(phi) = (1 - phi**-q)**(1/p)``;
* for ``alpha = 1``: ``chi_hat(r) = 1/p + r**q/q`` below saturation
  (``r < 1``) and ``r`` above it.

``phi`` values below the range of ``chi_hat`` mean the instantaneous cost
could not be positive for any admissible control; they raise instead of
clamping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dogleg import DoglegParams, incentive_value, rho, rho_inverse
from .errors import DomainError
from .geometry import AffineControlSystem, CotangentPoint, ell, form_matrix
from .numerics import RootProblem, find_root

__all__ = [
    "PotentialContext",
    "chi_hat",
    "chi_hat_inverse",
    "chi",
    "tau",
    "tau_inverse",
    "sigma_hat",
    "phi_value",
    "hamiltonian",
    "control_hamiltonian",
]


@dataclass(frozen=True)
class PotentialContext:
    """An affine control system paired with incentive shape parameters."""

    sys: AffineControlSystem
    params: DoglegParams


def chi_hat(params: DoglegParams, r: float) -> float:
    """Reduced moderation potential chi_hat(r); strictly increasing on [0, inf).

    ``chi_hat(0) = 1/(alpha*p)`` by continuity and ``chi_hat(r) ~ r`` as
    ``r -> inf``.  For alpha < 1 the value is computed through
    ``s = rho_inverse(r)`` and the pole-free composition ``tau(1 - s**p)``,
    which avoids the cancellation of the raw product form near ``s = 1``.
    """
    if r < 0.0:
        raise DomainError(f"r must be nonnegative, got {r}")
    alpha, p = params.alpha, params.p
    if alpha == 1.0:
        if r >= 1.0:
            return r
        q = params.q
        return 1.0 / p + r**q / q
    if params.reciprocal_pair:
        q = params.q
        return (r**q + 1.0) ** (1.0 / q)
    if r == 0.0:
        return 1.0 / (alpha * p)
    s = rho_inverse(params, r)
    w = -math.expm1(p * math.log(s)) if s > 0.0 else 1.0
    if w <= 0.0:
        # s has saturated at the representability limit; chi_hat -> r there.
        return r
    return tau(params, w)


def chi_hat_inverse(params: DoglegParams, phi: float) -> float:
    """Inverse of ``chi_hat``: the normalized magnitude r with chi_hat(r) = phi.

    Raises :class:`DomainError` for phi below ``chi_hat(0) = 1/(alpha*p)``.
    """
    alpha, p = params.alpha, params.p
    if alpha == 1.0:
        q = params.q
        if phi < 1.0 / p:
            raise DomainError(f"phi = {phi} below range minimum 1/p = {1.0 / p}")
        if phi >= 1.0:
            return phi
        return (q * (phi - 1.0 / p)) ** (1.0 / q)
    if params.reciprocal_pair:
        q = params.q
        if phi < 1.0:
            raise DomainError(f"phi = {phi} below range minimum 1")
        return (phi**q - 1.0) ** (1.0 / q)
    w = tau_inverse(params, phi)
    s = (1.0 - w) ** (1.0 / p)
    return rho(params, s)


def tau(params: DoglegParams, w: float) -> float:
    """tau(w) = w**(alpha-1) * (1 + (1/(alpha*p) - 1) * w), 0 < w <= 1.

    Strictly decreasing; equals ``chi_hat(rho(s))`` at ``w = 1 - s**p``.
    """
    if not 0.0 < w <= 1.0:
        raise DomainError(f"w = {w} outside (0, 1]")
    alpha, p = params.alpha, params.p
    return w ** (alpha - 1.0) * (1.0 + (1.0 / (alpha * p) - 1.0) * w)


def _tau_prime(params: DoglegParams, w: float) -> float:
    alpha, p = params.alpha, params.p
    return w ** (alpha - 2.0) * ((alpha - 1.0) + (1.0 / p - alpha) * w)


def tau_inverse(params: DoglegParams, phi: float) -> float:
    """Unique w in (0, 1] with tau(w) = phi, by safeguarded Newton.

    The range of tau is [1/(alpha*p), inf) for alpha < 1; values of phi
    below the infimum raise :class:`DomainError`.
    """
    alpha, p = params.alpha, params.p
    floor = 1.0 / (alpha * p)
    if phi < floor:
        raise DomainError(
            f"phi = {phi} below the range of tau (infimum {floor}): "
            "cost level too small for any admissible control"
        )
    if phi == floor:
        return 1.0
    if alpha == 1.0:
        if phi >= 1.0:
            raise DomainError(f"phi = {phi} outside the range [1/p, 1) of tau for alpha = 1")
        return params.q * (1.0 - phi)

    lo = 0.5
    while tau(params, lo) < phi:
        lo *= 0.5
        if lo < 1e-300:
            raise DomainError(f"phi = {phi} beyond invertible range")
    root = find_root(
        RootProblem(
            objective=lambda w: tau(params, w) - phi,
            bracket=(lo, 1.0),
            rel_tol=1e-12,
            max_iter=200,
            fprime=lambda w: _tau_prime(params, w),
        )
    )
    for _ in range(2):
        candidate = root - (tau(params, root) - phi) / _tau_prime(params, root)
        if not 0.0 < candidate <= 1.0:
            break
        root = candidate
    return root


def sigma_hat(params: DoglegParams, phi: float) -> float:
    """Optimal scaling expressed through the conserved quantity phi.

    Satisfies the consistency identity ``sigma_hat(chi_hat(r)) = sigma(r)``.
    For alpha = 1 the scaling saturates at 1 for phi >= 1; for alpha < 1 it
    approaches 1 only asymptotically.
    """
    alpha, p = params.alpha, params.p
    if alpha == 1.0:
        if phi < 1.0 / p:
            raise DomainError(f"phi = {phi} below range minimum 1/p = {1.0 / p}")
        if phi >= 1.0:
            return 1.0
        return ((p * phi - 1.0) / (p - 1.0)) ** (1.0 / p)
    if params.reciprocal_pair:
        if phi < 1.0:
            raise DomainError(f"phi = {phi} below range minimum 1")
        return (1.0 - phi ** (-params.q)) ** (1.0 / p)
    return (1.0 - tau_inverse(params, phi)) ** (1.0 / p)


def _drift_pairing(sys: AffineControlSystem, pt: CotangentPoint) -> float:
    return float(pt.psi @ np.asarray(sys.drift(pt.z), dtype=float))


def chi(ctx: PotentialContext, pt: CotangentPoint) -> float:
    """Moderation potential chi = a0 + mu(z) * chi_hat(ell / mu(z)).

    Equals the maximum of ``psi . X(z, u) + incentive(z, u)`` over the
    admissible controls (asserted against a grid oracle in tests).
    """
    mu_value = ctx.sys.mu_checked(pt.z)
    ell_value = ell(ctx.sys, pt)
    return _drift_pairing(ctx.sys, pt) + mu_value * chi_hat(ctx.params, ell_value / mu_value)


def phi_value(ctx: PotentialContext, z: np.ndarray, h: float) -> float:
    """Normalized cost level phi(z; h) = (unmoderated_cost(z) + h) / mu(z)."""
    z = np.asarray(z, dtype=float)
    return (float(ctx.sys.unmoderated_cost(z)) + h) / ctx.sys.mu_checked(z)


def hamiltonian(ctx: PotentialContext, pt: CotangentPoint) -> float:
    """Synthesis Hamiltonian H = chi - unmoderated_cost."""
    return chi(ctx, pt) - float(ctx.sys.unmoderated_cost(pt.z))


def control_hamiltonian(ctx: PotentialContext, pt: CotangentPoint, u: np.ndarray) -> float:
    """Parametrized Hamiltonian H(psi_z, u) = psi . X(z, u) - cost(z, u).

    The instantaneous cost is ``unmoderated_cost - incentive``, so this is
    ``psi . X + incentive - unmoderated_cost``; its maximum over admissible
    u equals :func:`hamiltonian`.
    """
    u = np.asarray(u, dtype=float)
    g = form_matrix(ctx.sys, pt.z)
    q_u = float(u @ g @ u)
    if q_u > 1.0 + 1e-12:
        raise DomainError(f"control with Q_z(u) = {q_u} is inadmissible")
    mu_value = ctx.sys.mu_checked(pt.z)
    x_dot = np.asarray(ctx.sys.drift(pt.z), dtype=float) + np.asarray(
        ctx.sys.control_fields(pt.z), dtype=float
    ) @ u
    return (
        float(pt.psi @ x_dot)
        + incentive_value(ctx.params, mu_value, min(q_u, 1.0))  # tolerate +1 ulp
        - float(ctx.sys.unmoderated_cost(pt.z))
    )
