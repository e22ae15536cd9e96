"""The dogleg family of moderation incentives and its feedback scalings.

A moderation incentive rewards sub-maximal control effort: it is a smooth,
nonnegative, control-dependent cost term that vanishes exactly on the
boundary of the admissible control region.  The two-parameter family
implemented here, for a control magnitude ``q_u = Q_z(u)`` measured by a
state-dependent quadratic form, is

    incentive(q_u) = (mu / (p * alpha)) * (1 - q_u**(p/2))**alpha,

with shape parameters ``0 < alpha <= 1 <= p`` (the corner ``alpha = p = 1``
is excluded).  The name refers to the bend of the control-response curves
``ell_mu -> sigma`` for alpha near 1.

The maximizing control along a covector direction is a rescaling of the
boundary control by the optimal scaling ``sigma``, which this module
computes as a function of the moderation-normalized covector magnitude
``ell_mu``:

* ``alpha < 1``: ``sigma = rho_inverse(ell_mu)`` where
  ``rho(s) = s**(p-1) * (1 - s**p)**(alpha-1)`` is strictly increasing with
  a pole at ``s = 1``, so the optimal control stays strictly interior.
* ``alpha = 1 < p``: ``sigma = min(ell_mu**(1/(p-1)), 1)`` - the shifted
  "kinetic energy" style cost; the response saturates and loses
  differentiability at ``ell_mu = 1``.
* ``alpha * p = 1``: the inversion has the closed form
  ``sigma = (1 + ell_mu**-q)**(-1/p)``, ``q = p/(p-1)``.
* ``alpha -> 0``: the responses converge to those of the logarithmic
  penalty cost (``sigma_log_limit``), while the incentive itself stays
  bounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "DoglegParams",
    "incentive_value",
    "rho",
    "rho_prime",
    "rho_inverse",
    "sigma",
    "sigma_log_limit",
    "brute_force_sigma",
]

_ONE_BELOW_ONE = math.nextafter(1.0, 0.0)


@dataclass(frozen=True)
class DoglegParams:
    """Shape parameters (alpha, p) of the incentive family.

    Requires ``0 < alpha <= 1`` and ``p >= 1``, excluding the degenerate
    corner ``alpha = p = 1`` (there the objective is linear in the scaling
    and has no well-defined maximizer).
    """

    alpha: float
    p: float

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha <= 1.0):
            raise DomainError(f"alpha must be in (0, 1], got {self.alpha}")
        if not self.p >= 1.0:
            raise DomainError(f"p must be >= 1, got {self.p}")
        if self.alpha == 1.0 and self.p == 1.0:
            raise DomainError("alpha = p = 1 is excluded")

    @property
    def q(self) -> float:
        """Holder conjugate p / (p - 1); requires p > 1."""
        if self.p == 1.0:
            raise DomainError("q is undefined for p = 1")
        return self.p / (self.p - 1.0)

    @property
    def reciprocal_pair(self) -> bool:
        """True when alpha * p = 1, enabling the closed-form inversions."""
        return abs(self.alpha * self.p - 1.0) <= 1e-12


def _one_minus_pow(s: float, p: float) -> float:
    """1 - s**p evaluated without cancellation for s near 1."""
    if s <= 0.0:
        return 1.0
    if s >= 1.0:
        return 0.0
    return -math.expm1(p * math.log(s))


def incentive_value(params: DoglegParams, mu: float, q_u: float) -> float:
    """Incentive earned by a control with squared form-magnitude ``q_u``.

    ``q_u = Q_z(u)`` must already be computed by the caller and lie in
    [0, 1]; the value is exactly zero on the boundary ``q_u = 1``.
    """
    if mu <= 0.0:
        raise DomainError(f"moderation strength must be positive, got {mu}")
    if not 0.0 <= q_u <= 1.0:
        raise DomainError(f"control magnitude Q_z(u) = {q_u} outside [0, 1]")
    base = 1.0 - q_u ** (params.p / 2.0)
    if base <= 0.0:
        return 0.0
    return (mu / (params.p * params.alpha)) * base**params.alpha


def rho(params: DoglegParams, s: float) -> float:
    """Response function rho(s) = s**(p-1) * (1 - s**p)**(alpha-1).

    Strictly increasing on (0, 1); diverges as s -> 1 when alpha < 1.
    """
    alpha, p = params.alpha, params.p
    if s < 0.0 or s > 1.0 or (s >= 1.0 and alpha < 1.0):
        raise DomainError(f"s = {s} outside the domain of rho (alpha = {alpha})")
    if s == 0.0:
        return 1.0 if p == 1.0 else 0.0
    if alpha == 1.0:
        return s ** (p - 1.0)
    return s ** (p - 1.0) * _one_minus_pow(s, p) ** (alpha - 1.0)


def rho_prime(params: DoglegParams, s: float) -> float:
    """Derivative of ``rho``; strictly positive on (0, 1).

    At s = 0 the one-sided limit is returned (0, p - 1, or inf depending on
    how p compares to 2), which lets safeguarded solvers probe the endpoint.
    """
    alpha, p = params.alpha, params.p
    if not 0.0 <= s < 1.0:
        raise DomainError(f"s = {s} outside [0, 1)")
    if s == 0.0:
        if p > 2.0:
            return 0.0
        return p - 1.0 if p == 2.0 else math.inf
    w = _one_minus_pow(s, p)
    return s ** (p - 2.0) * w ** (alpha - 2.0) * ((p - 1.0) * w + p * (1.0 - alpha) * s**p)


def rho_inverse(params: DoglegParams, r: float) -> float:
    """Unique s in [0, 1) with rho(s) = r, for alpha < 1.

    Safeguarded Newton iteration on a sign-changing bracket; the upper end
    of the initial bracket is found by doubling toward 1 (rho has a pole
    there).  Relative tolerance 1e-12 on s.  For p = 1 the range of rho
    starts at rho(0) = 1: values below it raise, the infimum maps to 0.
    """
    from .numerics import RootProblem, find_root

    alpha, p = params.alpha, params.p
    if alpha >= 1.0:
        raise DomainError("rho_inverse requires alpha < 1; use sigma for alpha = 1")
    if r < 0.0:
        raise DomainError(f"r must be nonnegative, got {r}")
    if p == 1.0:
        # rho(s) = (1 - s)**(alpha - 1) has range [1, inf); invert directly.
        if r < 1.0:
            raise DomainError(f"r = {r} below the range infimum rho(0) = 1 for p = 1")
        if r == 1.0:
            return 0.0
        return min(1.0 - r ** (-1.0 / (1.0 - alpha)), _ONE_BELOW_ONE)
    if r == 0.0:
        return 0.0

    hi = 0.5
    while rho(params, hi) < r:
        hi = 1.0 - 0.5 * (1.0 - hi)
        if 1.0 - hi < 1e-300:
            # The true preimage is closer to 1 than double precision resolves.
            return _ONE_BELOW_ONE
    root = find_root(
        RootProblem(
            objective=lambda s: rho(params, s) - r,
            bracket=(0.0, hi),
            rel_tol=1e-12,
            max_iter=200,
            fprime=lambda s: rho_prime(params, s),
        )
    )
    # Two unguarded Newton polish steps push the accuracy from the solver
    # tolerance to machine precision; downstream identities depend on it.
    for _ in range(2):
        candidate = root - (rho(params, root) - r) / rho_prime(params, root)
        if not 0.0 < candidate < 1.0:
            break
        root = candidate
    return min(root, _ONE_BELOW_ONE)


def sigma(params: DoglegParams, ell_mu: float) -> float:
    """Optimal scaling s* in [0, 1] for normalized covector magnitude ell_mu.

    Maximizes ``ell_mu * s + (1/(alpha*p)) * (1 - s**p)**alpha`` over
    s in [0, 1].  Dispatches to the saturating min-formula for alpha = 1,
    to the closed form for alpha * p = 1, and to the rho-inversion path
    otherwise; the closed form and the general path agree to 1e-10.
    """
    if ell_mu < 0.0:
        raise DomainError(f"ell_mu must be nonnegative, got {ell_mu}")
    alpha, p = params.alpha, params.p
    if alpha == 1.0:
        return min(ell_mu ** (1.0 / (p - 1.0)), 1.0)
    if params.reciprocal_pair:
        if ell_mu == 0.0:
            return 0.0
        return (1.0 + ell_mu ** (-params.q)) ** (-1.0 / p)
    if p == 1.0 and ell_mu < 1.0:
        # The interior critical-point equation has no solution below the
        # range of rho; the objective is decreasing and the endpoint s = 0
        # is optimal.
        return 0.0
    return rho_inverse(params, ell_mu)


def sigma_log_limit(p: float, ell_mu: float) -> float:
    """Optimal scaling of the logarithmic penalty cost (the alpha -> 0 limit).

    Inverts ``rho_0(s) = s**(p-1) / (1 - s**p)`` on [0, 1).  For p = 2 the
    quadratic closed form is used.
    """
    from .numerics import RootProblem, find_root

    if p <= 1.0:
        raise DomainError(f"p must exceed 1, got {p}")
    if ell_mu < 0.0:
        raise DomainError(f"ell_mu must be nonnegative, got {ell_mu}")
    if ell_mu == 0.0:
        return 0.0
    if p == 2.0:
        # s / (1 - s^2) = r  =>  r s^2 + s - r = 0, stable positive root.
        return 2.0 * ell_mu / (1.0 + math.sqrt(1.0 + 4.0 * ell_mu * ell_mu))

    def rho0(s: float) -> float:
        return s ** (p - 1.0) / _one_minus_pow(s, p)

    hi = 0.5
    while rho0(hi) < ell_mu:
        hi = 1.0 - 0.5 * (1.0 - hi)
    return find_root(
        RootProblem(objective=lambda s: rho0(s) - ell_mu, bracket=(0.0, hi), rel_tol=1e-12)
    )


def brute_force_sigma(params: DoglegParams, ell_mu: float, grid_n: int) -> float:
    """Grid-argmax oracle for ``sigma``; test use only.

    Maximizes the scalar objective on a uniform grid over [0, 1]; ties are
    broken toward the lowest index so results are deterministic.
    """
    if grid_n < 101:
        raise DomainError(f"grid_n must be at least 101, got {grid_n}")
    alpha, p = params.alpha, params.p
    s = np.linspace(0.0, 1.0, grid_n)
    objective = ell_mu * s + (1.0 / (alpha * p)) * (1.0 - s**p) ** alpha
    return float(s[int(np.argmax(objective))])
