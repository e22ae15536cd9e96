"""Vertical take-off interception with bounded controlled velocity.

A projectile launches vertically from an unknown point ``(x0, 0)`` to the
right of a target ``(x_f, y_f)`` and steers with direct velocity control,
speed-limited by a radius profile ``r(x)``.  The state cost
``cost(x) = c/(2 x^2) + 1`` models risk concentrated near the target, and
the moderation strength is a constant multiple of the radius,
``mu(x) = mu_ratio * r(x)``.

The planar system is integrable: the Hamiltonian level ``h`` and the
conserved vertical covector component reduce the synthesis problem to
quadratures in the horizontal position.  With the covector-norm profile

    n(x) = mu(x) * chi_hat_inverse(phi(x; h)) / r(x),

which equals |psi| along solutions, and the turning ratio
``w(a, b) = (n(b)/n(a))**2``, the height and elapsed time from ``x`` up to
the launch point are

    height(x)  = integral_x^{x0} dxi / sqrt(w(x0, xi) - 1),
    time(x)    = integral_x^{x0} dxi / (r * sigma_hat * sqrt(1 - w(xi, x0))).

Both integrands blow up like an inverse square root at the launch point
(where ``n`` attains its strict minimum); the quadrature routine removes
the singularity by substitution.

Closed forms cover three specializations, each validated against the
quadratures, which act as arbiter for any transcription ambiguity:

* ``alpha = 1/2, p = 2``, reciprocal radius, level 0: logarithmic forms;
* ``alpha = 1/2, p = 2``, unit radius, level 0: incomplete elliptic
  integrals with negative parameter;
* ``alpha = 1, p = 2``, unit radius, constant mu: explicit trajectories
  tracing origin-centered ellipses, with the classic quadratic
  ("kinetic energy") cost realized as a shifted level of the same
  machinery.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dogleg import DoglegParams
from .errors import DomainError, InfeasibleError
from .geometry import AffineControlSystem
from .numerics import (
    RootProblem,
    SingularEnd,
    elliptic_e,
    elliptic_f,
    find_root,
    integrate_singular,
)
from .potential import PotentialContext, chi_hat_inverse, sigma_hat

__all__ = [
    "RadiusProfile",
    "CostVariant",
    "ProjectileScenario",
    "ELLIPTIC_CONVENTION",
    "build_system",
    "build_context",
    "phi_at",
    "covector_norm",
    "turning_ratio",
    "assert_feasible_launch",
    "height_quadrature",
    "time_quadrature",
    "speed_scale",
    "unmoderated_height",
    "half_family_forms",
    "log_height_time",
    "elliptic_height_time",
    "quadratic_region",
    "ellipse_data",
    "ellipse_solution",
    "ellipse_height_time",
    "ellipse_launch_point",
    "quadratic_cost_launch_point",
    "solve_launch_quadrature",
    "default_launch_bracket",
]

# Incomplete elliptic integral convention used by the closed forms, pinned
# once by the quadrature-arbiter test: the second argument is the parameter
# m (scipy's convention), not the modulus.
ELLIPTIC_CONVENTION = "parameter"

_HALF_QUADRATIC = DoglegParams(0.5, 2.0)


class RadiusProfile(enum.Enum):
    """Speed-limit profile of the admissible control disc."""

    RECIPROCAL = "reciprocal"  # r(x) = 1/x
    UNIT = "unit"  # r(x) = 1


class CostVariant(enum.Enum):
    """Which classic cost the scenario realizes.

    ``GENERAL`` uses the scenario's own (alpha, p, h).  ``MI`` is the
    boundary-calibrated quadratic cost (incentive vanishing on the speed
    limit; alpha = 1, p = 2, level 0).  ``KE`` is the classic quadratic
    kinetic-energy cost, realized as the same machinery at the shifted
    level ``mu/2 - 1``.
    """

    GENERAL = "general"
    MI = "mi"
    KE = "ke"


@dataclass(frozen=True)
class ProjectileScenario:
    """A fully specified interception problem instance."""

    c: float
    mu_ratio: float
    x_f: float
    y_f: float
    radius_profile: RadiusProfile = RadiusProfile.UNIT
    params: DoglegParams = _HALF_QUADRATIC
    h: float = 0.0
    cost_variant: CostVariant = CostVariant.GENERAL
    scenario_id: str = ""
    x0_min: Optional[float] = None
    x0_max: Optional[float] = None

    def __post_init__(self) -> None:
        if self.c <= 0.0 or self.x_f <= 0.0 or self.y_f <= 0.0:
            raise DomainError("c, x_f and y_f must all be positive")
        if self.mu_ratio <= 0.0:
            raise DomainError(f"mu_ratio must be positive, got {self.mu_ratio}")
        if self.cost_variant is not CostVariant.GENERAL:
            if self.radius_profile is not RadiusProfile.UNIT:
                raise DomainError(f"{self.cost_variant.value} requires the unit radius profile")
            if (self.params.alpha, self.params.p) != (1.0, 2.0):
                raise DomainError(
                    f"{self.cost_variant.value} requires alpha = 1, p = 2"
                )
            mu_min = 1.0 + self.c / (2.0 * self.x_f**2)
            if self.x_f**2 < self.c / 2.0:
                raise DomainError(
                    f"x_f^2 = {self.x_f**2} < c/2 = {self.c / 2}: no admissible"
                    " smooth solution exists"
                )
            if not mu_min <= self.mu_ratio <= 2.0:
                raise DomainError(
                    f"mu_ratio = {self.mu_ratio} outside [{mu_min}, 2]"
                )
        if self.radius_profile is RadiusProfile.RECIPROCAL and self.level > -1.0:
            # The level must stay in range of the reduced potential somewhere:
            # the minimum of phi over x is sqrt(2 c (1 + level)) / mu_ratio and
            # the range floor is 1/(alpha p).
            bound = self.params.alpha * self.params.p * math.sqrt(
                2.0 * self.c * (1.0 + self.level)
            )
            if self.mu_ratio >= bound:
                raise DomainError(
                    f"mu_ratio = {self.mu_ratio} >= {bound:.6g}: cost level"
                    " leaves the feedback range everywhere"
                )

    @property
    def level(self) -> float:
        """Hamiltonian level at which the synthesis problem is posed."""
        if self.cost_variant is CostVariant.KE:
            return self.h + self.mu_ratio / 2.0 - 1.0
        return self.h

    @property
    def saturated(self) -> bool:
        """True when the moderation strength sits exactly on its lower bound
        (the feedback control touches the speed limit at the target)."""
        if self.cost_variant is not CostVariant.MI:
            return False
        return self.mu_ratio == 1.0 + self.c / (2.0 * self.x_f**2)

    def radius(self, x: float) -> float:
        return 1.0 / x if self.radius_profile is RadiusProfile.RECIPROCAL else 1.0

    def mu(self, x: float) -> float:
        return self.mu_ratio * self.radius(x)

    def cost(self, x: float) -> float:
        return self.c / (2.0 * x * x) + 1.0

    def upper_abscissa_limit(self) -> float:
        """Supremum of usable launch abscissae (infinity when unconstrained).

        For the reciprocal profile the covector-norm profile turns around at
        ``sqrt(c / (2 (1 + level)))``, past which the turning-point
        hypothesis fails.  For the unit profile the profile is always
        decreasing, but the normalized cost level must stay above the
        range floor ``1/(alpha p)`` of the reduced potential.
        """
        if self.radius_profile is RadiusProfile.RECIPROCAL:
            if self.level <= -1.0:
                return self.x_f  # empty range; solves will reject
            return math.sqrt(self.c / (2.0 * (1.0 + self.level)))
        floor = 1.0 / (self.params.alpha * self.params.p)
        threshold = floor * self.mu_ratio - 1.0 - self.level
        if threshold > 0.0:
            return math.sqrt(self.c / (2.0 * threshold))
        return math.inf


def with_mu(scn: ProjectileScenario, mu_ratio: float) -> ProjectileScenario:
    """Copy of a scenario with a different moderation strength."""
    return dataclasses.replace(scn, mu_ratio=mu_ratio)


# ---------------------------------------------------------------------------
# System construction
# ---------------------------------------------------------------------------


def build_system(scn: ProjectileScenario) -> AffineControlSystem:
    """The planar controlled-velocity system of a scenario.

    Drift-free, identity control fields, a speed disc of radius r(x), and
    the inverse-square state cost with its analytic gradient.
    """
    reciprocal = scn.radius_profile is RadiusProfile.RECIPROCAL
    c = scn.c
    m_ratio = scn.mu_ratio

    def form(z: np.ndarray) -> np.ndarray:
        r = 1.0 / z[0] if reciprocal else 1.0
        return np.eye(2) / (r * r)

    def mu(z: np.ndarray) -> float:
        return m_ratio / z[0] if reciprocal else m_ratio

    return AffineControlSystem(
        state_dim=2,
        control_dim=2,
        drift=lambda z: np.zeros(2),
        control_fields=lambda z: np.eye(2),
        form=form,
        mu=mu,
        unmoderated_cost=lambda z: c / (2.0 * z[0] * z[0]) + 1.0,
        cost_grad=lambda z: np.array([-c / z[0] ** 3, 0.0]),
    )


def build_context(scn: ProjectileScenario) -> PotentialContext:
    return PotentialContext(sys=build_system(scn), params=scn.params)


# ---------------------------------------------------------------------------
# Reduced profile functions
# ---------------------------------------------------------------------------


def phi_at(scn: ProjectileScenario, x: float) -> float:
    """Normalized cost level (cost(x) + level) / mu(x)."""
    if x <= 0.0:
        raise DomainError(f"abscissa must be positive, got {x}")
    return (scn.cost(x) + scn.level) / scn.mu(x)


def covector_norm(scn: ProjectileScenario, x: float) -> float:
    """Covector-norm profile n(x) = mu(x) chi_hat_inverse(phi(x)) / r(x).

    Along any solution in the scenario's Hamiltonian level set, |psi| equals
    this profile.  Raises :class:`InfeasibleError` when the level is outside
    the range of the reduced potential at x.
    """
    try:
        r_value = chi_hat_inverse(scn.params, phi_at(scn, x))
    except DomainError as exc:
        raise InfeasibleError(f"level {scn.level} infeasible at x = {x}: {exc}") from exc
    return scn.mu(x) * r_value / scn.radius(x)


def turning_ratio(scn: ProjectileScenario, a: float, b: float) -> float:
    """Squared covector-norm ratio w(a, b) = (n(b) / n(a))**2.

    Equals 1 at coincident arguments; exceeds 1 on (x_f, x0) when the first
    argument is the launch point of a feasible scenario.
    """
    na = covector_norm(scn, a)
    nb = covector_norm(scn, b)
    if na == 0.0:
        raise InfeasibleError(f"degenerate covector norm at x = {a}")
    ratio = nb / na
    return ratio * ratio


def assert_feasible_launch(
    scn: ProjectileScenario, x0: float, grid_n: int = 1001
) -> None:
    """Validate the turning-point hypothesis for a launch abscissa.

    Samples the covector-norm profile on a grid over [x_f, x0] and requires
    a strict minimum at x0 (plus the level being in range throughout).
    """
    if not x0 > scn.x_f:
        raise InfeasibleError(f"launch abscissa {x0} must exceed x_f = {scn.x_f}")
    xs = np.linspace(scn.x_f, x0, grid_n)
    values = np.array([covector_norm(scn, float(x)) for x in xs])
    if not np.all(values[:-1] > values[-1]):
        raise InfeasibleError(
            f"covector-norm profile has no strict minimum at x0 = {x0}"
        )


# ---------------------------------------------------------------------------
# Quadrature solutions
# ---------------------------------------------------------------------------


def height_quadrature(
    scn: ProjectileScenario, x: float, x0: float, abs_tol: float = 1e-10
) -> float:
    """Height gained between abscissa x and the launch point x0."""
    if not scn.x_f <= x <= x0:
        raise DomainError(f"need x_f <= x <= x0, got x = {x}, x0 = {x0}")
    if x == x0:
        return 0.0
    n0 = covector_norm(scn, x0)

    def integrand(xi: float) -> float:
        ratio = covector_norm(scn, xi) / n0
        # Roundoff floor: near the launch point the radicand cancels to the
        # noise level; the quadrature's stall detection bounds the impact.
        return 1.0 / math.sqrt(max(ratio * ratio - 1.0, 1e-16))

    try:
        value, _ = integrate_singular(
            integrand, x, x0, SingularEnd.UPPER, abs_tol=abs_tol
        )
    except DomainError as exc:
        raise InfeasibleError(f"height integrand failed on [{x}, {x0}]: {exc}") from exc
    return value


def time_quadrature(
    scn: ProjectileScenario, x: float, x0: float, abs_tol: float = 1e-10
) -> float:
    """Elapsed time between abscissa x and the launch point x0."""
    if not scn.x_f <= x <= x0:
        raise DomainError(f"need x_f <= x <= x0, got x = {x}, x0 = {x0}")
    if x == x0:
        return 0.0
    n0 = covector_norm(scn, x0)

    def integrand(xi: float) -> float:
        ratio = n0 / covector_norm(scn, xi)
        speed_fraction = sigma_hat(scn.params, phi_at(scn, xi))
        return 1.0 / (
            scn.radius(xi)
            * speed_fraction
            * math.sqrt(max(1.0 - ratio * ratio, 1e-16))
        )

    try:
        value, _ = integrate_singular(
            integrand, x, x0, SingularEnd.UPPER, abs_tol=abs_tol
        )
    except DomainError as exc:
        raise InfeasibleError(f"time integrand failed on [{x}, {x0}]: {exc}") from exc
    return value


# ---------------------------------------------------------------------------
# alpha = 1/2, p = 2 family (constant mu / r)
# ---------------------------------------------------------------------------


def _require_half_quadratic(scn: ProjectileScenario) -> None:
    if (scn.params.alpha, scn.params.p) != (0.5, 2.0):
        raise DomainError("this form requires alpha = 1/2, p = 2")


def speed_scale(scn: ProjectileScenario, x0: float) -> float:
    """Launch speed fraction v = sqrt(1 - phi(x0)**-2) for alpha=1/2, p=2.

    Scales the unmoderated height profile into the moderated one; vanishing
    v (phi(x0) = 1) degenerates the solution to a flat path.
    """
    _require_half_quadratic(scn)
    phi0 = phi_at(scn, x0)
    if phi0 < 1.0:
        raise InfeasibleError(f"phi(x0) = {phi0} < 1: level out of range at x0 = {x0}")
    return math.sqrt(max(1.0 - phi0**-2, 0.0))


def unmoderated_height(
    scn: ProjectileScenario, x: float, x0: float, abs_tol: float = 1e-10
) -> float:
    """Height profile of the boundary-control (unmoderated) solution.

    The moderated height is this profile times :func:`speed_scale`.
    """
    _require_half_quadratic(scn)
    if x == x0:
        return 0.0
    phi0 = phi_at(scn, x0)

    def integrand(xi: float) -> float:
        ratio = phi_at(scn, xi) / phi0
        return 1.0 / math.sqrt(max(ratio * ratio - 1.0, 1e-16))

    try:
        value, _ = integrate_singular(
            integrand, x, x0, SingularEnd.UPPER, abs_tol=abs_tol
        )
    except DomainError as exc:
        raise InfeasibleError(f"radicand failed on [{x}, {x0}]: {exc}") from exc
    return value


def half_family_forms(
    scn: ProjectileScenario, x: float, x0: float, abs_tol: float = 1e-10
) -> tuple[float, float, float, float]:
    """(speed scale, unmoderated height, height, time) for alpha=1/2, p=2.

    The time separates from the moderation strength entirely, and the
    height is the unmoderated profile rescaled by the speed scale.
    """
    _require_half_quadratic(scn)
    scale = speed_scale(scn, x0)
    base = unmoderated_height(scn, x, x0, abs_tol)
    phi0 = phi_at(scn, x0)

    def time_integrand(xi: float) -> float:
        ratio = phi0 / phi_at(scn, xi)
        return 1.0 / (scn.radius(xi) * math.sqrt(max(1.0 - ratio * ratio, 1e-16)))

    if x == x0:
        elapsed = 0.0
    else:
        elapsed, _ = integrate_singular(
            time_integrand, x, x0, SingularEnd.UPPER, abs_tol=abs_tol
        )
    return scale, base, scale * base, elapsed


def log_height_time(
    scn: ProjectileScenario, x: float, x0: float
) -> tuple[float, float]:
    """Closed-form (unmoderated height, time) for the reciprocal radius.

    Requires alpha = 1/2, p = 2, level 0.  With B = c/(2 x0) and
    eta(x) = sqrt(B^2 - x^2):

        height = (B + x0) * (log(eta(x) + sqrt(x0^2 - x^2)) - log(eta(x0)))
        time   = ((B + x0) * height - eta(x) * sqrt(x0^2 - x^2)) / 2
    """
    _require_half_quadratic(scn)
    if scn.radius_profile is not RadiusProfile.RECIPROCAL:
        raise DomainError("logarithmic closed form requires the reciprocal radius")
    if scn.level != 0.0:
        raise DomainError("logarithmic closed form requires level 0")
    if not scn.x_f <= x <= x0:
        raise DomainError(f"need x_f <= x <= x0, got x = {x}, x0 = {x0}")
    half_c = scn.c / (2.0 * x0)
    rad_eta0 = half_c * half_c - x0 * x0
    rad_eta = half_c * half_c - x * x
    if rad_eta0 <= 0.0 or rad_eta < 0.0:
        raise DomainError(
            f"radicand (c/(2 x0))^2 - x^2 nonpositive (x0 = {x0} too close to"
            " the turning-point bound)"
        )
    eta0 = math.sqrt(rad_eta0)
    eta = math.sqrt(rad_eta)
    chord = math.sqrt(x0 * x0 - x * x)
    coef = half_c + x0
    base_height = coef * (math.log(eta + chord) - math.log(eta0))
    elapsed = 0.5 * (coef * base_height - eta * chord)
    return base_height, elapsed


def elliptic_height_time(
    scn: ProjectileScenario, x: float, x0: float, convention: str = ELLIPTIC_CONVENTION
) -> tuple[float, float]:
    """Closed-form (unmoderated height, time) for the unit radius.

    Requires alpha = 1/2, p = 2, level 0.  Uses incomplete elliptic
    integrals with the negative parameter k = -(1 + 4 x0^2 / c):

        gamma_pm(x) = x0 * (gt_pm(x / x0) - gt_pm(1)),
        gt_pm(s)    = F(asin s | k) +/- E(asin s | k),
        height      = gamma_minus(x) / (1 + 1 / cost(x0)),
        time        = (-gamma_plus(x) + gamma_minus(x) / k) / 2.

    The ``convention`` flag selects how the second elliptic argument is
    interpreted; the shipped default is fixed by the quadrature arbiter.
    """
    _require_half_quadratic(scn)
    if scn.radius_profile is not RadiusProfile.UNIT:
        raise DomainError("elliptic closed form requires the unit radius")
    if scn.level != 0.0:
        raise DomainError("elliptic closed form requires level 0")
    if not scn.x_f <= x <= x0:
        raise DomainError(f"need x_f <= x <= x0, got x = {x}, x0 = {x0}")
    k_param = -(1.0 + 4.0 * x0 * x0 / scn.c)

    def gamma_pair(u: float) -> tuple[float, float]:
        angle = math.asin(min(u, 1.0))
        f_val = elliptic_f(angle, k_param, convention)
        e_val = elliptic_e(angle, k_param, convention)
        return f_val + e_val, f_val - e_val

    plus_x, minus_x = gamma_pair(x / x0)
    plus_1, minus_1 = gamma_pair(1.0)
    gamma_plus = x0 * (plus_x - plus_1)
    gamma_minus = x0 * (minus_x - minus_1)
    base_height = gamma_minus / (1.0 + 1.0 / scn.cost(x0))
    elapsed = 0.5 * (-gamma_plus + gamma_minus / k_param)
    return base_height, elapsed


# ---------------------------------------------------------------------------
# alpha = 1, p = 2 family (unit radius, constant mu)
# ---------------------------------------------------------------------------


def _require_unit_quadratic(scn: ProjectileScenario) -> None:
    if (scn.params.alpha, scn.params.p) != (1.0, 2.0):
        raise DomainError("this form requires alpha = 1, p = 2")
    if scn.radius_profile is not RadiusProfile.UNIT:
        raise DomainError("this form requires the unit radius profile")


def quadratic_region(scn: ProjectileScenario, x0: float) -> str:
    """Classify the feedback regime on [x_f, x0] for alpha = 1, p = 2.

    Returns ``"moderate"`` when 1/2 <= phi <= 1 throughout (speed below the
    limit) or ``"saturated"`` when phi >= 1 throughout (boundary control).
    Mixed regimes would require patching heterogeneous solution arcs and
    are rejected.
    """
    _require_unit_quadratic(scn)
    phi_far = phi_at(scn, scn.x_f)  # phi is decreasing in x
    phi_near = phi_at(scn, x0)
    if phi_near >= 1.0:
        return "saturated"
    if phi_far <= 1.0:
        if phi_near < 0.5:
            raise InfeasibleError(
                f"phi(x0) = {phi_near} < 1/2: instantaneous cost nonpositive"
            )
        return "moderate"
    raise InfeasibleError(
        f"mixed feedback regime on [{scn.x_f}, {x0}]: phi spans"
        f" [{phi_near:.6g}, {phi_far:.6g}] across 1; patching arcs of"
        " different kinds is not supported"
    )


def ellipse_data(scn: ProjectileScenario, x0: float) -> dict:
    """Coefficients of the explicit elliptical trajectory (moderate regime).

    ``zeta = c / (mu x0^2)`` and the launch speed fraction
    ``speed0 = sqrt(zeta + 2 (1 + level)/mu - 1)``; the path satisfies
    ``x(t)^2/x0^2 + y(t)^2 zeta / (speed0^2 x0^2) = 1`` exactly.
    """
    region = quadratic_region(scn, x0)
    if region != "moderate":
        raise InfeasibleError(
            "explicit elliptical solution requires the moderate regime"
            f" (got {region}); use the quadratures instead"
        )
    mu = scn.mu_ratio
    zeta = scn.c / (mu * x0 * x0)
    speed_sq = zeta + 2.0 * (1.0 + scn.level) / mu - 1.0
    if speed_sq <= 0.0:
        raise InfeasibleError(f"degenerate launch speed at x0 = {x0}")
    return {"x0": x0, "zeta": zeta, "speed0": math.sqrt(speed_sq)}


def ellipse_solution(
    scn: ProjectileScenario, t: np.ndarray | float, x0: float
) -> np.ndarray:
    """Explicit trajectory z(t) = (sqrt(x0^2 - zeta t^2), speed0 * t).

    Valid in the moderate regime until the target abscissa is reached.
    Accepts scalar or vector times; returns shape (2,) or (m, 2).
    """
    data = ellipse_data(scn, x0)
    t_arr = np.asarray(t, dtype=float)
    x_sq = x0 * x0 - data["zeta"] * t_arr**2
    if np.any(x_sq < 0.0):
        raise DomainError("time beyond the trajectory's horizontal turning point")
    stacked = np.stack((np.sqrt(x_sq), data["speed0"] * t_arr), axis=-1)
    return stacked


def ellipse_height_time(
    scn: ProjectileScenario, x: float, x0: float
) -> tuple[float, float]:
    """(height, time) at abscissa x of the explicit elliptical solution."""
    data = ellipse_data(scn, x0)
    if not scn.x_f <= x <= x0:
        raise DomainError(f"need x_f <= x <= x0, got x = {x}, x0 = {x0}")
    elapsed = math.sqrt((x0 * x0 - x * x) / data["zeta"])
    return data["speed0"] * elapsed, elapsed


def ellipse_launch_point(scn: ProjectileScenario) -> float:
    """Launch abscissa hitting the target, for alpha = 1, p = 2 (moderate).

    Solves ``height(x_f; x0) = y_f`` in closed form: with
    ``b0 = c/mu`` and ``A = 2 (1 + level)/mu - 1``,

        A x0^4 + (b0 - A x_f^2) x0^2 - b0 (x_f^2 + y_f^2) = 0.

    ``A = 0`` (the classic quadratic cost, or mu = 2 at level 0) gives the
    circle ``x0^2 = x_f^2 + y_f^2``.
    """
    _require_unit_quadratic(scn)
    mu = scn.mu_ratio
    b0 = scn.c / mu
    a_coef = 2.0 * (1.0 + scn.level) / mu - 1.0
    target_sq = scn.x_f**2 + scn.y_f**2
    if a_coef == 0.0:
        x0_sq = target_sq
    else:
        half_b = 0.5 * (b0 - a_coef * scn.x_f**2)
        disc = half_b * half_b + a_coef * b0 * target_sq
        if disc < 0.0 or a_coef < 0.0:
            raise InfeasibleError(
                f"no elliptical solution reaches the target (A = {a_coef})"
            )
        x0_sq = (-half_b + math.sqrt(disc)) / a_coef
    if x0_sq <= scn.x_f**2:
        raise InfeasibleError("launch point does not clear the target abscissa")
    x0 = math.sqrt(x0_sq)
    quadratic_region(scn, x0)  # validates the regime, raises otherwise
    return x0


def quadratic_cost_launch_point(c: float, mu: float, x_f: float, y_f: float) -> float:
    """Closed-form launch abscissa for the boundary-calibrated quadratic cost.

        x0^2 = b/2 + sqrt((b/2)^2 + a d),
        a = x_f^2 + y_f^2,  d = c / (2 - mu),  b = x_f^2 - d.

    Increasing in mu; valid for mu_min = 1 + c/(2 x_f^2) <= mu < 2 (the
    denominator of d degenerates at mu = 2, where the path is a circle
    through the target).
    """
    if x_f <= 0.0 or y_f <= 0.0 or c <= 0.0:
        raise DomainError("c, x_f, y_f must be positive")
    if x_f * x_f < c / 2.0:
        raise DomainError(f"x_f^2 = {x_f * x_f} < c/2 = {c / 2}")
    mu_min = 1.0 + c / (2.0 * x_f * x_f)
    if not mu_min <= mu < 2.0:
        raise DomainError(f"mu = {mu} outside [{mu_min}, 2)")
    a = x_f * x_f + y_f * y_f
    d = c / (2.0 - mu)
    b = x_f * x_f - d
    return math.sqrt(0.5 * b + math.sqrt(0.25 * b * b + a * d))


# ---------------------------------------------------------------------------
# Launch-point search
# ---------------------------------------------------------------------------


def default_launch_bracket(scn: ProjectileScenario) -> tuple[float, float]:
    """A launch-abscissa bracket containing the target-hitting solution.

    Honors scenario hints (x0_min / x0_max), then the structural upper
    limit (turning-point bound for the reciprocal profile, moderation bound
    for strong moderation on the unit profile); otherwise expands
    geometrically until the quadrature height overshoots the target.
    """
    margin = 1e-6
    lo = scn.x0_min if scn.x0_min is not None else scn.x_f * (1.0 + margin)
    if scn.x0_max is not None:
        return lo, scn.x0_max
    limit = scn.upper_abscissa_limit()
    if math.isfinite(limit):
        return lo, limit * (1.0 - margin)
    hi = scn.x_f + max(scn.y_f, 1.0)
    for _ in range(60):
        try:
            overshoot = height_quadrature(scn, scn.x_f, hi, abs_tol=1e-8) > scn.y_f
        except InfeasibleError:
            hi = 0.5 * (hi + scn.x_f)
            continue
        if overshoot:
            return lo, hi
        hi *= 1.6
    raise InfeasibleError("could not bracket a launch abscissa for the target")


def solve_launch_quadrature(
    scn: ProjectileScenario,
    bracket: Optional[tuple[float, float]] = None,
    tol: float = 1e-10,
) -> float:
    """Launch abscissa with quadrature height equal to the target height."""
    lo, hi = bracket if bracket is not None else default_launch_bracket(scn)

    def residual(x0: float) -> float:
        return height_quadrature(scn, scn.x_f, x0, abs_tol=min(tol, 1e-10)) - scn.y_f

    try:
        return find_root(
            RootProblem(objective=residual, bracket=(lo, hi), rel_tol=1e-12, f_tol=tol)
        )
    except DomainError as exc:
        raise InfeasibleError(f"launch-point search failed: {exc}") from exc
