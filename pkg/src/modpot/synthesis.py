"""Canonical Hamiltonian dynamics and synthesis-problem shooting.

The flow of ``H = chi - unmoderated_cost`` on the cotangent bundle (in
coordinates: ``zdot = dH/dpsi``, ``psidot = -dH/dz``) generates candidate
optimal trajectories.  ``dH/dpsi`` is evaluated exactly as the controlled
velocity at the feedback control (the envelope property of ``chi``);
``dH/dz`` falls back to central finite differences of ``H`` with step
``1e-6 * (1 + |z_i|)`` per component, with the analytic cost gradient used
when the system supplies one.

Free-time synthesis solutions must lie in a prescribed level set of ``H``
(level 0 for the classical problem); the vertical take-off boundary
condition pins the initial covector2 direction, and its magnitude follows
from the level, so a single shooting parameter (the launch abscissa x0)
remains.  Fixed-time problems additionally free the level h and shoot over
the pair (x0, h).

Integration is classical fixed-step RK4.  Conservation of H is monitored,
not enforced; when a drift target is given the step is halved until the
target is met.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .dogleg import sigma
from .errors import (
    ConfigurationError,
    ConvergenceError,
    DomainError,
    InfeasibleError,
    IntegrationError,
)
from .geometry import CotangentPoint, form_matrix
from .potential import (
    PotentialContext,
    chi_hat,
    chi_hat_inverse,
    control_hamiltonian,
    hamiltonian,
    phi_value,
)

__all__ = [
    "Trajectory",
    "SolverSettings",
    "VerticalLaunchProblem",
    "hamiltonian_field",
    "integrate",
    "integrate_to_abscissa",
    "vertical_start",
    "solve_free_time",
    "solve_fixed_time",
    "verify_maximum_principle",
]

_FD_SCALE = 1e-6


def _lambda_and_ell(sys, z: np.ndarray, psi: np.ndarray) -> tuple[np.ndarray, float]:
    """(lambda, ell) with a hand-rolled SPD solve for the common k = 2 case.

    The leading-minor positivity test is the Cholesky existence condition;
    larger control dimensions fall back to the factorization in
    :func:`modpot.geometry.form_matrix`.
    """
    g = np.asarray(sys.form(z), dtype=float)
    m = np.asarray(sys.control_fields(z), dtype=float)
    rhs = m.T @ psi
    if g.shape == (2, 2):
        g00, g01, g11 = g[0, 0], g[0, 1], g[1, 1]
        det = g00 * g11 - g01 * g01
        if g00 <= 0.0 or det <= 0.0:
            raise ConfigurationError(f"form matrix not SPD at z = {z}")
        lam = np.array(
            [
                (g11 * rhs[0] - g01 * rhs[1]) / det,
                (g00 * rhs[1] - g01 * rhs[0]) / det,
            ]
        )
    elif g.shape == (1, 1):
        if g[0, 0] <= 0.0:
            raise ConfigurationError(f"form matrix not SPD at z = {z}")
        lam = rhs / g[0, 0]
    else:
        np.linalg.cholesky(g)
        lam = np.linalg.solve(g, rhs)
    return lam, math.sqrt(max(float(lam @ rhs), 0.0))


@dataclass
class Trajectory:
    """Time-stamped samples of a cotangent-bundle trajectory.

    Columns: times ``t`` (strictly increasing from 0), states ``z``,
    covectors ``psi``, feedback controls ``u`` and Hamiltonian values ``H``.
    ``meta`` records solver settings and diagnostics, including the
    conservation drift ``h_drift = max|H(t) - H(0)|``.
    """

    t: np.ndarray
    z: np.ndarray
    psi: np.ndarray
    u: np.ndarray
    H: np.ndarray
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.t)

    @property
    def h_drift(self) -> float:
        return float(np.max(np.abs(self.H - self.H[0])))

    def validate(self) -> None:
        if self.t[0] != 0.0 or np.any(np.diff(self.t) <= 0.0):
            raise IntegrationError("trajectory times are not strictly increasing from 0")
        tol = self.meta.get("h_drift_tol")
        if tol is not None and self.h_drift > tol:
            raise IntegrationError(
                f"Hamiltonian drift {self.h_drift:.3e} exceeds tolerance {tol:.3e}"
            )


@dataclass(frozen=True)
class SolverSettings:
    """Knobs shared by the integration and shooting routines."""

    step: float = 1e-3
    target_tol: float = 1e-8
    fixed_time_tol: float = 1e-6
    max_iter: int = 80
    h_drift_tol: float = 1e-6
    t_max: float = 100.0
    max_step_halvings: int = 6


@dataclass(frozen=True)
class VerticalLaunchProblem:
    """Vertical take-off boundary-value description in the plane.

    The start manifold is ``{(x0, 0) : x0 in x0_bracket}`` with a vertical
    initial covector whose magnitude is fixed by the Hamiltonian level;
    the target is hit when the trajectory reaches ``x = target[0]`` with
    height ``target[1]``.
    """

    ctx: PotentialContext
    target: tuple[float, float]
    x0_bracket: tuple[float, float]
    level: float = 0.0
    scenario_id: str = ""


# ---------------------------------------------------------------------------
# Hamiltonian vector field
# ---------------------------------------------------------------------------


def _chi_value(ctx: PotentialContext, z: np.ndarray, psi: np.ndarray) -> float:
    """chi at (z, psi); lean version for the finite-difference loop."""
    sys = ctx.sys
    _, ell_value = _lambda_and_ell(sys, z, psi)
    mu_value = sys.mu_checked(z)
    a0 = float(psi @ np.asarray(sys.drift(z), dtype=float))
    return a0 + mu_value * chi_hat(ctx.params, ell_value / mu_value)


def _eval_point(
    ctx: PotentialContext, z: np.ndarray, psi: np.ndarray
) -> tuple[np.ndarray, np.ndarray, float]:
    """Feedback control, controlled velocity and H at one point."""
    sys = ctx.sys
    lam, ell_value = _lambda_and_ell(sys, z, psi)
    mu_value = sys.mu_checked(z)
    if ell_value < 1e-14 * mu_value:
        u = np.zeros(sys.control_dim)
    else:
        u = (sigma(ctx.params, ell_value / mu_value) / ell_value) * lam
    drift = np.asarray(sys.drift(z), dtype=float)
    z_dot = drift + np.asarray(sys.control_fields(z), dtype=float) @ u
    h_value = (
        float(psi @ drift)
        + mu_value * chi_hat(ctx.params, ell_value / mu_value)
        - float(sys.unmoderated_cost(z))
    )
    return u, z_dot, h_value


def _field(ctx: PotentialContext, z: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Right-hand side (zdot, psidot) of the canonical system."""
    sys = ctx.sys
    _, z_dot, _ = _eval_point(ctx, z, psi)
    n = sys.state_dim
    psi_dot = np.empty(n)
    use_cost_grad = sys.cost_grad is not None
    for i in range(n):
        delta = _FD_SCALE * (1.0 + abs(z[i]))
        zp = z.copy()
        zm = z.copy()
        zp[i] += delta
        zm[i] -= delta
        if use_cost_grad:
            diff = _chi_value(ctx, zp, psi) - _chi_value(ctx, zm, psi)
        else:
            diff = (
                _chi_value(ctx, zp, psi)
                - float(sys.unmoderated_cost(zp))
                - _chi_value(ctx, zm, psi)
                + float(sys.unmoderated_cost(zm))
            )
        psi_dot[i] = -diff / (2.0 * delta)
    if use_cost_grad:
        psi_dot += np.asarray(sys.cost_grad(z), dtype=float)
    return np.concatenate((z_dot, psi_dot))


def hamiltonian_field(
    ctx: PotentialContext, pt: CotangentPoint
) -> tuple[np.ndarray, np.ndarray]:
    """Canonical right-hand side (dH/dpsi, -dH/dz) at a cotangent point.

    The psi-derivative equals the controlled velocity at the feedback
    control; the z-derivative uses central differences (or the analytic
    cost gradient when available).
    """
    n = ctx.sys.state_dim
    y_dot = _field(ctx, pt.z, pt.psi)
    return y_dot[:n], y_dot[n:]


# ---------------------------------------------------------------------------
# Integration
# ---------------------------------------------------------------------------


def _rk4_step(
    ctx: PotentialContext, y: np.ndarray, h: float, n: int, k1: np.ndarray
) -> np.ndarray:
    k2 = _field(ctx, (y + 0.5 * h * k1)[:n], (y + 0.5 * h * k1)[n:])
    k3 = _field(ctx, (y + 0.5 * h * k2)[:n], (y + 0.5 * h * k2)[n:])
    k4 = _field(ctx, (y + h * k3)[:n], (y + h * k3)[n:])
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _hermite_eval(
    y0: np.ndarray, f0: np.ndarray, y1: np.ndarray, f1: np.ndarray, h: float, theta: float
) -> np.ndarray:
    t2 = theta * theta
    t3 = t2 * theta
    return (
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0
        + (t3 - 2.0 * t2 + theta) * h * f0
        + (-2.0 * t3 + 3.0 * t2) * y1
        + (t3 - t2) * h * f1
    )


def _hermite_deriv(
    y0: np.ndarray, f0: np.ndarray, y1: np.ndarray, f1: np.ndarray, h: float, theta: float
) -> np.ndarray:
    """Derivative of the cubic Hermite interpolant with respect to theta."""
    t2 = theta * theta
    return (
        (6.0 * t2 - 6.0 * theta) * y0
        + (3.0 * t2 - 4.0 * theta + 1.0) * h * f0
        + (-6.0 * t2 + 6.0 * theta) * y1
        + (3.0 * t2 - 2.0 * theta) * h * f1
    )


def _run(
    ctx: PotentialContext,
    start: CotangentPoint,
    step: float,
    t_final: Optional[float],
    event_abscissa: Optional[float],
    t_max: float,
) -> tuple[list, list, list, list, list, dict]:
    """Core fixed-step loop; stops at t_final or at the x = event crossing."""
    n = ctx.sys.state_dim
    y = np.concatenate((start.z, start.psi))
    t = 0.0
    ts, zs, psis, us, hs = [], [], [], [], []
    meta: dict = {"status": "ok"}

    u0, _, h0 = _eval_point(ctx, y[:n], y[n:])
    ts.append(t), zs.append(y[:n].copy()), psis.append(y[n:].copy())
    us.append(u0), hs.append(h0)

    if event_abscissa is not None and y[0] <= event_abscissa:
        raise InfeasibleError(
            f"start abscissa {y[0]} is not to the right of the target {event_abscissa}"
        )

    horizon = t_final if t_final is not None else t_max
    while t < horizon - 1e-15:
        h = min(step, horizon - t)
        try:
            k1 = _field(ctx, y[:n], y[n:])
            y_next = _rk4_step(ctx, y, h, n, k1)
        except InfeasibleError as exc:
            meta["status"] = "truncated"
            meta["error"] = str(exc)
            break
        if not np.all(np.isfinite(y_next)):
            raise IntegrationError(f"non-finite state at t = {t + h:.6g}")
        t_next = t + h

        if event_abscissa is not None and y_next[0] <= event_abscissa < y[0]:
            f1 = _field(ctx, y_next[:n], y_next[n:])
            # Linear interpolation seed, then Newton on the cubic Hermite model.
            theta = (y[0] - event_abscissa) / (y[0] - y_next[0])
            for _ in range(4):
                val = _hermite_eval(y, k1, y_next, f1, h, theta)[0] - event_abscissa
                der = _hermite_deriv(y, k1, y_next, f1, h, theta)[0]
                if der == 0.0:
                    break
                theta -= val / der
                theta = min(max(theta, 0.0), 1.0)
            y_ev = _hermite_eval(y, k1, y_next, f1, h, theta)
            t_ev = t + theta * h
            u_ev, _, h_ev = _eval_point(ctx, y_ev[:n], y_ev[n:])
            ts.append(t_ev), zs.append(y_ev[:n]), psis.append(y_ev[n:])
            us.append(u_ev), hs.append(h_ev)
            meta["event"] = "abscissa"
            return ts, zs, psis, us, hs, meta

        y = y_next
        t = t_next
        u_t, _, h_t = _eval_point(ctx, y[:n], y[n:])
        ts.append(t), zs.append(y[:n].copy()), psis.append(y[n:].copy())
        us.append(u_t), hs.append(h_t)

    if event_abscissa is not None and meta["status"] == "ok":
        raise InfeasibleError(
            f"no crossing of x = {event_abscissa} before t = {horizon:.6g}"
        )
    return ts, zs, psis, us, hs, meta


def _assemble(
    parts: tuple[list, list, list, list, list, dict], extra_meta: dict
) -> Trajectory:
    ts, zs, psis, us, hs, meta = parts
    meta.update(extra_meta)
    traj = Trajectory(
        t=np.asarray(ts),
        z=np.asarray(zs),
        psi=np.asarray(psis),
        u=np.asarray(us),
        H=np.asarray(hs),
        meta=meta,
    )
    traj.meta["h_drift"] = traj.h_drift
    return traj


def integrate(
    ctx: PotentialContext,
    start: CotangentPoint,
    t_final: float,
    step: float,
    h_drift_tol: Optional[float] = 1e-6,
    max_step_halvings: int = 6,
) -> Trajectory:
    """Integrate the canonical system for a fixed duration with RK4.

    Samples include the feedback control and the Hamiltonian.  When
    ``h_drift_tol`` is given, the run is repeated with a halved step until
    the observed conservation drift meets it (conservation is monitored,
    never enforced by projection).
    """
    if t_final <= 0.0 or step <= 0.0:
        raise DomainError("t_final and step must be positive")
    current = step
    for _ in range(max_step_halvings + 1):
        traj = _assemble(
            _run(ctx, start, current, t_final, None, t_max=t_final),
            {"step": current, "h_drift_tol": h_drift_tol},
        )
        if h_drift_tol is None or traj.h_drift <= h_drift_tol or traj.meta[
            "status"
        ] != "ok":
            return traj
        current *= 0.5
    raise ConvergenceError(
        f"Hamiltonian drift {traj.h_drift:.3e} still above {h_drift_tol:.3e} "
        f"after {max_step_halvings} step halvings"
    )


def integrate_to_abscissa(
    ctx: PotentialContext,
    start: CotangentPoint,
    x_stop: float,
    step: float,
    t_max: float = 100.0,
    h_drift_tol: Optional[float] = None,
    max_step_halvings: int = 6,
) -> Trajectory:
    """Integrate until the first component of the state crosses ``x_stop``.

    The crossing time and state are refined with one cubic Hermite pass on
    the bracketing step, so the final sample satisfies ``x = x_stop`` to
    interpolation accuracy.  As in :func:`integrate`, a drift target
    triggers step halving.
    """
    if step <= 0.0:
        raise DomainError("step must be positive")
    current = step
    for _ in range(max_step_halvings + 1):
        traj = _assemble(
            _run(ctx, start, current, None, x_stop, t_max),
            {"step": current, "h_drift_tol": h_drift_tol},
        )
        if h_drift_tol is None or traj.h_drift <= h_drift_tol or traj.meta[
            "status"
        ] != "ok":
            return traj
        current *= 0.5
    raise ConvergenceError(
        f"Hamiltonian drift {traj.h_drift:.3e} still above {h_drift_tol:.3e} "
        f"after {max_step_halvings} step halvings"
    )


# ---------------------------------------------------------------------------
# Shooting
# ---------------------------------------------------------------------------


def vertical_start(ctx: PotentialContext, x0: float, level: float) -> CotangentPoint:
    """Initial cotangent point for a vertical take-off at (x0, 0).

    The covector is vertical, ``psi(0) = (0, p2)`` with ``p2 > 0`` fixed by
    requiring ``H = level``; this is exact via the inverse of the reduced
    potential.  Raises :class:`InfeasibleError` when the level is out of
    range at x0.
    """
    z0 = np.array([x0, 0.0])
    try:
        r = chi_hat_inverse(ctx.params, phi_value(ctx, z0, level))
    except DomainError as exc:
        raise InfeasibleError(f"level {level} infeasible at x0 = {x0}: {exc}") from exc
    from .geometry import ell as _ell

    unit = _ell(ctx.sys, CotangentPoint(z0, np.array([0.0, 1.0])))
    if unit <= 0.0:
        raise InfeasibleError(f"degenerate control response at x0 = {x0}")
    psi2 = ctx.sys.mu_checked(z0) * r / unit
    if psi2 <= 0.0:
        raise InfeasibleError(
            f"vertical take-off needs a nonzero covector; level {level} gives "
            f"psi2 = {psi2} at x0 = {x0}"
        )
    return CotangentPoint(z0, np.array([0.0, psi2]))


def solve_free_time(
    problem: VerticalLaunchProblem, settings: SolverSettings = SolverSettings()
) -> Trajectory:
    """Shoot over the launch abscissa until the trajectory hits the target.

    Free-time solutions lie in the prescribed Hamiltonian level set (level 0
    for the standard problem), so the initial covector is eliminated and the
    height at the target abscissa is a scalar function of x0; a bracketed
    secant solve (bisection fallback) drives it to the target height.
    """
    from .numerics import RootProblem, find_root

    ctx = problem.ctx
    x_f, y_f = problem.target
    lo, hi = problem.x0_bracket

    # Pick the step once, by probing the drift at the bracket midpoint, so
    # the shooting residuals carry the same accuracy as the final answer.
    probe = integrate_to_abscissa(
        ctx,
        vertical_start(ctx, 0.5 * (lo + hi), problem.level),
        x_f,
        settings.step,
        t_max=settings.t_max,
        h_drift_tol=0.5 * settings.h_drift_tol,
        max_step_halvings=settings.max_step_halvings,
    )
    step_use = probe.meta["step"]

    cache: dict = {}

    def height_residual(x0: float) -> float:
        start = vertical_start(ctx, x0, problem.level)
        traj = integrate_to_abscissa(ctx, start, x_f, step_use, t_max=settings.t_max)
        if traj.meta["status"] != "ok":
            raise InfeasibleError(
                f"trajectory from x0 = {x0} truncated: {traj.meta.get('error')}"
            )
        cache["x0"] = x0
        cache["traj"] = traj
        return float(traj.z[-1, 1]) - y_f

    try:
        root = find_root(
            RootProblem(
                objective=height_residual,
                bracket=(lo, hi),
                rel_tol=1e-13,
                max_iter=settings.max_iter,
                f_tol=0.1 * settings.target_tol,
            )
        )
    except DomainError as exc:
        raise InfeasibleError(f"free-time shooting failed: {exc}") from exc

    traj = cache["traj"] if cache.get("x0") == root else None
    if traj is None:
        height_residual(root)
        traj = cache["traj"]
    y_err = abs(float(traj.z[-1, 1]) - y_f)
    if y_err > settings.target_tol:
        raise ConvergenceError(
            f"shooting stalled: |y(x_f) - y_f| = {y_err:.3e} > {settings.target_tol:.3e}"
        )
    if traj.h_drift > settings.h_drift_tol:
        raise ConvergenceError(
            f"Hamiltonian drift {traj.h_drift:.3e} exceeds {settings.h_drift_tol:.3e}; "
            "reduce the integration step"
        )
    traj.meta.update(
        {
            "x0": float(root),
            "t_f": float(traj.t[-1]),
            "level": problem.level,
            "y_error": y_err,
            "h_drift_tol": settings.h_drift_tol,
            "scenario_id": problem.scenario_id,
        }
    )
    return traj


def solve_fixed_time(
    problem: VerticalLaunchProblem,
    t_f: float,
    settings: SolverSettings = SolverSettings(),
    initial: Optional[tuple[float, float]] = None,
) -> Trajectory:
    """Two-parameter shooting for a target hit at a prescribed duration.

    Unknowns are the launch abscissa and the Hamiltonian level h (the
    returned trajectory satisfies ``H(0) = h``, not necessarily 0).  Damped
    Newton iteration with a forward-difference Jacobian on the residual
    ``(y(x_f) - y_f, t(x_f) - t_f)``; both components must fall below
    ``settings.fixed_time_tol``.
    """
    ctx = problem.ctx
    x_f, y_f = problem.target
    cache: dict = {}

    def residual(x0: float, h: float) -> np.ndarray:
        start = vertical_start(ctx, x0, h)
        traj = integrate_to_abscissa(
            ctx, start, x_f, settings.step, t_max=settings.t_max
        )
        if traj.meta["status"] != "ok":
            raise InfeasibleError(
                f"trajectory from (x0, h) = ({x0}, {h}) truncated"
            )
        cache["key"] = (x0, h)
        cache["traj"] = traj
        return np.array([float(traj.z[-1, 1]) - y_f, float(traj.t[-1]) - t_f])

    if initial is None:
        x0 = 0.5 * (problem.x0_bracket[0] + problem.x0_bracket[1])
        h = problem.level
    else:
        x0, h = initial

    r = residual(x0, h)
    for _ in range(settings.max_iter):
        if np.all(np.abs(r) <= settings.fixed_time_tol):
            break
        jac = np.empty((2, 2))
        dx = _FD_SCALE * (1.0 + abs(x0))
        dh = _FD_SCALE * (1.0 + abs(h))
        jac[:, 0] = (residual(x0 + dx, h) - r) / dx
        jac[:, 1] = (residual(x0, h + dh) - r) / dh
        try:
            delta = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError("singular Jacobian in fixed-time shooting") from exc
        scale = 1.0
        norm0 = float(np.linalg.norm(r))
        for _ in range(25):
            try:
                r_trial = residual(x0 + scale * delta[0], h + scale * delta[1])
            except InfeasibleError:
                scale *= 0.5
                continue
            if float(np.linalg.norm(r_trial)) < norm0 or scale < 1e-6:
                break
            scale *= 0.5
        else:
            raise ConvergenceError("fixed-time line search failed")
        x0 += scale * delta[0]
        h += scale * delta[1]
        r = r_trial
    else:
        raise ConvergenceError(
            f"fixed-time shooting did not converge: residual {r}"
        )

    traj = cache["traj"] if cache.get("key") == (x0, h) else None
    if traj is None:
        residual(x0, h)
        traj = cache["traj"]
    traj.meta.update(
        {
            "x0": float(x0),
            "t_f": float(traj.t[-1]),
            "level": float(h),
            "y_error": abs(float(traj.z[-1, 1]) - y_f),
            "t_error": abs(float(traj.t[-1]) - t_f),
            "h_drift_tol": settings.h_drift_tol,
            "scenario_id": problem.scenario_id,
        }
    )
    return traj


# ---------------------------------------------------------------------------
# Maximum-principle audit
# ---------------------------------------------------------------------------


def _unit_ball_grid(k: int, grid_n: int) -> np.ndarray:
    """Points of a uniform grid on [-1, 1]^k restricted to the unit ball."""
    if k == 1:
        return np.linspace(-1.0, 1.0, grid_n).reshape(-1, 1)
    if k == 2:
        axis = np.linspace(-1.0, 1.0, grid_n)
        xx, yy = np.meshgrid(axis, axis, indexing="ij")
        pts = np.column_stack((xx.ravel(), yy.ravel()))
        return pts[np.einsum("ij,ij->i", pts, pts) <= 1.0]
    raise DomainError(f"maximum-principle grid supports k <= 2, got k = {k}")


def verify_maximum_principle(
    ctx: PotentialContext, traj: Trajectory, grid_n: int = 201, tol: float = 1e-5
) -> dict:
    """Audit a trajectory against the pointwise control maximization.

    At every sample, ``H(psi(t), u(t))`` must dominate (up to ``tol``) the
    parametrized Hamiltonian over a ``grid_n x grid_n`` grid mapped onto the
    admissible ellipsoid.  Returns a report with the worst violation; never
    raises on violations.
    """
    params = ctx.params
    sys = ctx.sys
    v_grid = _unit_ball_grid(sys.control_dim, grid_n)
    q_grid = np.einsum("ij,ij->i", v_grid, v_grid)
    # Incentive depends on the control only through Q_z(u) = |v|^2.
    incentive_base = (1.0 - q_grid ** (params.p / 2.0)) ** params.alpha / (
        params.p * params.alpha
    )

    worst = -np.inf
    worst_t = 0.0
    for i in range(len(traj)):
        z = traj.z[i]
        psi = traj.psi[i]
        g = form_matrix(sys, z)
        ball_map = np.linalg.cholesky(np.linalg.inv(g))
        m = np.asarray(sys.control_fields(z), dtype=float)
        mu_value = sys.mu_checked(z)
        a0 = float(psi @ np.asarray(sys.drift(z), dtype=float))
        cost = float(sys.unmoderated_cost(z))
        # H over the grid: psi . (f + M S v) + mu * incentive(|v|^2) - cost.
        h_grid = (
            v_grid @ (ball_map.T @ (m.T @ psi))
            + mu_value * incentive_base
            + a0
            - cost
        )
        h_best = control_hamiltonian(
            ctx, CotangentPoint(z, psi), traj.u[i]
        )
        violation = float(np.max(h_grid)) - h_best
        if violation > worst:
            worst = violation
            worst_t = float(traj.t[i])
    return {
        "max_violation": float(worst),
        "argmax_time": worst_t,
        "samples": len(traj),
        "grid_points": int(len(v_grid)),
        "tol": tol,
        "passed": bool(worst <= tol),
    }
