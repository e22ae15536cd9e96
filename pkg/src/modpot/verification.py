"""Self-verification checks and pinned regression scenarios.

Each check function returns a :class:`CheckResult`; ``run_checks`` drives
the ``fast`` and ``full`` suites used by the command-line ``verify``
subcommand, and the pytest acceptance suite asserts the same checks.

The pinned scenarios exercise every solution path the package provides:

* ``quadratic-base`` / ``quadratic-ke`` / ``quadratic-circle``: the planar
  interception problem under the boundary-calibrated quadratic cost (and
  its classic kinetic-energy relative), where trajectories are exact
  ellipse/circle segments with a closed-form launch point;
* ``log-risky`` / ``log-gentle``: reciprocal speed limit with the
  square-root incentive, where heights and times have logarithmic closed
  forms;
* ``elliptic-mid``: unit speed limit with the square-root incentive,
  closed forms in incomplete elliptic integrals.

Golden values (launch abscissa and flight time per scenario, and samples
of the feedback-response curves) were computed once by the mutually
cross-checking pipeline (ODE integration vs implicit quadrature vs closed
forms) and are pinned in ``data/golden.json``; checks recompute them and
report any regression.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from importlib import resources
from typing import Callable, Optional

import numpy as np

from .dogleg import (
    DoglegParams,
    brute_force_sigma,
    rho,
    rho_inverse,
    sigma,
    sigma_log_limit,
)
from .errors import ModpotError
from .potential import chi_hat, sigma_hat, tau, tau_inverse
from .projectile import (
    CostVariant,
    ProjectileScenario,
    RadiusProfile,
    build_context,
    ellipse_data,
    ellipse_height_time,
    ellipse_launch_point,
    ellipse_solution,
    height_quadrature,
    log_height_time,
    elliptic_height_time,
    quadratic_cost_launch_point,
    solve_launch_quadrature,
    speed_scale,
    time_quadrature,
    with_mu,
)
from .synthesis import (
    SolverSettings,
    Trajectory,
    VerticalLaunchProblem,
    integrate_to_abscissa,
    solve_free_time,
    verify_maximum_principle,
    vertical_start,
)

__all__ = [
    "CheckResult",
    "pinned_scenarios",
    "figure_grids",
    "load_golden",
    "regenerate_golden",
    "check_feedback_oracle",
    "check_identities",
    "check_conservation",
    "check_triangle",
    "check_launch_point",
    "check_log_penalty_homotopy",
    "check_maximum_principle",
    "check_figures",
    "run_checks",
]

TRIANGLE_TOL = 1e-5
H_DRIFT_TOL = 1e-6
NOETHER_TOL = 1e-8
PSI_NORM_TOL = 1e-7
MP_TOL = 1e-5
GOLDEN_TOL = 1e-6


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<24s} ({self.seconds:6.2f}s)  {self.detail}"


def _timed(name: str, body: Callable[[], str]) -> CheckResult:
    start = time.perf_counter()
    try:
        detail = body()
        passed = True
    except (AssertionError, ModpotError) as exc:
        detail = str(exc)
        passed = False
    return CheckResult(name, passed, detail, time.perf_counter() - start)


# ---------------------------------------------------------------------------
# Pinned scenarios and golden data
# ---------------------------------------------------------------------------

_HALF = DoglegParams(0.5, 2.0)
_QUAD = DoglegParams(1.0, 2.0)


def pinned_scenarios() -> dict[str, ProjectileScenario]:
    return {
        "quadratic-base": ProjectileScenario(
            c=0.5, mu_ratio=1.5, x_f=1.0, y_f=2.0, params=_QUAD,
            cost_variant=CostVariant.MI, scenario_id="quadratic-base",
        ),
        "quadratic-ke": ProjectileScenario(
            c=0.5, mu_ratio=1.5, x_f=1.0, y_f=2.0, params=_QUAD,
            cost_variant=CostVariant.KE, scenario_id="quadratic-ke",
        ),
        "quadratic-circle": ProjectileScenario(
            c=0.5, mu_ratio=2.0, x_f=1.0, y_f=2.0, params=_QUAD,
            cost_variant=CostVariant.MI, scenario_id="quadratic-circle",
        ),
        "log-risky": ProjectileScenario(
            c=2.0, mu_ratio=1.0, x_f=0.1, y_f=1.0, params=_HALF,
            radius_profile=RadiusProfile.RECIPROCAL, scenario_id="log-risky",
        ),
        "log-gentle": ProjectileScenario(
            c=2.0 / 3.0, mu_ratio=1.0 / math.sqrt(3.0), x_f=0.1, y_f=1.0,
            params=_HALF, radius_profile=RadiusProfile.RECIPROCAL,
            scenario_id="log-gentle",
        ),
        "elliptic-mid": ProjectileScenario(
            c=2.0, mu_ratio=1.0, x_f=0.5, y_f=1.0, params=_HALF,
            radius_profile=RadiusProfile.UNIT, scenario_id="elliptic-mid",
        ),
    }


def figure_grids() -> dict[str, list[ProjectileScenario]]:
    """Scenario grids for the qualitative figure reproductions."""
    fig5 = [
        ProjectileScenario(
            c=2.0, mu_ratio=m, x_f=0.1, y_f=1.0, params=_HALF,
            radius_profile=RadiusProfile.RECIPROCAL,
            scenario_id=f"fig5-m{m:g}",
        )
        for m in (0.05, 1.0, 1.95)
    ]
    fig6 = [
        ProjectileScenario(
            c=2.0, mu_ratio=m, x_f=0.5, y_f=1.0, params=_HALF,
            radius_profile=RadiusProfile.UNIT, scenario_id=f"fig6-m{m:g}",
        )
        for m in (0.05, 0.6, 1.0)
    ]
    fig1 = []
    for c in (0.5, 1.5):
        for x_f in (1.0, 3.0):
            mu_min = 1.0 + c / (2.0 * x_f * x_f)
            fig1.append(
                ProjectileScenario(
                    c=c, mu_ratio=mu_min, x_f=x_f, y_f=2.0, params=_QUAD,
                    cost_variant=CostVariant.MI,
                    scenario_id=f"fig1-mi-c{c:g}-xf{x_f:g}",
                )
            )
            fig1.append(
                ProjectileScenario(
                    c=c, mu_ratio=2.0, x_f=x_f, y_f=2.0, params=_QUAD,
                    cost_variant=CostVariant.MI,
                    scenario_id=f"fig1-circle-c{c:g}-xf{x_f:g}",
                )
            )
            fig1.append(
                ProjectileScenario(
                    c=c, mu_ratio=0.5 * (mu_min + 2.0), x_f=x_f, y_f=2.0,
                    params=_QUAD, cost_variant=CostVariant.KE,
                    scenario_id=f"fig1-ke-c{c:g}-xf{x_f:g}",
                )
            )
    return {"fig1": fig1, "fig5": fig5, "fig6": fig6}


def load_golden() -> dict:
    text = resources.files("modpot").joinpath("data/golden.json").read_text()
    return json.loads(text)


def solve_launch(scn: ProjectileScenario) -> float:
    """Launch abscissa by the cheapest exact route for the scenario."""
    if (scn.params.alpha, scn.params.p) == (1.0, 2.0) and (
        scn.radius_profile is RadiusProfile.UNIT
    ):
        return ellipse_launch_point(scn)
    return solve_launch_quadrature(scn)


def _pinned_trajectory(
    scn: ProjectileScenario, x0: float, step: float = 1e-3
) -> Trajectory:
    ctx = build_context(scn)
    start = vertical_start(ctx, x0, scn.level)
    traj = integrate_to_abscissa(
        ctx, start, scn.x_f, step, h_drift_tol=H_DRIFT_TOL, max_step_halvings=6
    )
    if traj.meta["status"] != "ok":
        raise ModpotError(f"{scn.scenario_id}: trajectory truncated")
    return traj


def regenerate_golden() -> dict:
    """Recompute all pinned values (maintainer tool; see data/golden.json)."""
    scenarios = {}
    entries = dict(pinned_scenarios())
    for group in figure_grids().values():
        for scn in group:
            entries[scn.scenario_id] = scn
    for sid, scn in entries.items():
        x0 = solve_launch(scn)
        scenarios[sid] = {
            "x0": x0,
            "t_f": time_quadrature(scn, scn.x_f, x0),
        }
    grid = [0.25 * k for k in range(0, 41)]
    response = {
        f"{alpha:g}": [rho_inverse(DoglegParams(alpha, 2.0), r) for r in grid]
        for alpha in (0.25, 0.5, 0.75, 0.99)
    }
    return {
        "scenarios": scenarios,
        "response_curves_p2": {"grid": grid, "curves": response},
    }


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------


def check_feedback_oracle(
    samples: int = 200, grid_n: int = 20001, seed: int = 2024
) -> CheckResult:
    """Closed-form optimal scaling vs brute-force grid argmax."""

    def body() -> str:
        rng = np.random.default_rng(seed)
        tol = 2.0 / (grid_n - 1)
        worst = 0.0
        for _ in range(samples):
            alpha = 1.0 - rng.uniform(0.0, 1.0)
            p = 1.0 + 4.0 * rng.uniform(0.0, 1.0)
            ell = 10.0 * rng.uniform(0.0, 1.0)
            if alpha == 1.0 and p == 1.0:
                continue
            params = DoglegParams(alpha, p)
            diff = abs(sigma(params, ell) - brute_force_sigma(params, ell, grid_n))
            worst = max(worst, diff)
        assert worst <= tol, f"worst |sigma - argmax| = {worst:.3e} > {tol:.3e}"
        return f"worst |sigma - grid argmax| = {worst:.2e} <= {tol:.1e} ({samples} draws)"

    return _timed("feedback-oracle", body)


def check_identities() -> CheckResult:
    """Reduced-function identities and closed-form vs general-path agreement."""

    def body() -> str:
        worst_comp = worst_feedback = worst_closed = 0.0
        param_grid = [
            DoglegParams(a, p)
            for a in (0.25, 0.5, 0.75, 0.9, 1.0)
            for p in (1.5, 2.0, 3.0)
        ]
        for params in param_grid:
            for s in np.arange(0.05, 1.0, 0.05):
                lhs = chi_hat(params, rho(params, float(s)))
                rhs = tau(params, 1.0 - float(s) ** params.p)
                worst_comp = max(worst_comp, abs(lhs - rhs))
            for r in (0.0, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0):
                lhs = sigma_hat(params, chi_hat(params, r))
                worst_feedback = max(worst_feedback, abs(lhs - sigma(params, r)))
        assert worst_comp <= 1e-10, f"composition identity off by {worst_comp:.3e}"
        assert worst_feedback <= 1e-9, f"feedback identity off by {worst_feedback:.3e}"

        # alpha * p = 1 closed forms against the explicit inversion path.
        for p in (1.5, 2.0, 3.0):
            params = DoglegParams(1.0 / p, p)
            q = params.q
            for r in (0.05, 0.3, 1.0, 2.5, 8.0):
                general_sigma = rho_inverse(params, r)
                worst_closed = max(worst_closed, abs(sigma(params, r) - general_sigma))
                s = general_sigma
                w = 1.0 - s**p
                general_chi = tau(params, w) if w > 0.0 else r
                worst_closed = max(worst_closed, abs(chi_hat(params, r) - general_chi))
                phi = chi_hat(params, r)
                general_shat = (1.0 - tau_inverse(params, phi)) ** (1.0 / p)
                worst_closed = max(
                    worst_closed, abs(sigma_hat(params, phi) - general_shat)
                )
        assert worst_closed <= 1e-10, f"closed forms off by {worst_closed:.3e}"

        # Saturation-edge continuity of the quadratic-family potential.
        for p in (1.5, 2.0, 3.0):
            params = DoglegParams(1.0, p)
            below = chi_hat(params, 1.0 - 1e-13)
            assert abs(chi_hat(params, 1.0) - 1.0) <= 1e-12
            assert abs(below - 1.0) <= 1e-12
        return (
            f"composition {worst_comp:.1e}, feedback {worst_feedback:.1e},"
            f" closed-form {worst_closed:.1e}"
        )

    return _timed("identities", body)


def check_log_penalty_homotopy() -> CheckResult:
    """Feedback scalings approach the log-penalty scaling as alpha drops."""

    def body() -> str:
        finals = []
        for ell in (0.1, 1.0, 10.0):
            target = sigma_log_limit(2.0, ell)
            diffs = [
                abs(sigma(DoglegParams(a, 2.0), ell) - target)
                for a in (0.5, 0.1, 0.01, 0.001)
            ]
            assert all(
                lo > hi for lo, hi in zip(diffs, diffs[1:])
            ), f"not monotone at ell = {ell}: {diffs}"
            assert diffs[-1] < 1e-2, f"gap {diffs[-1]:.3e} at alpha = 0.001"
            finals.append(diffs[-1])
        return f"gap at alpha=0.001: {max(finals):.2e} < 1e-02, monotone in alpha"

    return _timed("log-penalty-homotopy", body)


def check_conservation(step: float = 1e-3) -> CheckResult:
    """H conservation and the vertical-covector invariant along pinned runs."""

    def body() -> str:
        golden = load_golden()["scenarios"]
        details = []
        for sid in ("quadratic-base", "quadratic-ke", "log-risky", "elliptic-mid"):
            scn = pinned_scenarios()[sid]
            traj = _pinned_trajectory(scn, golden[sid]["x0"], step)
            drift = traj.h_drift
            noether = float(np.max(np.abs(traj.psi[:, 1] - traj.psi[0, 1])))
            assert drift <= H_DRIFT_TOL, f"{sid}: H drift {drift:.3e}"
            assert noether <= NOETHER_TOL, f"{sid}: vertical covector drift {noether:.3e}"
            details.append(f"{sid}: drift {drift:.1e}, noether {noether:.1e}")
        return "; ".join(details)

    return _timed("conservation", body)


def check_triangle() -> CheckResult:
    """ODE, quadrature and closed forms agree on height and flight time."""

    def body() -> str:
        golden = load_golden()["scenarios"]
        scns = pinned_scenarios()
        worst = 0.0
        worst_golden = 0.0
        for sid in (
            "quadratic-base",
            "quadratic-ke",
            "log-risky",
            "log-gentle",
            "elliptic-mid",
        ):
            scn = scns[sid]
            x0 = solve_launch(scn)
            worst_golden = max(worst_golden, abs(x0 - golden[sid]["x0"]))
            y_quad = height_quadrature(scn, scn.x_f, x0)
            t_quad = time_quadrature(scn, scn.x_f, x0)
            worst_golden = max(worst_golden, abs(t_quad - golden[sid]["t_f"]))
            if scn.params == _QUAD:
                y_closed, t_closed = ellipse_height_time(scn, scn.x_f, x0)
            elif scn.radius_profile is RadiusProfile.RECIPROCAL:
                base, t_closed = log_height_time(scn, scn.x_f, x0)
                y_closed = speed_scale(scn, x0) * base
            else:
                base, t_closed = elliptic_height_time(scn, scn.x_f, x0)
                y_closed = speed_scale(scn, x0) * base
            traj = _pinned_trajectory(scn, x0)
            y_ode = float(traj.z[-1, 1])
            t_ode = float(traj.t[-1])
            for pair in (
                (y_ode, y_quad),
                (y_closed, y_quad),
                (t_ode, t_quad),
                (t_closed, t_quad),
            ):
                worst = max(worst, abs(pair[0] - pair[1]))
        assert worst <= TRIANGLE_TOL, f"triangle disagreement {worst:.3e}"
        assert worst_golden <= GOLDEN_TOL, f"golden regression {worst_golden:.3e}"

        # Exact ellipse identity of the explicit quadratic-cost trajectory.
        scn = scns["quadratic-base"]
        x0 = golden["quadratic-base"]["x0"]
        data = ellipse_data(scn, x0)
        times = np.linspace(0.0, golden["quadratic-base"]["t_f"], 200)
        path = ellipse_solution(scn, times, x0)
        ident = path[:, 0] ** 2 / x0**2 + path[:, 1] ** 2 * data["zeta"] / (
            data["speed0"] ** 2 * x0**2
        )
        ellipse_dev = float(np.max(np.abs(ident - 1.0)))
        assert ellipse_dev <= 1e-12, f"ellipse identity off by {ellipse_dev:.3e}"
        return (
            f"max three-way disagreement {worst:.2e} <= {TRIANGLE_TOL:.0e};"
            f" ellipse identity {ellipse_dev:.1e}; golden drift {worst_golden:.1e}"
        )

    return _timed("triangle", body)


def check_launch_point() -> CheckResult:
    """Shooting vs closed-form launch point, monotonicity, circular limit."""

    def body() -> str:
        scn = pinned_scenarios()["quadratic-base"]
        formula = quadratic_cost_launch_point(scn.c, scn.mu_ratio, scn.x_f, scn.y_f)
        problem = VerticalLaunchProblem(
            ctx=build_context(scn),
            target=(scn.x_f, scn.y_f),
            x0_bracket=(1.05, 3.0),
            level=scn.level,
            scenario_id=scn.scenario_id,
        )
        traj = solve_free_time(problem, SolverSettings(step=1e-3))
        shoot_err = abs(traj.meta["x0"] - formula)
        assert shoot_err <= 1e-6, f"shooting vs formula: {shoot_err:.3e}"

        mu_min = 1.0 + scn.c / (2.0 * scn.x_f**2)
        mus = np.linspace(mu_min, 1.999, 10)
        x0s = [ellipse_launch_point(with_mu(scn, float(m))) for m in mus]
        assert all(
            a < b for a, b in zip(x0s, x0s[1:])
        ), "launch point not strictly increasing in mu"

        circle = pinned_scenarios()["quadratic-circle"]
        x0c = ellipse_launch_point(circle)
        ctx = build_context(circle)
        traj_c = integrate_to_abscissa(
            ctx,
            vertical_start(ctx, x0c, circle.level),
            circle.x_f,
            1e-3,
            h_drift_tol=H_DRIFT_TOL,
        )
        radius_dev = float(np.max(np.abs(np.hypot(traj_c.z[:, 0], traj_c.z[:, 1]) - x0c)))
        assert radius_dev <= 1e-8, f"mu = 2 path not circular: {radius_dev:.3e}"
        return (
            f"shooting-formula gap {shoot_err:.1e}; x0 strictly increasing over"
            f" 10 mu values; circle radius deviation {radius_dev:.1e}"
        )

    return _timed("launch-point", body)


def check_maximum_principle(grid_n: int = 201) -> CheckResult:
    """Pointwise control-maximization audit along pinned trajectories."""

    def body() -> str:
        golden = load_golden()["scenarios"]
        worst = -math.inf
        for sid in ("quadratic-base", "quadratic-ke", "log-risky", "elliptic-mid"):
            scn = pinned_scenarios()[sid]
            traj = _pinned_trajectory(scn, golden[sid]["x0"])
            report = verify_maximum_principle(
                build_context(scn), traj, grid_n=grid_n, tol=MP_TOL
            )
            assert report["passed"], f"{sid}: violation {report['max_violation']:.3e}"
            worst = max(worst, report["max_violation"])
        return f"max violation {worst:.2e} <= {MP_TOL:.0e} on 4 trajectories"

    return _timed("maximum-principle", body)


def _best_fit_ellipse_deviation(path: np.ndarray) -> float:
    """Max first-order distance from the best-fit origin-centered ellipse."""
    design = path**2
    coeffs, *_ = np.linalg.lstsq(design, np.ones(len(path)), rcond=None)
    residual = design @ coeffs - 1.0
    gradient = 2.0 * np.abs(path) * coeffs
    return float(np.max(np.abs(residual) / np.linalg.norm(gradient, axis=1)))


def check_figures() -> CheckResult:
    """Qualitative reproduction of the published trajectory families."""

    def body() -> str:
        golden = load_golden()["scenarios"]
        grids = figure_grids()
        details = []

        # Classic quadratic-cost solutions ride the full-moderation circles.
        worst_circle = 0.0
        for scn in grids["fig1"]:
            x0 = ellipse_launch_point(scn)
            worst_golden = abs(x0 - golden[scn.scenario_id]["x0"])
            assert worst_golden <= GOLDEN_TOL, f"{scn.scenario_id}: x0 regression"
            if scn.cost_variant is CostVariant.KE:
                radius = math.hypot(scn.x_f, scn.y_f)
                _, t_f = ellipse_height_time(scn, scn.x_f, x0)
                path = ellipse_solution(scn, np.linspace(0.0, t_f, 100), x0)
                dev = float(np.max(np.abs(np.hypot(path[:, 0], path[:, 1]) - radius)))
                worst_circle = max(worst_circle, dev)
        assert worst_circle <= 1e-9, f"ke paths off the circles by {worst_circle:.3e}"
        scn = pinned_scenarios()["quadratic-ke"]
        traj = _pinned_trajectory(scn, golden["quadratic-ke"]["x0"])
        ode_dev = float(
            np.max(np.abs(np.hypot(traj.z[:, 0], traj.z[:, 1]) - math.hypot(scn.x_f, scn.y_f)))
        )
        assert ode_dev <= 1e-6, f"ke ODE path off the circle by {ode_dev:.3e}"
        details.append(f"ke-on-circles {max(worst_circle, ode_dev):.1e}")

        # Reciprocal-radius family: moderation slows and verticalizes launch.
        slow_ratios = []
        x0s, tfs = [], []
        for scn in grids["fig5"]:
            x0 = solve_launch_quadrature(scn)
            assert abs(x0 - golden[scn.scenario_id]["x0"]) <= GOLDEN_TOL
            traj = _pinned_trajectory(scn, x0)
            speed = np.linalg.norm(traj.u, axis=1)
            assert np.all(np.diff(speed) > -1e-10), f"{scn.scenario_id}: speed not monotone"
            slow_ratios.append(float(speed[0] / speed[-1]))
            x0s.append(x0)
            tfs.append(float(traj.t[-1]))
        assert all(a > b for a, b in zip(slow_ratios, slow_ratios[1:])), (
            f"early-phase speed fraction not decreasing with moderation: {slow_ratios}"
        )
        assert all(a <= b + 1e-12 for a, b in zip(x0s, x0s[1:])), "x0 not monotone"
        assert all(a <= b + 1e-12 for a, b in zip(tfs, tfs[1:])), "t_f not monotone"
        details.append(f"slow-start ratios {'>'.join(f'{r:.2f}' for r in slow_ratios)}")

        # Unit-radius family: nearly, but not exactly, elliptical paths.
        devs = []
        x0s, tfs = [], []
        for scn in grids["fig6"]:
            x0 = solve_launch_quadrature(scn)
            assert abs(x0 - golden[scn.scenario_id]["x0"]) <= GOLDEN_TOL
            traj = _pinned_trajectory(scn, x0)
            dev = _best_fit_ellipse_deviation(traj.z)
            assert 1e-9 < dev < 0.02 * scn.y_f, f"{scn.scenario_id}: deviation {dev:.3e}"
            devs.append(dev)
            x0s.append(x0)
            tfs.append(float(traj.t[-1]))
        assert all(a <= b + 1e-12 for a, b in zip(x0s, x0s[1:])), "x0 not monotone"
        assert all(a <= b + 1e-12 for a, b in zip(tfs, tfs[1:])), "t_f not monotone"
        details.append(f"ellipse deviations {max(devs):.1e} < 2% of target height")
        return "; ".join(details)

    return _timed("figures", body)


def run_checks(level: str = "fast") -> list[CheckResult]:
    """Run the verification suite; ``fast`` is a quick smoke subset."""
    if level == "fast":
        return [
            check_feedback_oracle(samples=60, grid_n=4001),
            check_identities(),
            check_log_penalty_homotopy(),
        ]
    if level == "full":
        return [
            check_feedback_oracle(),
            check_identities(),
            check_log_penalty_homotopy(),
            check_conservation(),
            check_triangle(),
            check_launch_point(),
            check_maximum_principle(),
            check_figures(),
        ]
    raise ModpotError(f"unknown verification level {level!r}")
