"""Shared numerical kernels.

Bracketed scalar root finding (safeguarded Newton / secant with bisection
fallback), adaptive panel quadrature with an inverse-square-root endpoint
substitution, and incomplete elliptic integrals evaluated through Carlson
symmetric forms.  Everything here is pure and thread-safe.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import ConvergenceError, DomainError

__all__ = [
    "RootProblem",
    "find_root",
    "SingularEnd",
    "integrate_singular",
    "carlson_rf",
    "carlson_rd",
    "elliptic_f",
    "elliptic_e",
]


# ---------------------------------------------------------------------------
# Root finding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RootProblem:
    """A scalar root-finding problem on a sign-changing bracket.

    ``objective(lo)`` and ``objective(hi)`` must have opposite signs (or one
    of them must vanish).  ``rel_tol`` is a relative tolerance on the
    argument; ``f_tol`` optionally stops early once ``|objective(x)|`` drops
    below it, which is useful when the objective itself is expensive and
    noisy (e.g. a shooting residual).
    """

    objective: Callable[[float], float]
    bracket: tuple[float, float]
    rel_tol: float = 1e-12
    max_iter: int = 200
    fprime: Optional[Callable[[float], float]] = None
    f_tol: float = 0.0


def find_root(prob: RootProblem) -> float:
    """Solve ``objective(x) = 0`` inside the bracket.

    Newton steps (when ``fprime`` is given) or secant steps are accepted only
    while they stay inside the current sign-changing interval; otherwise the
    step falls back to bisection, so the returned value never leaves the
    original bracket and convergence is guaranteed for continuous objectives.
    """
    f = prob.objective
    lo, hi = prob.bracket
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
        raise DomainError(f"invalid bracket ({lo}, {hi})")
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise DomainError(
            f"no sign change on bracket ({lo}, {hi}): f(lo)={flo:.6g}, f(hi)={fhi:.6g}"
        )

    x, fx = (lo, flo) if abs(flo) <= abs(fhi) else (hi, fhi)
    x_prev, f_prev = (hi, fhi) if x == lo else (lo, flo)

    for _ in range(prob.max_iter):
        width = hi - lo
        if width <= prob.rel_tol * max(abs(lo), abs(hi)):
            break
        if prob.f_tol > 0.0 and abs(fx) <= prob.f_tol:
            return x

        candidate = None
        if prob.fprime is not None:
            d = prob.fprime(x)
            if d != 0.0 and math.isfinite(d):
                candidate = x - fx / d
        if candidate is None and f_prev != fx:
            candidate = x - fx * (x_prev - x) / (f_prev - fx)
        # Reject steps that leave the bracket or stall.
        if candidate is None or not (lo < candidate < hi):
            candidate = 0.5 * (lo + hi)

        f_cand = f(candidate)
        x_prev, f_prev = x, fx
        x, fx = candidate, f_cand
        if fx == 0.0:
            return x
        if flo * fx < 0.0:
            hi, fhi = x, fx
        else:
            lo, flo = x, fx
        # Newton/secant approach from one side leaves the bracket width
        # stale; a stagnating iterate is the second convergence signal.
        if abs(x - x_prev) <= prob.rel_tol * max(abs(x), 1e-300):
            break
    else:
        raise ConvergenceError(
            f"root solve did not converge in {prob.max_iter} iterations "
            f"(bracket width {hi - lo:.3e})"
        )
    return min(max(x, lo), hi)


# ---------------------------------------------------------------------------
# Adaptive quadrature (Gauss-Kronrod 7-15 panels)
# ---------------------------------------------------------------------------

# Standard 15-point Kronrod abscissae/weights on [-1, 1] and the embedded
# 7-point Gauss weights.  Nodes are strictly interior, so integrands with a
# removable 0/0 at a panel endpoint are never evaluated there.
_XGK = (
    0.9914553711208126,
    0.9491079123427585,
    0.8648644233597691,
    0.7415311855993944,
    0.5860872354676911,
    0.4058451513773972,
    0.2077849550078985,
    0.0,
)
_WGK = (
    0.0229353220105292,
    0.0630920926299786,
    0.1047900103222502,
    0.1406532597155259,
    0.1690047266392679,
    0.1903505780647854,
    0.2044329400752989,
    0.2094821410847278,
)
_WG = (
    0.1294849661688697,
    0.2797053914892767,
    0.3818300505051189,
    0.4179591836734694,
)


class SingularEnd(enum.Enum):
    """Which endpoint of the integration interval carries an (at worst)
    inverse-square-root singularity."""

    LOWER = "lower"
    UPPER = "upper"
    NONE = "none"


def _kronrod_panel(f: Callable[[float], float], a: float, b: float) -> tuple[float, float]:
    """Return (15-point Kronrod value, |Kronrod - Gauss|) on [a, b]."""
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fc = f(center)
    res_k = _WGK[7] * fc
    res_g = _WG[3] * fc
    for j in range(7):
        x = half * _XGK[j]
        fsum = f(center - x) + f(center + x)
        res_k += _WGK[j] * fsum
        if j % 2 == 1:
            res_g += _WG[j // 2] * fsum
    value = res_k * half
    # |K - G| plus a roundoff floor for the 15-term weighted sum.
    est = abs(res_k - res_g) * half + 16.0 * 2.220446049250313e-16 * abs(value)
    return value, est


def _adaptive(
    f: Callable[[float], float],
    a: float,
    b: float,
    abs_tol: float,
    max_depth: int,
) -> tuple[float, float]:
    total_width = b - a
    v0, e0 = _kronrod_panel(f, a, b)
    stack = [(a, b, 0, v0, e0)]
    value = 0.0
    err = 0.0
    while stack:
        pa, pb, depth, pv, pe = stack.pop()
        if not math.isfinite(pv):
            raise DomainError(f"non-finite integrand on panel ({pa:.6g}, {pb:.6g})")
        width = pb - pa
        if pe <= abs_tol * width / total_width or pe <= 1e-3 * abs_tol:
            value += pv
            err += pe
            continue
        if depth >= max_depth:
            raise ConvergenceError(
                f"quadrature did not converge after depth {max_depth} on "
                f"panel ({pa:.6g}, {pb:.6g}); last panel error {pe:.3e}"
            )
        mid = 0.5 * (pa + pb)
        v1, e1 = _kronrod_panel(f, pa, mid)
        v2, e2 = _kronrod_panel(f, mid, pb)
        # A split that fails to shrink the combined estimate on an already
        # fine panel means the integrand is resolution-limited there
        # (roundoff noise in the integrand); accept and report the estimate
        # instead of recursing toward underflow.
        if e1 + e2 >= 0.9 * pe and width <= 1e-5 * total_width:
            value += v1 + v2
            err += e1 + e2
            continue
        stack.append((pa, mid, depth + 1, v1, e1))
        stack.append((mid, pb, depth + 1, v2, e2))
    return value, err


def integrate_singular(
    f: Callable[[float], float],
    a: float,
    b: float,
    singular_end: SingularEnd = SingularEnd.NONE,
    abs_tol: float = 1e-10,
    max_depth: int = 40,
) -> tuple[float, float]:
    """Integrate ``f`` over [a, b], returning (value, error estimate).

    When ``singular_end`` flags an endpoint, the substitution ``x = end -/+
    u**2`` is applied first; an inverse-square-root blow-up of ``f`` at that
    endpoint then becomes a bounded integrand, and plain adaptive
    Gauss-Kronrod panels recover full accuracy.
    """
    if b < a:
        raise DomainError(f"reversed interval ({a}, {b})")
    if b == a:
        return 0.0, 0.0
    if singular_end is SingularEnd.NONE:
        return _adaptive(f, a, b, abs_tol, max_depth)
    span = math.sqrt(b - a)
    if singular_end is SingularEnd.UPPER:
        g = lambda u: 2.0 * u * f(b - u * u)
    else:
        g = lambda u: 2.0 * u * f(a + u * u)
    return _adaptive(g, 0.0, span, abs_tol, max_depth)


# ---------------------------------------------------------------------------
# Elliptic integrals via Carlson symmetric forms
# ---------------------------------------------------------------------------

_CARLSON_ERRTOL_RF = 0.0025  # relative series error ~ errtol**6 ~ 2e-16
_CARLSON_ERRTOL_RD = 0.0015
_CARLSON_MAX_ITER = 200


def carlson_rf(x: float, y: float, z: float) -> float:
    """Carlson's symmetric integral R_F(x, y, z) by duplication.

    Arguments must be nonnegative with at most one of them zero.
    """
    if min(x, y, z) < 0.0 or (x + y) == 0.0 or (y + z) == 0.0 or (z + x) == 0.0:
        raise DomainError(f"carlson_rf outside domain: ({x}, {y}, {z})")
    for _ in range(_CARLSON_MAX_ITER):
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        alamb = sx * (sy + sz) + sy * sz
        x = 0.25 * (x + alamb)
        y = 0.25 * (y + alamb)
        z = 0.25 * (z + alamb)
        ave = (x + y + z) / 3.0
        delx = (ave - x) / ave
        dely = (ave - y) / ave
        delz = (ave - z) / ave
        if max(abs(delx), abs(dely), abs(delz)) < _CARLSON_ERRTOL_RF:
            break
    else:
        raise ConvergenceError("carlson_rf duplication failed to converge")
    e2 = delx * dely - delz * delz
    e3 = delx * dely * delz
    return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / math.sqrt(ave)


def carlson_rd(x: float, y: float, z: float) -> float:
    """Carlson's symmetric integral R_D(x, y, z) by duplication.

    Requires x, y >= 0 with x + y > 0, and z > 0.
    """
    if min(x, y) < 0.0 or (x + y) == 0.0 or z <= 0.0:
        raise DomainError(f"carlson_rd outside domain: ({x}, {y}, {z})")
    total = 0.0
    fac = 1.0
    for _ in range(_CARLSON_MAX_ITER):
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        alamb = sx * (sy + sz) + sy * sz
        total += fac / (sz * (z + alamb))
        fac *= 0.25
        x = 0.25 * (x + alamb)
        y = 0.25 * (y + alamb)
        z = 0.25 * (z + alamb)
        ave = 0.2 * (x + y + 3.0 * z)
        delx = (ave - x) / ave
        dely = (ave - y) / ave
        delz = (ave - z) / ave
        if max(abs(delx), abs(dely), abs(delz)) < _CARLSON_ERRTOL_RD:
            break
    else:
        raise ConvergenceError("carlson_rd duplication failed to converge")
    ea = delx * dely
    eb = delz * delz
    ec = ea - eb
    ed = ea - 6.0 * eb
    ee = ed + ec + ec
    c1, c2, c3, c4 = 3.0 / 14.0, 1.0 / 6.0, 9.0 / 22.0, 3.0 / 26.0
    series = 1.0 + ed * (-c1 + 0.25 * c3 * ed - 1.5 * c4 * delz * ec) + delz * (
        c2 * ee + delz * (-c3 * ec + delz * c4 * ea)
    )
    return 3.0 * total + fac * series / (ave * math.sqrt(ave))


def _reduce_convention(m: float, convention: str) -> float:
    if convention == "parameter":
        return m
    if convention == "modulus":
        return m * m
    raise DomainError(f"unknown elliptic convention {convention!r}")


def elliptic_f(phi_angle: float, m: float, convention: str = "parameter") -> float:
    """Incomplete elliptic integral of the first kind.

    Under the default ``parameter`` convention this is
    ``F(phi | m) = integral_0^phi dt / sqrt(1 - m sin^2 t)``;
    the ``modulus`` convention squares the second argument first
    (``m_effective = m**2``).  Negative parameters are fully supported.
    Angles are restricted to [0, pi/2].
    """
    m = _reduce_convention(m, convention)
    if not 0.0 <= phi_angle <= math.pi / 2.0 + 1e-12:
        raise DomainError(f"angle {phi_angle} outside [0, pi/2]")
    s = math.sin(phi_angle)
    c2 = 1.0 - s * s
    rad = 1.0 - m * s * s
    if rad <= 0.0:
        raise DomainError(f"1 - m*sin^2(phi) = {rad:.3e} <= 0")
    return s * carlson_rf(c2, rad, 1.0)


def elliptic_e(phi_angle: float, m: float, convention: str = "parameter") -> float:
    """Incomplete elliptic integral of the second kind.

    ``E(phi | m) = integral_0^phi sqrt(1 - m sin^2 t) dt`` under the
    ``parameter`` convention; see :func:`elliptic_f` for the alternative.
    """
    m = _reduce_convention(m, convention)
    if not 0.0 <= phi_angle <= math.pi / 2.0 + 1e-12:
        raise DomainError(f"angle {phi_angle} outside [0, pi/2]")
    s = math.sin(phi_angle)
    c2 = 1.0 - s * s
    rad = 1.0 - m * s * s
    if rad <= 0.0:
        raise DomainError(f"1 - m*sin^2(phi) = {rad:.3e} <= 0")
    s3 = s * s * s
    return s * carlson_rf(c2, rad, 1.0) - (m / 3.0) * s3 * carlson_rd(c2, rad, 1.0)
