"""Shared builders and independent oracles for the test suite.

Oracles here deliberately avoid the production code paths they check:
plain bisection instead of the safeguarded Newton solver, and brute-force
control grids instead of the closed-form feedback laws.
"""

from __future__ import annotations

import numpy as np

from modpot import AffineControlSystem, CotangentPoint, PotentialContext
from modpot.potential import control_hamiltonian


def bisect_root(f, lo: float, hi: float, tol: float = 1e-13, max_iter: int = 200) -> float:
    """Plain bisection; requires a sign change on [lo, hi]."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    assert flo * fhi < 0.0, "bisection oracle needs a sign change"
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0.0 or hi - lo < tol:
            return mid
        if flo * fmid < 0.0:
            hi, fhi = mid, fmid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def constant_matrix_system(
    control_fields: np.ndarray,
    form: np.ndarray,
    drift: np.ndarray | None = None,
    mu: float = 1.0,
    cost: float = 1.0,
) -> AffineControlSystem:
    """System with state-independent data (the simplest valid instance)."""
    m = np.asarray(control_fields, dtype=float)
    g = np.asarray(form, dtype=float)
    n, k = m.shape
    f = np.zeros(n) if drift is None else np.asarray(drift, dtype=float)
    return AffineControlSystem(
        state_dim=n,
        control_dim=k,
        drift=lambda z: f,
        control_fields=lambda z: m,
        form=lambda z: g,
        mu=lambda z: mu,
        unmoderated_cost=lambda z: cost,
    )


def random_planar_system(rng: np.random.Generator) -> AffineControlSystem:
    """Random well-conditioned 2-state, 2-control affine system."""
    a = rng.normal(size=(2, 2))
    g = a @ a.T + 0.5 * np.eye(2)
    m = rng.normal(size=(2, 2)) + 2.0 * np.eye(2)
    f = rng.normal(size=2)
    mu = float(rng.uniform(0.5, 2.0))
    cost = float(rng.uniform(0.5, 3.0))
    return constant_matrix_system(m, g, drift=f, mu=mu, cost=cost)


def grid_hamiltonian_max(
    ctx: PotentialContext, pt: CotangentPoint, grid_n: int = 201, refine_rounds: int = 2
) -> float:
    """Brute-force maximum of the parametrized Hamiltonian over admissible u.

    A uniform grid on the unit ball of the control form (k = 2), followed by
    local sub-grid refinement around the argmax so the discretization
    deficit drops below 1e-6.
    """
    g = np.asarray(ctx.sys.form(pt.z), dtype=float)
    ball_map = np.linalg.cholesky(np.linalg.inv(g))

    def h_of_v(v: np.ndarray) -> np.ndarray:
        u = v @ ball_map.T
        return np.array(
            [control_hamiltonian(ctx, pt, u_row) for u_row in u]
        )

    axis = np.linspace(-1.0, 1.0, grid_n)
    xx, yy = np.meshgrid(axis, axis, indexing="ij")
    pts = np.column_stack((xx.ravel(), yy.ravel()))
    pts = pts[np.einsum("ij,ij->i", pts, pts) <= 1.0]
    values = h_of_v(pts)
    best = pts[int(np.argmax(values))]
    best_val = float(np.max(values))

    spacing = axis[1] - axis[0]
    for _ in range(refine_rounds):
        local = np.linspace(-spacing, spacing, 41)
        lx, ly = np.meshgrid(local, local, indexing="ij")
        cand = best + np.column_stack((lx.ravel(), ly.ravel()))
        cand = cand[np.einsum("ij,ij->i", cand, cand) <= 1.0]
        if len(cand) == 0:
            break
        vals = h_of_v(cand)
        idx = int(np.argmax(vals))
        if vals[idx] > best_val:
            best_val = float(vals[idx])
            best = cand[idx]
        spacing = local[1] - local[0]
    return best_val
