"""Scenario files and trajectory output.

Scenario files are plain ``key = value`` text with ``#`` comments.  The
schema is versioned; unknown keys are rejected so that pinned regression
scenarios cannot silently drift.

Recognized keys (schema_version 1):

    schema_version   required, must be 1
    id               optional scenario identifier (string)
    c                defense strength, positive
    mu_ratio         moderation strength over radius, positive
    x_f, y_f         target coordinates, positive
    radius_profile   "reciprocal" (r = 1/x) or "unit" (r = 1)
    alpha, p         incentive shape parameters
    h                Hamiltonian level offset (default 0)
    cost_variant     "general", "mi" or "ke"
    x0_min, x0_max   optional launch-abscissa bracket hints

Trajectory CSV columns are ``t,x,y,psi1,psi2,u1,u2,H`` with 17 significant
digits, so output is bit-stable across runs for identical configuration.
A JSON sidecar carries the solve summary.
"""

from __future__ import annotations

import json
from pathlib import Path

from .dogleg import DoglegParams
from .errors import DomainError
from .projectile import CostVariant, ProjectileScenario, RadiusProfile
from .synthesis import Trajectory

__all__ = [
    "SCHEMA_VERSION",
    "parse_scenario",
    "read_scenario",
    "scenario_to_text",
    "write_trajectory_csv",
    "summary_dict",
    "write_summary_json",
]

SCHEMA_VERSION = 1

_REQUIRED = ("c", "mu_ratio", "x_f", "y_f")
_KNOWN = {
    "schema_version",
    "id",
    "c",
    "mu_ratio",
    "x_f",
    "y_f",
    "radius_profile",
    "alpha",
    "p",
    "h",
    "cost_variant",
    "x0_min",
    "x0_max",
}

_FMT = "%.17g"


def parse_scenario(text: str, source: str = "<string>") -> ProjectileScenario:
    """Parse scenario text, rejecting unknown keys and bad values."""
    fields: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KNOWN:
            raise DomainError(f"{source}:{lineno}: unknown key {key!r}")
        if key in fields:
            raise DomainError(f"{source}:{lineno}: duplicate key {key!r}")
        fields[key] = value

    version = fields.pop("schema_version", None)
    if version is None or int(version) != SCHEMA_VERSION:
        raise DomainError(
            f"{source}: schema_version must be {SCHEMA_VERSION}, got {version!r}"
        )
    missing = [key for key in _REQUIRED if key not in fields]
    if missing:
        raise DomainError(f"{source}: missing required keys {missing}")

    def fget(key: str, default: float | None = None) -> float | None:
        if key not in fields:
            return default
        return float(fields[key])

    try:
        radius = RadiusProfile(fields.get("radius_profile", "unit"))
        variant = CostVariant(fields.get("cost_variant", "general"))
    except ValueError as exc:
        raise DomainError(f"{source}: {exc}") from exc

    return ProjectileScenario(
        c=fget("c"),
        mu_ratio=fget("mu_ratio"),
        x_f=fget("x_f"),
        y_f=fget("y_f"),
        radius_profile=radius,
        params=DoglegParams(fget("alpha", 0.5), fget("p", 2.0)),
        h=fget("h", 0.0),
        cost_variant=variant,
        scenario_id=fields.get("id", ""),
        x0_min=fget("x0_min"),
        x0_max=fget("x0_max"),
    )


def read_scenario(path: str | Path) -> ProjectileScenario:
    path = Path(path)
    return parse_scenario(path.read_text(), source=str(path))


def scenario_to_text(scn: ProjectileScenario) -> str:
    lines = [f"schema_version = {SCHEMA_VERSION}"]
    if scn.scenario_id:
        lines.append(f"id = {scn.scenario_id}")
    lines += [
        f"c = {_FMT % scn.c}",
        f"mu_ratio = {_FMT % scn.mu_ratio}",
        f"x_f = {_FMT % scn.x_f}",
        f"y_f = {_FMT % scn.y_f}",
        f"radius_profile = {scn.radius_profile.value}",
        f"alpha = {_FMT % scn.params.alpha}",
        f"p = {_FMT % scn.params.p}",
        f"h = {_FMT % scn.h}",
        f"cost_variant = {scn.cost_variant.value}",
    ]
    if scn.x0_min is not None:
        lines.append(f"x0_min = {_FMT % scn.x0_min}")
    if scn.x0_max is not None:
        lines.append(f"x0_max = {_FMT % scn.x0_max}")
    return "\n".join(lines) + "\n"


def write_trajectory_csv(traj: Trajectory, path: str | Path) -> None:
    """Write samples as t,x,y,psi1,psi2,u1,u2,H rows (17 significant digits)."""
    path = Path(path)
    rows = ["t,x,y,psi1,psi2,u1,u2,H"]
    for i in range(len(traj)):
        cells = (
            traj.t[i],
            traj.z[i, 0],
            traj.z[i, 1],
            traj.psi[i, 0],
            traj.psi[i, 1],
            traj.u[i, 0],
            traj.u[i, 1],
            traj.H[i],
        )
        rows.append(",".join(_FMT % c for c in cells))
    path.write_text("\n".join(rows) + "\n")


def summary_dict(traj: Trajectory, mp_report: dict | None = None) -> dict:
    """Solve summary for the JSON sidecar."""
    meta = traj.meta
    summary = {
        "scenario_id": meta.get("scenario_id", ""),
        "status": meta.get("status", "ok"),
        "x0": meta.get("x0"),
        "t_f": meta.get("t_f", float(traj.t[-1])),
        "h": meta.get("level"),
        "h_drift": float(traj.h_drift),
        "mp_max_violation": mp_report["max_violation"] if mp_report else None,
        "y_error": meta.get("y_error"),
        "step": meta.get("step"),
        "samples": len(traj),
    }
    return summary


def write_summary_json(summary: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
