"""Moderated optimal control with bounded control regions.

Feedback laws and moderation potentials for a two-parameter family of
control incentives on affine systems with ellipsoidal admissible control
regions, a canonical-Hamiltonian synthesis solver, and the vertical
take-off interception benchmark with three mutually cross-checking
solution paths (ODE integration, implicit quadrature, closed forms).
"""

from .dogleg import (
    DoglegParams,
    brute_force_sigma,
    incentive_value,
    rho,
    rho_inverse,
    sigma,
    sigma_log_limit,
)
from .errors import (
    ConfigurationError,
    ConvergenceError,
    DomainError,
    InfeasibleError,
    IntegrationError,
    ModpotError,
)
from .geometry import (
    AffineControlSystem,
    CotangentPoint,
    ell,
    lambda_map,
    optimal_control,
    vector_field,
)
from .potential import (
    PotentialContext,
    chi,
    chi_hat,
    chi_hat_inverse,
    control_hamiltonian,
    hamiltonian,
    phi_value,
    sigma_hat,
    tau,
    tau_inverse,
)
from .projectile import (
    CostVariant,
    ProjectileScenario,
    RadiusProfile,
    build_context,
    build_system,
)
from .synthesis import (
    SolverSettings,
    Trajectory,
    VerticalLaunchProblem,
    hamiltonian_field,
    integrate,
    integrate_to_abscissa,
    solve_fixed_time,
    solve_free_time,
    verify_maximum_principle,
    vertical_start,
)

__version__ = "0.1.0"

__all__ = [
    "AffineControlSystem",
    "ConfigurationError",
    "ConvergenceError",
    "CostVariant",
    "CotangentPoint",
    "DoglegParams",
    "DomainError",
    "InfeasibleError",
    "IntegrationError",
    "ModpotError",
    "PotentialContext",
    "ProjectileScenario",
    "RadiusProfile",
    "SolverSettings",
    "Trajectory",
    "VerticalLaunchProblem",
    "brute_force_sigma",
    "build_context",
    "build_system",
    "chi",
    "chi_hat",
    "chi_hat_inverse",
    "control_hamiltonian",
    "ell",
    "hamiltonian",
    "hamiltonian_field",
    "incentive_value",
    "integrate",
    "integrate_to_abscissa",
    "lambda_map",
    "optimal_control",
    "phi_value",
    "rho",
    "rho_inverse",
    "sigma",
    "sigma_hat",
    "sigma_log_limit",
    "solve_fixed_time",
    "solve_free_time",
    "tau",
    "tau_inverse",
    "vector_field",
    "verify_maximum_principle",
    "vertical_start",
]
