from rtspectra.spectral.alpha import alpha, min_dissipation, rayleigh_quotient
from rtspectra.spectral.fixed_point import (
    DEFAULT_TOL,
    PositivityWitness,
    instability_window,
    lambda_upper_bound,
    positivity_witness,
    solve_lambda,
)
from rtspectra.spectral.residuals import (
    EulerLagrangeResidual,
    energy_identity_residual,
    euler_lagrange_residual,
)
from rtspectra.spectral.solutions import (
    AlphaResult,
    ModeSolution,
    SolveResult,
    Stable,
)

__all__ = [
    "DEFAULT_TOL",
    "AlphaResult",
    "EulerLagrangeResidual",
    "ModeSolution",
    "PositivityWitness",
    "SolveResult",
    "Stable",
    "alpha",
    "energy_identity_residual",
    "euler_lagrange_residual",
    "instability_window",
    "lambda_upper_bound",
    "min_dissipation",
    "positivity_witness",
    "rayleigh_quotient",
    "solve_lambda",
]
