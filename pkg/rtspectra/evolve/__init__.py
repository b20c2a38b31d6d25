from rtspectra.evolve.integrator import (
    EvolutionState,
    GrowthFit,
    TrapezoidalIntegrator,
    convergence_ratio,
    eigen_step_error,
    energy_balance_residual,
    fit_rate,
    horizon_for_amplification,
    j_norm,
    measure_growth,
    random_state,
    step,
)

__all__ = [
    "EvolutionState",
    "GrowthFit",
    "TrapezoidalIntegrator",
    "convergence_ratio",
    "eigen_step_error",
    "energy_balance_residual",
    "fit_rate",
    "horizon_for_amplification",
    "j_norm",
    "measure_growth",
    "random_state",
    "step",
]
