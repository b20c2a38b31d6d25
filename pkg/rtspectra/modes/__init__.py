from rtspectra.modes.cutoff import (
    CutoffField,
    HorizontalQuadrature,
    chi_hat_derivatives,
    chi_n,
    chi_n_derivatives,
    cutoff_norms,
    cutoff_sweep,
    extrapolate_limit,
    limit_ratio,
    norm_limits,
    oscillatory_mean,
    vertical_moments,
)
from rtspectra.modes.inequality import (
    GrowthTrial,
    InequalityReport,
    growth_inequality_check,
    random_trials,
    smooth_trial_vector,
)
from rtspectra.modes.synthesis import (
    GrowingMode,
    build_real_mode,
    complex_synthesis,
    growing_mode_from_profiles,
    synthesis_imaginary_residual,
    synthesis_mismatch,
)

__all__ = [
    "CutoffField",
    "GrowingMode",
    "GrowthTrial",
    "HorizontalQuadrature",
    "InequalityReport",
    "build_real_mode",
    "chi_hat_derivatives",
    "chi_n",
    "chi_n_derivatives",
    "complex_synthesis",
    "cutoff_norms",
    "cutoff_sweep",
    "extrapolate_limit",
    "growing_mode_from_profiles",
    "growth_inequality_check",
    "limit_ratio",
    "norm_limits",
    "oscillatory_mean",
    "random_trials",
    "smooth_trial_vector",
    "synthesis_imaginary_residual",
    "synthesis_mismatch",
    "vertical_moments",
]
