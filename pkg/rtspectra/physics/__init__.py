from rtspectra.physics.equilibrium import (
    EquilibriumProfile,
    FluidConfig,
    build_equilibrium,
    interface_jump,
)
from rtspectra.physics.pressure import (
    AffineLaw,
    PolytropicLaw,
    PressureLaw,
    create_pressure_law,
    eval_pressure,
)

__all__ = [
    "AffineLaw",
    "EquilibriumProfile",
    "FluidConfig",
    "PolytropicLaw",
    "PressureLaw",
    "build_equilibrium",
    "create_pressure_law",
    "eval_pressure",
    "interface_jump",
]
