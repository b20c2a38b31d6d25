from rtspectra.assembly.forms import (
    FormAssembler,
    FormSet,
    assemble_forms,
    e_upper_bound,
    interface_energy,
    kinetic_functional,
    potential_functional,
    quadratic,
    state_matrices,
    viscous_functional,
)
from rtspectra.assembly.grid import VerticalGrid, build_grid, trace_at_interface

__all__ = [
    "FormAssembler",
    "FormSet",
    "VerticalGrid",
    "assemble_forms",
    "build_grid",
    "e_upper_bound",
    "interface_energy",
    "kinetic_functional",
    "potential_functional",
    "quadratic",
    "state_matrices",
    "trace_at_interface",
    "viscous_functional",
]
