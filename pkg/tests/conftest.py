from typing import Any, Dict

import pytest

from rtspectra.assembly.forms import FormAssembler
from rtspectra.assembly.grid import build_grid
from rtspectra.physics.equilibrium import FluidConfig, build_equilibrium
from rtspectra.spectral.fixed_point import solve_lambda

ELEMENTS = 32


def reference_physics() -> Dict[str, Any]:
    """P₋ = 2τ, P₊ = τ, g = 1: ρ̄₋ = e^{−y/2}, ρ̄₊ = 2e^{−y}, ⟦ρ̄⟧ = 1,
    |ξ|_c = √5."""
    return {
        "g": 1.0,
        "theta": 0.2,
        "mu_plus": 0.1,
        "mu_minus": 0.1,
        "zeta_plus": 0.1,
        "zeta_minus": 0.1,
        "h_minus": -1.0,
        "h_plus": 1.0,
        "pressure_plus": {"family": "affine", "a": 1.0, "b": 0.0},
        "pressure_minus": {"family": "affine", "a": 2.0, "b": 0.0},
        "rho_minus_at_interface": 1.0,
    }


@pytest.fixture
def physics_dict():
    return reference_physics()


@pytest.fixture(scope="session")
def fluid():
    return FluidConfig.from_dict(reference_physics())


@pytest.fixture(scope="session")
def profile(fluid):
    return build_equilibrium(fluid, ELEMENTS + 1)


@pytest.fixture(scope="session")
def grid(profile):
    return build_grid(profile, ELEMENTS)


@pytest.fixture(scope="session")
def assembler(profile, grid, fluid):
    return FormAssembler(profile, grid, fluid)


@pytest.fixture(scope="session")
def forms(assembler):
    return assembler.assemble((1.0, 0.0))


@pytest.fixture(scope="session")
def mode(forms, fluid, profile):
    result = solve_lambda(forms, fluid, profile)
    assert not result.is_stable
    return result
