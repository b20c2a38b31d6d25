import math

import numpy as np
import pytest

from rtspectra.errors import ConfigurationError, DomainError
from rtspectra.physics.equilibrium import (
    FluidConfig,
    build_equilibrium,
    interface_jump,
    match_interface_density,
)
from rtspectra.physics.pressure import (
    AffineLaw,
    PolytropicLaw,
    create_pressure_law,
    eval_pressure,
)


def _fluid(physics, **overrides):
    d = dict(physics)
    d.update(overrides)
    return FluidConfig.from_dict(d)


def test_create_pressure_law_from_dict_and_name():
    law = create_pressure_law({"family": "polytropic", "K": 2.0, "gamma": 1.4})
    assert isinstance(law, PolytropicLaw)
    assert law.K == 2.0 and law.gamma == 1.4
    assert isinstance(create_pressure_law("affine"), AffineLaw)
    assert law.to_dict() == {"family": "polytropic", "K": 2.0, "gamma": 1.4}


def test_create_pressure_law_rejects_unknown_family():
    with pytest.raises(ConfigurationError, match="unknown pressure family"):
        create_pressure_law({"family": "isothermal"})


def test_pressure_law_validates_parameters():
    with pytest.raises(ConfigurationError):
        PolytropicLaw(K=1.0, gamma=0.5)
    with pytest.raises(ConfigurationError):
        AffineLaw(a=-1.0)


def test_eval_pressure_rejects_vacuum():
    with pytest.raises(DomainError):
        eval_pressure(AffineLaw(a=1.0), np.array([1.0, 0.0]))


def test_eval_pressure_scalar_and_array():
    p, dp = eval_pressure(PolytropicLaw(K=1.0, gamma=2.0), 3.0)
    assert p == pytest.approx(9.0)
    assert dp == pytest.approx(6.0)
    p, dp = eval_pressure(AffineLaw(a=2.0, b=1.0), np.array([1.0, 2.0]))
    np.testing.assert_allclose(p, [3.0, 5.0])
    np.testing.assert_allclose(dp, [2.0, 2.0])


def test_negative_viscosity_names_field(physics_dict):
    with pytest.raises(ConfigurationError) as info:
        _fluid(physics_dict, mu_plus=-0.1)
    assert info.value.field == "mu_plus"


def test_pressure_errors_name_the_layer(physics_dict):
    with pytest.raises(ConfigurationError) as info:
        _fluid(physics_dict, pressure_plus={"family": "affine", "a": -1.0})
    assert info.value.field == "pressure_plus.a"


def test_interface_density_matches_pressure(fluid):
    tau = match_interface_density(fluid)
    assert tau == pytest.approx(2.0, rel=1e-12)


def test_affine_profile_matches_exponential(fluid):
    profile = build_equilibrium(fluid, 257)
    np.testing.assert_allclose(
        profile.rho_minus, np.exp(-profile.y_minus / 2.0), atol=1e-8
    )
    np.testing.assert_allclose(
        profile.rho_plus, 2.0 * np.exp(-profile.y_plus), atol=1e-8
    )
    assert profile.jump_rho == pytest.approx(1.0, rel=1e-10)


def test_polytropic_profile_is_linear(physics_dict):
    fluid = _fluid(
        physics_dict,
        pressure_minus={"family": "polytropic", "K": 2.0, "gamma": 2.0},
        pressure_plus={"family": "polytropic", "K": 1.0, "gamma": 2.0},
    )
    profile = build_equilibrium(fluid, 33)
    # P = Kτ² turns the hydrostatic ODE into ρ̄′ = −g/(2K)
    np.testing.assert_allclose(
        profile.rho_minus, 1.0 - profile.y_minus / 4.0, atol=1e-10
    )
    np.testing.assert_allclose(
        profile.rho_plus, math.sqrt(2.0) - profile.y_plus / 2.0, atol=1e-10
    )


def test_profile_layout(profile):
    assert profile.y_minus[0] == -1.0 and profile.y_minus[-1] == 0.0
    assert profile.y_plus[0] == 0.0 and profile.y_plus[-1] == 1.0
    assert len(profile.grid_nodes) == len(profile.rho_bar)
    assert np.all(profile.pprime_rho > 0)


def test_hydrostatic_residual_and_pressure_mismatch(profile):
    assert profile.hydrostatic_residual() <= 1e-3 * np.max(profile.rho_bar)
    assert profile.pressure_mismatch <= 1e-10


def test_rayleigh_taylor_condition_enforced(physics_dict):
    fluid = _fluid(
        physics_dict,
        pressure_minus={"family": "affine", "a": 1.0},
        pressure_plus={"family": "affine", "a": 2.0},
    )
    with pytest.raises(ConfigurationError, match="Rayleigh-Taylor"):
        build_equilibrium(fluid, 16)


def test_vacuum_before_slab_boundary(physics_dict):
    fluid = _fluid(
        physics_dict,
        g=4.0,
        pressure_minus={"family": "polytropic", "K": 2.0, "gamma": 2.0},
        pressure_plus={"family": "polytropic", "K": 1.0, "gamma": 2.0},
    )
    with pytest.raises(ConfigurationError, match="vacuum"):
        build_equilibrium(fluid, 33)


def test_too_few_nodes(fluid):
    with pytest.raises(ConfigurationError):
        build_equilibrium(fluid, 4)


def test_interpolate_reproduces_nodes(profile):
    rho, prho = profile.interpolate(profile.y_plus, True)
    np.testing.assert_allclose(rho, profile.rho_plus)
    np.testing.assert_allclose(prho, profile.layer_pprime_rho(True))


def test_interface_jump(profile):
    assert interface_jump(profile) == profile.jump_rho
    assert interface_jump(profile) == pytest.approx(
        profile.rho_plus[0] - profile.rho_minus[-1]
    )


def test_hydrostatic_residual_is_second_order(fluid):
    residuals = [
        build_equilibrium(fluid, elements + 1).hydrostatic_residual()
        for elements in (16, 32, 64)
    ]
    for coarse, fine in zip(residuals[:-1], residuals[1:]):
        assert 3.5 <= coarse / fine <= 4.5


@pytest.mark.parametrize(
    "law",
    [
        AffineLaw(a=2.0, b=0.5),
        PolytropicLaw(K=1.0, gamma=1.0),
        PolytropicLaw(K=0.5, gamma=5.0 / 3.0),
    ],
)
def test_eval_pressure_is_monotone(law):
    rng = np.random.default_rng(11)
    tau = rng.uniform(1e-3, 10.0, size=(100, 2))
    lo, hi = np.sort(tau, axis=1).T
    p_lo, _ = eval_pressure(law, lo)
    p_hi, _ = eval_pressure(law, hi)
    distinct = lo < hi
    assert np.all(p_lo[distinct] < p_hi[distinct])


def test_zero_gravity_profile_is_constant(physics_dict):
    profile = build_equilibrium(_fluid(physics_dict, g=0.0), 17)
    np.testing.assert_allclose(profile.rho_minus, 1.0, rtol=1e-12)
    np.testing.assert_allclose(profile.rho_plus, 2.0, rtol=1e-12)
    assert profile.hydrostatic_residual() <= 1e-12
