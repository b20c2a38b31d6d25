import dataclasses
import math

import numpy as np
import pytest

from rtspectra.assembly.forms import FormAssembler, e_upper_bound, quadratic
from rtspectra.assembly.grid import build_grid
from rtspectra.errors import DomainError
from rtspectra.physics.equilibrium import FluidConfig, build_equilibrium
from rtspectra.spectral.alpha import alpha, min_dissipation, rayleigh_quotient
from rtspectra.spectral.fixed_point import (
    instability_window,
    lambda_upper_bound,
    positivity_witness,
    solve_lambda,
)
from rtspectra.spectral.residuals import (
    energy_identity_residual,
    euler_lagrange_residual,
)
from rtspectra.spectral.solutions import Stable
from rtspectra.utils import default_rng


def test_alpha_maximizer_is_normalized(forms):
    res = alpha(forms, 0.5)
    assert quadratic(forms.J_mat, res.maximizer) == pytest.approx(1.0)
    assert rayleigh_quotient(forms, 0.5, res.maximizer) == pytest.approx(res.alpha)
    assert res.maximizer[forms.interface_dof] > 0


def test_alpha_rejects_non_positive_s(forms):
    with pytest.raises(DomainError):
        alpha(forms, 0.0)


def test_alpha_strictly_decreasing_and_bounded(forms):
    b1 = min_dissipation(forms)
    assert b1 > 0
    s_max = e_upper_bound(forms) / b1
    s = np.linspace(s_max / 20, s_max, 20)
    values = np.array([alpha(forms, si).alpha for si in s])
    assert np.all(np.diff(values) < 0)
    assert np.all(values <= e_upper_bound(forms) - s * b1 + 1e-9)
    assert values[-1] <= 1e-9


def test_solve_lambda_fixed_point(forms, mode):
    assert 0 < mode.lam <= 15.0
    assert alpha(forms, mode.lam).alpha == pytest.approx(mode.lam**2, rel=1e-8)
    assert mode.iterations <= 60
    assert mode.residual_energy <= 1e-8
    assert energy_identity_residual(mode, forms) == pytest.approx(
        mode.residual_energy
    )


def test_mode_profiles_vanish_at_walls(mode):
    profiles = mode.profiles
    assert profiles.shape == (3, mode.grid.n_nodes)
    np.testing.assert_array_equal(profiles[:, [0, -1]], 0.0)
    assert mode.psi0 > 0


def test_supercritical_frequency_is_stable(assembler, fluid, profile):
    forms = assembler.assemble((3.0, 0.0))
    result = solve_lambda(forms, fluid, profile)
    assert isinstance(result, Stable)
    assert result.is_stable and result.lam == 0.0


def test_growth_rate_depends_on_modulus_only(assembler, fluid, profile, mode):
    rotated = solve_lambda(assembler.assemble((0.6, 0.8)), fluid, profile)
    mirrored = solve_lambda(assembler.assemble((-1.0, 0.0)), fluid, profile)
    assert rotated.lam == pytest.approx(mode.lam, abs=1e-9)
    assert mirrored.lam == pytest.approx(mode.lam, abs=1e-9)


def test_lambda_below_global_bound(fluid, profile):
    assert lambda_upper_bound(fluid, profile) == pytest.approx(15.0)


def test_explicit_bracket_agrees(forms, fluid, profile, mode):
    result = solve_lambda(
        forms, fluid, profile, bracket=(0.9 * mode.lam, 1.1 * mode.lam)
    )
    assert result.lam == pytest.approx(mode.lam, abs=1e-9)


def test_non_positive_tolerance(forms, fluid, profile):
    with pytest.raises(DomainError):
        solve_lambda(forms, fluid, profile, tol=0.0)


def test_instability_window_contains_lambda(forms, mode):
    gamma = instability_window(forms)
    assert gamma > mode.lam
    assert alpha(forms, gamma).alpha == pytest.approx(0.0, abs=1e-6)


def test_positivity_witness(assembler, fluid):
    forms = assembler.assemble((0.5, 0.0))
    witness = positivity_witness(forms, fluid)
    assert witness.energy > 0
    assert witness.s0 > 0
    assert witness.F(0.5 * witness.s0) > 0
    assert witness.F(2.0 * witness.s0) < 0


def test_positivity_witness_needs_frequency(assembler, fluid):
    with pytest.raises(DomainError):
        positivity_witness(assembler.assemble((0.0, 0.0)), fluid)


def test_euler_lagrange_residual_shapes(mode, profile, fluid):
    res = euler_lagrange_residual(mode, profile, fluid)
    assert res.ode_by_field.shape == (3,)
    assert res.jump_by_field.shape == (3,)
    assert math.isfinite(res.ode) and math.isfinite(res.jump)
    assert res.ode == pytest.approx(mode.residual_strong)


@pytest.mark.parametrize("xi1", [0.01, 0.2, 1.0, 2.2])
def test_fixed_point_converges_across_the_window(assembler, fluid, profile, xi1):
    forms = assembler.assemble((xi1, 0.0))
    result = solve_lambda(forms, fluid, profile)
    assert not result.is_stable
    assert result.iterations <= 60
    assert result.residual_energy <= 1e-8
    assert result.lam <= lambda_upper_bound(fluid, profile)


def test_energy_identity_detects_non_solutions(forms, mode):
    rng = default_rng(7)
    noise = rng.standard_normal(forms.dim)
    noise /= math.sqrt(quadratic(forms.J_mat, noise))
    perturbed = dataclasses.replace(mode, vector=mode.vector + 1e-3 * noise)
    assert energy_identity_residual(perturbed, forms) >= 1e-7
    halved = dataclasses.replace(mode, lam=0.5 * mode.lam)
    assert energy_identity_residual(halved, forms) > 3.0


def _mode_on(fluid, elements, xi=(1.0, 0.0)):
    profile = build_equilibrium(fluid, elements + 1)
    grid = build_grid(profile, elements)
    forms = FormAssembler(profile, grid, fluid).assemble(xi)
    return solve_lambda(forms, fluid, profile), profile


def test_euler_lagrange_residual_shrinks_with_h(fluid):
    ode, jump = [], []
    for elements in (16, 32, 64):
        mode, profile = _mode_on(fluid, elements)
        res = euler_lagrange_residual(mode, profile, fluid)
        ode.append(res.ode)
        jump.append(res.jump)
    for series in (ode, jump):
        ratios = np.array(series[:-1]) / np.array(series[1:])
        assert np.all(ratios >= 1.8)


def test_euler_lagrange_residual_of_random_vector(mode, profile, fluid):
    noise = default_rng(3).standard_normal(mode.vector.shape)
    res = euler_lagrange_residual(
        dataclasses.replace(mode, vector=noise), profile, fluid
    )
    assert res.ode > 1.0
    assert res.jump > 0.1
    assert res.jump > 10.0 * mode.residual_jump


def test_alpha_is_lipschitz(forms):
    s = np.geomspace(0.05, 2.0, 8)
    results = [alpha(forms, si) for si in s]
    for a, b in zip(results[:-1], results[1:]):
        # envelope bounds: D at either maximizer brackets the slope
        drop = a.alpha - b.alpha
        assert drop <= (b.s - a.s) * a.dissipation + 1e-9
        assert drop >= (b.s - a.s) * b.dissipation - 1e-9
    L = max(r.dissipation for r in results)
    assert abs(results[0].alpha - results[-1].alpha) <= L * (s[-1] - s[0])


@pytest.mark.parametrize("s", [1e-3, 0.5, 5.0])
def test_alpha_negative_without_frequency(assembler, s):
    assert alpha(assembler.assemble((0.0, 0.0)), s).alpha < 0


def test_doubling_viscosities_doubles_b1(physics_dict, profile, grid, assembler):
    doubled = dict(physics_dict)
    for key in ("mu_plus", "mu_minus", "zeta_plus", "zeta_minus"):
        doubled[key] = 2.0 * doubled[key]
    fluid2 = FluidConfig.from_dict(doubled)
    b1 = min_dissipation(assembler.assemble((1.0, 0.0)))
    b1_doubled = min_dissipation(
        FormAssembler(profile, grid, fluid2).assemble((1.0, 0.0))
    )
    assert b1_doubled == pytest.approx(2.0 * b1, rel=1e-10)
