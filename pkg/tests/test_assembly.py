import numpy as np
import pytest
from scipy.linalg import eigh

from rtspectra.assembly.forms import (
    FormAssembler,
    assemble_forms,
    e_upper_bound,
    interface_energy,
    kinetic_functional,
    potential_functional,
    quadratic,
    state_matrices,
    viscous_functional,
)
from rtspectra.assembly.grid import N_FIELDS, build_grid, trace_at_interface
from rtspectra.errors import ConfigurationError
from rtspectra.modes.inequality import smooth_trial_vector
from rtspectra.physics.equilibrium import build_equilibrium
from rtspectra.utils import default_rng

from .conftest import ELEMENTS


def test_grid_layout(grid):
    assert grid.n_nodes == 2 * ELEMENTS + 1
    assert grid.n_interior == 2 * ELEMENTS - 1
    assert grid.dim == N_FIELDS * (2 * ELEMENTS - 1)
    assert grid.nodes[grid.interface_index] == 0.0
    # field-major: dof = f·(2N − 1) + node − 1
    assert grid.dof(2, ELEMENTS) == 2 * (2 * ELEMENTS - 1) + ELEMENTS - 1
    assert grid.interface_dof() == grid.dof(2, ELEMENTS)
    with pytest.raises(IndexError):
        grid.dof(0, 0)


def test_expand_restrict(grid):
    v = default_rng(0).standard_normal(grid.dim)
    nodal = grid.expand(v)
    assert nodal.shape == (N_FIELDS, grid.n_nodes)
    np.testing.assert_array_equal(nodal[:, [0, -1]], 0.0)
    np.testing.assert_array_equal(grid.restrict(nodal), v)


def test_layer_slices_share_interface(grid):
    lower, upper = grid.layer_slices()
    assert grid.nodes[lower][-1] == 0.0
    assert grid.nodes[upper][0] == 0.0


def test_too_coarse_grid(profile):
    with pytest.raises(ConfigurationError):
        build_grid(profile, 3)


def test_state_matrices_are_symmetric():
    Q = state_matrices((0.3, -0.7), np.array([1.0, 2.0]), np.array([2.0, 1.0]), 0.1, 0.2, 1.0)
    for mat in Q.values():
        assert mat.shape == (2, 6, 6)
        np.testing.assert_allclose(mat, np.swapaxes(mat, -1, -2))


def test_forms_are_symmetric_and_definite(forms):
    for mat in (forms.J_mat, forms.E_mat, forms.E_alt_mat, forms.D_mat):
        np.testing.assert_allclose(mat, mat.T, atol=1e-14)
    assert np.linalg.eigvalsh(forms.J_mat).min() > 0
    assert np.linalg.eigvalsh(forms.D_mat).min() > 0


def test_functionals(forms, grid):
    v = smooth_trial_vector(grid, default_rng(1), complex_valued=False)
    assert kinetic_functional(forms, v) == pytest.approx(quadratic(forms.J_mat, v))
    assert viscous_functional(forms, v) == pytest.approx(quadratic(forms.D_mat, v))
    psi0 = v[forms.interface_dof]
    assert interface_energy(forms, v) == pytest.approx(psi0**2)
    assert potential_functional(forms, v) >= 0.0


def test_complex_quadratic_splits(forms, grid):
    rng = default_rng(2)
    a = smooth_trial_vector(grid, rng, complex_valued=False)
    b = smooth_trial_vector(grid, rng, complex_valued=False)
    assert quadratic(forms.E_mat, a + 1j * b) == pytest.approx(
        quadratic(forms.E_mat, a) + quadratic(forms.E_mat, b)
    )


def test_energy_bounded_by_frequency(forms):
    top = eigh(forms.E_mat, forms.J_mat, eigvals_only=True)[-1]
    assert top <= e_upper_bound(forms) + 1e-12
    assert e_upper_bound(forms) == pytest.approx(1.0)


def test_surface_tension_enters_interface_entry(assembler, fluid):
    a = assembler.assemble((0.5, 0.0))
    b = assembler.assemble((0.0, 0.5))
    k = a.interface_dof
    # E depends on ξ through the rotation-covariant pair (ξ₁φ + ξ₂θ)
    assert a.E_mat[k, k] == pytest.approx(b.E_mat[k, k])
    assert a.E_alt_mat[k, k] - a.E_mat[k, k] == pytest.approx(
        b.E_alt_mat[k, k] - b.E_mat[k, k]
    )


def _mean_gap(fluid, elements, seed=42, n_vectors=20):
    profile = build_equilibrium(fluid, elements + 1)
    grid = build_grid(profile, elements)
    forms = FormAssembler(profile, grid, fluid).assemble((1.0, 0.0))
    rng = default_rng(seed)
    gaps = []
    for _ in range(n_vectors):
        v = smooth_trial_vector(grid, rng, complex_valued=False)
        e = quadratic(forms.E_mat, v)
        e_alt = quadratic(forms.E_alt_mat, v)
        gaps.append(abs(e - e_alt) / max(abs(e), abs(e_alt)))
    return np.mean(gaps)


def test_rewritten_energy_agrees_to_second_order(fluid):
    gaps = [_mean_gap(fluid, n) for n in (32, 64, 128)]
    assert gaps[0] < 1e-2
    for coarse, fine in zip(gaps[:-1], gaps[1:]):
        assert 3.0 <= coarse / fine <= 5.0


def test_assemble_forms_matches_assembler(profile, grid, fluid, forms):
    again = assemble_forms(profile, grid, fluid, (1.0, 0.0))
    np.testing.assert_array_equal(again.E_mat, forms.E_mat)
    np.testing.assert_array_equal(again.J_mat, forms.J_mat)


def test_trace_at_interface(grid):
    v = np.zeros(grid.dim)
    v[grid.interface_dof()] = 2.5
    assert trace_at_interface(grid, v) == 2.5
    assert grid.expand(v)[2, grid.interface_index] == 2.5


def test_dissipation_matches_direct_quadrature(forms, grid, fluid):
    y = grid.nodes
    nodal = np.zeros((N_FIELDS, grid.n_nodes))
    nodal[0] = np.sin(np.pi * (y - y[0]) / (y[-1] - y[0])) * (1.0 + y)
    v = grid.restrict(nodal)

    # (ζ + 4μ/3)φ² + μφ′² on the piecewise-linear φ, three Gauss points
    t, w = np.polynomial.legendre.leggauss(3)
    total = 0.0
    for e in range(grid.n_elements):
        ya, yb = y[e], y[e + 1]
        fa, fb = nodal[0, e], nodal[0, e + 1]
        mu, zeta = (
            (fluid.mu_plus, fluid.zeta_plus)
            if ya >= 0
            else (fluid.mu_minus, fluid.zeta_minus)
        )
        half = 0.5 * (yb - ya)
        phi = fa + (fb - fa) * 0.5 * (t + 1.0)
        dphi = (fb - fa) / (yb - ya)
        integrand = (zeta + 4.0 * mu / 3.0) * phi**2 + mu * dphi**2
        total += half * np.sum(w * integrand)
    assert quadratic(forms.D_mat, v) == pytest.approx(total, rel=1e-12)
