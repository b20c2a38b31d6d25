import math

import numpy as np
import pytest

from rtspectra.dispersion.scan import (
    critical_frequency,
    half_plane_samples,
    ray_samples,
    resolve_xi_cap,
    scan,
    solve_sample,
)
from rtspectra.dispersion.stability import (
    classify_periodic,
    classify_whole_plane,
    escape_time,
    rayleigh_number,
)
from rtspectra.errors import ConfigurationError, DomainError
from rtspectra.physics.equilibrium import FluidConfig, build_equilibrium

from .conftest import reference_physics


def _period(fluid, profile, R):
    return math.sqrt(fluid.theta / (fluid.g * R * profile.jump_rho))


@pytest.fixture(scope="module")
def curve(fluid, profile, grid):
    xi_c = critical_frequency(fluid, profile)
    return scan(fluid, profile, grid, ray_samples(1e-2, 0.99 * xi_c, 12))


def test_critical_frequency(fluid, profile):
    assert critical_frequency(fluid, profile) == pytest.approx(math.sqrt(5.0))


def test_ray_samples_are_log_spaced():
    samples = ray_samples(0.1, 10.0, 3, direction=(0.0, 2.0))
    np.testing.assert_allclose(samples, [(0.0, 0.1), (0.0, 1.0), (0.0, 10.0)])


def test_ray_samples_reject_bad_range():
    with pytest.raises(ConfigurationError):
        ray_samples(1.0, 0.5, 4)
    with pytest.raises(ConfigurationError):
        ray_samples(0.1, math.inf, 4)


def test_half_plane_samples():
    samples = half_plane_samples(0.1, 1.0, 5, 4)
    assert len(samples) == 20
    assert all(xi2 >= -1e-15 for _, xi2 in samples)


def test_scan_summary(curve):
    assert curve.verdict == "unstable"
    assert curve.Lambda == pytest.approx(np.nanmax(curve.lambdas))
    assert curve.c7 == curve.Lambda
    assert math.hypot(*curve.xi1) < curve.xi_c
    assert np.nanmax(curve.lambdas) <= curve.lambda_bound
    assert curve.periods == pytest.approx((1.0 / curve.xi1[0], 1.0))
    assert curve.diagnostics["supercritical_unstable"] == 0


def test_dispersion_endpoints_are_small(curve):
    lams = curve.lambdas
    assert lams[0] < 0.1 * curve.Lambda
    assert lams[-1] < 0.1 * curve.Lambda


def test_scan_table(curve):
    table = curve.to_frame()
    assert list(table.columns) == [
        "xi1",
        "xi2",
        "xi_abs",
        "lambda",
        "alpha_residual",
        "iterations",
    ]
    assert len(table) == 12
    assert table["alpha_residual"].max() <= 1e-8


def test_all_stable_scan(fluid, profile, grid):
    xi_c = critical_frequency(fluid, profile)
    curve = scan(fluid, profile, grid, ray_samples(1.01 * xi_c, 3.0 * xi_c, 4))
    assert curve.verdict == "stable"
    assert curve.xi1 is None
    assert curve.Lambda == 0.0 and curve.c7 == 0.0
    assert classify_whole_plane(curve).verdict == "stable"


def test_scan_rejects_empty_input(fluid, profile, grid):
    with pytest.raises(ConfigurationError):
        scan(fluid, profile, grid, [])


def test_densified_scan_reports_refinement(fluid, profile, grid):
    samples = ray_samples(0.3, 2.0, 8)
    curve = scan(fluid, profile, grid, samples, densify=True)
    assert len(curve.samples) == 15
    assert curve.refinement_stable is not None


def test_parallel_scan_matches_serial(fluid, profile, grid):
    samples = ray_samples(0.2, 2.0, 4)
    serial = scan(fluid, profile, grid, samples, n_jobs=1)
    parallel = scan(fluid, profile, grid, samples, n_jobs=2)
    np.testing.assert_allclose(serial.lambdas, parallel.lambdas, rtol=1e-12)


def test_solve_sample_symmetry(fluid, profile, grid):
    for angle in np.linspace(0.0, math.pi, 4, endpoint=False):
        xi = (math.cos(angle), math.sin(angle))
        a = solve_sample(profile, grid, fluid, xi, 1e-10)
        b = solve_sample(profile, grid, fluid, (-xi[0], -xi[1]), 1e-10)
        assert a.lam == pytest.approx(b.lam, abs=1e-9)


@pytest.mark.parametrize("R, verdict", [(4.0, "stable"), (0.25, "unstable")])
def test_periodic_threshold(fluid, profile, R, verdict):
    L = _period(fluid, profile, R)
    report = classify_periodic(fluid, profile, L, L)
    assert report.R == pytest.approx(R)
    assert report.verdict == verdict
    assert report.lattice_consistent
    if verdict == "unstable":
        assert report.witness == pytest.approx((1.0 / L, 0.0))
        assert math.hypot(*report.witness) < math.sqrt(5.0)
        assert report.unstable_lattice_count > 0
    else:
        assert report.witness is None
        assert report.unstable_lattice_count == 0


def test_marginal_periods(fluid, profile):
    L = _period(fluid, profile, 1.0)
    assert classify_periodic(fluid, profile, L, L).verdict == "marginal"


def test_rayleigh_number_uses_longest_period(fluid, profile):
    assert rayleigh_number(fluid, profile, 0.5, 1.0) == pytest.approx(0.2, rel=1e-4)


def test_periodic_rejects_non_positive_periods(fluid, profile):
    with pytest.raises(DomainError):
        classify_periodic(fluid, profile, 0.0, 1.0)


def test_escape_time():
    assert escape_time(2.0, 1.0, 1e-3) == pytest.approx(math.log(1e3) / 2.0)
    assert escape_time(1.0, 1.0, math.exp(-2.0)) == pytest.approx(2.0)
    assert escape_time(2.0, 1.0, math.exp(-2.0)) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        escape_time(2.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        escape_time(0.0, 1.0, 1e-3)


def test_zero_surface_tension():
    physics = reference_physics()
    physics["theta"] = 0.0
    fluid = FluidConfig.from_dict(physics)
    profile = build_equilibrium(fluid, 9)
    assert critical_frequency(fluid, profile) == math.inf
    report = classify_periodic(fluid, profile, 1.0, 1.0)
    assert report.verdict == "unstable"
    assert report.R is None


@pytest.mark.slow
def test_resolve_xi_cap_without_surface_tension():
    physics = reference_physics()
    physics["theta"] = 0.0
    fluid = FluidConfig.from_dict(physics)
    profile = build_equilibrium(fluid, 17)
    cap, curve = resolve_xi_cap(fluid, profile, 16, n_samples=16)
    assert cap >= 10.0
    assert curve.verdict == "unstable"
    assert curve.Lambda <= curve.lambda_bound
