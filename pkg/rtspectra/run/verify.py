"""Property suite of the ``verify`` command.

Every entry of ``str2property`` maps a name to a check taking the shared
:class:`VerifySuite` and returning a :class:`PropertyResult`. Checks that do
not apply to a configuration (no growing frequency, no surface tension)
pass with a NaN value.
"""
from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from rtspectra.assembly.forms import (
    FormAssembler,
    FormSet,
    e_upper_bound,
    quadratic,
)
from rtspectra.assembly.grid import build_grid
from rtspectra.dispersion.scan import (
    DispersionCurve,
    critical_frequency,
    ray_samples,
)
from rtspectra.dispersion.stability import classify_periodic
from rtspectra.errors import ConfigurationError, VerificationError
from rtspectra.evolve.integrator import (
    EvolutionState,
    energy_balance_residual,
    horizon_for_amplification,
    measure_growth,
    random_state,
    step,
)
from rtspectra.load_do_save import load_do_save
from rtspectra.modes.cutoff import cutoff_norms, limit_ratio
from rtspectra.modes.inequality import (
    growth_inequality_check,
    random_trials,
    smooth_trial_vector,
)
from rtspectra.modes.synthesis import (
    GrowingMode,
    build_real_mode,
    synthesis_imaginary_residual,
)
from rtspectra.physics.equilibrium import FluidConfig, build_equilibrium
from rtspectra.physics.pressure import eval_pressure
from rtspectra.run.context import RunContext, dispersion_curve, summary_of
from rtspectra.spectral.alpha import alpha, min_dissipation
from rtspectra.spectral.fixed_point import solve_lambda
from rtspectra.spectral.solutions import ModeSolution
from rtspectra.typing import Frequency
from rtspectra.utils import default_rng

logger = logging.getLogger(__name__)

HYDROSTATIC_RTOL = 1e-3
PRESSURE_RTOL = 1e-10
ENERGY_IDENTITY_TOL = 1e-8
GAP_RATIO_RANGE = (3.0, 5.0)
GAP_ELEMENT_LADDER = (32, 64, 128)
ALPHA_GRID_SIZE = 20
ALPHA_BOUND_SLACK = 1e-9
ORACLE_RTOL = 5e-3
ORACLE_TOL = 1e-8
ORACLE_BRACKET = (0.99, 1.01)
MAX_ITERATIONS = 60
ENDPOINT_FRACTION = 0.1
ENDPOINT_XI_MIN = 1e-2
SUPERCRITICAL_FACTORS = (1.0, 1.01, 1.5, 2.0)
SYMMETRY_PAIRS = 10
SYMMETRY_TOL = 1e-9
PERIODIC_NUMBERS = (4.0, 0.25)
EIGEN_RATE_RTOL = 1e-2
EIGEN_AMPLIFICATION = 1e4
RANDOM_RATE_RTOL = 2e-2
RANDOM_AMPLIFICATION = 1e8
STABLE_RATE_MAX = 1e-6
STABLE_DT = 1e-2
STABLE_HORIZON = 10.0
STEPS_PER_GROWTH_TIME = 100
DT_ORDER_STEPS = (5, 10)
ENERGY_BALANCE_TOL = 1e-9
CUTOFF_N = 32
CUTOFF_RATIO_RTOL = 2e-2
CUTOFF_BETAS = ((0, 0, 0), (1, 0, 0), (0, 1, 1), (1, 1, 0), (2, 0, 1))
CUTOFF_SUM_RANGE = (0.5, 2.0)
CUTOFF_SUM_NS = (8, 32)
INEQUALITY_RTOL = 1e-9
SYNTHESIS_TOL = 1e-12

NOT_APPLICABLE = float("nan")


@dataclass(frozen=True)
class PropertyResult:
    name: str
    passed: bool
    value: float
    threshold: str
    detail: str = ""


class VerifySuite:
    """Lazily computed quantities shared between property checks."""

    def __init__(self, ctx: RunContext) -> None:
        self.ctx = ctx
        self.section = ctx.config.verify

    @property
    def fluid(self) -> FluidConfig:
        return self.ctx.fluid

    def rng(self, stream: int) -> np.random.Generator:
        return default_rng(self.section.seed + stream)

    @cached_property
    def curve(self) -> DispersionCurve:
        return dispersion_curve(self.ctx)

    @cached_property
    def xi_c(self) -> float:
        return critical_frequency(self.fluid, self.ctx.profile)

    @cached_property
    def mode(self) -> Optional[ModeSolution]:
        if self.curve.xi1 is None:
            return None
        result = self.ctx.solve_at(self.curve.xi1)
        return None if result.is_stable else result

    @cached_property
    def probe_xi(self) -> Frequency:
        return self.curve.xi1 if self.curve.xi1 is not None else (1.0, 0.0)

    @cached_property
    def probe_forms(self) -> FormSet:
        return self.ctx.assembler.assemble(self.probe_xi)

    @cached_property
    def diagonal_mode(self) -> Optional[GrowingMode]:
        """Growing mode at |ξ¹| along the diagonal; λ depends on |ξ| only."""
        if self.mode is None:
            return None
        r = math.hypot(*self.mode.xi) / math.sqrt(2.0)
        result = self.ctx.solve_at((r, r))
        if result.is_stable:
            return None
        return build_real_mode(
            result, self.ctx.config.mode.box, self.ctx.config.mode.resolution
        )

    def lam_at(self, xi: Frequency) -> float:
        return self.ctx.solve_at(xi).lam


def _result(
    name: str,
    value: float,
    passed: bool,
    threshold: str,
    detail: str = "",
) -> PropertyResult:
    return PropertyResult(
        name=name,
        passed=bool(passed),
        value=float(value),
        threshold=threshold,
        detail=detail,
    )


def _not_applicable(name: str, threshold: str, reason: str) -> PropertyResult:
    return _result(name, NOT_APPLICABLE, True, threshold, f"skipped: {reason}")


def check_equilibrium_residual(suite: VerifySuite) -> PropertyResult:
    profile = suite.ctx.profile
    threshold = HYDROSTATIC_RTOL * suite.fluid.g * float(np.max(profile.rho_bar))
    value = profile.hydrostatic_residual()
    return _result(
        "equilibrium_residual", value, value <= threshold, f"<= {threshold:.3g}"
    )


def check_pressure_mismatch(suite: VerifySuite) -> PropertyResult:
    profile = suite.ctx.profile
    p_interface, _ = eval_pressure(suite.fluid.p_minus, profile.rho_minus[-1])
    threshold = PRESSURE_RTOL * max(1.0, abs(float(p_interface)))
    value = profile.pressure_mismatch
    return _result(
        "pressure_mismatch", value, value <= threshold, f"<= {threshold:.3g}"
    )


def check_energy_identity(suite: VerifySuite) -> PropertyResult:
    name, threshold = "energy_identity", f"<= {ENERGY_IDENTITY_TOL:g}"
    residuals = [
        s.alpha_residual for s in suite.curve.samples if not s.is_stable
    ]
    if not residuals:
        return _not_applicable(name, threshold, "no growing sample")
    value = max(residuals)
    return _result(name, value, value <= ENERGY_IDENTITY_TOL, threshold)


def _mean_form_gap(
    fluid: FluidConfig,
    xi: Frequency,
    elements_per_layer: int,
    seed: int,
    n_vectors: int,
) -> float:
    """Mean of |vᵀEv − vᵀE_alt v| / max(|vᵀEv|, |vᵀE_alt v|); the seed
    fixes the sine coefficients, so every grid sees the same functions."""
    profile = build_equilibrium(fluid, elements_per_layer + 1)
    grid = build_grid(profile, elements_per_layer)
    forms = FormAssembler(profile, grid, fluid).assemble(xi)
    rng = default_rng(seed)
    gaps = []
    for _ in range(n_vectors):
        v = smooth_trial_vector(grid, rng, complex_valued=False)
        e = quadratic(forms.E_mat, v)
        e_alt = quadratic(forms.E_alt_mat, v)
        gaps.append(abs(e - e_alt) / max(abs(e), abs(e_alt)))
    return float(np.mean(gaps))


def check_form_equivalence(suite: VerifySuite) -> PropertyResult:
    gaps = [
        _mean_form_gap(
            suite.fluid,
            suite.probe_xi,
            n,
            suite.section.seed,
            suite.section.n_random_vectors,
        )
        for n in GAP_ELEMENT_LADDER
    ]
    ratios = [a / b for a, b in zip(gaps[:-1], gaps[1:])]
    lo, hi = GAP_RATIO_RANGE
    worst = max(ratios, key=lambda r: abs(r - 4.0))
    return _result(
        "form_equivalence",
        worst,
        all(lo <= r <= hi for r in ratios),
        f"in [{lo:g}, {hi:g}]",
        f"gaps {['%.3e' % g for g in gaps]}",
    )


@dataclass(frozen=True)
class _AlphaGrid:
    s: np.ndarray
    values: np.ndarray
    bound: np.ndarray


def _alpha_grid(forms: FormSet) -> _AlphaGrid:
    b1 = min_dissipation(forms)
    s_max = e_upper_bound(forms) / b1
    s = np.linspace(s_max / ALPHA_GRID_SIZE, s_max, ALPHA_GRID_SIZE)
    values = np.array([alpha(forms, si).alpha for si in s])
    return _AlphaGrid(s=s, values=values, bound=e_upper_bound(forms) - s * b1)


def check_alpha_monotone(suite: VerifySuite) -> PropertyResult:
    grid = _alpha_grid(suite.probe_forms)
    violations = int(np.count_nonzero(np.diff(grid.values) >= 0))
    return _result("alpha_monotone", violations, violations == 0, "== 0")


def check_alpha_bound(suite: VerifySuite) -> PropertyResult:
    grid = _alpha_grid(suite.probe_forms)
    value = float(np.max(grid.values - grid.bound))
    return _result(
        "alpha_bound",
        value,
        value <= ALPHA_BOUND_SLACK,
        f"<= {ALPHA_BOUND_SLACK:g}",
    )


def _oracle(
    fluid: Dict[str, Any], xi: Frequency, elements: int, guess: float
) -> Dict[str, float]:
    """λ at elements/2 and elements per layer and their Richardson value."""
    cfg = FluidConfig.from_dict(fluid)
    bracket = (ORACLE_BRACKET[0] * guess, ORACLE_BRACKET[1] * guess)
    lams = []
    for n in (elements // 2, elements):
        profile = build_equilibrium(cfg, n + 1)
        grid = build_grid(profile, n)
        forms = FormAssembler(profile, grid, cfg).assemble(xi)
        lams.append(solve_lambda(forms, cfg, profile, ORACLE_TOL, bracket).lam)
        logger.info(f"oracle lambda at {n} elements per layer: {lams[-1]:.12g}")
    return {
        "coarse": lams[0],
        "fine": lams[1],
        "extrapolated": (4.0 * lams[1] - lams[0]) / 3.0,
    }


def _cached_oracle(suite: VerifySuite, mode: ModeSolution) -> Dict[str, float]:
    kwargs = {
        "fluid": suite.fluid.to_dict(),
        "xi": mode.xi,
        "elements": suite.section.oracle_elements,
        "guess": mode.lam,
    }
    if suite.section.cache_dir is None:
        return _oracle(**kwargs)
    key = hashlib.sha1(
        json.dumps(
            [kwargs["fluid"], list(mode.xi), kwargs["elements"]],
            sort_keys=True,
        ).encode()
    ).hexdigest()[:16]
    path = f"{suite.section.cache_dir}/oracle_{key}.json"
    return load_do_save(path, _oracle, return_type=dict, **kwargs)


def check_fixed_point_oracle(suite: VerifySuite) -> PropertyResult:
    name, threshold = "fixed_point_oracle", f"<= {ORACLE_RTOL:g}"
    if suite.mode is None:
        return _not_applicable(name, threshold, "no growing frequency")
    oracle = _cached_oracle(suite, suite.mode)
    value = abs(suite.mode.lam - oracle["extrapolated"]) / oracle["extrapolated"]
    return _result(
        name,
        value,
        value <= ORACLE_RTOL,
        threshold,
        f"oracle {oracle['extrapolated']:.10g}",
    )


def check_fixed_point_iterations(suite: VerifySuite) -> PropertyResult:
    value = max((s.iterations for s in suite.curve.samples), default=0)
    return _result(
        "fixed_point_iterations",
        value,
        value <= MAX_ITERATIONS,
        f"<= {MAX_ITERATIONS}",
    )


def check_dispersion_endpoints(suite: VerifySuite) -> PropertyResult:
    name = "dispersion_endpoints"
    threshold = f"<= {ENDPOINT_FRACTION:g} * Lambda"
    if not math.isfinite(suite.xi_c):
        return _not_applicable(name, threshold, "no surface tension")
    if suite.curve.Lambda <= 0:
        return _not_applicable(name, threshold, "no growing sample")
    lams = [
        suite.lam_at(xi)
        for xi in ray_samples(ENDPOINT_XI_MIN, 0.99 * suite.xi_c, 2)
    ]
    value = max(lams) / suite.curve.Lambda
    return _result(name, value, value <= ENDPOINT_FRACTION, threshold)


def check_supercritical_stable(suite: VerifySuite) -> PropertyResult:
    name, threshold = "supercritical_stable", "== 0"
    if not math.isfinite(suite.xi_c):
        return _not_applicable(name, threshold, "no surface tension")
    diagonal = 1.0 / math.sqrt(2.0)
    frequencies = [
        (f * suite.xi_c * c, f * suite.xi_c * s)
        for f in SUPERCRITICAL_FACTORS
        for c, s in ((1.0, 0.0), (diagonal, diagonal))
    ]
    unstable = sum(
        1 for xi in frequencies if not suite.ctx.solve_at(xi).is_stable
    )
    return _result(name, unstable, unstable == 0, threshold)


def check_growth_bound(suite: VerifySuite) -> PropertyResult:
    bound = suite.curve.lambda_bound
    value = float(np.nanmax(np.append(suite.curve.lambdas, 0.0)))
    return _result("growth_bound", value, value <= bound, f"<= {bound:.6g}")


def check_symmetry(suite: VerifySuite) -> PropertyResult:
    radius = math.hypot(*suite.probe_xi)
    angles = np.linspace(0.0, math.pi, SYMMETRY_PAIRS, endpoint=False)
    value = 0.0
    for angle in angles:
        xi = (radius * math.cos(angle), radius * math.sin(angle))
        value = max(
            value, abs(suite.lam_at(xi) - suite.lam_at((-xi[0], -xi[1])))
        )
    return _result(
        "symmetry", value, value <= SYMMETRY_TOL, f"<= {SYMMETRY_TOL:g}"
    )


def check_periodic_threshold(suite: VerifySuite) -> PropertyResult:
    name, threshold = "periodic_threshold", "== 0"
    if suite.fluid.theta == 0:
        return _not_applicable(name, threshold, "no surface tension")
    jump = suite.ctx.profile.jump_rho
    mismatches = 0
    for R in PERIODIC_NUMBERS:
        L = math.sqrt(suite.fluid.theta / (suite.fluid.g * R * jump))
        report = classify_periodic(suite.fluid, suite.ctx.profile, L, L)
        if R > 1:
            ok = report.verdict == "stable"
        else:
            ok = (
                report.verdict == "unstable"
                and report.witness is not None
                and math.hypot(*report.witness) < suite.xi_c
            )
        mismatches += 0 if ok else 1
    return _result(name, mismatches, mismatches == 0, threshold)


def _eigen_rate_error(
    forms: FormSet, mode: ModeSolution, steps_per_growth_time: float
) -> float:
    dt = 1.0 / (steps_per_growth_time * mode.lam)
    horizon = horizon_for_amplification(mode.lam, EIGEN_AMPLIFICATION)
    fit = measure_growth(forms, EvolutionState.from_mode(mode), dt, horizon)
    return abs(fit.rate - mode.lam) / mode.lam


def check_evolution_eigenmode(suite: VerifySuite) -> PropertyResult:
    name, threshold = "evolution_eigenmode", f"<= {EIGEN_RATE_RTOL:g}"
    if suite.mode is None:
        return _not_applicable(name, threshold, "no growing frequency")
    value = _eigen_rate_error(
        suite.probe_forms, suite.mode, STEPS_PER_GROWTH_TIME
    )
    return _result(name, value, value <= EIGEN_RATE_RTOL, threshold)


def check_evolution_random(suite: VerifySuite) -> PropertyResult:
    name, threshold = "evolution_random", f"<= {RANDOM_RATE_RTOL:g}"
    if suite.mode is None:
        return _not_applicable(name, threshold, "no growing frequency")
    lam = suite.mode.lam
    forms = suite.probe_forms
    fit = measure_growth(
        forms,
        random_state(forms, suite.rng(1)),
        1.0 / (STEPS_PER_GROWTH_TIME * lam),
        horizon_for_amplification(lam, RANDOM_AMPLIFICATION),
    )
    value = abs(fit.rate - lam) / lam
    return _result(name, value, value <= RANDOM_RATE_RTOL, threshold)


def check_evolution_stable(suite: VerifySuite) -> PropertyResult:
    name, threshold = "evolution_stable", f"< {STABLE_RATE_MAX:g}"
    if not math.isfinite(suite.xi_c):
        return _not_applicable(name, threshold, "no surface tension")
    forms = suite.ctx.assembler.assemble((1.5 * suite.xi_c, 0.0))
    fit = measure_growth(
        forms, random_state(forms, suite.rng(2)), STABLE_DT, STABLE_HORIZON
    )
    return _result(name, fit.rate, fit.rate < STABLE_RATE_MAX, threshold)


def check_evolution_dt_order(suite: VerifySuite) -> PropertyResult:
    name = "evolution_dt_order"
    lo, hi = GAP_RATIO_RANGE
    threshold = f"in [{lo:g}, {hi:g}]"
    if suite.mode is None:
        return _not_applicable(name, threshold, "no growing frequency")
    coarse, fine = (
        _eigen_rate_error(suite.probe_forms, suite.mode, n)
        for n in DT_ORDER_STEPS
    )
    value = coarse / fine
    return _result(name, value, lo <= value <= hi, threshold)


def check_energy_balance(suite: VerifySuite) -> PropertyResult:
    forms = suite.probe_forms
    ic = random_state(forms, suite.rng(3))
    ic = EvolutionState(sigma=ic.sigma, sigma_dot=ic.sigma.copy())
    value = energy_balance_residual(forms, ic, step(forms, ic, STABLE_DT))
    return _result(
        "energy_balance",
        value,
        value <= ENERGY_BALANCE_TOL,
        f"<= {ENERGY_BALANCE_TOL:g}",
    )


def check_cutoff_limits(suite: VerifySuite) -> PropertyResult:
    name, threshold = "cutoff_limits", f"<= {CUTOFF_RATIO_RTOL:g}"
    gm = suite.diagonal_mode
    if gm is None:
        return _not_applicable(name, threshold, "no growing frequency")
    spw = suite.ctx.config.numerics.samples_per_wavelength
    deviations = [
        abs(limit_ratio(gm, CUTOFF_N, beta, component, spw) - 1.0)
        for beta in CUTOFF_BETAS
        for component in (0, 2)
    ]
    value = float(np.nanmax(deviations))
    return _result(name, value, value <= CUTOFF_RATIO_RTOL, threshold)


def check_cutoff_sum_bounded(suite: VerifySuite) -> PropertyResult:
    name = "cutoff_sum_bounded"
    lo, hi = CUTOFF_SUM_RANGE
    threshold = f"in [{lo:g}, {hi:g}]"
    gm = suite.diagonal_mode
    if gm is None:
        return _not_applicable(name, threshold, "no growing frequency")
    spw = suite.ctx.config.numerics.samples_per_wavelength
    small, large = (
        cutoff_norms(gm, n, spw).norms["u_cutoff_sum"] for n in CUTOFF_SUM_NS
    )
    value = large / small
    return _result(name, value, lo <= value <= hi, threshold)


def _trial_frequencies(suite: VerifySuite) -> List[Frequency]:
    """Radii from the scan start past |ξ|_c, rotated through the half-plane."""
    n = suite.section.n_trial_frequencies
    xi_min = suite.ctx.config.scan.xi_min
    top = 1.5 * suite.xi_c if math.isfinite(suite.xi_c) else 2.0 * max(
        s.xi_norm for s in suite.curve.samples
    )
    radii = np.geomspace(xi_min, top, n)
    angles = np.pi * np.arange(n) / n
    return [
        (float(r * math.cos(a)), float(r * math.sin(a)))
        for r, a in zip(radii, angles)
    ]


def check_variational_inequality(suite: VerifySuite) -> PropertyResult:
    frequencies = _trial_frequencies(suite)
    Lambda = max([suite.curve.Lambda] + [suite.lam_at(xi) for xi in frequencies])
    trials = random_trials(
        suite.ctx.grid,
        frequencies,
        suite.section.trials_per_frequency,
        suite.rng(4),
    )
    report = growth_inequality_check(
        suite.ctx.profile,
        suite.fluid,
        suite.ctx.grid,
        Lambda,
        trials,
        assembler=suite.ctx.assembler,
    )
    suite.ctx.write_table(report.table, "inequality_trials.csv")
    value = report.max_relative_violation
    return _result(
        "variational_inequality",
        value,
        value <= INEQUALITY_RTOL,
        f"<= {INEQUALITY_RTOL:g}",
        f"Lambda {Lambda:.10g}, {report.n_trials} trials",
    )


def check_synthesis_real(suite: VerifySuite) -> PropertyResult:
    name, threshold = "synthesis_real", f"<= {SYNTHESIS_TOL:g}"
    if suite.mode is None:
        return _not_applicable(name, threshold, "no growing frequency")
    gm = build_real_mode(suite.mode)
    value = synthesis_imaginary_residual(gm, seed=suite.section.seed)
    return _result(name, value, value <= SYNTHESIS_TOL, threshold)


str2property: Dict[str, Callable[[VerifySuite], PropertyResult]] = {
    "equilibrium_residual": check_equilibrium_residual,
    "pressure_mismatch": check_pressure_mismatch,
    "energy_identity": check_energy_identity,
    "form_equivalence": check_form_equivalence,
    "alpha_monotone": check_alpha_monotone,
    "alpha_bound": check_alpha_bound,
    "fixed_point_oracle": check_fixed_point_oracle,
    "fixed_point_iterations": check_fixed_point_iterations,
    "dispersion_endpoints": check_dispersion_endpoints,
    "supercritical_stable": check_supercritical_stable,
    "growth_bound": check_growth_bound,
    "symmetry": check_symmetry,
    "periodic_threshold": check_periodic_threshold,
    "evolution_eigenmode": check_evolution_eigenmode,
    "evolution_random": check_evolution_random,
    "evolution_stable": check_evolution_stable,
    "evolution_dt_order": check_evolution_dt_order,
    "energy_balance": check_energy_balance,
    "cutoff_limits": check_cutoff_limits,
    "cutoff_sum_bounded": check_cutoff_sum_bounded,
    "variational_inequality": check_variational_inequality,
    "synthesis_real": check_synthesis_real,
}


def create_property(name: str) -> Callable[[VerifySuite], PropertyResult]:
    if name not in str2property:
        raise ConfigurationError(
            f"property {name!r} is not implemented", "verify.properties"
        )
    return str2property[name]


def run_properties(
    suite: VerifySuite, names: Optional[Sequence[str]] = None
) -> List[PropertyResult]:
    checks = [
        (name, create_property(name)) for name in (names or list(str2property))
    ]
    results = []
    for name, check in checks:
        result = check(suite)
        log = logger.info if result.passed else logger.warning
        log(
            f"{name}: {'pass' if result.passed else 'FAIL'} "
            f"(value {result.value:.6g}, {result.threshold}) {result.detail}"
        )
        results.append(result)
    return results


def run_suite(ctx: RunContext) -> Dict[str, Any]:
    """Runs the configured properties, writes ``verify.csv`` and
    ``verify.json``, and raises :class:`VerificationError` if any fails."""
    suite = VerifySuite(ctx)
    results = run_properties(suite, ctx.config.verify.properties)
    records = [dataclasses.asdict(r) for r in results]
    ctx.write_table(pd.DataFrame(records), "verify.csv")
    failed = [r.name for r in results if not r.passed]
    ctx.write_json(
        {"properties": records, "all_passed": not failed}, "verify.json"
    )

    mode = suite.mode
    summary = summary_of(
        ctx,
        "verify",
        suite.curve,
        residuals={
            "energy_identity": mode.residual_energy if mode else None,
            "euler_lagrange": mode.residual_strong if mode else None,
            "interface_jump": mode.residual_jump if mode else None,
        },
        properties={r.name: r.passed for r in results},
    )
    if failed:
        ctx.write_json(summary, "summary.json")
        raise VerificationError(
            f"{len(failed)} of {len(results)} properties failed: {failed}"
        )
    return summary
