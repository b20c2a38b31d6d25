from __future__ import annotations

import logging
from typing import Any, Callable, Dict, Optional

import pandas as pd

from rtspectra.assembly.grid import FIELD_NAMES
from rtspectra.dispersion.stability import classify_periodic
from rtspectra.errors import ConfigurationError, DomainError, RTSpectraError
from rtspectra.evolve.integrator import (
    EvolutionState,
    energy_balance_residual,
    horizon_for_amplification,
    measure_growth,
    random_state,
    step,
)
from rtspectra.load_do_save import save
from rtspectra.modes.cutoff import cutoff_sweep, norm_limits
from rtspectra.modes.synthesis import (
    build_real_mode,
    synthesis_imaginary_residual,
)
from rtspectra.physics.pressure import eval_pressure
from rtspectra.run.config import RunConfig
from rtspectra.run.context import (
    RunContext,
    dispersion_curve,
    prepare,
    summary_of,
    target_frequency,
)
from rtspectra.run.verify import run_suite
from rtspectra.spectral.fixed_point import (
    instability_window,
    positivity_witness,
    solve_lambda,
)
from rtspectra.spectral.solutions import ModeSolution
from rtspectra.utils import Timer, default_rng

logger = logging.getLogger(__name__)

STABLE_DT = 1e-2
STABLE_HORIZON = 10.0
STEPS_PER_GROWTH_TIME = 100


def _growing_mode_at_target(ctx: RunContext) -> ModeSolution:
    xi = target_frequency(ctx)
    result = ctx.solve_at(xi)
    if result.is_stable:
        raise DomainError(f"no growing mode at xi={xi}", "mode.xi")
    return result


def run_equilibrium(ctx: RunContext) -> Dict[str, Any]:
    layers = []
    for upper in (False, True):
        y, rho = ctx.profile.layer_samples(upper)
        pressure, _ = eval_pressure(ctx.fluid.layer(upper)[2], rho)
        layers.append(
            pd.DataFrame(
                {
                    "y3": y,
                    "layer": "upper" if upper else "lower",
                    "rho_bar": rho,
                    "pressure": pressure,
                    "pprime_rho": ctx.profile.layer_pprime_rho(upper),
                }
            )
        )
    ctx.write_table(pd.concat(layers, ignore_index=True), "equilibrium.csv")
    return summary_of(
        ctx,
        "equilibrium",
        residuals={
            "hydrostatic": ctx.profile.hydrostatic_residual(),
            "pressure_mismatch": ctx.profile.pressure_mismatch,
        },
        jump_rho=ctx.profile.jump_rho,
    )


def run_dispersion(ctx: RunContext) -> Dict[str, Any]:
    curve = dispersion_curve(ctx)
    ctx.write_table(curve.to_frame(), "dispersion.csv")
    residuals = [s.alpha_residual for s in curve.samples if not s.is_stable]
    summary = summary_of(
        ctx,
        "dispersion",
        curve,
        residuals={"energy_identity": max(residuals) if residuals else None},
        lambda_bound=curve.lambda_bound,
        refinement_stable=curve.refinement_stable,
        diagnostics=curve.diagnostics,
    )

    periods = ctx.config.scan.periods
    if periods is not None:
        report = classify_periodic(ctx.fluid, ctx.profile, *periods)
        summary.update(
            R=report.R,
            verdict=report.verdict,
            periodic={
                "periods": list(report.periods),
                "witness": report.witness,
                "lattice_unstable": report.lattice_unstable,
                "lattice_consistent": report.lattice_consistent,
                "unstable_lattice_count": report.unstable_lattice_count,
            },
        )
    logger.info(
        f"dispersion: verdict {summary['verdict']}, Lambda={curve.Lambda:.6g}"
    )
    return summary


def run_mode(ctx: RunContext) -> Dict[str, Any]:
    mode = _growing_mode_at_target(ctx)
    table = pd.DataFrame({"y3": ctx.grid.nodes})
    for name, values in zip(FIELD_NAMES, mode.profiles):
        table[name] = values
    ctx.write_table(table, "mode_profiles.csv")

    forms = ctx.assembler.assemble(mode.xi)
    gm = build_real_mode(mode, ctx.config.mode.box, ctx.config.mode.resolution)
    return summary_of(
        ctx,
        "mode",
        residuals={
            "energy_identity": mode.residual_energy,
            "euler_lagrange": mode.residual_strong,
            "interface_jump": mode.residual_jump,
            "synthesis_imaginary": synthesis_imaginary_residual(
                gm, seed=ctx.config.verify.seed
            ),
        },
        xi=list(mode.xi),
        lam=mode.lam,
        iterations=mode.iterations,
        psi0=mode.psi0,
        positivity_s0=positivity_witness(forms, ctx.fluid).s0,
        instability_window=instability_window(forms, ctx.tol),
    )


def run_cutoff(ctx: RunContext) -> Dict[str, Any]:
    mode = _growing_mode_at_target(ctx)
    gm = build_real_mode(mode, ctx.config.mode.box, ctx.config.mode.resolution)
    table = cutoff_sweep(
        gm,
        ctx.config.cutoff.ns,
        ctx.config.numerics.samples_per_wavelength,
        ctx.n_jobs,
    )
    ctx.write_table(table, "cutoff.csv")
    return summary_of(
        ctx, "cutoff", xi=list(mode.xi), c7=mode.lam, limits=norm_limits(gm)
    )


def run_evolve(ctx: RunContext) -> Dict[str, Any]:
    section = ctx.config.evolve
    xi = target_frequency(ctx)
    forms = ctx.assembler.assemble(xi)
    result = solve_lambda(forms, ctx.fluid, ctx.profile, ctx.tol)
    rng = default_rng(ctx.config.verify.seed)

    if result.is_stable:
        dt = section.dt or STABLE_DT
        horizon = section.horizon or STABLE_HORIZON
        initial = "random"
    else:
        dt = section.dt or 1.0 / (STEPS_PER_GROWTH_TIME * result.lam)
        horizon = section.horizon or horizon_for_amplification(
            result.lam, section.amplification
        )
        initial = section.initial
    ic = (
        EvolutionState.from_mode(result)
        if initial == "eigenmode"
        else random_state(forms, rng)
    )

    fit = measure_growth(
        forms, ic, dt, horizon, progress=logger.isEnabledFor(logging.INFO)
    )
    ctx.write_table(fit.to_frame(), "trajectory.csv")
    relative_error = (
        None if result.is_stable else abs(fit.rate - result.lam) / result.lam
    )
    logger.info(
        f"evolve: fitted rate {fit.rate:.6g} against lambda {result.lam:.6g}"
    )
    return summary_of(
        ctx,
        "evolve",
        residuals={
            "energy_balance": energy_balance_residual(
                forms, ic, step(forms, ic, dt)
            )
        },
        xi=list(xi),
        lam=result.lam,
        fitted_rate=fit.rate,
        relative_error=relative_error,
        dt=dt,
        horizon=horizon,
        n_steps=fit.n_steps,
        initial=initial,
    )


str2command: Dict[str, Callable[[RunContext], Dict[str, Any]]] = {
    "equilibrium": run_equilibrium,
    "dispersion": run_dispersion,
    "mode": run_mode,
    "cutoff": run_cutoff,
    "evolve": run_evolve,
    "verify": run_suite,
}


def run_command(
    cmd: str,
    cfg: RunConfig,
    out_dir: Optional[str] = None,
    threads: Optional[int] = None,
) -> int:
    """Runs one command and returns its exit status."""
    timer = Timer()
    timer.start()
    try:
        if cmd not in str2command:
            raise ConfigurationError(
                f"unknown command {cmd!r}, expected one of {list(str2command)}",
                "command",
            )
        ctx = prepare(cfg, out_dir, threads)
        save(cfg.to_dict(), ctx.path("effective_config.json"))
        summary = str2command[cmd](ctx)
        ctx.write_json(summary, "summary.json")
    except RTSpectraError as e:
        logger.error(f"{cmd} failed: {e}")
        return e.exit_code
    logger.info(f"{cmd} finished in {timer.end():.2f}s")
    return 0
