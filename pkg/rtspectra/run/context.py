"""State shared by the commands of one run."""
from __future__ import annotations

import math
import pathlib
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
import scipy

from rtspectra import __version__
from rtspectra.assembly.forms import FormAssembler
from rtspectra.assembly.grid import VerticalGrid, build_grid
from rtspectra.dispersion.scan import (
    DispersionCurve,
    critical_frequency,
    half_plane_samples,
    ray_samples,
    resolve_xi_cap,
    scan,
)
from rtspectra.dispersion.stability import escape_time
from rtspectra.errors import DomainError
from rtspectra.load_do_save import save
from rtspectra.physics.equilibrium import (
    EquilibriumProfile,
    FluidConfig,
    build_equilibrium,
)
from rtspectra.run.config import RunConfig
from rtspectra.spectral.fixed_point import solve_lambda
from rtspectra.spectral.solutions import SolveResult
from rtspectra.typing import Frequency


@dataclass
class RunContext:
    config: RunConfig
    profile: EquilibriumProfile
    grid: VerticalGrid
    assembler: FormAssembler
    out_dir: pathlib.Path
    n_jobs: int = 1

    @property
    def fluid(self) -> FluidConfig:
        return self.config.physics

    @property
    def tol(self) -> float:
        return self.config.numerics.tol

    def path(self, name: str) -> str:
        return str(self.out_dir / name)

    def write_table(self, table: pd.DataFrame, name: str) -> None:
        if "csv" in self.config.outputs.formats:
            save(table, self.path(name))

    def write_json(self, obj: Dict[str, Any], name: str) -> None:
        if "json" in self.config.outputs.formats:
            save(obj, self.path(name))

    def solve_at(self, xi: Frequency) -> SolveResult:
        forms = self.assembler.assemble(xi)
        return solve_lambda(forms, self.fluid, self.profile, self.tol)


def prepare(
    cfg: RunConfig,
    out_dir: Optional[str] = None,
    threads: Optional[int] = None,
) -> RunContext:
    profile = build_equilibrium(cfg.physics, cfg.numerics.profile_nodes)
    grid = build_grid(profile, cfg.numerics.elements_per_layer)
    directory = pathlib.Path(
        out_dir if out_dir is not None else cfg.outputs.directory
    )
    directory.mkdir(parents=True, exist_ok=True)
    return RunContext(
        config=cfg,
        profile=profile,
        grid=grid,
        assembler=FormAssembler(profile, grid, cfg.physics),
        out_dir=directory,
        n_jobs=threads if threads is not None else cfg.threads,
    )


def versions() -> Dict[str, str]:
    return {
        "rtspectra": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "pandas": pd.__version__,
    }


def resolve_xi_max(ctx: RunContext) -> float:
    """Upper end of the scan: configured, 0.99·|ξ|_c, or the ϑ = 0 cap."""
    section = ctx.config.scan
    if section.xi_max is not None:
        return section.xi_max
    xi_c = critical_frequency(ctx.fluid, ctx.profile)
    if math.isfinite(xi_c):
        return 0.99 * xi_c
    cap, _ = resolve_xi_cap(
        ctx.fluid,
        ctx.profile,
        ctx.grid,
        section.n_samples,
        section.xi_min,
        ctx.tol,
        ctx.n_jobs,
    )
    return cap


def scan_samples(ctx: RunContext) -> List[Frequency]:
    section = ctx.config.scan
    xi_max = resolve_xi_max(ctx)
    if section.kind == "half_plane":
        return half_plane_samples(
            section.xi_min, xi_max, section.n_samples, section.n_angles
        )
    return ray_samples(
        section.xi_min, xi_max, section.n_samples, section.direction
    )


def dispersion_curve(ctx: RunContext) -> DispersionCurve:
    return scan(
        ctx.fluid,
        ctx.profile,
        ctx.grid,
        scan_samples(ctx),
        ctx.tol,
        ctx.n_jobs,
        ctx.config.scan.densify,
    )


def target_frequency(
    ctx: RunContext, curve: Optional[DispersionCurve] = None
) -> Frequency:
    """mode.xi when configured, otherwise the argmax ξ¹ of the scan."""
    if ctx.config.mode.xi is not None:
        xi = ctx.config.mode.xi
        return (float(xi[0]), float(xi[1]))
    if curve is None:
        curve = dispersion_curve(ctx)
    if curve.xi1 is None:
        raise DomainError(
            "every sampled frequency is stable; set a frequency explicitly",
            "mode.xi",
        )
    return curve.xi1


def summary_of(
    ctx: RunContext,
    command: str,
    curve: Optional[DispersionCurve] = None,
    residuals: Optional[Dict[str, Any]] = None,
    **extra: Any,
) -> Dict[str, Any]:
    """Summary record; every documented key is present, null when the
    command does not produce it."""
    summary: Dict[str, Any] = {
        "command": command,
        "Lambda": None,
        "xi1": None,
        "xi_c": critical_frequency(ctx.fluid, ctx.profile),
        "c7": None,
        "R": None,
        "verdict": None,
        "T_delta": None,
        "residuals": residuals or {},
        "versions": versions(),
    }
    if curve is not None:
        summary.update(
            Lambda=curve.Lambda,
            xi1=list(curve.xi1) if curve.xi1 is not None else [],
            c7=curve.c7,
            verdict=curve.verdict,
        )
        if curve.c7 > 0:
            escape = ctx.config.escape
            summary["T_delta"] = escape_time(
                curve.c7, escape.epsilon, escape.delta
            )
    summary.update(extra)
    return summary
