from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from joblib import Parallel

from rtspectra.assembly.forms import FormAssembler
from rtspectra.assembly.grid import VerticalGrid, build_grid
from rtspectra.errors import ConfigurationError
from rtspectra.logging.setup import delayed_with_logging
from rtspectra.physics.equilibrium import EquilibriumProfile, FluidConfig
from rtspectra.spectral.fixed_point import (
    DEFAULT_TOL,
    lambda_upper_bound,
    solve_lambda,
)
from rtspectra.typing import Frequency

logger = logging.getLogger(__name__)

DEFAULT_XI_MIN = 1e-2
REFINEMENT_RTOL = 1e-2
MAX_CAP_DOUBLINGS = 8

GridSpec = Union[int, VerticalGrid]


@dataclass(frozen=True)
class DispersionSample:
    xi: Frequency
    lam: Optional[float]
    alpha_residual: float
    iterations: int

    @property
    def xi_norm(self) -> float:
        return math.hypot(self.xi[0], self.xi[1])

    @property
    def is_stable(self) -> bool:
        return self.lam is None


@dataclass(frozen=True)
class DispersionCurve:
    samples: List[DispersionSample]
    Lambda: float
    xi1: Optional[Frequency]
    xi_c: float
    c7: float
    periods: Tuple[float, float]
    lambda_bound: float
    refinement_stable: Optional[bool] = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "stable" if self.xi1 is None else "unstable"

    @property
    def lambdas(self) -> np.ndarray:
        return np.array(
            [np.nan if s.lam is None else s.lam for s in self.samples]
        )

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "xi1": [s.xi[0] for s in self.samples],
                "xi2": [s.xi[1] for s in self.samples],
                "xi_abs": [s.xi_norm for s in self.samples],
                "lambda": [s.lam for s in self.samples],
                "alpha_residual": [s.alpha_residual for s in self.samples],
                "iterations": [s.iterations for s in self.samples],
            }
        )


def critical_frequency(cfg: FluidConfig, profile: EquilibriumProfile) -> float:
    """|ξ|_c = √(g⟦ρ̄⟧/ϑ); infinite without surface tension."""
    if cfg.theta == 0:
        return math.inf
    return math.sqrt(cfg.g * profile.jump_rho / cfg.theta)


def periods_of(xi1: Optional[Frequency]) -> Tuple[float, float]:
    if xi1 is None:
        return (1.0, 1.0)
    return tuple(1.0 / abs(k) if k != 0 else 1.0 for k in xi1)


def ray_samples(
    xi_min: float,
    xi_max: float,
    n_samples: int,
    direction: Frequency = (1.0, 0.0),
) -> List[Frequency]:
    """Log-spaced frequencies along a ray."""
    if not 0 < xi_min < xi_max or not math.isfinite(xi_max):
        raise ConfigurationError(
            f"need 0 < xi_min < xi_max < inf, got [{xi_min}, {xi_max}]",
            "scan.xi_max",
        )
    unit = np.asarray(direction, dtype=float)
    unit = unit / np.linalg.norm(unit)
    radii = np.geomspace(xi_min, xi_max, n_samples)
    return [(float(r * unit[0]), float(r * unit[1])) for r in radii]


def half_plane_samples(
    xi_min: float, xi_max: float, n_radial: int, n_angle: int
) -> List[Frequency]:
    """Polar grid over the half-plane ξ₂ ≥ 0 (λ(ξ) = λ(−ξ) covers the rest)."""
    angles = np.linspace(0.0, np.pi, n_angle, endpoint=False)
    samples: List[Frequency] = []
    for angle in angles:
        samples += ray_samples(
            xi_min, xi_max, n_radial, (math.cos(angle), math.sin(angle))
        )
    return samples


def _resolve_grid(
    profile: EquilibriumProfile, grid_spec: GridSpec
) -> VerticalGrid:
    if isinstance(grid_spec, VerticalGrid):
        return grid_spec
    return build_grid(profile, int(grid_spec))


def solve_sample(
    profile: EquilibriumProfile,
    grid: VerticalGrid,
    cfg: FluidConfig,
    xi: Frequency,
    tol: float,
) -> DispersionSample:
    forms = FormAssembler(profile, grid, cfg).assemble(xi)
    result = solve_lambda(forms, cfg, profile, tol)
    if result.is_stable:
        return DispersionSample(
            xi=forms.xi, lam=None, alpha_residual=float("nan"), iterations=0
        )
    return DispersionSample(
        xi=forms.xi,
        lam=result.lam,
        alpha_residual=result.residual_energy,
        iterations=result.iterations,
    )


def _solve_all(
    cfg: FluidConfig,
    profile: EquilibriumProfile,
    grid: VerticalGrid,
    xi_samples: Sequence[Frequency],
    tol: float,
    n_jobs: int,
) -> List[DispersionSample]:
    return Parallel(n_jobs=n_jobs)(
        delayed_with_logging(solve_sample)(profile, grid, cfg, xi, tol)
        for xi in xi_samples
    )


def _midpoints(xi_samples: Sequence[Frequency]) -> List[Frequency]:
    arr = np.asarray(xi_samples, dtype=float)
    mids = 0.5 * (arr[1:] + arr[:-1])
    return [(float(a), float(b)) for a, b in mids]


def _interleave(
    first: List[DispersionSample], second: List[DispersionSample]
) -> List[DispersionSample]:
    out: List[DispersionSample] = []
    for i, sample in enumerate(first):
        out.append(sample)
        if i < len(second):
            out.append(second[i])
    return out


def summarize(
    cfg: FluidConfig,
    profile: EquilibriumProfile,
    samples: List[DispersionSample],
    refinement_stable: Optional[bool] = None,
) -> DispersionCurve:
    xi_c = critical_frequency(cfg, profile)
    bound = lambda_upper_bound(cfg, profile)
    unstable = [s for s in samples if not s.is_stable]
    if unstable:
        best = max(unstable, key=lambda s: s.lam)
        Lambda, xi1, c7 = best.lam, best.xi, best.lam
    else:
        Lambda, xi1, c7 = 0.0, None, 0.0

    bound_violations = sum(1 for s in unstable if s.lam > bound)
    supercritical_unstable = sum(1 for s in unstable if s.xi_norm >= xi_c)
    if bound_violations:
        logger.warning(
            f"{bound_violations} samples exceed the growth bound {bound}"
        )
    if supercritical_unstable:
        logger.warning(
            f"{supercritical_unstable} samples at or above |xi|_c={xi_c} "
            "report growth"
        )
    return DispersionCurve(
        samples=samples,
        Lambda=Lambda,
        xi1=xi1,
        xi_c=xi_c,
        c7=c7,
        periods=periods_of(xi1),
        lambda_bound=bound,
        refinement_stable=refinement_stable,
        diagnostics={
            "bound_violations": bound_violations,
            "supercritical_unstable": supercritical_unstable,
            "n_samples": len(samples),
            "n_stable": len(samples) - len(unstable),
        },
    )


def scan(
    cfg: FluidConfig,
    profile: EquilibriumProfile,
    grid_spec: GridSpec,
    xi_samples: Sequence[Frequency],
    tol: float = DEFAULT_TOL,
    n_jobs: int = 1,
    densify: bool = False,
) -> DispersionCurve:
    """Growth rate at every sample, reduced to Λ, ξ¹, c₇ and the periods.

    With ``densify`` the midpoints of consecutive samples are solved too and
    ``refinement_stable`` records whether Λ moved by less than 1%.
    """
    if len(xi_samples) == 0:
        raise ConfigurationError("at least one frequency is required", "scan")
    if not np.all(np.isfinite(np.asarray(xi_samples, dtype=float))):
        raise ConfigurationError("frequencies must be finite", "scan")
    grid = _resolve_grid(profile, grid_spec)
    samples = _solve_all(cfg, profile, grid, xi_samples, tol, n_jobs)
    if not densify or len(xi_samples) < 2:
        return summarize(cfg, profile, samples)

    coarse = summarize(cfg, profile, samples)
    extra = _solve_all(cfg, profile, grid, _midpoints(xi_samples), tol, n_jobs)
    fine = summarize(cfg, profile, _interleave(samples, extra))
    moved = abs(fine.Lambda - coarse.Lambda)
    bound = REFINEMENT_RTOL * max(fine.Lambda, np.finfo(float).tiny)
    stable = bool(moved <= bound)
    logger.info(
        f"densified scan: Lambda {coarse.Lambda:.6g} -> {fine.Lambda:.6g}"
    )
    return summarize(cfg, profile, fine.samples, refinement_stable=stable)


def resolve_xi_cap(
    cfg: FluidConfig,
    profile: EquilibriumProfile,
    grid_spec: GridSpec,
    n_samples: int = 64,
    xi_min: float = DEFAULT_XI_MIN,
    tol: float = DEFAULT_TOL,
    n_jobs: int = 1,
) -> Tuple[float, DispersionCurve]:
    """Frequency cap for ϑ = 0: ten times the argmax estimate, doubled
    until Λ moves by less than 1%."""
    grid = _resolve_grid(profile, grid_spec)
    cap = 10.0 / max(cfg.h_plus, -cfg.h_minus)
    previous: Optional[float] = None
    curve = None
    for _ in range(MAX_CAP_DOUBLINGS):
        curve = scan(
            cfg, profile, grid, ray_samples(xi_min, cap, n_samples), tol, n_jobs
        )
        target = 10.0 * math.hypot(*curve.xi1) if curve.xi1 else cap
        if (
            previous is not None
            and abs(curve.Lambda - previous)
            <= REFINEMENT_RTOL * max(curve.Lambda, np.finfo(float).tiny)
            and target <= cap
        ):
            break
        previous = curve.Lambda
        cap = max(2.0 * cap, target)
    logger.info(f"frequency cap resolved at {cap:.6g}")
    return cap, curve
