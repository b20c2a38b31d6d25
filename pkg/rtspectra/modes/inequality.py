from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from rtspectra.assembly.forms import (
    FormAssembler,
    FormSet,
    interface_energy,
    potential_functional,
    quadratic,
)
from rtspectra.assembly.grid import N_FIELDS, VerticalGrid
from rtspectra.errors import DomainError
from rtspectra.physics.equilibrium import EquilibriumProfile, FluidConfig
from rtspectra.typing import Frequency, NDFloat

logger = logging.getLogger(__name__)

DEFAULT_SINE_MODES = 6
VIOLATION_RTOL = 1e-9


@dataclass(frozen=True)
class GrowthTrial:
    """Single-frequency trial field; ``vector`` holds the free dofs of
    W(y₃) and may be complex (real and imaginary parts contribute
    separately)."""

    xi: Frequency
    vector: np.ndarray


@dataclass(frozen=True)
class InequalityReport:
    max_violation: float
    max_relative_violation: float
    table: pd.DataFrame

    @property
    def n_trials(self) -> int:
        return len(self.table)


def smooth_trial_vector(
    grid: VerticalGrid,
    rng: np.random.Generator,
    n_modes: int = DEFAULT_SINE_MODES,
    complex_valued: bool = True,
) -> np.ndarray:
    """Random combination of sin(kπ(y₃ − h₋)/(h₊ − h₋)), k ≤ n_modes, per
    field; vanishes at h±."""
    y = grid.nodes
    x = (y - y[0]) / (y[-1] - y[0])
    basis = np.sin(np.pi * np.outer(np.arange(1, n_modes + 1), x))
    decay = 1.0 / np.arange(1, n_modes + 1)

    def draw() -> NDFloat:
        coef = rng.standard_normal((N_FIELDS, n_modes)) * decay
        return grid.restrict(coef @ basis)

    if complex_valued:
        return draw() + 1j * draw()
    return draw()


def random_trials(
    grid: VerticalGrid,
    xi_samples: Sequence[Frequency],
    per_frequency: int,
    rng: np.random.Generator,
) -> List[GrowthTrial]:
    return [
        GrowthTrial(
            xi=(float(xi[0]), float(xi[1])),
            vector=smooth_trial_vector(grid, rng),
        )
        for xi in xi_samples
        for _ in range(per_frequency)
    ]


def _evaluate(forms: FormSet, v: np.ndarray, Lambda: float) -> Dict[str, float]:
    kinetic = quadratic(forms.J_mat, v)
    viscous = quadratic(forms.D_mat, v)
    lhs = quadratic(forms.E_mat, v)
    rhs = Lambda**2 * kinetic + Lambda * viscous
    return {
        "xi1": forms.xi[0],
        "xi2": forms.xi[1],
        "lhs": lhs,
        "lhs_alt": interface_energy(forms, v) - potential_functional(forms, v),
        "rhs": rhs,
        "kinetic": kinetic,
        "viscous": viscous,
        "violation": max(lhs - rhs, 0.0),
        "scale": abs(lhs) + rhs,
    }


def growth_inequality_check(
    profile: EquilibriumProfile,
    cfg: FluidConfig,
    grid: VerticalGrid,
    Lambda: float,
    trials: Sequence[GrowthTrial],
    assembler: Optional[FormAssembler] = None,
) -> InequalityReport:
    """Evaluates g⟦ρ̄⟧|ψ(0)|² − I(w) ≤ Λ²‖√ρ̄w‖₀² + ΛU(w) per trial.

    The left side is vᴴEv, the form λ is computed from; the rewritten form
    g⟦ρ̄⟧|ψ(0)|² − I, i.e. vᴴE_alt v, is reported as ``lhs_alt``.
    """
    if not Lambda >= 0:
        raise DomainError(f"Lambda must be >= 0, got {Lambda}", "Lambda")
    if not trials:
        raise DomainError("at least one trial field is required", "trials")
    if assembler is None:
        assembler = FormAssembler(profile, grid, cfg)

    forms_by_xi: Dict[Frequency, FormSet] = {}
    rows = []
    for trial in trials:
        xi = (float(trial.xi[0]), float(trial.xi[1]))
        if xi not in forms_by_xi:
            forms_by_xi[xi] = assembler.assemble(xi)
        rows.append(_evaluate(forms_by_xi[xi], trial.vector, Lambda))

    table = pd.DataFrame(rows)
    relative = table["violation"] / table["scale"].where(table["scale"] > 0, 1.0)
    report = InequalityReport(
        max_violation=float(table["violation"].max()),
        max_relative_violation=float(relative.max()),
        table=table,
    )
    if report.max_relative_violation > VIOLATION_RTOL:
        logger.warning(
            f"growth inequality violated: max relative excess "
            f"{report.max_relative_violation:.3g} over {report.n_trials} trials"
        )
    return report
