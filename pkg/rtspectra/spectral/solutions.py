from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from rtspectra.assembly.grid import VerticalGrid, trace_at_interface
from rtspectra.typing import Frequency, NDFloat


@dataclass(frozen=True)
class AlphaResult:
    s: float
    alpha: float
    maximizer: NDFloat
    dissipation: float


@dataclass(frozen=True)
class ModeSolution:
    """Converged growing mode at one frequency.

    ``profiles`` holds nodal (φ, θ, ψ) on ``grid.nodes``, zero at h±;
    ``vector`` is the J-normalized free-dof vector they come from.
    """

    xi: Frequency
    lam: float
    vector: NDFloat
    grid: VerticalGrid = field(repr=False)
    iterations: int
    residual_energy: float = float("nan")
    residual_strong: float = float("nan")
    residual_jump: float = float("nan")

    @property
    def profiles(self) -> NDFloat:
        return self.grid.expand(self.vector)

    @property
    def psi0(self) -> float:
        return float(trace_at_interface(self.grid, self.vector))

    @property
    def is_stable(self) -> bool:
        return False


@dataclass(frozen=True)
class Stable:
    """No instability window at this frequency: α(tol) ≤ 0."""

    xi: Frequency
    alpha_at_tol: float

    @property
    def lam(self) -> float:
        return 0.0

    @property
    def is_stable(self) -> bool:
        return True


SolveResult = Union[ModeSolution, Stable]


def fix_sign(v: NDFloat, grid: VerticalGrid) -> NDFloat:
    """Orients v so that ψ(0) > 0; falls back to the largest |ψ| entry."""
    psi = v[2 * grid.n_interior :]
    pivot = psi[grid.interface_index - 1]
    if abs(pivot) <= 1e-300 or abs(pivot) < 1e-12 * np.max(np.abs(psi)):
        pivot = psi[np.argmax(np.abs(psi))]
    return -v if pivot < 0 else v
