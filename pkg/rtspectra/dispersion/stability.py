from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from rtspectra.dispersion.scan import DispersionCurve, critical_frequency
from rtspectra.errors import DomainError
from rtspectra.physics.equilibrium import EquilibriumProfile, FluidConfig
from rtspectra.typing import Frequency

MARGINAL_TOL = 1e-9
MAX_LATTICE_POINTS = 1_000_000


@dataclass(frozen=True)
class StabilityReport:
    mode: str
    verdict: str
    R: Optional[float] = None
    witness: Optional[Frequency] = None
    periods: Optional[Tuple[float, float]] = None
    lattice_unstable: Optional[bool] = None
    unstable_lattice_count: Optional[int] = None

    @property
    def lattice_consistent(self) -> Optional[bool]:
        if self.lattice_unstable is None or self.verdict == "marginal":
            return None
        return self.lattice_unstable == (self.verdict == "unstable")


def rayleigh_number(
    cfg: FluidConfig, profile: EquilibriumProfile, L1: float, L2: float
) -> float:
    """R = ϑ/(g·max(L₁², L₂²)·⟦ρ̄⟧)."""
    denominator = cfg.g * max(L1**2, L2**2) * profile.jump_rho
    if denominator == 0:
        return math.inf
    return cfg.theta / denominator


def _count_subcritical(L1: float, L2: float, xi_c: float) -> Optional[int]:
    """Nonzero lattice frequencies of L₁⁻¹ℤ × L₂⁻¹ℤ with |ξ| < |ξ|_c."""
    k1 = math.ceil(xi_c * L1)
    k2 = math.ceil(xi_c * L2)
    if (2 * k1 + 1) * (2 * k2 + 1) > MAX_LATTICE_POINTS:
        return None
    m1, m2 = np.meshgrid(
        np.arange(-k1, k1 + 1) / L1, np.arange(-k2, k2 + 1) / L2
    )
    norms = np.hypot(m1, m2)
    return int(np.count_nonzero((norms < xi_c) & (norms > 0)))


def classify_periodic(
    cfg: FluidConfig, profile: EquilibriumProfile, L1: float, L2: float
) -> StabilityReport:
    if not (L1 > 0 and L2 > 0):
        raise DomainError(f"periods must be > 0, got ({L1}, {L2})", "periods")

    # the shortest nonzero lattice vector lies on an axis
    witness = (1.0 / L1, 0.0) if L1 >= L2 else (0.0, 1.0 / L2)
    xi_c = critical_frequency(cfg, profile)
    if cfg.theta == 0:
        return StabilityReport(
            mode="periodic",
            verdict="unstable",
            witness=witness,
            periods=(L1, L2),
            lattice_unstable=True,
        )

    R = rayleigh_number(cfg, profile, L1, L2)
    if abs(R - 1.0) <= MARGINAL_TOL:
        verdict = "marginal"
    elif R > 1.0:
        verdict = "stable"
    else:
        verdict = "unstable"
    lattice_unstable = math.hypot(*witness) < xi_c
    return StabilityReport(
        mode="periodic",
        verdict=verdict,
        R=R,
        witness=witness if lattice_unstable else None,
        periods=(L1, L2),
        lattice_unstable=lattice_unstable,
        unstable_lattice_count=_count_subcritical(L1, L2, xi_c),
    )


def classify_whole_plane(curve: DispersionCurve) -> StabilityReport:
    return StabilityReport(
        mode="whole_plane", verdict=curve.verdict, witness=curve.xi1
    )


def escape_time(c7: float, epsilon: float, delta: float) -> float:
    """T^δ = ln(ε/δ)/c₇."""
    if not c7 > 0:
        raise DomainError(f"growth constant must be > 0, got {c7}", "c7")
    if not 0 < delta < epsilon:
        raise DomainError(
            f"need 0 < delta < epsilon, got delta={delta}, epsilon={epsilon}",
            "escape.delta",
        )
    return math.log(epsilon / delta) / c7
