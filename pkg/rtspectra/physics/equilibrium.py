from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import bisect

from rtspectra.errors import ConfigurationError
from rtspectra.physics.pressure import (
    PressureLaw,
    create_pressure_law,
    eval_pressure,
)
from rtspectra.typing import NDFloat

logger = logging.getLogger(__name__)

MIN_NODES_PER_LAYER = 8
MATCH_RTOL = 1e-12
MATCH_TOLERANCE = 1e-10
RT_JUMP_RTOL = 1e-9
# eighth-order Dormand-Prince, sampled on the grid nodes
ODE_METHOD = "DOP853"
ODE_RTOL = 1e-12
ODE_ATOL = 1e-14


@dataclass(frozen=True)
class FluidConfig:
    g: float
    theta: float
    mu_plus: float
    mu_minus: float
    zeta_plus: float
    zeta_minus: float
    h_minus: float
    h_plus: float
    p_plus: PressureLaw
    p_minus: PressureLaw
    rho_minus_at_interface: float

    def __post_init__(self) -> None:
        checks = [
            ("g", self.g >= 0, "must be >= 0"),
            ("theta", self.theta >= 0, "must be >= 0"),
            ("mu_plus", self.mu_plus > 0, "must be > 0"),
            ("mu_minus", self.mu_minus > 0, "must be > 0"),
            ("zeta_plus", self.zeta_plus >= 0, "must be >= 0"),
            ("zeta_minus", self.zeta_minus >= 0, "must be >= 0"),
            ("h_minus", self.h_minus < 0, "must be < 0"),
            ("h_plus", self.h_plus > 0, "must be > 0"),
            (
                "rho_minus_at_interface",
                self.rho_minus_at_interface > 0,
                "must be > 0",
            ),
        ]
        for name, ok, requirement in checks:
            value = getattr(self, name)
            if not ok or not math.isfinite(value):
                raise ConfigurationError(f"{requirement}, got {value}", name)

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> FluidConfig:
        d = dict(d)
        for key, attr in (("pressure_plus", "p_plus"), ("pressure_minus", "p_minus")):
            try:
                d[attr] = create_pressure_law(d.pop(key))
            except ConfigurationError as e:
                raise ConfigurationError(e.reason, f"{key}.{e.field}") from e
        return cls(**d)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "g": self.g,
            "theta": self.theta,
            "mu_plus": self.mu_plus,
            "mu_minus": self.mu_minus,
            "zeta_plus": self.zeta_plus,
            "zeta_minus": self.zeta_minus,
            "h_minus": self.h_minus,
            "h_plus": self.h_plus,
            "pressure_plus": self.p_plus.to_dict(),
            "pressure_minus": self.p_minus.to_dict(),
            "rho_minus_at_interface": self.rho_minus_at_interface,
        }

    def layer(self, upper: bool) -> Tuple[float, float, PressureLaw]:
        """(mu, zeta, law) of the upper or lower fluid."""
        if upper:
            return self.mu_plus, self.zeta_plus, self.p_plus
        return self.mu_minus, self.zeta_minus, self.p_minus


@dataclass(frozen=True)
class EquilibriumProfile:
    """Hydrostatic density sampled on each layer.

    ``y_minus`` runs from h₋ up to 0 and ``y_plus`` from 0 up to h₊, so the
    interface station appears once per layer.
    """

    y_minus: NDFloat
    rho_minus: NDFloat
    y_plus: NDFloat
    rho_plus: NDFloat
    cfg: FluidConfig = field(repr=False)

    @property
    def grid_nodes(self) -> NDFloat:
        return np.concatenate([self.y_minus, self.y_plus])

    @property
    def rho_bar(self) -> NDFloat:
        return np.concatenate([self.rho_minus, self.rho_plus])

    @property
    def pprime_rho(self) -> NDFloat:
        return np.concatenate(
            [self.layer_pprime_rho(False), self.layer_pprime_rho(True)]
        )

    @property
    def jump_rho(self) -> float:
        return float(self.rho_plus[0] - self.rho_minus[-1])

    @property
    def pressure_mismatch(self) -> float:
        p_plus, _ = eval_pressure(self.cfg.p_plus, self.rho_plus[0])
        p_minus, _ = eval_pressure(self.cfg.p_minus, self.rho_minus[-1])
        return abs(p_plus - p_minus)

    def layer_samples(self, upper: bool) -> Tuple[NDFloat, NDFloat]:
        if upper:
            return self.y_plus, self.rho_plus
        return self.y_minus, self.rho_minus

    def layer_pprime_rho(self, upper: bool) -> NDFloat:
        _, rho = self.layer_samples(upper)
        _, p_prime = eval_pressure(self.cfg.layer(upper)[2], rho)
        return p_prime * rho

    def interpolate(
        self, y: NDFloat, upper: bool
    ) -> Tuple[NDFloat, NDFloat]:
        """Linear interpolation of ρ̄ and P′(ρ̄)ρ̄ inside one layer."""
        nodes, rho = self.layer_samples(upper)
        return (
            np.interp(y, nodes, rho),
            np.interp(y, nodes, self.layer_pprime_rho(upper)),
        )

    def hydrostatic_residual(self) -> float:
        """max |d/dy₃ P(ρ̄) + gρ̄| by central differences at interior nodes."""
        residual = 0.0
        for upper in (False, True):
            y, rho = self.layer_samples(upper)
            pressure, _ = eval_pressure(self.cfg.layer(upper)[2], rho)
            dp = (pressure[2:] - pressure[:-2]) / (y[2:] - y[:-2])
            residual = max(
                residual, float(np.max(np.abs(dp + self.cfg.g * rho[1:-1])))
            )
        return residual


def interface_jump(profile: EquilibriumProfile) -> float:
    return profile.jump_rho


def match_interface_density(cfg: FluidConfig) -> float:
    """Solves P₊(τ) = P₋(ρ̄₋(0⁻)) for τ by bisection."""
    rho_minus = cfg.rho_minus_at_interface
    target, _ = eval_pressure(cfg.p_minus, rho_minus)

    def mismatch(tau: float) -> float:
        return float(cfg.p_plus.value(tau)) - target

    lo = 1e-12 * rho_minus
    if mismatch(lo) > 0:
        raise ConfigurationError(
            f"interface pressure {target} is below P_plus at vanishing "
            "density; cannot bracket the matching density",
            "pressure_plus",
        )
    hi = rho_minus
    n_growth = 0
    while mismatch(hi) < 0:
        hi *= 2.0
        n_growth += 1
        if n_growth > 200 or not math.isfinite(hi):
            raise ConfigurationError(
                "failed to bracket the interface density", "pressure_plus"
            )
    if mismatch(hi) == 0:
        return hi
    return float(
        bisect(mismatch, lo, hi, xtol=1e-300, rtol=MATCH_RTOL, maxiter=1000)
    )


def _integrate_layer(
    law: PressureLaw, g: float, rho0: float, y: NDFloat, layer: str
) -> NDFloat:
    """dρ̄/dy₃ = −gρ̄/P′(ρ̄) from the interface out to the slab boundary,
    sampled on ``y``; stops at vacuum."""

    def rhs(_: float, rho: NDFloat) -> NDFloat:
        if not rho[0] > 0:
            return np.zeros(1)
        return np.array([-g * rho[0] / float(law.derivative(rho[0]))])

    def vacuum(_: float, rho: NDFloat) -> float:
        return rho[0]

    vacuum.terminal = True
    vacuum.direction = -1

    sol = solve_ivp(
        rhs,
        (y[0], y[-1]),
        [rho0],
        method=ODE_METHOD,
        t_eval=y,
        events=vacuum,
        rtol=ODE_RTOL,
        atol=ODE_ATOL * rho0,
    )
    if sol.status == 1 or len(sol.t) < len(y) or not np.all(sol.y[0] > 0):
        raise ConfigurationError(
            f"vacuum reached in the {layer} layer before the slab boundary",
            "rho_minus_at_interface",
        )
    if not sol.success:
        raise ConfigurationError(
            f"hydrostatic integration of the {layer} layer failed: "
            f"{sol.message}",
            "rho_minus_at_interface",
        )
    return sol.y[0]


def build_equilibrium(
    cfg: FluidConfig, nodes_per_layer: int
) -> EquilibriumProfile:
    if nodes_per_layer < MIN_NODES_PER_LAYER:
        raise ConfigurationError(
            f"must be >= {MIN_NODES_PER_LAYER}, got {nodes_per_layer}",
            "nodes_per_layer",
        )
    rho_minus0 = cfg.rho_minus_at_interface
    rho_plus0 = match_interface_density(cfg)
    jump = rho_plus0 - rho_minus0
    if jump <= RT_JUMP_RTOL * rho_minus0:
        raise ConfigurationError(
            f"Rayleigh-Taylor condition violated: density jump {jump:.3e} "
            "must be > 0",
            "rho_minus_at_interface",
        )

    # integrate outward from the interface, then flip the lower layer
    y_down = np.linspace(0.0, cfg.h_minus, nodes_per_layer)
    y_up = np.linspace(0.0, cfg.h_plus, nodes_per_layer)
    rho_down = _integrate_layer(cfg.p_minus, cfg.g, rho_minus0, y_down, "lower")
    rho_up = _integrate_layer(cfg.p_plus, cfg.g, rho_plus0, y_up, "upper")

    profile = EquilibriumProfile(
        y_minus=y_down[::-1].copy(),
        rho_minus=rho_down[::-1].copy(),
        y_plus=y_up,
        rho_plus=rho_up,
        cfg=cfg,
    )
    mismatch = profile.pressure_mismatch
    p_interface, _ = eval_pressure(cfg.p_minus, rho_minus0)
    if mismatch > MATCH_TOLERANCE * max(1.0, p_interface):
        raise ConfigurationError(
            f"interface pressure mismatch {mismatch:.3e} above tolerance",
            "pressure_plus",
        )
    logger.debug(
        "equilibrium built",
        extra={
            "jump_rho": jump,
            "nodes_per_layer": nodes_per_layer,
            "pressure_mismatch": mismatch,
        },
    )
    return profile
