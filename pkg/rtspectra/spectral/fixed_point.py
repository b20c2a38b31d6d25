from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import bisect

from rtspectra.assembly.forms import FormSet, e_upper_bound, quadratic
from rtspectra.errors import BracketingError, DomainError
from rtspectra.physics.equilibrium import EquilibriumProfile, FluidConfig
from rtspectra.spectral.alpha import alpha, min_dissipation
from rtspectra.spectral.residuals import (
    energy_identity_residual,
    euler_lagrange_residual,
)
from rtspectra.spectral.solutions import (
    AlphaResult,
    ModeSolution,
    SolveResult,
    Stable,
)

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
MAX_BRACKET_EXPANSIONS = 60
MAX_POLISH_ROUNDS = 4


def lambda_upper_bound(cfg: FluidConfig, profile: EquilibriumProfile) -> float:
    """λ(ξ) ≤ 3h₊g⟦ρ̄⟧/(2μ₊) at every frequency."""
    return 3.0 * cfg.h_plus * cfg.g * profile.jump_rho / (2.0 * cfg.mu_plus)


def _beta_gap(forms: FormSet, s: float) -> Tuple[float, AlphaResult]:
    res = alpha(forms, s)
    return math.sqrt(max(res.alpha, 0.0)) - s, res


def _energy_root(forms: FormSet, v: np.ndarray) -> float:
    """Positive root s of s²·vᵀJv + s·vᵀDv = vᵀEv; NaN if vᵀEv ≤ 0."""
    kinetic = quadratic(forms.J_mat, v)
    dissipation = quadratic(forms.D_mat, v)
    energy = quadratic(forms.E_mat, v)
    if not energy > 0:
        return float("nan")
    return 2.0 * energy / (
        dissipation + math.sqrt(dissipation**2 + 4.0 * kinetic * energy)
    )


def _polish(
    forms: FormSet, s: float, res: AlphaResult, tol: float
) -> Tuple[float, AlphaResult]:
    """Rayleigh-quotient refinement of the bisection root.

    The returned s is the energy root of the returned maximizer, so the pair
    satisfies λ²J = E − λD up to rounding even where α(s) ≈ s² is too small
    for the bisection gap to resolve.
    """
    for _ in range(MAX_POLISH_ROUNDS):
        s_new = _energy_root(forms, res.maximizer)
        if not s_new > 0:
            break
        converged = abs(s_new - s) <= tol * max(1.0, s)
        s = s_new
        if converged:
            break
        res = alpha(forms, s)
    else:
        s_new = _energy_root(forms, res.maximizer)
        if s_new > 0:
            s = s_new
    return s, res


def solve_lambda(
    forms: FormSet,
    cfg: FluidConfig,
    profile: EquilibriumProfile,
    tol: float = DEFAULT_TOL,
    bracket: Optional[Tuple[float, float]] = None,
    max_iter: int = 60,
) -> SolveResult:
    """Growth rate λ with λ² = α(λ), by bisection on β(s) − s.

    β(s) = √max(α(s), 0) is continuous and strictly decreasing, so the gap
    β(s) − s has exactly one root. Bisection stops once |β(s) − s| ≤ tol or
    the bracket is narrower than tol; the root is then polished so that the
    mode satisfies the energy identity.
    """
    if not tol > 0:
        raise DomainError(f"tolerance must be > 0, got {tol}", "tol")

    alpha_tol = alpha(forms, tol)
    # at or beyond |ξ|_c the rewritten form is non-positive
    supercritical = forms.theta * forms.xi_norm2 >= forms.g * forms.jump_rho
    if supercritical or alpha_tol.alpha <= 0:
        logger.debug(
            "stable frequency",
            extra={"xi": forms.xi, "alpha_at_tol": alpha_tol.alpha},
        )
        return Stable(xi=forms.xi, alpha_at_tol=alpha_tol.alpha)

    if bracket is None:
        bounds = [lambda_upper_bound(cfg, profile)]
        if e_upper_bound(forms) > 0:
            bounds.append(e_upper_bound(forms) / min_dissipation(forms))
        s_lo, s_hi = tol, min(bounds)
    else:
        s_lo, s_hi = bracket

    gap_lo, res_lo = _beta_gap(forms, s_lo)
    while gap_lo < 0:
        if s_lo <= tol:
            raise BracketingError(
                f"beta(s) - s < 0 at s={s_lo} although alpha(tol) > 0 "
                f"(xi={forms.xi})"
            )
        s_lo = max(0.5 * s_lo, tol)
        gap_lo, res_lo = _beta_gap(forms, s_lo)

    gap_hi, res_hi = _beta_gap(forms, s_hi)
    n_expand = 0
    while gap_hi > 0:
        n_expand += 1
        if n_expand > MAX_BRACKET_EXPANSIONS:
            raise BracketingError(
                f"no sign change of beta(s) - s up to s={s_hi} "
                f"(xi={forms.xi})"
            )
        s_lo, gap_lo, res_lo = s_hi, gap_hi, res_hi
        s_hi *= 2.0
        gap_hi, res_hi = _beta_gap(forms, s_hi)

    s, res, iterations = s_lo, res_lo, 0
    if abs(gap_lo) > tol:
        for iterations in range(1, max_iter + 1):
            s = 0.5 * (s_lo + s_hi)
            gap, res = _beta_gap(forms, s)
            if abs(gap) <= tol:
                break
            if gap > 0:
                s_lo = s
            else:
                s_hi = s
            if s_hi - s_lo <= max(tol, 4.0 * np.finfo(float).eps * s_hi):
                break
        else:
            logger.warning(
                "bisection hit the iteration cap",
                extra={"xi": forms.xi, "s_lo": s_lo, "s_hi": s_hi},
            )

    s, res = _polish(forms, s, res, tol)

    mode = ModeSolution(
        xi=forms.xi,
        lam=s,
        vector=res.maximizer,
        grid=forms.grid,
        iterations=iterations,
    )
    residuals = euler_lagrange_residual(mode, profile, cfg)
    mode = dataclasses.replace(
        mode,
        residual_energy=energy_identity_residual(mode, forms),
        residual_strong=residuals.ode,
        residual_jump=residuals.jump,
    )
    logger.debug(
        "growth rate converged",
        extra={
            "xi": forms.xi,
            "lam": mode.lam,
            "iterations": iterations,
            "residual_energy": mode.residual_energy,
        },
    )
    return mode


def instability_window(forms: FormSet, tol: float = DEFAULT_TOL) -> float:
    """Right end γ of the window (0, γ) on which α > 0 (0 if empty)."""
    if alpha(forms, tol).alpha <= 0:
        return 0.0
    s_hi = e_upper_bound(forms) / min_dissipation(forms)
    if alpha(forms, s_hi).alpha >= 0:
        return s_hi
    return float(
        bisect(lambda s: alpha(forms, s).alpha, tol, s_hi, xtol=tol, maxiter=500)
    )


@dataclass(frozen=True)
class PositivityWitness:
    """E and D of the test field ψ = (1 − y₃²/h±²)^{β/2}; F(s) > 0 for s < s0."""

    beta: float
    energy: float
    dissipation: float
    kinetic: float
    s0: float

    def F(self, s: float) -> float:
        return self.energy - s * self.dissipation


def positivity_witness(
    forms: FormSet, cfg: FluidConfig, beta: float = 8.0
) -> PositivityWitness:
    xi1, xi2 = forms.xi
    if xi1 == 0 and xi2 == 0:
        raise DomainError("positivity witness needs a nonzero frequency", "xi")
    y = forms.grid.nodes
    depth = np.where(y >= 0, cfg.h_plus, cfg.h_minus)
    base = np.clip(1.0 - (y / depth) ** 2, 0.0, None)
    psi = base ** (beta / 2.0)
    dpsi = (beta / 2.0) * base ** (beta / 2.0 - 1.0) * (-2.0 * y / depth**2)

    nodal = np.zeros((3, len(y)))
    nodal[2] = psi
    if xi1 != 0:
        nodal[0] = -dpsi / xi1
    else:
        nodal[1] = -dpsi / xi2
    v = forms.grid.restrict(nodal)

    energy = quadratic(forms.E_mat, v)
    dissipation = quadratic(forms.D_mat, v)
    s0 = energy / dissipation if energy > 0 else 0.0
    return PositivityWitness(
        beta=beta,
        energy=energy,
        dissipation=dissipation,
        kinetic=quadratic(forms.J_mat, v),
        s0=s0,
    )
