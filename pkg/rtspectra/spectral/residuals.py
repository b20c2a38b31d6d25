from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from rtspectra.assembly.forms import FormSet, quadratic, state_matrices
from rtspectra.physics.equilibrium import EquilibriumProfile, FluidConfig
from rtspectra.spectral.solutions import ModeSolution
from rtspectra.typing import NDFloat


@dataclass(frozen=True)
class EulerLagrangeResidual:
    """Normalized strong-form residuals of a mode.

    ``ode_by_field`` and ``jump_by_field`` are ordered (φ, θ, ψ); the ψ jump
    is the normal stress condition carrying the surface-tension term.
    """

    ode: float
    jump: float
    ode_by_field: NDFloat
    jump_by_field: NDFloat


def energy_identity_residual(mode: ModeSolution, forms: FormSet) -> float:
    """|λ²J − (E − λD)| / (λ²J) on the mode vector."""
    v, lam = mode.vector, mode.lam
    kinetic = quadratic(forms.J_mat, v)
    rhs = quadratic(forms.E_mat, v) - lam * quadratic(forms.D_mat, v)
    return abs(lam**2 * kinetic - rhs) / (lam**2 * kinetic)


def _layer_terms(
    mode: ModeSolution,
    profile: EquilibriumProfile,
    cfg: FluidConfig,
    upper: bool,
) -> Tuple[NDFloat, NDFloat, NDFloat]:
    """Interior-node residuals, interface flux and the normalization of one
    layer.

    With Q = Q_E − λQ_D split as [[A, B], [Bᵀ, C]] over (u, u′), the
    Euler-Lagrange system reads A u + B u′ − (Bᵀu + C u′)′ − λ²ρ̄ u = 0 and
    its flux Bᵀu + C u′ carries the interface conditions.
    """
    grid = mode.grid
    lower_nodes, upper_nodes = grid.layer_slices()
    sl = upper_nodes if upper else lower_nodes
    y = grid.nodes[sl]
    u = mode.profiles[:, sl].T
    h = y[1] - y[0]
    lam = mode.lam
    mu, zeta, _ = cfg.layer(upper)

    def forms_at(points: NDFloat) -> Tuple[NDFloat, NDFloat]:
        rho, prho = profile.interpolate(points, upper)
        Q = state_matrices(mode.xi, rho, prho, mu, zeta, cfg.g)
        return Q["E"] - lam * Q["D"], rho

    Q_mid, _ = forms_at(0.5 * (y[1:] + y[:-1]))
    u_mid = 0.5 * (u[1:] + u[:-1])
    du_mid = np.diff(u, axis=0) / h
    flux = np.einsum("mji,mj->mi", Q_mid[:, :3, 3:], u_mid) + np.einsum(
        "mij,mj->mi", Q_mid[:, 3:, 3:], du_mid
    )

    Q_node, rho_node = forms_at(y)
    du_c = (u[2:] - u[:-2]) / (2.0 * h)
    inner = slice(1, -1)
    source = np.einsum("mij,mj->mi", Q_node[inner, :3, :3], u[inner])
    source += np.einsum("mij,mj->mi", Q_node[inner, :3, 3:], du_c)
    mass = lam**2 * rho_node[inner, None] * u[inner]
    residual = source - np.diff(flux, axis=0) / h - mass

    if upper:
        k = 0
        du0 = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h)
    else:
        k = -1
        du0 = (3.0 * u[-1] - 4.0 * u[-2] + u[-3]) / (2.0 * h)
    flux0 = Q_node[k, :3, 3:].T @ u[k] + Q_node[k, 3:, 3:] @ du0
    scale = np.max(np.abs(lam**2 * rho_node[:, None] * u))
    return residual, flux0, np.asarray(scale)


def euler_lagrange_residual(
    mode: ModeSolution, profile: EquilibriumProfile, cfg: FluidConfig
) -> EulerLagrangeResidual:
    """Residuals of the normal-mode ODEs at interior nodes of each layer
    (conservative second differences) and of the jump conditions at y₃ = 0
    (one-sided second-order derivatives)."""
    res_lo, flux_lo, scale_lo = _layer_terms(mode, profile, cfg, False)
    res_up, flux_up, scale_up = _layer_terms(mode, profile, cfg, True)
    scale = max(float(scale_lo), float(scale_up), np.finfo(float).tiny)

    residual = np.vstack([res_lo, res_up])
    ode_by_field = np.max(np.abs(residual), axis=0) / scale

    xi_norm2 = mode.xi[0] ** 2 + mode.xi[1] ** 2
    tension = np.array([0.0, 0.0, cfg.theta * xi_norm2 * mode.psi0])
    jump = flux_up - flux_lo + tension
    flux_scale = max(
        float(np.max(np.abs(flux_up))),
        float(np.max(np.abs(flux_lo))),
        float(np.max(np.abs(tension))),
        np.finfo(float).tiny,
    )
    jump_by_field = np.abs(jump) / flux_scale
    return EulerLagrangeResidual(
        ode=float(np.max(ode_by_field)),
        jump=float(np.max(jump_by_field)),
        ode_by_field=ode_by_field,
        jump_by_field=jump_by_field,
    )
