from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from rtspectra.assembly.grid import N_FIELDS, VerticalGrid
from rtspectra.physics.equilibrium import EquilibriumProfile, FluidConfig
from rtspectra.typing import Frequency, NDFloat

logger = logging.getLogger(__name__)

# Pointwise state z = (φ, θ, ψ, φ′, θ′, ψ′); every integrand is zᵀ Q z.
N_STATE = 2 * N_FIELDS
PHI, THETA, PSI, DPHI, DTHETA, DPSI = range(N_STATE)


def _unit(index: int) -> NDFloat:
    e = np.zeros(N_STATE)
    e[index] = 1.0
    return e


def _outer(
    coef: NDFloat, a: NDFloat, b: Optional[NDFloat] = None
) -> NDFloat:
    """coef[..., None, None] * a bᵀ, symmetrized when b is given."""
    if b is None:
        block = np.outer(a, a)
    else:
        block = np.outer(a, b) + np.outer(b, a)
    return coef[..., None, None] * block


def state_matrices(
    xi: Frequency,
    rho: NDFloat,
    prho: NDFloat,
    mu: NDFloat,
    zeta: NDFloat,
    g: float,
) -> Dict[str, NDFloat]:
    """Integrand matrices Q (zᵀQz) of J, E, E_alt and D for coefficient
    samples of any shape; bulk parts only, interface point terms excluded."""
    xi1, xi2 = float(xi[0]), float(xi[1])
    rho = np.asarray(rho, dtype=float)
    prho = np.asarray(prho, dtype=float)
    mu = np.broadcast_to(np.asarray(mu, dtype=float), rho.shape)
    zeta = np.broadcast_to(np.asarray(zeta, dtype=float), rho.shape)

    c = np.array([xi1, xi2, 0.0, 0.0, 0.0, 0.0])
    e_psi = _unit(PSI)
    div = c + _unit(DPSI)
    rot = np.array([xi2, -xi1, 0.0, 0.0, 0.0, 0.0])
    shear1 = _unit(DPHI) - xi1 * e_psi
    shear2 = _unit(DTHETA) - xi2 * e_psi
    strain = c - _unit(DPSI)

    Q_J = rho[..., None, None] * np.diag([1.0, 1.0, 1.0, 0.0, 0.0, 0.0])

    Q_E = _outer(g * rho, c, e_psi) - _outer(prho, div)

    b = (g * rho / prho)[..., None] * e_psi - div
    Q_E_alt = -prho[..., None, None] * (b[..., :, None] * b[..., None, :])

    Q_D = _outer(zeta, div) + _outer(mu / 3.0, div)
    for vec in (rot, shear1, shear2, strain):
        Q_D = Q_D + _outer(mu, vec)
    return {"J": Q_J, "E": Q_E, "E_alt": Q_E_alt, "D": Q_D}


@dataclass(frozen=True)
class FormSet:
    """Dense matrices of J, E, E_alt and D on the free unknowns at one ξ."""

    xi: Frequency
    J_mat: NDFloat
    E_mat: NDFloat
    E_alt_mat: NDFloat
    D_mat: NDFloat
    grid: VerticalGrid
    g: float
    jump_rho: float
    theta: float

    @property
    def dim(self) -> int:
        return self.J_mat.shape[0]

    @property
    def xi_norm2(self) -> float:
        return float(self.xi[0] ** 2 + self.xi[1] ** 2)

    @property
    def interface_dof(self) -> int:
        return self.grid.interface_dof(2)

    def F_mat(self, s: float) -> NDFloat:
        return self.E_mat - s * self.D_mat


def quadratic(mat: NDFloat, v: np.ndarray) -> float:
    """vᴴ M v. For complex v this is the sum over real and imaginary parts."""
    return float(np.real(np.vdot(v, mat @ v)))


def kinetic_functional(forms: FormSet, v: np.ndarray) -> float:
    return quadratic(forms.J_mat, v)


def viscous_functional(forms: FormSet, v: np.ndarray) -> float:
    """U(w) of a single-frequency field; equal to vᵀDv."""
    return quadratic(forms.D_mat, v)


def interface_energy(forms: FormSet, v: np.ndarray) -> float:
    """g⟦ρ̄⟧|ψ(0)|²."""
    psi0 = v[forms.interface_dof]
    return float(forms.g * forms.jump_rho * np.abs(psi0) ** 2)


def potential_functional(forms: FormSet, v: np.ndarray) -> float:
    """I(w) = ϑ|ξ|²|ψ(0)|² + ∫P′ρ̄|gψ/P′ − ξ₁φ − ξ₂θ − ψ′|², non-negative."""
    return interface_energy(forms, v) - quadratic(forms.E_alt_mat, v)


def e_upper_bound(forms: FormSet) -> float:
    """Bound g(|ξ₁|+|ξ₂|) of E on unit-J vectors."""
    return forms.g * (abs(forms.xi[0]) + abs(forms.xi[1]))


class FormAssembler:
    """Precomputes the ξ-independent quadrature data of a grid so that
    many frequencies can be assembled cheaply."""

    def __init__(
        self,
        profile: EquilibriumProfile,
        grid: VerticalGrid,
        cfg: FluidConfig,
    ) -> None:
        self.profile = profile
        self.grid = grid
        self.cfg = cfg

        gauss_t, gauss_w = np.polynomial.legendre.leggauss(2)
        t = 0.5 * (gauss_t + 1.0)
        w = 0.5 * gauss_w

        left = grid.nodes[:-1]
        widths = grid.widths
        upper = grid.upper
        y_q = left[:, None] + widths[:, None] * t[None, :]

        rho_q = np.empty_like(y_q)
        prho_q = np.empty_like(y_q)
        for is_upper in (False, True):
            mask = upper == is_upper
            rho_q[mask], prho_q[mask] = profile.interpolate(
                y_q[mask], is_upper
            )
        self.rho_q = rho_q
        self.prho_q = prho_q
        ones = np.ones((1, len(t)))
        self.mu_q = np.where(upper, cfg.mu_plus, cfg.mu_minus)[:, None] * ones
        self.zeta_q = (
            np.where(upper, cfg.zeta_plus, cfg.zeta_minus)[:, None] * ones
        )
        self.weights = widths[:, None] * w[None, :]

        # B maps local dofs (φa, φb, θa, θb, ψa, ψb) to the pointwise state
        n_el = grid.n_elements
        basis = np.stack([1.0 - t, t], axis=-1)
        dbasis = np.stack([-1.0 / widths, 1.0 / widths], axis=-1)
        B = np.zeros((n_el, len(t), N_STATE, N_STATE))
        for f in range(N_FIELDS):
            B[:, :, f, 2 * f : 2 * f + 2] = basis[None, :, :]
            B[:, :, N_FIELDS + f, 2 * f : 2 * f + 2] = dbasis[:, None, :]
        self.B = B

        n_full = N_FIELDS * grid.n_nodes
        local_nodes = np.arange(n_el)[:, None] + np.arange(2)[None, :]
        self.local_to_full = (
            np.arange(N_FIELDS)[None, :, None] * grid.n_nodes
            + local_nodes[:, None, :]
        ).reshape(n_el, N_STATE)
        free = np.concatenate(
            [f * grid.n_nodes + grid.free_nodes for f in range(N_FIELDS)]
        )
        self.free = free
        self.n_full = n_full

    def _assemble(self, Q: NDFloat) -> NDFloat:
        K = np.einsum(
            "eq,eqki,eqkl,eqlj->eij", self.weights, self.B, Q, self.B
        )
        full = np.zeros((self.n_full, self.n_full))
        rows = self.local_to_full[:, :, None]
        cols = self.local_to_full[:, None, :]
        np.add.at(full, (rows, cols), K)
        mat = full[np.ix_(self.free, self.free)]
        return 0.5 * (mat + mat.T)

    def integrands(self, xi: Frequency) -> Dict[str, NDFloat]:
        """Q matrices at every quadrature point, shape (n_elements, 2, 6, 6)."""
        return state_matrices(
            xi, self.rho_q, self.prho_q, self.mu_q, self.zeta_q, self.cfg.g
        )

    def assemble(self, xi: Frequency) -> FormSet:
        xi = (float(xi[0]), float(xi[1]))
        Q = self.integrands(xi)
        J_mat = self._assemble(Q["J"])
        E_mat = self._assemble(Q["E"])
        E_alt_mat = self._assemble(Q["E_alt"])
        D_mat = self._assemble(Q["D"])

        k = self.grid.interface_dof(2)
        xi_norm2 = xi[0] ** 2 + xi[1] ** 2
        jump = self.profile.jump_rho
        E_mat[k, k] -= self.cfg.theta * xi_norm2
        E_alt_mat[k, k] += self.cfg.g * jump - self.cfg.theta * xi_norm2

        return FormSet(
            xi=xi,
            J_mat=J_mat,
            E_mat=E_mat,
            E_alt_mat=E_alt_mat,
            D_mat=D_mat,
            grid=self.grid,
            g=self.cfg.g,
            jump_rho=jump,
            theta=self.cfg.theta,
        )


def assemble_forms(
    profile: EquilibriumProfile,
    grid: VerticalGrid,
    cfg: FluidConfig,
    xi: Frequency,
) -> FormSet:
    return FormAssembler(profile, grid, cfg).assemble(xi)

