from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
import pandas as pd
import scipy.linalg
from tqdm import tqdm

from rtspectra.assembly.forms import FormSet, quadratic
from rtspectra.errors import DomainError, HorizonError, IntegrationError
from rtspectra.modes.inequality import smooth_trial_vector
from rtspectra.spectral.solutions import ModeSolution
from rtspectra.typing import NDFloat

logger = logging.getLogger(__name__)

MIN_STEPS = 10


@dataclass(frozen=True)
class EvolutionState:
    """Per-mode displacement σ and velocity σ̇ on the free dofs at time t;
    the Dirichlet dofs are eliminated, so they stay zero."""

    sigma: NDFloat
    sigma_dot: NDFloat
    t: float = 0.0

    @classmethod
    def from_mode(cls, mode: ModeSolution) -> EvolutionState:
        return cls(sigma=mode.vector.copy(), sigma_dot=mode.lam * mode.vector)

    @classmethod
    def at_rest(cls, sigma: NDFloat) -> EvolutionState:
        sigma = np.asarray(sigma, dtype=float)
        return cls(sigma=sigma, sigma_dot=np.zeros_like(sigma))


class TrapezoidalIntegrator:
    """Implicit trapezoidal rule for Jσ̈ = Eσ − Dσ̇ with σ̇ = v.

    Eliminating σ₁ = σ₀ + dt(v₀ + v₁)/2 leaves
    (J + dt/2 D − dt²/4 E)v₁ = (J − dt/2 D + dt²/4 E)v₀ + dt Eσ₀,
    whose matrix is factored once per (forms, dt).
    """

    def __init__(self, forms: FormSet, dt: float) -> None:
        if not dt > 0:
            raise DomainError(f"time step must be > 0, got {dt}", "evolve.dt")
        self.forms = forms
        self.dt = dt
        J, E, D = forms.J_mat, forms.E_mat, forms.D_mat
        lhs = J + 0.5 * dt * D - 0.25 * dt**2 * E
        self.rhs = J - 0.5 * dt * D + 0.25 * dt**2 * E
        self.source = dt * E
        try:
            self.lu = scipy.linalg.lu_factor(lhs, check_finite=True)
        except (ValueError, np.linalg.LinAlgError) as exc:
            raise IntegrationError(
                f"trapezoidal matrix factorization failed: {exc}"
            ) from exc
        if np.any(np.diag(self.lu[0]) == 0):
            raise IntegrationError("trapezoidal matrix is singular")

    def step(self, state: EvolutionState) -> EvolutionState:
        v1 = scipy.linalg.lu_solve(
            self.lu, self.rhs @ state.sigma_dot + self.source @ state.sigma
        )
        sigma1 = state.sigma + 0.5 * self.dt * (state.sigma_dot + v1)
        return EvolutionState(sigma=sigma1, sigma_dot=v1, t=state.t + self.dt)


def step(forms: FormSet, state: EvolutionState, dt: float) -> EvolutionState:
    return TrapezoidalIntegrator(forms, dt).step(state)


def j_norm(forms: FormSet, sigma: NDFloat) -> float:
    return math.sqrt(max(quadratic(forms.J_mat, sigma), 0.0))


def energy_balance_residual(
    forms: FormSet, before: EvolutionState, after: EvolutionState
) -> float:
    """Relative defect of ½Δ(σ̇ᵀJσ̇ − σᵀEσ) = −dt·v̄ᵀDv̄, v̄ the mean
    velocity of the step."""
    dt = after.t - before.t

    def energy(state: EvolutionState) -> float:
        return 0.5 * (
            quadratic(forms.J_mat, state.sigma_dot)
            - quadratic(forms.E_mat, state.sigma)
        )

    v_mid = 0.5 * (before.sigma_dot + after.sigma_dot)
    change = energy(after) - energy(before)
    dissipated = dt * quadratic(forms.D_mat, v_mid)
    scale = max(
        abs(energy(after)),
        abs(energy(before)),
        dissipated,
        np.finfo(float).tiny,
    )
    return abs(change + dissipated) / scale


def eigen_step_error(forms: FormSet, mode: ModeSolution, dt: float) -> float:
    """|‖σ(dt)‖_J/‖σ(0)‖_J − e^{λdt}| for the eigenmode initial data."""
    state = EvolutionState.from_mode(mode)
    after = step(forms, state, dt)
    factor = j_norm(forms, after.sigma) / j_norm(forms, state.sigma)
    return abs(factor - math.exp(mode.lam * dt))


@dataclass(frozen=True)
class GrowthFit:
    """Least-squares growth rate of ln‖σ(t)‖_J over the second half of
    the horizon, with the trajectory log; ``interface_psi`` is ψ(0) of
    the unit-J-norm state."""

    rate: float
    times: NDFloat = field(repr=False)
    log_norms: NDFloat = field(repr=False)
    interface_psi: NDFloat = field(repr=False)
    n_steps: int = 0

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "t": self.times,
                "log_j_norm": self.log_norms,
                "interface_psi": self.interface_psi,
            }
        )


def fit_rate(times: NDFloat, log_norms: NDFloat) -> float:
    times = np.asarray(times)
    window = times >= 0.5 * (times[0] + times[-1])
    if np.count_nonzero(window) < 2:
        window = np.ones_like(times, dtype=bool)
    slope, _ = np.polyfit(times[window], np.asarray(log_norms)[window], 1)
    return float(slope)


def measure_growth(
    forms: FormSet,
    ic: EvolutionState,
    dt: float,
    horizon: float,
    progress: bool = False,
) -> GrowthFit:
    """Integrates to ``horizon`` and fits the slope of ln‖σ‖_J.

    The state is rescaled to unit J-norm after every step and the logarithm
    of the accumulated factor carried separately, so neither growth nor
    decay over- or underflows.
    """
    if not horizon >= MIN_STEPS * dt:
        raise DomainError(
            f"horizon {horizon} is shorter than {MIN_STEPS} steps of {dt}",
            "evolve.horizon",
        )
    integrator = TrapezoidalIntegrator(forms, dt)
    n_steps = int(math.ceil(horizon / dt))
    k = forms.interface_dof

    norm0 = j_norm(forms, ic.sigma)
    if not (norm0 > 0 and math.isfinite(norm0)):
        raise HorizonError(f"initial J-norm is {norm0}", partial_rate=None)
    state = EvolutionState(
        sigma=ic.sigma / norm0, sigma_dot=ic.sigma_dot / norm0, t=ic.t
    )
    offset = math.log(norm0)

    times: List[float] = [ic.t]
    log_norms: List[float] = [offset]
    interface_psi: List[float] = [float(state.sigma[k])]
    steps = range(n_steps)
    for _ in tqdm(steps, desc="evolve", disable=not progress):
        state = integrator.step(state)
        norm = j_norm(forms, state.sigma)
        if not (norm > 0 and math.isfinite(norm)):
            partial = (
                fit_rate(np.array(times), np.array(log_norms))
                if len(times) >= 2
                else None
            )
            raise HorizonError(
                f"J-norm became {norm} at t={state.t}", partial_rate=partial
            )
        offset += math.log(norm)
        state = EvolutionState(
            sigma=state.sigma / norm,
            sigma_dot=state.sigma_dot / norm,
            t=state.t,
        )
        times.append(state.t)
        log_norms.append(offset)
        interface_psi.append(float(state.sigma[k]))

    times_arr = np.array(times)
    log_arr = np.array(log_norms)
    rate = fit_rate(times_arr, log_arr)
    logger.debug(
        "evolution finished",
        extra={"xi": forms.xi, "rate": rate, "n_steps": n_steps},
    )
    return GrowthFit(
        rate=rate,
        times=times_arr,
        log_norms=log_arr,
        interface_psi=np.array(interface_psi),
        n_steps=n_steps,
    )


def random_state(
    forms: FormSet, rng: np.random.Generator, n_modes: int = 6
) -> EvolutionState:
    """Smooth random displacement at rest."""
    sigma = smooth_trial_vector(forms.grid, rng, n_modes, complex_valued=False)
    return EvolutionState.at_rest(sigma)


def horizon_for_amplification(lam: float, amplification: float) -> float:
    """T with e^{λT} equal to ``amplification``."""
    if not lam > 0:
        raise DomainError(f"growth rate must be > 0, got {lam}", "lam")
    return math.log(amplification) / lam


def convergence_ratio(errors: Optional[List[float]]) -> List[float]:
    """Successive error ratios e_k / e_{k+1} of a step-halving sequence."""
    if not errors or len(errors) < 2:
        return []
    pairs = zip(errors[:-1], errors[1:])
    return [a / b if b != 0 else math.inf for a, b in pairs]
