from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel
from scipy.integrate import trapezoid
from scipy.special import comb

from rtspectra.errors import ConfigurationError, DomainError
from rtspectra.logging.setup import delayed_with_logging
from rtspectra.modes.synthesis import GrowingMode
from rtspectra.typing import Frequency, NDFloat

logger = logging.getLogger(__name__)

BUMP_POWER = 8
MAX_ORDER = 4
MIN_SAMPLES_PER_WAVELENGTH = 16
# resolves the unit-width transition band of χ_n
MAX_STEP = 1.0 / 32.0

# horizontal phase of each component: sin for (φ, θ), cos for ψ
COMPONENT_SHIFTS = (0.0, 0.0, 0.5 * math.pi)


def _jet_of_power(t: NDFloat, order: int) -> NDFloat:
    """Taylor coefficients of (t + ε)^8 in ε up to ``order``."""
    return np.stack(
        [comb(BUMP_POWER, k) * t ** (BUMP_POWER - k) for k in range(order + 1)]
    )


def _reciprocal_jet(p: NDFloat) -> NDFloat:
    q = np.zeros_like(p)
    q[0] = 1.0 / p[0]
    for k in range(1, len(p)):
        q[k] = -np.sum(p[1 : k + 1] * q[k - 1 :: -1][:k], axis=0) / p[0]
    return q


def _exp_jet(a: NDFloat) -> NDFloat:
    e = np.zeros_like(a)
    e[0] = np.exp(a[0])
    for k in range(1, len(a)):
        j = np.arange(1, k + 1).reshape((-1,) + (1,) * (a.ndim - 1))
        e[k] = np.sum(j * a[1 : k + 1] * e[k - 1 :: -1][:k], axis=0) / k
    return e


def chi_hat_derivatives(t: np.ndarray, order: int = MAX_ORDER) -> NDFloat:
    """χ̂(t) = exp(1 − 1/(1 − t⁸)) and its first ``order`` derivatives,
    shape (order + 1, *t.shape); 1 for t ≤ 0 and 0 for t ≥ 1."""
    shape = np.shape(t)
    t = np.asarray(t, dtype=float).reshape(-1)
    out = np.zeros((order + 1, t.size))
    out[0][t <= 0] = 1.0
    inside = (t > 0) & (t < 1)
    if np.any(inside):
        p = -_jet_of_power(t[inside], order)
        p[0] += 1.0
        a = -_reciprocal_jet(p)
        a[0] += 1.0
        e = _exp_jet(a)
        factorials = np.array([math.factorial(k) for k in range(order + 1)])
        out[:, inside] = factorials[:, None] * e
    return out.reshape((order + 1,) + shape)


def chi_n_derivatives(
    r: np.ndarray, n: float, order: int = MAX_ORDER
) -> NDFloat:
    """χ_n and its derivatives in r: χ_n(r) = χ̂(|r| − (n − 1))."""
    if n < 1:
        raise DomainError(f"cutoff radius must be >= 1, got {n}", "n")
    r = np.asarray(r, dtype=float)
    derivs = chi_hat_derivatives(np.abs(r) - (n - 1.0), order)
    sign = np.sign(r)
    for k in range(1, order + 1):
        derivs[k] *= sign**k
    return derivs


def chi_n(r: np.ndarray, n: float) -> np.ndarray:
    """1 for |r| ≤ n − 1, 0 for |r| ≥ n, smooth and monotone in between."""
    value = chi_n_derivatives(r, n, order=0)[0]
    return float(value) if value.ndim == 0 else value


def oscillatory_mean(xi: Frequency, n: float) -> float:
    """Closed form of n⁻²∫_{[−n,n]²} cos(2ξ·y) dy."""

    def axis(k: float) -> float:
        return 2.0 * n if k == 0 else math.sin(2.0 * k * n) / k

    return axis(xi[0]) * axis(xi[1]) / n**2


def extrapolate_limit(ns: Sequence[float], values: Sequence[float]) -> float:
    """Richardson extrapolation in 1/n from the two largest n."""
    if len(ns) < 2:
        return float(values[-1])
    order = np.argsort(ns)
    n1, n2 = float(ns[order[-2]]), float(ns[order[-1]])
    v1, v2 = float(values[order[-2]]), float(values[order[-1]])
    return (n2 * v2 - n1 * v1) / (n2 - n1)


def vertical_moments(gm: GrowingMode, order: int = MAX_ORDER) -> NDFloat:
    """∫(∂₃ᵏ f)² dy₃ over both layers for f ∈ (φ, θ, ψ), k ≤ order.

    Derivatives are taken layer by layer since they jump across y₃ = 0.
    """
    k = gm.interface_index
    layers = (slice(0, k + 1), slice(k, len(gm.y3)))
    moments = np.zeros((3, order + 1))
    for sl in layers:
        y = gm.y3[sl]
        deriv = gm.profiles[:, sl]
        for j in range(order + 1):
            moments[:, j] += trapezoid(deriv**2, y, axis=-1)
            deriv = np.gradient(deriv, y, axis=-1, edge_order=2)
    return moments


def multi_indices(max_order: int = MAX_ORDER) -> List[Tuple[int, int, int]]:
    return [
        beta
        for beta in product(range(max_order + 1), repeat=3)
        if sum(beta) <= max_order
    ]


class HorizontalQuadrature:
    """Separable trapezoid quadrature of squared horizontal factors on
    [−n, n]².

    The factors are sums of χ_n^{(k₁)}(y₁)χ_n^{(k₂)}(y₂)sin(ξ·y_h + c); with
    sin(A + B + c) = sin(A + c)cos B + cos(A + c)sin B every squared integral
    reduces to Gram matrices of one-dimensional integrals.
    """

    def __init__(
        self, xi: Frequency, n: float, samples_per_wavelength: int = 16
    ) -> None:
        if n < 2:
            raise DomainError(f"cutoff radius must be >= 2, got {n}", "n")
        if samples_per_wavelength < MIN_SAMPLES_PER_WAVELENGTH:
            raise ConfigurationError(
                f"need >= {MIN_SAMPLES_PER_WAVELENGTH} samples per "
                f"wavelength, got {samples_per_wavelength}",
                "cutoff.samples_per_wavelength",
            )
        self.xi = (float(xi[0]), float(xi[1]))
        self.n = n
        xi_norm = math.hypot(*self.xi)
        wavelength = 2.0 * math.pi / xi_norm if xi_norm > 0 else math.inf
        step = min(wavelength / samples_per_wavelength, MAX_STEP)
        n_points = int(math.ceil(2.0 * n / step)) + 1
        self.y = np.linspace(-n, n, n_points)
        self.weights = np.full(n_points, self.y[1] - self.y[0])
        self.weights[[0, -1]] *= 0.5
        self.chi = chi_n_derivatives(self.y, n, MAX_ORDER)

    def _integral(self, terms: List[Tuple[float, int, int, float]]) -> float:
        """∫∫(Σ coef·χ^{(k₁)}(y₁)χ^{(k₂)}(y₂)sin(ξ·y_h + c))² dy_h."""
        A = self.xi[0] * self.y
        B = self.xi[1] * self.y
        P, Q = [], []
        for coef, k1, k2, shift in terms:
            f1 = coef * self.chi[k1]
            f2 = self.chi[k2]
            P += [f1 * np.sin(A + shift), f1 * np.cos(A + shift)]
            Q += [f2 * np.cos(B), f2 * np.sin(B)]
        P, Q = np.array(P), np.array(Q)
        gram_p = (P * self.weights) @ P.T
        gram_q = (Q * self.weights) @ Q.T
        return float(np.sum(gram_p * gram_q))

    def trig(self, beta1: int, beta2: int, shift: float) -> float:
        """‖χ_{n,n}∂₁^{β₁}∂₂^{β₂}sin(ξ·y_h + c)‖² over the plane."""
        coef = self.xi[0] ** beta1 * self.xi[1] ** beta2
        phase = shift + 0.5 * math.pi * (beta1 + beta2)
        return self._integral([(coef, 0, 0, phase)])

    def cutoff(self, beta1: int, beta2: int, shift: float) -> float:
        """‖∂₁^{β₁}∂₂^{β₂}χ_{n,n}·sin(ξ·y_h + c)‖² over the plane."""
        return self._integral([(1.0, beta1, beta2, shift)])

    def leibniz(self, beta1: int, beta2: int, shift: float) -> float:
        """‖∂₁^{β₁}∂₂^{β₂}(χ_{n,n}sin(ξ·y_h + c))‖² by the Leibniz rule."""
        terms = []
        for k1 in range(beta1 + 1):
            for k2 in range(beta2 + 1):
                m1, m2 = beta1 - k1, beta2 - k2
                coef = (
                    comb(beta1, k1)
                    * comb(beta2, k2)
                    * self.xi[0] ** m1
                    * self.xi[1] ** m2
                )
                terms.append((coef, k1, k2, shift + 0.5 * math.pi * (m1 + m2)))
        return self._integral(terms)

    def cosine_mean(self) -> float:
        """Quadrature of n⁻²∫cos(2ξ·y_h), the counterpart of
        :func:`oscillatory_mean`."""
        c1 = np.sum(self.weights * np.cos(2.0 * self.xi[0] * self.y))
        c2 = np.sum(self.weights * np.cos(2.0 * self.xi[1] * self.y))
        s1 = np.sum(self.weights * np.sin(2.0 * self.xi[0] * self.y))
        s2 = np.sum(self.weights * np.sin(2.0 * self.xi[1] * self.y))
        return float(c1 * c2 - s1 * s2) / self.n**2


@dataclass(frozen=True)
class CutoffField:
    """Norms of χ_{n,n}(η̃⁰, ũ⁰)/n for one cutoff radius n."""

    n: float
    y: NDFloat = field(repr=False)
    chi_profile: NDFloat = field(repr=False)
    norms: Dict[str, float]
    mode: GrowingMode = field(repr=False)

    def sample_field(self, y1: np.ndarray, y2: np.ndarray) -> NDFloat:
        """χ_{n,n}(y_h)ũ⁰(y)/n at horizontal points; divide by c₇ for η̃⁰."""
        weight = chi_n(y1, self.n) * chi_n(y2, self.n)
        scale = np.asarray(weight)[..., None] / self.n
        return scale * self.mode.evaluate(y1, y2)


def _norms_of(
    gm: GrowingMode, quad: HorizontalQuadrature, moments: NDFloat
) -> Dict[str, float]:
    n = quad.n
    sin_sq = quad.trig(0, 0, COMPONENT_SHIFTS[0])
    cos_sq = quad.trig(0, 0, COMPONENT_SHIFTS[2])
    u_h = math.sqrt(4.0 * (moments[0, 0] + moments[1, 0]) * sin_sq) / n
    u_3 = math.sqrt(4.0 * moments[2, 0] * cos_sq) / n
    u_3_interface = math.sqrt(4.0 * gm.psi0**2 * cos_sq) / n

    h4_sq = 0.0
    cutoff_sum = 0.0
    for beta1, beta2, beta3 in multi_indices():
        for i, shift in enumerate(COMPONENT_SHIFTS):
            vertical = 4.0 * moments[i, beta3]
            h4_sq += vertical * quad.leibniz(beta1, beta2, shift)
            if beta1 + beta2 >= 1:
                cutoff_sum += vertical * quad.cutoff(beta1, beta2, shift)

    norms = {
        "u_h_L2": u_h,
        "u_3_L2": u_3,
        "u_3_interface_L2": u_3_interface,
        "u_H4": math.sqrt(h4_sq) / n,
        "u_cutoff_sum": cutoff_sum / n,
    }
    for name in list(norms):
        power = 2 if name == "u_cutoff_sum" else 1
        norms["eta" + name[1:]] = norms[name] / gm.c7**power
    return norms


def cutoff_norms(
    gm: GrowingMode, n: float, samples_per_wavelength: int = 16
) -> CutoffField:
    """Normalized norms of the cut-off growing mode:
    ‖χ_{n,n}ω_h‖₀/n, ‖χ_{n,n}ω₃‖₀/n, |χ_{n,n}ω₃|₀/n, ‖χ_{n,n}ω‖₄/n and the
    sum over 1 ≤ β₁ + β₂, |β| ≤ 4 of ‖∂₁^{β₁}∂₂^{β₂}χ_{n,n}∂₃^{β₃}ω‖₀²/n,
    for ω = ũ⁰ (``u_*``) and ω = η̃⁰ (``eta_*``)."""
    quad = HorizontalQuadrature(gm.xi1, n, samples_per_wavelength)
    norms = _norms_of(gm, quad, vertical_moments(gm))
    return CutoffField(
        n=n, y=quad.y, chi_profile=quad.chi[0], norms=norms, mode=gm
    )


def limit_ratio(
    gm: GrowingMode,
    n: float,
    beta: Tuple[int, int, int],
    component: int = 0,
    samples_per_wavelength: int = 16,
) -> float:
    """‖χ_{n,n}∂^β ũ⁰ᵢ‖₀²/n² divided by its limit
    8|ξ₁|^{2β₁}|ξ₂|^{2β₂}∫(∂₃^{β₃}fᵢ)²; NaN when the limit vanishes."""
    beta1, beta2, beta3 = beta
    moment = vertical_moments(gm, max(beta3, 0))[component, beta3]
    target = (
        8.0
        * abs(gm.xi1[0]) ** (2 * beta1)
        * abs(gm.xi1[1]) ** (2 * beta2)
        * moment
    )
    if target == 0:
        return float("nan")
    quad = HorizontalQuadrature(gm.xi1, n, samples_per_wavelength)
    value = 4.0 * moment * quad.trig(beta1, beta2, COMPONENT_SHIFTS[component])
    return value / n**2 / target


def norm_limits(gm: GrowingMode) -> Dict[str, float]:
    """n → ∞ limits of the L² norms: √(8∫(φ²+θ²)), √(8∫ψ²), √8|ψ(0)|."""
    moments = vertical_moments(gm, 0)
    return {
        "u_h_L2": math.sqrt(8.0 * (moments[0, 0] + moments[1, 0])),
        "u_3_L2": math.sqrt(8.0 * moments[2, 0]),
        "u_3_interface_L2": math.sqrt(8.0) * abs(gm.psi0),
    }


def cutoff_sweep(
    gm: GrowingMode,
    ns: Sequence[float],
    samples_per_wavelength: int = 16,
    n_jobs: int = 1,
) -> pd.DataFrame:
    """Rows (n, norm_name, value, extrapolated_limit) over the radii ``ns``."""
    fields = Parallel(n_jobs=n_jobs)(
        delayed_with_logging(cutoff_norms)(gm, n, samples_per_wavelength)
        for n in ns
    )
    rows = []
    for name in fields[0].norms:
        values = [f.norms[name] for f in fields]
        limit = extrapolate_limit(ns, values)
        rows += [
            {"n": f.n, "norm_name": name, "value": v, "extrapolated_limit": limit}
            for f, v in zip(fields, values)
        ]
    logger.info(f"cutoff norms evaluated for n in {list(ns)}")
    return pd.DataFrame(
        rows, columns=["n", "norm_name", "value", "extrapolated_limit"]
    )
