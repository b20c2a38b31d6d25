from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from rtspectra.errors import DomainError
from rtspectra.spectral.solutions import SolveResult
from rtspectra.typing import Frequency, NDFloat
from rtspectra.utils import default_rng

Box = Union[float, Tuple[Tuple[float, float], Tuple[float, float]]]


def _box_axes(box: Box, resolution: int) -> Tuple[NDFloat, NDFloat]:
    if isinstance(box, (int, float)):
        half = float(box)
        box = ((-half, half), (-half, half))
    (a1, b1), (a2, b2) = box
    if not (a1 < b1 and a2 < b2):
        raise DomainError(f"empty horizontal box {box}", "box")
    if resolution < 2:
        raise DomainError(
            f"resolution must be >= 2, got {resolution}", "resolution"
        )
    return np.linspace(a1, b1, resolution), np.linspace(a2, b2, resolution)


def _real_field(
    xi1: Frequency, profiles: NDFloat, y1: np.ndarray, y2: np.ndarray
) -> NDFloat:
    phi, theta, psi = profiles
    phase = xi1[0] * np.asarray(y1) + xi1[1] * np.asarray(y2)
    sin = np.sin(phase)[..., None]
    cos = np.cos(phase)[..., None]
    return np.stack([2.0 * phi * sin, 2.0 * theta * sin, 2.0 * psi * cos])


@dataclass(frozen=True)
class GrowingMode:
    """Real growing mode built from the frequency pair (ξ¹, −ξ¹).

    ``profiles`` holds (φ, θ, ψ) on the vertical nodes ``y3``; the sampled
    velocity ``u0_tilde`` has shape (3, len(y1), len(y2), len(y3)).
    """

    xi1: Frequency
    c7: float
    y3: NDFloat
    profiles: NDFloat
    interface_index: int
    y1: NDFloat = field(repr=False)
    y2: NDFloat = field(repr=False)
    u0_tilde: NDFloat = field(repr=False)

    @property
    def eta0_tilde(self) -> NDFloat:
        return self.u0_tilde / self.c7

    @property
    def phi(self) -> NDFloat:
        return self.profiles[0]

    @property
    def theta(self) -> NDFloat:
        return self.profiles[1]

    @property
    def psi(self) -> NDFloat:
        return self.profiles[2]

    @property
    def psi0(self) -> float:
        return float(self.psi[self.interface_index])

    def evaluate(self, y1: np.ndarray, y2: np.ndarray) -> NDFloat:
        """ũ⁰ at horizontal points of any broadcastable shape, on every
        vertical node: shape (3, *shape, len(y3))."""
        return _real_field(self.xi1, self.profiles, y1, y2)


def growing_mode_from_profiles(
    xi1: Frequency,
    c7: float,
    y3: NDFloat,
    profiles: NDFloat,
    interface_index: int,
    box: Box = 1.0,
    resolution: int = 16,
) -> GrowingMode:
    if not c7 > 0:
        raise DomainError(f"growth rate must be > 0, got {c7}", "c7")
    xi1 = (float(xi1[0]), float(xi1[1]))
    profiles = np.asarray(profiles, dtype=float)
    y1, y2 = _box_axes(box, resolution)
    Y1, Y2 = np.meshgrid(y1, y2, indexing="ij")
    return GrowingMode(
        xi1=xi1,
        c7=float(c7),
        y3=np.asarray(y3, dtype=float),
        profiles=profiles,
        interface_index=interface_index,
        y1=y1,
        y2=y2,
        u0_tilde=_real_field(xi1, profiles, Y1, Y2),
    )


def build_real_mode(
    mode: SolveResult, box: Box = 1.0, resolution: int = 16
) -> GrowingMode:
    """Samples ũ⁰ = (2φ sin(ξ¹·y_h), 2θ sin(ξ¹·y_h), 2ψ cos(ξ¹·y_h)), with
    c₇ = λ(ξ¹), on a horizontal box (half-width or explicit ranges) times
    the vertical grid of the mode."""
    if mode.is_stable or not mode.lam > 0:
        raise DomainError(
            f"a growing mode needs lambda > 0 at xi={mode.xi}", "mode"
        )
    return growing_mode_from_profiles(
        mode.xi,
        mode.lam,
        mode.grid.nodes,
        mode.profiles,
        mode.grid.interface_index,
        box,
        resolution,
    )


def complex_synthesis(
    gm: GrowingMode, y1: np.ndarray, y2: np.ndarray
) -> np.ndarray:
    """Σ_j (−1)^{j−1} w(ξʲ, y₃) e^{iξʲ·y_h} with ξ² = −ξ¹ and profiles
    (φ, θ, −ψ) at ξ², where w = −iφe¹ − iθe² + ψe³."""
    phase = gm.xi1[0] * np.asarray(y1) + gm.xi1[1] * np.asarray(y2)
    plus = np.exp(1j * phase)[..., None]
    minus = np.exp(-1j * phase)[..., None]
    w1 = np.stack([-1j * gm.phi * plus, -1j * gm.theta * plus, gm.psi * plus])
    w2 = np.stack(
        [-1j * gm.phi * minus, -1j * gm.theta * minus, -gm.psi * minus]
    )
    return w1 - w2


def synthesis_imaginary_residual(
    gm: GrowingMode,
    n_points: int = 1000,
    seed: Optional[int] = 42,
    extent: Optional[float] = None,
) -> float:
    """max |Im| of the complex synthesis at random horizontal points,
    relative to max(1, max |Re|)."""
    rng = default_rng(seed)
    if extent is None:
        extent = 2.0 * math.pi / max(math.hypot(*gm.xi1), 1e-12)
    y1 = rng.uniform(-extent, extent, n_points)
    y2 = rng.uniform(-extent, extent, n_points)
    values = complex_synthesis(gm, y1, y2)
    scale = max(1.0, float(np.max(np.abs(values.real))))
    return float(np.max(np.abs(values.imag))) / scale


def synthesis_mismatch(
    gm: GrowingMode, points: Sequence[Tuple[float, float]]
) -> float:
    """max |Re(complex synthesis) − ũ⁰| at the given horizontal points."""
    pts = np.asarray(points, dtype=float)
    synthesized = complex_synthesis(gm, pts[:, 0], pts[:, 1]).real
    return float(np.max(np.abs(synthesized - gm.evaluate(pts[:, 0], pts[:, 1]))))
