from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass
from typing import Any, Callable, Dict, Tuple, Union

import numpy as np

from rtspectra.errors import ConfigurationError, DomainError

ArrayOrFloat = Union[float, np.ndarray]


class PressureLaw(ABC):
    """Smooth, positive, strictly increasing pressure P(τ)."""

    family: str = ""

    @abstractmethod
    def value(self, tau: ArrayOrFloat) -> ArrayOrFloat:
        pass

    @abstractmethod
    def derivative(self, tau: ArrayOrFloat) -> ArrayOrFloat:
        pass

    def params(self) -> Dict[str, float]:
        return asdict(self)

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.family, **self.params()}


@dataclass(frozen=True)
class PolytropicLaw(PressureLaw):
    """P(τ) = K τ^γ with K > 0, γ ≥ 1."""

    K: float = 1.0
    gamma: float = 1.0
    family = "polytropic"

    def __post_init__(self) -> None:
        if not self.K > 0:
            raise ConfigurationError(f"K must be > 0, got {self.K}", "K")
        if not self.gamma >= 1:
            raise ConfigurationError(
                f"gamma must be >= 1, got {self.gamma}", "gamma"
            )

    def value(self, tau: ArrayOrFloat) -> ArrayOrFloat:
        return self.K * np.power(tau, self.gamma)

    def derivative(self, tau: ArrayOrFloat) -> ArrayOrFloat:
        return self.K * self.gamma * np.power(tau, self.gamma - 1.0)


@dataclass(frozen=True)
class AffineLaw(PressureLaw):
    """P(τ) = a τ + b with a > 0, b ≥ 0."""

    a: float = 1.0
    b: float = 0.0
    family = "affine"

    def __post_init__(self) -> None:
        if not self.a > 0:
            raise ConfigurationError(f"a must be > 0, got {self.a}", "a")
        if not self.b >= 0:
            raise ConfigurationError(f"b must be >= 0, got {self.b}", "b")

    def value(self, tau: ArrayOrFloat) -> ArrayOrFloat:
        return self.a * np.asarray(tau) + self.b

    def derivative(self, tau: ArrayOrFloat) -> ArrayOrFloat:
        return self.a * np.ones_like(np.asarray(tau, dtype=float))


str2pressure_law: Dict[str, Callable[..., PressureLaw]] = {
    "polytropic": lambda **params: PolytropicLaw(**params),
    "affine": lambda **params: AffineLaw(**params),
}


def create_pressure_law(config: Union[str, Dict[str, Any]]) -> PressureLaw:
    if isinstance(config, str):
        config = {"family": config}
    params = dict(config)
    family = params.pop("family", None)
    if family not in str2pressure_law:
        raise ConfigurationError(
            f"unknown pressure family {family!r}, "
            f"expected one of {sorted(str2pressure_law)}",
            "family",
        )
    try:
        return str2pressure_law[family](**params)
    except TypeError as e:
        raise ConfigurationError(
            f"invalid parameters {sorted(params)} for {family}: {e}", "family"
        ) from e


def eval_pressure(
    law: PressureLaw, tau: ArrayOrFloat
) -> Tuple[ArrayOrFloat, ArrayOrFloat]:
    tau_arr = np.asarray(tau, dtype=float)
    if np.any(~(tau_arr > 0)):
        raise DomainError(f"density must be > 0, got min {np.min(tau_arr)}")
    p = law.value(tau_arr)
    p_prime = law.derivative(tau_arr)
    if np.ndim(tau) == 0:
        return float(p), float(p_prime)
    return p, p_prime
