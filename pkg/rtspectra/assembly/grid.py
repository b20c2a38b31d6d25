from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from rtspectra.errors import ConfigurationError
from rtspectra.physics.equilibrium import EquilibriumProfile
from rtspectra.typing import NDBool, NDFloat, NDInt

MIN_ELEMENTS_PER_LAYER = 4
N_FIELDS = 3
FIELD_NAMES = ("phi", "theta", "psi")


@dataclass(frozen=True)
class VerticalGrid:
    """Continuous P1 trial space on [h₋, h₊] with one shared node at y₃ = 0.

    Free unknowns are stacked field by field, (φ, θ, ψ), each over the
    interior nodes; the Dirichlet nodes h₋ and h₊ carry no unknowns.
    """

    nodes: NDFloat
    elements_per_layer: int

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def interface_index(self) -> int:
        return self.elements_per_layer

    @property
    def n_interior(self) -> int:
        return self.n_nodes - 2

    @property
    def dim(self) -> int:
        return N_FIELDS * self.n_interior

    @property
    def n_elements(self) -> int:
        return self.n_nodes - 1

    @property
    def widths(self) -> NDFloat:
        return np.diff(self.nodes)

    @property
    def upper(self) -> NDBool:
        """Per element: True for elements of the upper layer."""
        return self.nodes[:-1] >= 0.0

    @property
    def free_nodes(self) -> NDInt:
        return np.arange(1, self.n_nodes - 1)

    def dof(self, field: int, node: int) -> int:
        if not 0 < node < self.n_nodes - 1:
            raise IndexError(f"node {node} carries no free unknown")
        return field * self.n_interior + node - 1

    def interface_dof(self, field: int = 2) -> int:
        return self.dof(field, self.interface_index)

    def expand(self, v: np.ndarray) -> np.ndarray:
        """Dof vector -> nodal values of shape (3, n_nodes), zero at h±."""
        out = np.zeros((N_FIELDS, self.n_nodes), dtype=v.dtype)
        out[:, 1:-1] = v.reshape(N_FIELDS, self.n_interior)
        return out

    def restrict(self, nodal: np.ndarray) -> np.ndarray:
        """Nodal values of shape (3, n_nodes) -> dof vector."""
        return np.asarray(nodal)[:, 1:-1].reshape(-1).copy()

    def layer_slices(self) -> Tuple[slice, slice]:
        """Node slices of the lower and upper layer, both containing y₃ = 0."""
        k = self.interface_index
        return slice(0, k + 1), slice(k, self.n_nodes)


def build_grid(
    profile: EquilibriumProfile, elements_per_layer: int
) -> VerticalGrid:
    if elements_per_layer < MIN_ELEMENTS_PER_LAYER:
        raise ConfigurationError(
            f"must be >= {MIN_ELEMENTS_PER_LAYER}, got {elements_per_layer}",
            "elements_per_layer",
        )
    h_minus, h_plus = profile.cfg.h_minus, profile.cfg.h_plus
    if not (
        np.isclose(profile.y_minus[0], h_minus)
        and np.isclose(profile.y_plus[-1], h_plus)
    ):
        raise ConfigurationError(
            f"profile spans [{profile.y_minus[0]}, {profile.y_plus[-1]}] "
            f"but the slab is [{h_minus}, {h_plus}]",
            "h_minus",
        )
    lower = np.linspace(h_minus, 0.0, elements_per_layer + 1)
    upper = np.linspace(0.0, h_plus, elements_per_layer + 1)
    nodes = np.concatenate([lower, upper[1:]])
    return VerticalGrid(nodes=nodes, elements_per_layer=elements_per_layer)


def trace_at_interface(grid: VerticalGrid, v: np.ndarray) -> float:
    return v[grid.interface_dof(2)]
