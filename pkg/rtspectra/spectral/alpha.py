from __future__ import annotations

import logging

import numpy as np
from scipy.linalg import LinAlgError, eigh

from rtspectra.assembly.forms import FormSet, quadratic
from rtspectra.errors import AssemblyError, DomainError
from rtspectra.spectral.solutions import AlphaResult, fix_sign

logger = logging.getLogger(__name__)


def alpha(forms: FormSet, s: float) -> AlphaResult:
    """Largest eigenpair of (E − sD) v = α J v, v normalized to vᵀJv = 1.

    scipy's generalized ``eigh`` factors J by Cholesky and solves the
    reduced standard symmetric problem.
    """
    if not s > 0:
        raise DomainError(f"modification parameter must be > 0, got {s}", "s")
    n = forms.dim
    try:
        values, vectors = eigh(
            forms.F_mat(s), forms.J_mat, subset_by_index=[n - 1, n - 1]
        )
    except LinAlgError as e:
        raise AssemblyError(
            f"J is not symmetric positive definite at xi={forms.xi}: {e}"
        ) from e
    v = fix_sign(vectors[:, 0], forms.grid)
    return AlphaResult(
        s=float(s),
        alpha=float(values[0]),
        maximizer=v,
        dissipation=quadratic(forms.D_mat, v),
    )


def min_dissipation(forms: FormSet) -> float:
    """b₁: smallest eigenvalue of D relative to J."""
    try:
        values = eigh(
            forms.D_mat,
            forms.J_mat,
            eigvals_only=True,
            subset_by_index=[0, 0],
        )
    except LinAlgError as e:
        raise AssemblyError(
            f"J is not symmetric positive definite at xi={forms.xi}: {e}"
        ) from e
    return float(values[0])


def rayleigh_quotient(forms: FormSet, s: float, v: np.ndarray) -> float:
    return quadratic(forms.F_mat(s), v) / quadratic(forms.J_mat, v)
