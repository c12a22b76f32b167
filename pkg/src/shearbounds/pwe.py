"""Plane-wave-expansion bounds on the effective shear modulus.

The static system is assembled without the ``2 pi`` factors: the product
``f . C0^{-1} f`` is unchanged when both ``C0`` and ``f`` carry them, since
``f`` enters twice and ``C0^{-1}`` once.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .cell import CellField, cell_averages, invert_field
from .fourier import FourierTable2D, NotPositiveDefinite, fourier2d

__all__ = [
    "PweSystem",
    "NonCubicField",
    "plane_wave_indices",
    "assemble_pwe",
    "solve_constrained",
    "PweBound",
    "pwe_bound",
    "pwe_upper_mu",
    "pwe_lower_mu",
]


class NonCubicField(ValueError):
    """The bound theory needs a cubic-symmetric field."""


def plane_wave_indices(N: int) -> np.ndarray:
    """All ``g = (g1, g2)`` with ``|g_i| <= N``, row-major in ``g1``; shape ``(n, 2)``."""
    r = np.arange(-N, N + 1)
    g1, g2 = np.meshgrid(r, r, indexing="ij")
    return np.column_stack((g1.ravel(), g2.ravel()))


@dataclass(frozen=True, eq=False)
class PweSystem:
    N: int
    C0: np.ndarray
    f: np.ndarray
    constant_mode_index: int


def assemble_pwe(table: FourierTable2D, N: int) -> PweSystem:
    """``C0[g, g'] = mu_hat(g - g') g.g'`` and ``f[g] = mu_hat(g) g1``."""
    if N < 0:
        raise ValueError(f"truncation order must be non-negative, got {N}")
    if table.window < 2 * N:
        raise ValueError(f"table window {table.window} is smaller than 2N = {2 * N}")
    g = plane_wave_indices(N)
    G = table.window
    diff = g[:, None, :] - g[None, :, :]
    mu_diff = table.coeffs[diff[..., 0] + G, diff[..., 1] + G]
    C0 = mu_diff * (g @ g.T)
    f = table.coeffs[g[:, 0] + G, g[:, 1] + G] * g[:, 0]
    center = (2 * N + 1) * N + N
    return PweSystem(N, C0, f, center)


def _reduced(system: PweSystem):
    keep = np.arange(system.f.size) != system.constant_mode_index
    return system.C0[np.ix_(keep, keep)], system.f[keep]


def solve_constrained(system: PweSystem) -> float:
    """``f . C0^{-1} f`` on the complement of the constant mode.

    The constant-mode row and column are deleted; the remaining block is
    Hermitian positive definite for a positive field.
    """
    reduced, f = _reduced(system)
    if f.size == 0 or not np.any(f):
        return 0.0
    try:
        factor = scipy.linalg.cho_factor(reduced, lower=True)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(f"reduced plane-wave system is not positive definite: {exc}") from exc
    x = scipy.linalg.cho_solve(factor, f)
    return float(np.real(np.vdot(f, x)))


def _require_cubic(field: CellField, oracle_mode: bool):
    if not (oracle_mode or field.symmetry.cubic):
        raise NonCubicField("bounds require a cubic-symmetric field (use oracle_mode for e1-only checks)")


@dataclass(frozen=True)
class PweBound:
    value: float
    N: int
    condition_estimate: float


def pwe_bound(field: CellField, N: int, *, oracle_mode: bool = False) -> PweBound:
    """Upper bound with the condition number of the reduced system."""
    _require_cubic(field, oracle_mode)
    if int(N) != N or N < 0:
        raise ValueError(f"truncation order must be a non-negative integer, got {N}")
    N = int(N)
    mean = cell_averages(field)["mu_avg"]
    if N == 0:
        return PweBound(mean, 0, 1.0)
    system = assemble_pwe(fourier2d(field, 2 * N), N)
    value = mean - solve_constrained(system)
    cond = float(np.linalg.cond(_reduced(system)[0]))
    return PweBound(value, N, cond)


def pwe_upper_mu(field: CellField, N: int, *, oracle_mode: bool = False) -> float:
    """Upper bound ``<mu> - f . C0^{-1} f`` with ``(2N+1)^2`` plane waves.

    ``oracle_mode`` skips the cubic-symmetry gate; the result is then the
    e1-direction value ``<rho> c^2(e1)`` of the truncated problem.
    """
    _require_cubic(field, oracle_mode)
    if int(N) != N or N < 0:
        raise ValueError(f"truncation order must be a non-negative integer, got {N}")
    mean = cell_averages(field)["mu_avg"]
    if N == 0:
        return mean
    system = assemble_pwe(fourier2d(field, 2 * N), int(N))
    return mean - solve_constrained(system)


def pwe_lower_mu(field: CellField, N: int, *, oracle_mode: bool = False) -> float:
    """Lower bound: reciprocal of the upper bound of the inverted field."""
    _require_cubic(field, oracle_mode)
    return 1.0 / pwe_upper_mu(invert_field(field), N, oracle_mode=oracle_mode)
