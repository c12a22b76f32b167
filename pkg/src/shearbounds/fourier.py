"""Fourier coefficients of cell fields.

Convention: ``mu(x) = sum_g mu_hat(g) exp(2 pi i g.x)`` so that
``mu_hat(g) = <mu(x) exp(-2 pi i g.x)>``.  Shapes centered at (1/2, 1/2)
therefore carry the factor ``(-1)**(g1 + g2)``; it is kept, not normalized
away.

For every geometry whose cross-section is piecewise constant in x1 the
coefficients are exact sums of interval transforms.  Discs use adaptive
quadrature of a smooth one-dimensional integrand.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg
from scipy import integrate

from .cell import CellField, NestedCircles

__all__ = [
    "FourierTable2D",
    "ToeplitzProfile",
    "NotPositiveDefinite",
    "interval_transform",
    "section_coefficients",
    "fourier2d",
    "cross_section_profile",
    "toeplitz_matrix",
    "toeplitz_inverse",
]

REAL_TOL = 1e-13


class NotPositiveDefinite(np.linalg.LinAlgError):
    """A matrix that must be Hermitian positive definite is not."""


def interval_transform(lo: float, hi: float, n) -> np.ndarray:
    """``int_lo^hi exp(-2 pi i n x) dx`` for integer (array) ``n``."""
    n = np.asarray(n, dtype=float)
    length = hi - lo
    center = 0.5 * (lo + hi)
    arg = n * length
    sinc = np.where((arg != 0) & (arg == np.round(arg)), 0.0, np.sinc(arg))
    return length * sinc * np.exp(-2j * np.pi * n * center)


def _drop_imag(values: np.ndarray, scale: float) -> np.ndarray:
    if np.max(np.abs(values.imag), initial=0.0) <= REAL_TOL * max(scale, 1e-300):
        return np.ascontiguousarray(values.real)
    return values


def section_coefficients(edges, values, n) -> np.ndarray:
    """1D Fourier coefficients of a piecewise-constant function on [0, 1]."""
    n = np.asarray(n)
    out = np.zeros(n.shape, dtype=complex)
    for lo, hi, v in zip(edges[:-1], edges[1:], values):
        out += v * interval_transform(lo, hi, n)
    return out


@dataclass(frozen=True, eq=False)
class FourierTable2D:
    """Coefficients ``mu_hat(g)`` for ``|g1|, |g2| <= window``.

    ``coeffs[g1 + window, g2 + window]`` holds ``mu_hat((g1, g2))``.
    """

    window: int
    coeffs: np.ndarray

    def __getitem__(self, g):
        g1, g2 = g
        if abs(g1) > self.window or abs(g2) > self.window:
            raise KeyError(f"index {g} outside window {self.window}")
        return self.coeffs[g1 + self.window, g2 + self.window]

    @property
    def mean(self) -> float:
        return float(np.real(self.coeffs[self.window, self.window]))

    def is_real(self) -> bool:
        return not np.iscomplexobj(self.coeffs)


def fourier2d(field: CellField, G: int) -> FourierTable2D:
    """Fourier table of ``field`` on the window ``|g_i| <= G``."""
    if G < 0:
        raise ValueError(f"window must be non-negative, got {G}")
    g = np.arange(-G, G + 1)
    if isinstance(field.geometry, NestedCircles):
        coeffs = _disc_table(field, G)
    else:
        edges = _x1_breakpoints(field)
        coeffs = np.zeros((2 * G + 1, 2 * G + 1), dtype=complex)
        for lo, hi in zip(edges[:-1], edges[1:]):
            e2, vals = field.mu_section(0.5 * (lo + hi))
            coeffs += np.outer(interval_transform(lo, hi, g), section_coefficients(e2, vals, g))
    scale = float(np.max(np.abs(field.mu_values)))
    return FourierTable2D(G, _drop_imag(coeffs, scale))


def _x1_breakpoints(field: CellField) -> np.ndarray:
    inner = {e for e in field.geometry.x1_edges() if 0.0 < e < 1.0}
    return np.array(sorted(inner | {0.0, 0.5, 1.0}))


@lru_cache(maxsize=4096)
def _disc_transform(radius: float, g1: int, g2: int) -> float:
    """``int_{|y| <= r} exp(-2 pi i g.y) dy`` for a disc centered at the origin.

    With ``y1 = r cos t`` the chord integral becomes smooth in ``t``.
    """
    if g1 == 0 and g2 == 0:
        return math.pi * radius * radius

    def integrand(t):
        s = radius * math.cos(t)
        h = radius * math.sin(t)
        return math.cos(2.0 * math.pi * g1 * s) * 2.0 * h * float(np.sinc(2.0 * g2 * h)) * h

    with warnings.catch_warnings():
        # roundoff warnings at tight tolerances; the error bound is checked below
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, err = integrate.quad(integrand, 0.0, math.pi, epsabs=1e-15, epsrel=1e-13, limit=400)
    if not err <= 1e-11 * max(radius * radius, abs(value)):
        raise ArithmeticError(f"disc quadrature did not converge for g=({g1}, {g2}), err={err:.3g}")
    return value


def _disc_table(field: CellField, G: int) -> np.ndarray:
    radii = field.geometry.radii
    mu = field.mu_values
    g = np.arange(-G, G + 1)
    table = np.zeros((2 * G + 1, 2 * G + 1))
    table[G, G] = mu[0]
    sign = np.where((g[:, None] + g[None, :]) % 2 == 0, 1.0, -1.0)
    for k, r in enumerate(radii, start=1):
        contrast = mu[k] - mu[k - 1]
        disc = np.empty_like(table)
        for i, a in enumerate(g):
            for j, b in enumerate(g):
                # rotation invariance: depends on (|g1|, |g2|) up to order
                lo, hi = sorted((abs(int(a)), abs(int(b))))
                disc[i, j] = _disc_transform(r, hi, lo)
        table += contrast * sign * disc
    return table.astype(complex)


def toeplitz_matrix(coeffs: np.ndarray, N: int) -> np.ndarray:
    """``(2N+1) x (2N+1)`` matrix with entry (n, m) = ``c_{n-m}``.

    ``coeffs`` holds ``c_{-2N} ... c_{2N}``.
    """
    idx = np.arange(-N, N + 1)
    return np.asarray(coeffs)[(idx[:, None] - idx[None, :]) + 2 * N]


def toeplitz_inverse(block: np.ndarray) -> np.ndarray:
    """Inverse of a Hermitian positive-definite (Toeplitz) block via Cholesky."""
    block = np.asarray(block)
    try:
        factor = scipy.linalg.cho_factor(block, lower=True, check_finite=True)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(f"cross-section block is not positive definite: {exc}") from exc
    inv = scipy.linalg.cho_solve(factor, np.eye(block.shape[0], dtype=block.dtype))
    return 0.5 * (inv + inv.conj().T)


@dataclass(frozen=True, eq=False)
class ToeplitzProfile:
    """Piecewise-constant map ``x1 -> mu_hat_N(x1)``.

    Segment ``k`` covers ``[edges[k], edges[k+1])`` and carries the
    coefficients ``c_{-2N} ... c_{2N}`` of the cross-section there.
    ``sampled`` marks profiles that approximate a continuously varying
    cross-section by steps (discs).
    """

    N: int
    edges: np.ndarray
    coeffs: np.ndarray
    sampled: bool = False

    @property
    def n_segments(self) -> int:
        return len(self.edges) - 1

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    @property
    def blocks(self) -> np.ndarray:
        return np.stack([toeplitz_matrix(c, self.N) for c in self.coeffs])

    def block(self, k: int) -> np.ndarray:
        return toeplitz_matrix(self.coeffs[k], self.N)

    def segment_at(self, x: float) -> int:
        k = int(np.searchsorted(self.edges, x, side="right")) - 1
        return min(max(k, 0), self.n_segments - 1)

    def restrict(self, lo: float, hi: float) -> "ToeplitzProfile":
        """The part of the profile on ``[lo, hi]``."""
        if not (self.edges[0] <= lo < hi <= self.edges[-1]):
            raise ValueError(f"[{lo}, {hi}] is not inside the profile domain")
        keep = (self.edges[1:] > lo) & (self.edges[:-1] < hi)
        edges = np.concatenate((self.edges[:-1][keep], [self.edges[1:][keep][-1]]))
        edges[0], edges[-1] = lo, hi
        return ToeplitzProfile(self.N, edges, self.coeffs[keep], self.sampled)

    def scaled(self, factor: float) -> "ToeplitzProfile":
        return ToeplitzProfile(self.N, self.edges, self.coeffs * factor, self.sampled)


def _graded_edges(lo: float, hi: float, m: int) -> np.ndarray:
    # cosine grading clusters steps at both ends, where disc chords
    # behave like sqrt(distance)
    t = np.arange(m + 1) / m
    pts = lo + (hi - lo) * 0.5 * (1.0 - np.cos(np.pi * t))
    pts[0], pts[-1] = lo, hi
    return pts


def cross_section_profile(
    field: CellField, N: int, steps_per_unit: int = 64, refinement: int = 0
) -> ToeplitzProfile:
    """Truncated Toeplitz cross-section operator of ``field`` along x1.

    Fields with piecewise-constant cross-sections get one exact segment per
    x1 interval.  Discs are stepped: each x1 interval crossing a disc is
    split into ``max(2, ceil(steps_per_unit * length)) * 2**refinement``
    graded steps and the exact cross-section is taken at each step
    midpoint.  Raising ``refinement`` by one halves every step exactly.  The point
    x1 = 1/2 is always an edge, so the profile restricts exactly to half a
    period.
    """
    if N < 0:
        raise ValueError(f"truncation order must be non-negative, got {N}")
    if steps_per_unit < 1:
        raise ValueError("steps_per_unit must be positive")
    if refinement < 0:
        raise ValueError("refinement must be non-negative")
    n = np.arange(-2 * N, 2 * N + 1)
    base = _x1_breakpoints(field)
    if field.is_smooth_in_x1:
        reach = max(field.geometry.radii)
        pieces = []
        for lo, hi in zip(base[:-1], base[1:]):
            if abs(0.5 * (lo + hi) - 0.5) < reach:
                m = max(2, math.ceil(steps_per_unit * (hi - lo))) << refinement
                pieces.append(_graded_edges(lo, hi, m)[:-1])
            else:
                pieces.append(np.array([lo]))
        edges = np.concatenate(pieces + [np.array([1.0])])
    else:
        edges = base
    coeffs = np.zeros((len(edges) - 1, len(n)), dtype=complex)
    for k, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
        e2, vals = field.mu_section(0.5 * (lo + hi))
        coeffs[k] = section_coefficients(e2, vals, n)
    scale = float(np.max(np.abs(field.mu_values)))
    return ToeplitzProfile(N, edges, _drop_imag(coeffs, scale), field.is_smooth_in_x1)
