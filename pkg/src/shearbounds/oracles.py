"""Independent reference values used to check the bound solvers.

* closed form for separable fields ``mu = g(x1) g(x2)``;
* the laminate speed formula;
* the small-wavenumber limit of the lowest eigenvalue of the truncated
  wave operator, which must reproduce the plane-wave upper bound;
* adaptive quadrature of Fourier coefficients from pointwise evaluation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy import integrate

from .cell import CellField, Material, SeparableProduct, evaluate
from .fourier import fourier2d
from .pwe import plane_wave_indices

__all__ = [
    "Profile1D",
    "SeparableProfile",
    "separable_mu_eff",
    "laminate_speed_sq",
    "direct_bnn",
    "quadrature_fourier",
]

QUAD_TOL = 1e-10


@dataclass(frozen=True)
class Profile1D:
    """Piecewise-constant positive function on [0, 1].

    Segment ``i`` spans ``[b_{i-1}, b_i)`` with ``b_{-1} = 0`` and ``b_n = 1``.
    """

    breakpoints: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        vals = tuple(float(v) for v in self.values)
        if len(vals) != len(bps) + 1:
            raise ValueError(f"{len(bps)} breakpoints need {len(bps) + 1} values, got {len(vals)}")
        prev = 0.0
        for b in bps:
            if not prev < b < 1.0:
                raise ValueError(f"breakpoints must increase strictly inside (0, 1): {bps}")
            prev = b
        if not all(math.isfinite(v) and v > 0.0 for v in vals):
            raise ValueError(f"profile values must be positive and finite: {vals}")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)

    @property
    def widths(self) -> np.ndarray:
        return np.diff(np.concatenate(([0.0], self.breakpoints, [1.0])))

    def mean(self) -> float:
        return float(np.dot(self.widths, self.values))

    def mean_inverse(self) -> float:
        return float(np.dot(self.widths, 1.0 / np.asarray(self.values)))


@dataclass(frozen=True)
class SeparableProfile(Profile1D):
    """Profile ``g`` of a separable field; must be even about 1/2."""

    def __post_init__(self):
        super().__post_init__()
        w = self.widths
        if not (np.allclose(w, w[::-1], rtol=0.0, atol=1e-14) and self.values == self.values[::-1]):
            raise ValueError("separable profile must be even about 1/2")

    def field(self, density: float = 1.0) -> CellField:
        """``mu = g(x1) g(x2)`` with constant density ``density**2``."""
        return CellField(SeparableProduct(self.breakpoints), tuple(Material(v, density) for v in self.values))


def separable_mu_eff(g: SeparableProfile) -> float:
    """Effective modulus of ``g(x1) g(x2)``: ``<g> / <1/g>``."""
    return g.mean() / g.mean_inverse()


def laminate_speed_sq(profile: Profile1D, rho_avg: float, kappa) -> float:
    """Squared quasistatic speed of an x1-laminate along the unit vector ``kappa``."""
    k1, k2 = (float(v) for v in kappa)
    if abs(math.hypot(k1, k2) - 1.0) > 1e-12:
        raise ValueError(f"propagation direction must be a unit vector, got {kappa}")
    if not rho_avg > 0.0:
        raise ValueError("mean density must be positive")
    return (k1 * k1 / profile.mean_inverse() + k2 * k2 * profile.mean()) / rho_avg


def direct_bnn(field: CellField, N: int, k_values) -> float:
    """Small-``k`` limit of ``omega_1^2 / k^2`` for the truncated wave operator.

    With ``K_g = 2 pi g + k e1`` the operator is ``C[g, g'] = mu_hat(g - g') K_g . K_g'``.
    Its lowest eigenvalue divided by ``k^2`` is evaluated at each ``k`` and
    linearly extrapolated to ``k = 0`` from the two smallest values.
    """
    ks = sorted(float(k) for k in k_values)
    if len(ks) < 2:
        raise ValueError("need at least two wavenumbers to extrapolate")
    if not all(0.0 < k <= 0.1 for k in ks):
        raise ValueError(f"wavenumbers must lie in (0, 0.1], got {ks}")
    if N < 0:
        raise ValueError(f"truncation order must be non-negative, got {N}")
    table = fourier2d(field, 2 * N)
    G = table.window
    g = plane_wave_indices(N)
    diff = g[:, None, :] - g[None, :, :]
    mu_diff = table.coeffs[diff[..., 0] + G, diff[..., 1] + G]

    def ratio(k):
        K = 2.0 * np.pi * g.astype(float)
        K[:, 0] += k
        C = mu_diff * (K @ K.T)
        C = 0.5 * (C + C.conj().T)
        try:
            lam = scipy.linalg.eigvalsh(C, subset_by_index=[0, 0])[0]
        except np.linalg.LinAlgError as exc:
            raise ArithmeticError(f"eigenvalue solver failed at k={k}: {exc}") from exc
        return lam / (k * k)

    k1, k2 = ks[0], ks[1]
    r1, r2 = ratio(k1), ratio(k2)
    return float(r1 - k1 * (r2 - r1) / (k2 - k1))


def _mu(field: CellField, x1: float, x2: float) -> float:
    return evaluate(field, (x1 % 1.0, x2 % 1.0))[0]


def _quad(func, lo, hi, points, scale):
    pts = sorted(p for p in set(points) if lo < p < hi)
    value, err = integrate.quad(
        func, lo, hi, points=pts or None, epsabs=QUAD_TOL * scale, epsrel=QUAD_TOL, limit=500
    )
    if not err <= QUAD_TOL * max(scale, abs(value)) * 10.0:
        raise ArithmeticError(f"quadrature did not converge (error estimate {err:.3g})")
    return value


def _x2_points(field: CellField, x1: float):
    edges, _ = field.mu_section(x1)
    return [float(e) for e in edges]


def quadrature_fourier(field: CellField, g=None, *, n: int | None = None, x1: float | None = None) -> complex:
    """Fourier coefficient by adaptive quadrature of pointwise values.

    ``g=(g1, g2)`` gives the 2D coefficient ``<mu exp(-2 pi i g.x)>``; ``n``
    with ``x1`` gives the coefficient of the cross-section ``mu(x1, .)``.
    Section edges and x1 interfaces are passed to the integrator as
    breakpoints only; the integrand itself comes from :func:`evaluate`.
    """
    scale = float(np.max(field.mu_values)) ** (2 if isinstance(field.geometry, SeparableProduct) else 1)
    if g is None:
        if n is None or x1 is None:
            raise ValueError("give either g or both n and x1")
        pts = _x2_points(field, x1)
        re = _quad(lambda t: _mu(field, x1, t) * math.cos(2 * math.pi * n * t), 0.0, 1.0, pts, scale)
        im = _quad(lambda t: -_mu(field, x1, t) * math.sin(2 * math.pi * n * t), 0.0, 1.0, pts, scale)
        return complex(re, im)
    g1, g2 = (int(v) for v in g)
    x1_pts = [float(e) for e in field.geometry.x1_edges()] + [0.5]
    if hasattr(field.geometry, "radii"):
        x1_pts += [0.5 - r for r in field.geometry.radii] + [0.5 + r for r in field.geometry.radii]

    def inner(part):
        trig = math.cos if part == 0 else math.sin
        sign = 1.0 if part == 0 else -1.0

        def over_x2(s):
            pts = _x2_points(field, s)
            return _quad(
                lambda t: sign * _mu(field, s, t) * trig(2 * math.pi * (g1 * s + g2 * t)), 0.0, 1.0, pts, scale
            )

        return _quad(over_x2, 0.0, 1.0, x1_pts, scale)

    return complex(inner(0), inner(1))
