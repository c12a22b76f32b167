"""Unit-cell model: materials, geometries and periodic fields on [0, 1]^2.

Every geometry is described by regions (phases).  A geometry knows how to
locate a point, how to slice itself along a line ``x1 = const`` and how to
average a per-phase quantity exactly.  :class:`CellField` binds a geometry
to a list of :class:`Material` objects, one per region.

Shapes are centered at (1/2, 1/2).  On a shared boundary a point belongs to
the innermost (most recently listed) shape, so pointwise evaluation is
deterministic even though boundaries have measure zero.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field, replace
from typing import Sequence, Union

import numpy as np

__all__ = [
    "Material",
    "Laminate",
    "NestedSquares",
    "NestedCircles",
    "SeparableProduct",
    "Raster",
    "CellField",
    "Symmetry",
    "evaluate",
    "invert_field",
    "cell_averages",
    "filling_fractions",
    "check_symmetries",
    "uniform_field",
]


@dataclass(frozen=True)
class Material:
    """One phase: shear modulus (Pa) and mass density (kg/m^3)."""

    shear_modulus: float
    density: float

    def __post_init__(self):
        for name in ("shear_modulus", "density"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value <= 0.0:
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
            object.__setattr__(self, name, value)


def _check_increasing(values, lo, hi, what):
    prev = lo
    for v in values:
        if not (prev < v < hi):
            raise ValueError(f"{what} must be strictly increasing inside ({lo}, {hi}): {values}")
        prev = v


@dataclass(frozen=True)
class Laminate:
    """Layers stacked along x1.

    ``breakpoints`` are the interior layer interfaces; region ``i`` occupies
    ``[b_{i-1}, b_i)`` with ``b_{-1} = 0`` and ``b_n = 1``.
    """

    breakpoints: tuple[float, ...]

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        _check_increasing(bps, 0.0, 1.0, "laminate breakpoints")
        object.__setattr__(self, "breakpoints", bps)

    @property
    def n_regions(self) -> int:
        return len(self.breakpoints) + 1

    def region_at(self, x1, x2):
        return bisect.bisect_right(self.breakpoints, x1)

    def fractions(self):
        edges = np.concatenate(([0.0], self.breakpoints, [1.0]))
        return np.diff(edges)

    def x1_edges(self):
        return self.breakpoints

    def section(self, x1, values):
        return np.array([0.0, 1.0]), np.array([values[self.region_at(x1, 0.0)]])

    def average(self, values):
        return float(np.dot(self.fractions(), values))


@dataclass(frozen=True)
class NestedSquares:
    """Concentric axis-aligned squares; ``sizes`` are side lengths, outer first.

    Region 0 is the matrix, region ``k`` the part of square ``k`` outside
    square ``k + 1``.  An empty ``sizes`` gives a homogeneous cell.
    """

    sizes: tuple[float, ...] = ()

    def __post_init__(self):
        sizes = tuple(float(a) for a in self.sizes)
        prev = math.inf
        for a in sizes:
            if not (0.0 < a <= 1.0) or a >= prev:
                raise ValueError(f"square sizes must be strictly decreasing in (0, 1]: {sizes}")
            prev = a
        object.__setattr__(self, "sizes", sizes)

    @property
    def n_regions(self) -> int:
        return len(self.sizes) + 1

    def region_at(self, x1, x2):
        d = max(abs(x1 - 0.5), abs(x2 - 0.5))
        for k in range(len(self.sizes), 0, -1):
            if d <= 0.5 * self.sizes[k - 1]:
                return k
        return 0

    def fractions(self):
        areas = [1.0] + [a * a for a in self.sizes] + [0.0]
        return np.array([areas[k] - areas[k + 1] for k in range(self.n_regions)])

    def x1_edges(self):
        lo = [0.5 - 0.5 * a for a in self.sizes]
        hi = [0.5 + 0.5 * a for a in self.sizes]
        return tuple(sorted(e for e in set(lo + hi) if 0.0 < e < 1.0))

    def section(self, x1, values):
        d1 = abs(x1 - 0.5)
        inside = [k for k, a in enumerate(self.sizes, start=1) if d1 <= 0.5 * a]
        if not inside:
            return np.array([0.0, 1.0]), np.array([values[0]])
        # regions seen along x2 from 0 to 1/2, then mirrored
        left = [0.0]
        ids = [0]
        for k in inside:
            left.append(0.5 - 0.5 * self.sizes[k - 1])
            ids.append(k)
        edges = left + [0.5 + 0.5 * self.sizes[k - 1] for k in reversed(inside)] + [1.0]
        ids = ids + list(reversed(ids[:-1]))
        edges = np.array(edges)
        keep = np.diff(edges) > 0.0
        return edges[np.concatenate(([True], keep))], np.array([values[i] for i in ids])[keep]

    def average(self, values):
        return float(np.dot(self.fractions(), values))


@dataclass(frozen=True)
class NestedCircles:
    """Concentric discs of radii ``r1 > r2 > ...`` (each at most 1/2)."""

    radii: tuple[float, ...]

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        prev = math.inf
        for r in radii:
            if not (0.0 < r <= 0.5) or r >= prev:
                raise ValueError(f"radii must be strictly decreasing in (0, 1/2]: {radii}")
            prev = r
        object.__setattr__(self, "radii", radii)

    @property
    def n_regions(self) -> int:
        return len(self.radii) + 1

    def region_at(self, x1, x2):
        d2 = (x1 - 0.5) ** 2 + (x2 - 0.5) ** 2
        for k in range(len(self.radii), 0, -1):
            if d2 <= self.radii[k - 1] ** 2:
                return k
        return 0

    def fractions(self):
        areas = [1.0] + [math.pi * r * r for r in self.radii] + [0.0]
        return np.array([areas[k] - areas[k + 1] for k in range(self.n_regions)])

    def x1_edges(self):
        lo = [0.5 - r for r in self.radii]
        hi = [0.5 + r for r in self.radii]
        return tuple(sorted(e for e in set(lo + hi) if 0.0 < e < 1.0))

    def section(self, x1, values):
        d1 = x1 - 0.5
        halves = []
        for k, r in enumerate(self.radii, start=1):
            if abs(d1) <= r:
                halves.append((k, math.sqrt(max(r * r - d1 * d1, 0.0))))
        if not halves:
            return np.array([0.0, 1.0]), np.array([values[0]])
        left = [0.0] + [0.5 - h for _, h in halves]
        right = [0.5 + h for _, h in reversed(halves)] + [1.0]
        ids = [0] + [k for k, _ in halves]
        ids = ids + list(reversed(ids[:-1]))
        edges = np.array(left + right)
        keep = np.diff(edges) > 0.0
        return edges[np.concatenate(([True], keep))], np.array([values[i] for i in ids])[keep]

    def average(self, values):
        return float(np.dot(self.fractions(), values))


@dataclass(frozen=True)
class SeparableProduct:
    """Field ``mu(x) = g(x1) g(x2)`` with ``g`` piecewise constant.

    Phase ``i`` of the attached field holds the value of ``g`` on segment
    ``i`` (and, by the same product rule, the density factor).  The profile
    must be even about 1/2 so the product is cubic-symmetric.
    """

    breakpoints: tuple[float, ...]

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        _check_increasing(bps, 0.0, 1.0, "profile breakpoints")
        mirrored = sorted(1.0 - b for b in bps)
        if not np.allclose(mirrored, bps, rtol=0.0, atol=1e-14):
            raise ValueError(f"profile breakpoints must be symmetric about 1/2: {bps}")
        object.__setattr__(self, "breakpoints", bps)

    @property
    def n_regions(self) -> int:
        return len(self.breakpoints) + 1

    def segment_at(self, x):
        # a breakpoint belongs to the segment nearer the center, which keeps
        # g(1 - x) = g(x) exactly
        if x <= 0.5:
            return bisect.bisect_right(self.breakpoints, x)
        return bisect.bisect_left(self.breakpoints, x)

    def fractions(self):
        edges = np.concatenate(([0.0], self.breakpoints, [1.0]))
        return np.diff(edges)

    def x1_edges(self):
        return self.breakpoints

    def section(self, x1, values):
        v = np.asarray(values, dtype=float)
        edges = np.concatenate(([0.0], self.breakpoints, [1.0]))
        return edges, v[self.segment_at(x1)] * v

    def average(self, values):
        return float(np.dot(self.fractions(), values)) ** 2


@dataclass(frozen=True, eq=False)
class Raster:
    """``M x M`` grid of region indices; ``grid[i, j]`` covers
    ``[i/M, (i+1)/M) x [j/M, (j+1)/M)``."""

    grid: np.ndarray

    def __post_init__(self):
        grid = np.array(self.grid, dtype=int)
        if grid.ndim != 2 or grid.shape[0] != grid.shape[1] or grid.shape[0] < 1:
            raise ValueError("raster grid must be a non-empty square array")
        if grid.min() < 0:
            raise ValueError("raster phase ids must be non-negative")
        grid.setflags(write=False)
        object.__setattr__(self, "grid", grid)

    @property
    def resolution(self) -> int:
        return self.grid.shape[0]

    @property
    def n_regions(self) -> int:
        return int(self.grid.max()) + 1

    def region_at(self, x1, x2):
        m = self.resolution
        return int(self.grid[min(int(x1 * m), m - 1), min(int(x2 * m), m - 1)])

    def fractions(self):
        counts = np.bincount(self.grid.ravel(), minlength=self.n_regions)
        return counts / self.grid.size

    def x1_edges(self):
        m = self.resolution
        return tuple(i / m for i in range(1, m))

    def section(self, x1, values):
        m = self.resolution
        row = self.grid[min(int(x1 * m), m - 1)]
        return np.linspace(0.0, 1.0, m + 1), np.asarray(values, dtype=float)[row]

    def average(self, values):
        return float(np.dot(self.fractions(), values))


Geometry = Union[Laminate, NestedSquares, NestedCircles, SeparableProduct, Raster]


@dataclass(frozen=True)
class Symmetry:
    cubic: bool
    even_x1: bool


@dataclass(frozen=True)
class CellField:
    """A 1-periodic (mu, rho) field: a geometry plus one material per region.

    ``symmetry`` is derived from the geometry and phase values when not
    given explicitly.
    """

    geometry: Geometry
    phases: tuple[Material, ...]
    symmetry: Symmetry = field(default=None)

    def __post_init__(self):
        phases = tuple(self.phases)
        if len(phases) != self.geometry.n_regions:
            raise ValueError(
                f"{type(self.geometry).__name__} has {self.geometry.n_regions} regions "
                f"but {len(phases)} phases were given"
            )
        object.__setattr__(self, "phases", phases)
        if self.symmetry is None:
            object.__setattr__(self, "symmetry", _derive_symmetry(self))

    @property
    def mu_values(self) -> np.ndarray:
        return np.array([p.shear_modulus for p in self.phases])

    @property
    def rho_values(self) -> np.ndarray:
        return np.array([p.density for p in self.phases])

    @property
    def is_smooth_in_x1(self) -> bool:
        """True when the cross-section varies continuously with x1 (discs)."""
        return isinstance(self.geometry, NestedCircles)

    def mu(self, x1: float, x2: float) -> float:
        return evaluate(self, (x1, x2))[0]

    def mu_section(self, x1: float):
        """Piecewise-constant ``mu(x1, .)``: (edges in x2 from 0 to 1, values)."""
        return self.geometry.section(x1, self.mu_values)

    def rho_section(self, x1: float):
        return self.geometry.section(x1, self.rho_values)

    def mu_bounds(self) -> tuple[float, float]:
        """Smallest and largest pointwise shear modulus."""
        mu = self.mu_values
        if isinstance(self.geometry, SeparableProduct):
            return float(mu.min() ** 2), float(mu.max() ** 2)
        return float(mu.min()), float(mu.max())


def uniform_field(material: Material) -> CellField:
    """Homogeneous cell made of a single material."""
    return CellField(NestedSquares(()), (material,))


def _derive_symmetry(f: CellField) -> Symmetry:
    geom = f.geometry
    if isinstance(geom, (NestedSquares, NestedCircles, SeparableProduct)):
        return Symmetry(True, True)
    mu = f.mu_values
    if isinstance(geom, Laminate):
        constant = bool(np.all(mu == mu[0]))
        mirrored = tuple(sorted(1.0 - b for b in geom.breakpoints))
        even = constant or (
            np.allclose(mirrored, geom.breakpoints, rtol=0.0, atol=1e-14)
            and bool(np.all(mu[1:-1] == mu[1:-1][::-1]))
            and mu[0] == mu[-1]
        )
        return Symmetry(constant, bool(even))
    flags = check_symmetries(f, geom.resolution)
    return Symmetry(flags["cubic"], flags["even_x1"])


def evaluate(f: CellField, point) -> tuple[float, float]:
    """(mu, rho) at a point of [0, 1)^2."""
    x1, x2 = (float(p) for p in point)
    geom = f.geometry
    if isinstance(geom, SeparableProduct):
        i, j = geom.segment_at(x1), geom.segment_at(x2)
        return (
            f.phases[i].shear_modulus * f.phases[j].shear_modulus,
            f.phases[i].density * f.phases[j].density,
        )
    phase = f.phases[geom.region_at(x1, x2)]
    return phase.shear_modulus, phase.density


def invert_field(f: CellField) -> CellField:
    """Same geometry and densities with every shear modulus replaced by its reciprocal."""
    phases = tuple(replace(p, shear_modulus=1.0 / p.shear_modulus) for p in f.phases)
    return CellField(f.geometry, phases, f.symmetry)


def cell_averages(f: CellField) -> dict:
    """Exact area averages of mu, 1/mu and rho."""
    geom = f.geometry
    mu = f.mu_values
    return {
        "mu_avg": geom.average(mu),
        "mu_inv_avg": geom.average(1.0 / mu),
        "rho_avg": geom.average(f.rho_values),
    }


def filling_fractions(geometry: Geometry) -> list[float]:
    """Area fraction of each region (segment length fraction for a separable profile)."""
    return [float(v) for v in geometry.fractions()]


def check_symmetries(f: CellField, grid_resolution: int) -> dict:
    """Sample mu at cell centers and test quarter-turn and x1-reflection invariance."""
    if grid_resolution < 2:
        raise ValueError("grid_resolution must be at least 2")
    m = int(grid_resolution)
    centers = (np.arange(m) + 0.5) / m
    mu = np.array([[evaluate(f, (a, b))[0] for b in centers] for a in centers])
    # quarter turn about (1/2, 1/2): (x1, x2) -> (1 - x2, x1)
    rotated = mu[::-1, :].T
    reflected = mu[::-1, :]
    return {
        "cubic": bool(np.array_equal(mu, rotated)),
        "even_x1": bool(np.array_equal(mu, reflected)),
    }
