"""Config-driven sweeps of speed bounds over filling fraction and truncation order.

A sweep config is one JSON document::

    {
      "schema_version": 1,
      "geometry": {"type": "nested_squares", "parameterization": "inner",
                   "relative_sizes": [1.0]},
      "materials": ["steel", "epoxy"],
      "N": [0, 1, 2],
      "f_grid": {"start": 0.1, "stop": 0.7, "count": 4},
      "method": "both",
      "format": "csv",
      "output": "bounds.csv"
    }

Geometry types and what ``f`` means for them:

``nested_squares`` / ``nested_circles``
    ``relative_sizes`` lists the side lengths (radii) outer first, relative
    to one shape that ``f`` controls.  With ``parameterization: "inner"``
    ``f`` is the area of the innermost shape and the last relative size must
    be 1; with ``"outer"`` ``f`` is the area of the outermost shape and the
    first relative size must be 1.  ``sizes`` fixes absolute sizes instead
    (then ``f_grid`` must be omitted).
``laminate``
    two phases; phase 1 is the layer ``[1/2 - f/2, 1/2 + f/2)``.  Not cubic,
    so ``oracle_mode`` is required.
``separable``
    ``mu = g(x1) g(x2)``; ``g`` is phase 1 on ``[1/2 - f/2, 1/2 + f/2)`` and
    phase 0 elsewhere.  Material entries give the factor values of ``g``.
``uniform``
    one material; ``f`` only labels rows.

Materials are names from :data:`DEFAULT_MATERIALS` or objects with
``shear_modulus`` (Pa) and ``density`` (kg/m^3).  Unknown keys anywhere are
rejected.
"""
from __future__ import annotations

import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Any

import numpy as np

from .cell import (
    CellField,
    Laminate,
    Material,
    NestedCircles,
    NestedSquares,
    SeparableProduct,
    cell_averages,
    invert_field,
)
from .monodromy import BACKENDS, mm_bound
from .pwe import pwe_bound

__all__ = [
    "DEFAULT_MATERIALS",
    "SCHEMA_VERSION",
    "CSV_COLUMNS",
    "ConfigError",
    "GeometrySpec",
    "SweepConfig",
    "BoundsResult",
    "bounds_to_speed",
    "build_field",
    "evaluate_point",
    "run_sweep",
    "write_output",
    "format_results",
]

SCHEMA_VERSION = 1

# handbook values; not taken from any reference result
DEFAULT_MATERIALS = {
    "steel": Material(80e9, 7800.0),
    "epoxy": Material(1.48e9, 1180.0),
    "silicon": Material(68e9, 2330.0),
}

CSV_COLUMNS = (
    "f",
    "N",
    "method",
    "mu_lower",
    "mu_upper",
    "c_lower",
    "c_upper",
    "rho_avg",
    "backend",
    "condition_estimate",
    "error",
)

GEOMETRY_TYPES = ("nested_squares", "nested_circles", "laminate", "separable", "uniform")
METHODS = ("pwe", "mm", "both")
FORMATS = ("csv", "json")


class ConfigError(ValueError):
    """Invalid sweep configuration."""


@dataclass(frozen=True)
class GeometrySpec:
    type: str
    parameterization: str = "inner"
    relative_sizes: tuple[float, ...] = (1.0,)
    sizes: tuple[float, ...] | None = None


@dataclass(frozen=True)
class SweepConfig:
    geometry: GeometrySpec
    materials: tuple[Material, ...]
    N: tuple[int, ...]
    f_values: tuple[float, ...]
    method: str = "both"
    backend: str = "auto"
    steps: int | None = None
    profile_steps: int = 64
    peano_order: int = 8
    format: str = "csv"
    output: str | None = None
    oracle_mode: bool = False
    workers: int = 1

    @property
    def methods(self) -> tuple[str, ...]:
        return ("mm", "pwe") if self.method == "both" else (self.method,)

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        return _parse_config(data)

    @classmethod
    def from_json(cls, text: str) -> "SweepConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        return _parse_config(data)


def _reject_unknown(data: dict, allowed, where: str):
    if not isinstance(data, dict):
        raise ConfigError(f"{where} must be an object")
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(unknown)}")


def _material(entry) -> Material:
    if isinstance(entry, str):
        try:
            return DEFAULT_MATERIALS[entry.lower()]
        except KeyError:
            raise ConfigError(f"unknown material {entry!r}; known: {', '.join(DEFAULT_MATERIALS)}") from None
    _reject_unknown(entry, ("name", "shear_modulus", "density"), "material")
    try:
        return Material(entry["shear_modulus"], entry["density"])
    except KeyError as exc:
        raise ConfigError(f"material needs {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid material: {exc}") from None


def _f_values(spec) -> tuple[float, ...]:
    if isinstance(spec, list):
        values = spec
    else:
        _reject_unknown(spec, ("start", "stop", "count"), "f_grid")
        try:
            start, stop, count = float(spec["start"]), float(spec["stop"]), int(spec["count"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"f_grid needs numeric start, stop and count: {exc}") from None
        if count < 1:
            raise ConfigError("f_grid count must be positive")
        values = np.linspace(start, stop, count).tolist()
    try:
        values = tuple(float(v) for v in values)
    except (TypeError, ValueError):
        raise ConfigError("f_grid values must be numbers") from None
    if not values or not all(0.0 < v < 1.0 for v in values):
        raise ConfigError(f"f values must lie in (0, 1): {values}")
    return values


def _parse_config(data: Any) -> SweepConfig:
    top = (
        "schema_version geometry materials N f_grid method backend steps profile_steps "
        "peano_order format output oracle_mode workers"
    ).split()
    _reject_unknown(data, top, "config")
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ConfigError(f"schema_version must be {SCHEMA_VERSION}, got {data.get('schema_version')!r}")
    geo = data.get("geometry")
    if geo is None:
        raise ConfigError("config needs a geometry")
    _reject_unknown(geo, ("type", "parameterization", "relative_sizes", "sizes"), "geometry")
    gtype = geo.get("type")
    if gtype not in GEOMETRY_TYPES:
        raise ConfigError(f"geometry type must be one of {GEOMETRY_TYPES}, got {gtype!r}")
    param = geo.get("parameterization", "inner")
    if param not in ("inner", "outer"):
        raise ConfigError("parameterization must be 'inner' or 'outer'")
    try:
        rel = tuple(float(v) for v in geo.get("relative_sizes", [1.0]))
        sizes = None if geo.get("sizes") is None else tuple(float(v) for v in geo["sizes"])
    except (TypeError, ValueError):
        raise ConfigError("geometry sizes must be numbers") from None
    gspec = GeometrySpec(gtype, param, rel, sizes)

    materials = data.get("materials")
    if not isinstance(materials, list) or not materials:
        raise ConfigError("materials must be a non-empty list")
    mats = tuple(_material(m) for m in materials)

    try:
        Ns = tuple(int(n) for n in data.get("N", [0]))
    except (TypeError, ValueError):
        raise ConfigError("N must be a list of integers") from None
    if not Ns or any(n < 0 for n in Ns):
        raise ConfigError(f"N must be a non-empty list of non-negative integers: {Ns}")
    Ns = tuple(sorted(set(Ns)))

    if gspec.sizes is not None:
        if "f_grid" in data:
            raise ConfigError("give either geometry.sizes or f_grid, not both")
        if gtype not in ("nested_squares", "nested_circles"):
            raise ConfigError("explicit sizes apply to nested_squares and nested_circles only")
        try:
            shape = NestedCircles(gspec.sizes) if gtype == "nested_circles" else NestedSquares(gspec.sizes)
        except ValueError as exc:
            raise ConfigError(f"invalid sizes: {exc}") from None
        # label the single row by the innermost shape's area
        inner = shape.radii[-1] if gtype == "nested_circles" else shape.sizes[-1]
        f_values = (math.pi * inner * inner if gtype == "nested_circles" else inner * inner,)
    else:
        if "f_grid" not in data:
            raise ConfigError("config needs f_grid (or explicit geometry.sizes)")
        f_values = _f_values(data["f_grid"])

    method = data.get("method", "both")
    if method not in METHODS:
        raise ConfigError(f"method must be one of {METHODS}")
    backend = data.get("backend", "auto")
    if backend not in ("auto",) + BACKENDS:
        raise ConfigError(f"backend must be one of {('auto',) + BACKENDS}")
    fmt = data.get("format", "csv")
    if fmt not in FORMATS:
        raise ConfigError(f"format must be one of {FORMATS}")
    steps = data.get("steps")
    ints = {"profile_steps": data.get("profile_steps", 64), "peano_order": data.get("peano_order", 8)}
    ints["workers"] = data.get("workers", 1)
    if steps is not None:
        ints["steps"] = steps
    for key, value in ints.items():
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise ConfigError(f"{key} must be a positive integer, got {value!r}")
    oracle = data.get("oracle_mode", False)
    if not isinstance(oracle, bool):
        raise ConfigError("oracle_mode must be true or false")
    output = data.get("output")
    if output is not None and not isinstance(output, str):
        raise ConfigError("output must be a path string")

    config = SweepConfig(
        geometry=gspec,
        materials=mats,
        N=Ns,
        f_values=f_values,
        method=method,
        backend=backend,
        steps=steps,
        profile_steps=ints["profile_steps"],
        peano_order=ints["peano_order"],
        format=fmt,
        output=output,
        oracle_mode=oracle,
        workers=ints["workers"],
    )
    validate(config)
    return config


def validate(config: SweepConfig) -> None:
    """Cheap checks that every grid point yields a valid geometry."""
    g = config.geometry
    expected = {
        "nested_squares": len(g.sizes if g.sizes is not None else g.relative_sizes) + 1,
        "nested_circles": len(g.sizes if g.sizes is not None else g.relative_sizes) + 1,
        "laminate": 2,
        "separable": 2,
        "uniform": 1,
    }[g.type]
    if len(config.materials) != expected:
        raise ConfigError(f"{g.type} geometry needs {expected} materials, got {len(config.materials)}")
    if g.type in ("laminate",) and not config.oracle_mode:
        raise ConfigError("laminate cells are not cubic-symmetric; set oracle_mode to evaluate e1 values")
    if g.type in ("nested_squares", "nested_circles") and g.sizes is None:
        rel = g.relative_sizes
        anchor = rel[-1] if g.parameterization == "inner" else rel[0]
        if anchor != 1.0:
            raise ConfigError(f"{g.parameterization} parameterization needs relative size 1 at that end: {rel}")
    for f in config.f_values:
        try:
            build_field(config, f)
        except ValueError as exc:
            raise ConfigError(f"geometry invalid at f={f}: {exc}") from None


def _nested_sizes(spec: GeometrySpec, f: float, circles: bool) -> tuple[float, ...]:
    if spec.sizes is not None:
        return spec.sizes
    size = math.sqrt(f / math.pi) if circles else math.sqrt(f)
    return tuple(size * r for r in spec.relative_sizes)


def build_field(config: SweepConfig, f: float) -> CellField:
    """Cell field at filling fraction ``f``."""
    spec = config.geometry
    mats = config.materials
    if spec.type == "uniform":
        return CellField(NestedSquares(()), mats)
    if spec.type == "nested_squares":
        return CellField(NestedSquares(_nested_sizes(spec, f, False)), mats)
    if spec.type == "nested_circles":
        return CellField(NestedCircles(_nested_sizes(spec, f, True)), mats)
    lo, hi = 0.5 - 0.5 * f, 0.5 + 0.5 * f
    if spec.type == "laminate":
        return CellField(Laminate((lo, hi)), (mats[0], mats[1], mats[0]))
    return CellField(SeparableProduct((lo, hi)), (mats[0], mats[1], mats[0]))


def bounds_to_speed(mu_bound: float, rho_avg: float) -> float:
    """Shear speed ``sqrt(mu / <rho>)``."""
    if not (mu_bound > 0.0 and rho_avg > 0.0):
        raise ValueError(f"modulus and density must be positive, got {mu_bound!r}, {rho_avg!r}")
    return math.sqrt(mu_bound / rho_avg)


@dataclass(frozen=True)
class BoundsResult:
    f: float
    N: int
    method: str
    mu_lower: float | None = None
    mu_upper: float | None = None
    c_lower: float | None = None
    c_upper: float | None = None
    rho_avg: float | None = None
    backend: str = ""
    condition_estimate: float | None = None
    error: str = ""
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def sort_key(self):
        return (self.f, self.N, self.method)

    def record(self) -> dict:
        data = asdict(self)
        data.pop("diagnostics")
        return data


def evaluate_point(config: SweepConfig, f: float, N: int, method: str) -> BoundsResult:
    """Bounds for one (f, N, method); failures are returned in the row."""
    try:
        cell = build_field(config, f)
        rho = cell_averages(cell)["rho_avg"]
        inverse = invert_field(cell)
        oracle = config.oracle_mode
        if method == "pwe":
            up = pwe_bound(cell, N, oracle_mode=oracle)
            low = pwe_bound(inverse, N, oracle_mode=oracle)
            backend = ""
            diag = {}
        else:
            options = dict(
                steps=config.steps,
                peano_order=config.peano_order,
                profile_steps=config.profile_steps,
                oracle_mode=oracle,
            )
            up = mm_bound(cell, N, config.backend, **options)
            low = mm_bound(inverse, N, config.backend, **options)
            backend = up.backend
            diag = {
                "half_period": up.half_period,
                "precision": [up.precision, low.precision],
                "steps": [up.steps, low.steps],
                "profile_steps": [up.profile_steps, low.profile_steps],
                "converged": up.converged and low.converged,
            }
        mu_upper = up.value
        mu_lower = 1.0 / low.value
        return BoundsResult(
            f=f,
            N=N,
            method=method,
            mu_lower=mu_lower,
            mu_upper=mu_upper,
            c_lower=bounds_to_speed(mu_lower, rho),
            c_upper=bounds_to_speed(mu_upper, rho),
            rho_avg=rho,
            backend=backend,
            condition_estimate=max(up.condition_estimate, low.condition_estimate),
            diagnostics=diag,
        )
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        return BoundsResult(f=f, N=N, method=method, error=f"{type(exc).__name__}: {exc}")


def _task(args):
    return evaluate_point(*args)


def run_sweep(config: SweepConfig) -> list[BoundsResult]:
    """All (f, N, method) points, sorted by that key whatever the execution order."""
    tasks = [(config, f, N, m) for f in config.f_values for N in config.N for m in config.methods]
    if config.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_task, tasks))
    else:
        results = [_task(t) for t in tasks]
    return sorted(results, key=lambda r: r.sort_key)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def format_results(results, fmt: str) -> str:
    """Serialized results; floats use round-trip ``repr``."""
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in results:
            rec = r.record()
            writer.writerow([_cell(rec[c]) for c in CSV_COLUMNS])
        return buf.getvalue()
    if fmt == "json":
        rows = [{c: _json_value(r.record()[c]) for c in CSV_COLUMNS} for r in results]
        return json.dumps(rows, indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def write_output(results, fmt: str, path) -> None:
    """Write results to ``path`` (``None`` or ``"-"`` writes to stdout)."""
    text = format_results(results, fmt)
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def with_overrides(config: SweepConfig, **overrides) -> SweepConfig:
    """Copy of ``config`` with non-``None`` overrides applied and revalidated."""
    changes = {k: v for k, v in overrides.items() if v is not None}
    updated = replace(config, **changes)
    validate(updated)
    return updated
