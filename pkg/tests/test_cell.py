import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shearbounds.cell import (
    CellField,
    Laminate,
    Material,
    NestedCircles,
    NestedSquares,
    Raster,
    SeparableProduct,
    cell_averages,
    check_symmetries,
    evaluate,
    filling_fractions,
    invert_field,
    uniform_field,
)

from conftest import cross_field, laminate_field, square_field, unit


def test_material_rejects_nonpositive_and_nonfinite():
    for bad in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(ValueError):
            Material(bad, 1.0)
        with pytest.raises(ValueError):
            Material(1.0, bad)


def test_evaluate_constant_field():
    f = uniform_field(Material(2.0, 3.0))
    assert evaluate(f, (0.123, 0.77)) == (2.0, 3.0)


def test_evaluate_square_center_and_corner():
    f = square_field()
    assert evaluate(f, (0.5, 0.5))[0] == 4.0
    assert evaluate(f, (0.9, 0.9))[0] == 1.0


def test_boundary_belongs_to_innermost_shape():
    f = square_field()
    assert evaluate(f, (0.25, 0.5))[0] == 4.0
    assert evaluate(f, (0.75, 0.75))[0] == 4.0
    c = CellField(NestedCircles((0.25,)), (unit(1.0), unit(4.0)))
    assert evaluate(c, (0.75, 0.5))[0] == 4.0


def test_invert_field_examples():
    f = square_field()
    inv = invert_field(f)
    assert list(inv.mu_values) == [1.0, 0.25]
    assert list(inv.rho_values) == list(f.rho_values)
    assert inv.symmetry == f.symmetry
    assert list(invert_field(inv).mu_values) == list(f.mu_values)
    const = invert_field(uniform_field(Material(2.0, 1.0)))
    assert const.mu_values[0] == 0.5


def test_cell_averages_examples():
    lam = laminate_field()
    avg = cell_averages(lam)
    assert avg["mu_avg"] == 2.5
    assert avg["mu_inv_avg"] == 0.625
    assert cell_averages(square_field())["mu_avg"] == 1.75
    assert cell_averages(uniform_field(Material(1.0, 3.0)))["rho_avg"] == 3.0


def test_separable_averages_are_products():
    avg = cell_averages(cross_field())
    assert avg["mu_avg"] == pytest.approx(1.5**2, rel=1e-15)
    assert avg["mu_inv_avg"] == pytest.approx(0.75**2, rel=1e-15)


def test_filling_fraction_examples():
    assert filling_fractions(NestedSquares((0.5,))) == pytest.approx([0.75, 0.25], abs=1e-15)
    assert filling_fractions(NestedCircles((0.25,))) == pytest.approx([1 - math.pi / 16, math.pi / 16], abs=1e-15)
    assert filling_fractions(NestedSquares((0.8, 0.4))) == pytest.approx([0.36, 0.48, 0.16], abs=1e-15)


def test_check_symmetries_examples():
    assert check_symmetries(square_field(), 16) == {"cubic": True, "even_x1": True}
    assert check_symmetries(laminate_field(), 16)["cubic"] is False
    assert check_symmetries(cross_field(), 16) == {"cubic": True, "even_x1": True}
    with pytest.raises(ValueError):
        check_symmetries(square_field(), 1)


@pytest.mark.parametrize("res", [2, 3, 7, 16, 33])
def test_builtin_cubic_geometries_pass_symmetry_check(res):
    fields = [
        square_field(),
        CellField(NestedSquares((0.9, 0.45)), (unit(1), unit(2), unit(3))),
        CellField(NestedCircles((0.4, 0.2)), (unit(1), unit(2), unit(3))),
        cross_field(),
    ]
    for f in fields:
        assert f.symmetry.cubic and f.symmetry.even_x1
        assert check_symmetries(f, res)["cubic"]


def test_geometry_validation():
    with pytest.raises(ValueError):
        NestedSquares((0.4, 0.5))
    with pytest.raises(ValueError):
        NestedSquares((1.2,))
    with pytest.raises(ValueError):
        NestedCircles((0.6,))
    with pytest.raises(ValueError):
        Laminate((0.5, 0.3))
    with pytest.raises(ValueError):
        SeparableProduct((0.2, 0.7))
    with pytest.raises(ValueError):
        CellField(NestedSquares((0.5,)), (unit(1.0),))


def test_laminate_symmetry_flags():
    assert laminate_field().symmetry.even_x1 is False
    centered = CellField(Laminate((0.25, 0.75)), (unit(1), unit(4), unit(1)))
    assert centered.symmetry.even_x1 is True
    assert centered.symmetry.cubic is False


def test_raster_symmetry_and_averages():
    grid = np.zeros((4, 4), dtype=int)
    grid[1:3, 1:3] = 1
    f = CellField(Raster(grid), (unit(1.0), unit(4.0)))
    assert f.symmetry.cubic and f.symmetry.even_x1
    assert cell_averages(f)["mu_avg"] == 1.75
    grid2 = grid.copy()
    grid2[0, 0] = 1
    g = CellField(Raster(grid2), (unit(1.0), unit(4.0)))
    assert not g.symmetry.cubic


positive = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(
    sizes=st.lists(st.floats(min_value=0.05, max_value=1.0), min_size=1, max_size=3, unique=True),
    mus=st.lists(positive, min_size=4, max_size=4),
    circles=st.booleans(),
)
def test_fractions_sum_to_one_and_inverse_average(sizes, mus, circles):
    sizes = sorted(sizes, reverse=True)
    if len(sizes) > 1 and min(a - b for a, b in zip(sizes[:-1], sizes[1:])) < 1e-6:
        return
    geom = NestedCircles(tuple(0.5 * s for s in sizes)) if circles else NestedSquares(tuple(sizes))
    assert abs(sum(filling_fractions(geom)) - 1.0) <= 1e-14
    f = CellField(geom, tuple(unit(m) for m in mus[: len(sizes) + 1]))
    assert cell_averages(invert_field(f))["mu_avg"] == cell_averages(f)["mu_inv_avg"]
