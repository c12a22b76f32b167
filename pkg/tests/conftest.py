import math

import pytest

from shearbounds.cell import CellField, Laminate, Material, NestedCircles, NestedSquares
from shearbounds.oracles import SeparableProfile
from shearbounds.sweep import DEFAULT_MATERIALS

STEEL = DEFAULT_MATERIALS["steel"]
EPOXY = DEFAULT_MATERIALS["epoxy"]
SILICON = DEFAULT_MATERIALS["silicon"]


def unit(mu, rho=1.0):
    return Material(mu, rho)


def square_field(a=0.5, inclusion=4.0, matrix=1.0):
    return CellField(NestedSquares((a,)), (unit(matrix), unit(inclusion)))


def circle_field(r=0.25, inclusion=4.0, matrix=1.0):
    return CellField(NestedCircles((r,)), (unit(matrix), unit(inclusion)))


def cross_field():
    """g(x1) g(x2) with g = 2 on the middle half and 1 elsewhere."""
    return SeparableProfile((0.25, 0.75), (1.0, 2.0, 1.0)).field()


def laminate_field():
    """x1-laminate: mu = 1 on [0, 1/2), 4 on [1/2, 1)."""
    return CellField(Laminate((0.5,)), (unit(1.0), unit(4.0)))


def steel_epoxy_squares(f, steel_matrix=True):
    a = math.sqrt(f)
    phases = (STEEL, EPOXY) if steel_matrix else (EPOXY, STEEL)
    return CellField(NestedSquares((a,)), phases)


def three_phase_squares(f, ratio=0.5):
    # f is the area of the outer inclusion; the core has side ratio * a
    a = math.sqrt(f)
    return CellField(NestedSquares((a, ratio * a)), (STEEL, EPOXY, SILICON))


def steel_epoxy_circles(f):
    return CellField(NestedCircles((math.sqrt(f / math.pi),)), (STEEL, EPOXY))


@pytest.fixture
def squares():
    return square_field()


@pytest.fixture
def circles():
    return circle_field()


@pytest.fixture
def cross():
    return cross_field()


@pytest.fixture
def laminate():
    return laminate_field()
