"""Upper and lower bounds on the effective shear modulus and quasistatic
shear speed of two-dimensional periodic composites."""
from .cell import (
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
from .fourier import cross_section_profile, fourier2d
from .monodromy import mm_bound, mm_lower_mu, mm_upper_mu, mm_upper_mu_half
from .pwe import NonCubicField, pwe_lower_mu, pwe_upper_mu
from .sweep import SweepConfig, bounds_to_speed, run_sweep, write_output

__version__ = "0.1.0"
