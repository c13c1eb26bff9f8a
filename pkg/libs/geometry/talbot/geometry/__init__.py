from .grid import (
    FractalGrid,
    GridIndex,
    SubWavelengthAperture,
    enumerate_centers,
    grid_center,
    grid_line_orders,
    make_grid,
    nearest_center,
    required_transmit_radius,
)
from .layout import (
    DimensionMismatch,
    NonPositiveInput,
    UcaLayout,
    check_positive,
    receive_element_coordinates,
    to_cartesian,
    to_cylindrical,
)
from .units import Wavelength
