from .composite import CompositeLayout, composite_two_layer_layout
from .evaluate import (
    FieldPoint,
    Layout,
    NonPositiveDistance,
    element_response,
    field_approx,
    field_exact,
    mode_excitation,
    path_length_approx,
    path_length_exact,
    phase_winding,
    sample_approx,
    sample_exact,
    sample_field,
)
from .raster import FieldMap, MapSpec, locate_nulls, render_field_map
