"""Attractors of one-direction flows on polysquare surfaces with a one-sided barrier."""

from .constructions import (
    bk_attractor_decay,
    bk_conjugacy_residual,
    bk_induce,
    bk_map,
    build_small_attractor,
)
from .ergodic import analyse_recurrent_set, overlapping_graph
from .extension import minimal_clear_region, run_extension, verify_partition
from .flow import build_dissipative_map, build_geodesic_map, first_return_map, kac_check, simulate_batch
from .intervals import IntervalSet
from .numeric import AlphaValue, Coord, make_alpha
from .regions import RegionSet, render_svg, reverse_flow_partition, square_areas
from .surface import (
    SystemInstance,
    glued_reversed_l_surfaces,
    l_surface,
    parse_instance,
    serialize_instance,
    square_torus,
    two_square_torus,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaValue",
    "Coord",
    "IntervalSet",
    "RegionSet",
    "SystemInstance",
    "analyse_recurrent_set",
    "bk_attractor_decay",
    "bk_conjugacy_residual",
    "bk_induce",
    "bk_map",
    "build_dissipative_map",
    "build_geodesic_map",
    "build_small_attractor",
    "first_return_map",
    "glued_reversed_l_surfaces",
    "kac_check",
    "l_surface",
    "make_alpha",
    "minimal_clear_region",
    "overlapping_graph",
    "parse_instance",
    "render_svg",
    "reverse_flow_partition",
    "run_extension",
    "serialize_instance",
    "simulate_batch",
    "square_areas",
    "square_torus",
    "two_square_torus",
    "validate",
]
