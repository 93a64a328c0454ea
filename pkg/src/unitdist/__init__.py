"""Exact-arithmetic laboratory for unit-distance graphs over Q and Q[sqrt(m)]."""

from .coloring import dyadic_rep, parity_color, verify_coloring
from .errors import BudgetExceeded, FieldMismatchError, ParseError, TilingError, UnsupportedError
from .field import Point, QuadElem, add, mul, parse_scalar, reduce, sq_distance
from .graph import UDGraph, build_graph, components, local_neighbors, translate_graph
from .solver import Certificate, exact_chromatic, fixture, greedy_dsatur
from .tiling import estimate_density, find_mono_unit_edge, parse_tiling, point_color
from .unitvectors import approx_direction, enum_unit_vectors, pythagorean_triples

__all__ = [
    "BudgetExceeded",
    "Certificate",
    "FieldMismatchError",
    "ParseError",
    "Point",
    "QuadElem",
    "TilingError",
    "UDGraph",
    "UnsupportedError",
    "add",
    "approx_direction",
    "build_graph",
    "components",
    "dyadic_rep",
    "enum_unit_vectors",
    "estimate_density",
    "exact_chromatic",
    "find_mono_unit_edge",
    "fixture",
    "greedy_dsatur",
    "local_neighbors",
    "mul",
    "parity_color",
    "parse_scalar",
    "parse_tiling",
    "point_color",
    "pythagorean_triples",
    "reduce",
    "sq_distance",
    "translate_graph",
    "verify_coloring",
]
