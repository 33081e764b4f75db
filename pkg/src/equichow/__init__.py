"""Equivariant and ordinary rational Chow rings of Hilbert schemes of points on toric surfaces."""
from .charpoly import Character, SPoly, format_poly, parse_poly
from .chowring import (
    betti_bb,
    bott_pairing,
    chow_structure_constants,
    component_generators,
    congruence_system,
    equivariant_graded_basis,
    gottsche_poincare,
    membership,
)
from .fixedloci import components, fixed_point_data, relevant_subtori
from .staircases import MultiStaircase, enumerate_fixed_points
from .toricfan import F1, P2, Fan, P1xP1, Subtorus, build_fan, load_fan

__version__ = "0.1.0"


def clear_caches() -> None:
    """Drop all memoized per-(fan, d) data; used for cold timings."""
    from . import chowring, fixedloci, hilb3p2, staircases
    for fn in (fixedloci.fixed_point_data, fixedloci.relevant_subtori, fixedloci.components,
               chowring._generators_cached, chowring._congruences_cached, staircases.partitions,
               hilb3p2.point_index, hilb3p2.permutation_on_points, hilb3p2.point_names):
        fn.cache_clear()
