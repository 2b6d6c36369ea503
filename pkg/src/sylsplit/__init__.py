"""Finite-group engine for splitting the center of a Sylow subgroup."""

from .perm import Permutation, format_cycles, parse_cycles
from .group import (
    DerivedSeries,
    PermGroup,
    QuotientMap,
    centralizer,
    conj_orbit,
    conjugacy_classes,
    derived_series,
    derived_subgroup,
    find_conjugator,
    group_from_elements,
    intersection,
    left_transversal,
    normal_closure,
    normalizer,
    quotient,
    subgroup_centralizer,
)

__all__ = [
    "Permutation",
    "parse_cycles",
    "format_cycles",
    "PermGroup",
    "QuotientMap",
    "DerivedSeries",
    "centralizer",
    "subgroup_centralizer",
    "normalizer",
    "find_conjugator",
    "conj_orbit",
    "conjugacy_classes",
    "left_transversal",
    "quotient",
    "intersection",
    "normal_closure",
    "derived_subgroup",
    "derived_series",
    "group_from_elements",
]

__version__ = "0.1.0"
