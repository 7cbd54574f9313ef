"""Automorphisms, canonical forms, elations, symmetries and root groups."""

from .action import GeometryAction, action_from_vertex_perms
from .automorphisms import (
    AutomorphismGroup,
    CanonicalForm,
    GeometryIsomorphism,
    automorphism_group,
    canonical_form,
    canonical_hash,
    colored_automorphisms,
    geometry_automorphisms,
    geometry_isomorphic,
    is_isomorphism,
    line_fixing_kernel,
    random_relabeling,
    stabilizer,
)
from .elation import (
    Report,
    StgqTriple,
    Symmetries,
    TripleComparison,
    TripleMorphism,
    is_elation_action,
    is_moufang_iroot,
    root_group,
    symmetries_about,
    triple_isomorphic,
)

__all__ = [
    "AutomorphismGroup",
    "CanonicalForm",
    "GeometryAction",
    "GeometryIsomorphism",
    "Report",
    "StgqTriple",
    "Symmetries",
    "TripleComparison",
    "TripleMorphism",
    "action_from_vertex_perms",
    "automorphism_group",
    "canonical_form",
    "canonical_hash",
    "colored_automorphisms",
    "geometry_automorphisms",
    "geometry_isomorphic",
    "is_elation_action",
    "is_isomorphism",
    "is_moufang_iroot",
    "line_fixing_kernel",
    "random_relabeling",
    "root_group",
    "stabilizer",
    "symmetries_about",
    "triple_isomorphic",
]
