"""Finite fields, group tables, commutator forms and group isomorphism."""

from .field import FiniteField, field_arith, field_create, prime_power
from .forms import BilinearForm, commutator_form, verify_commutator_form
from .groups import (
    GroupTable,
    SubgroupSet,
    center,
    cyclic,
    derived_subgroup,
    direct_product,
    frattini,
    group_from_permutations,
    group_from_table,
    is_elementary_abelian,
    is_special_pgroup,
    maximal_subgroups,
    nilpotency_class_two,
    normality_witness,
    quotient_group,
    semidirect_product,
    subgroup_generated,
    sylow_subgroup,
)
from .iso import automorphisms, groups_isomorphic

__all__ = [
    "BilinearForm",
    "FiniteField",
    "GroupTable",
    "SubgroupSet",
    "automorphisms",
    "center",
    "commutator_form",
    "cyclic",
    "derived_subgroup",
    "direct_product",
    "field_arith",
    "field_create",
    "frattini",
    "group_from_permutations",
    "group_from_table",
    "groups_isomorphic",
    "is_elementary_abelian",
    "is_special_pgroup",
    "maximal_subgroups",
    "nilpotency_class_two",
    "normality_witness",
    "prime_power",
    "quotient_group",
    "semidirect_product",
    "subgroup_generated",
    "sylow_subgroup",
    "verify_commutator_form",
]
