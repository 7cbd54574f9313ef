import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gqlab.algebra.groups import (
    cyclic,
    direct_product,
    frattini_by_maximal,
    group_from_permutations,
    group_from_table,
    is_elementary_abelian,
    maximal_subgroups,
    nilpotency_class_two,
    normality_witness,
    quotient_group,
    subgroup_generated,
    sylow_subgroup,
)
from gqlab.algebra.iso import automorphisms, groups_isomorphic, invariant_mismatch
from gqlab.catalog import catalog_groups
from gqlab.constructions import heisenberg
from gqlab.errors import NoIdentity, NoInverse, NotAssociative, NotNormal
from gqlab.search import enumerate_subgroups

import oracles


def test_identity_moved_to_zero():
    # Z/3 written with identity at index 2
    table = [[1, 2, 0], [2, 0, 1], [0, 1, 2]]
    G = group_from_table(table)
    assert (G.mul[0] == np.arange(3)).all()


def test_bad_tables():
    with pytest.raises(NoIdentity):
        group_from_table([[1, 1], [1, 1]])
    with pytest.raises(NoInverse):
        group_from_table([[0, 1, 2], [1, 1, 1], [2, 1, 0]])
    # a commutative loop of order 5 that is not associative
    loop = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(NotAssociative):
        group_from_table(loop)


def test_permutation_product_convention():
    a = np.array([1, 2, 0])  # 3-cycle
    b = np.array([1, 0, 2])  # transposition
    G, perms = group_from_permutations([a, b])
    assert G.n == 6
    for x in range(6):
        for y in range(6):
            assert (perms[G.mul[x, y]] == perms[y][perms[x]]).all()


def test_klein_subgroups_of_order_2():
    V = direct_product(cyclic(2), cyclic(2))
    assert len(enumerate_subgroups(V, 2)) == 3


def test_heisenberg_order3_subgroups():
    assert len(enumerate_subgroups(heisenberg(1, 3), 3)) == 13


def test_subgroup_order_not_dividing():
    assert enumerate_subgroups(heisenberg(1, 3), 5) == []


@pytest.mark.parametrize("n", [8, 27])
def test_subgroup_lattice_matches_oracle(n):
    for G in catalog_groups(n):
        mine = {H.members for H in enumerate_subgroups(G)}
        assert mine == oracles.all_subgroups(G.mul.tolist())


@pytest.mark.parametrize("n", [8, 16, 27])
def test_maximal_subgroups_match_definition(n):
    for G in catalog_groups(n):
        mine = {M.members for M in maximal_subgroups(G)}
        assert mine == oracles.maximal_by_definition(G.mul.tolist()), G.name
        # Frattini from the p-group shortcut equals the intersection of maximal subgroups
        assert G.frattini.members == frattini_by_maximal(G).members


def test_frattini_non_pgroup():
    S3, _ = group_from_permutations([np.array([1, 2, 0]), np.array([1, 0, 2])])
    assert len(S3.frattini) == 1
    C6 = cyclic(6)
    assert len(C6.frattini) == 1
    C12 = cyclic(12)
    assert len(C12.frattini) == 2


def test_up_to_conjugacy():
    S3, _ = group_from_permutations([np.array([1, 2, 0]), np.array([1, 0, 2])])
    assert len(enumerate_subgroups(S3, 2)) == 3
    assert len(enumerate_subgroups(S3, 2, up_to_conjugacy=True)) == 1


def test_normality_and_quotient():
    S3, _ = group_from_permutations([np.array([1, 2, 0]), np.array([1, 0, 2])])
    A3 = subgroup_generated(S3, [1])
    assert len(A3) == 3 and normality_witness(S3, A3) is None
    Q = quotient_group(S3, A3)
    assert Q.group.n == 2
    T = next(H for H in enumerate_subgroups(S3, 2))
    with pytest.raises(NotNormal):
        quotient_group(S3, T)


def test_sylow():
    G = catalog_groups(48)[0]
    assert len(sylow_subgroup(G, 2)) == 16
    assert len(sylow_subgroup(G, 3)) == 3


def test_class_two():
    assert nilpotency_class_two(heisenberg(1, 3))
    assert not nilpotency_class_two(cyclic(9))


def test_elementary_abelian():
    assert is_elementary_abelian(direct_product(cyclic(3), cyclic(3)))
    assert not is_elementary_abelian(cyclic(9))


def test_automorphism_counts():
    # |Aut(C2^3)| = |GL(3,2)| = 168 and |Aut(H_1(3))| = 432
    c2cube = next(G for G in catalog_groups(8) if G.exponent == 2)
    assert len(automorphisms(c2cube)) == 168
    assert len(automorphisms(heisenberg(1, 3))) == 432


def _shuffled(G, perm):
    """Relabel G so that old element g becomes perm[g]; identity stays at 0."""
    inv = np.argsort(perm)
    table = perm[G.mul[inv[:, None], inv[None, :]]]
    return group_from_table(table)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 13), st.randoms(use_true_random=False))
def test_iso_invariant_under_relabeling(idx, rnd):
    G = catalog_groups(16)[idx]
    rest = list(range(1, G.n))
    rnd.shuffle(rest)
    perm = np.array([0] + rest)
    H = _shuffled(G, perm)
    phi = groups_isomorphic(G, H)
    assert phi is not None
    assert (phi[G.mul] == H.mul[phi[:, None], phi[None, :]]).all()


@pytest.mark.parametrize("n", [8, 16, 27])
def test_catalog_groups_pairwise_non_isomorphic(n):
    groups = catalog_groups(n)
    for i, G in enumerate(groups):
        for H in groups[i + 1 :]:
            assert invariant_mismatch(G, H) is not None or groups_isomorphic(G, H) is None


def test_iso_agrees_with_networkx_oracle():
    groups = catalog_groups(8)
    for G in groups:
        for H in groups:
            mine = groups_isomorphic(G, H) is not None
            assert mine == oracles.is_isomorphic_tables(G.mul.tolist(), H.mul.tolist())
