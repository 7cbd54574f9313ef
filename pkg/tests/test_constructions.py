import numpy as np
import pytest

from gqlab.algebra.field import field_create
from gqlab.algebra.groups import SubgroupSet, cyclic
from gqlab.constructions import (
    QClan,
    coset_geometry,
    heisenberg,
    hermitian_quadrangle,
    linear_qclan,
    make_kantor_family,
    qclan_kantor_family,
    qclan_violations,
    symplectic_quadrangle,
    validate_kantor_family,
    w3_kantor_family,
)
from gqlab.errors import ConstructionInvalid, NotPrimePower, SizeBudgetExceeded
from gqlab.geometry import verify_gq
from gqlab.symmetry import geometry_isomorphic, is_elation_action


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_w3_family_gives_w3(q):
    fam = w3_kantor_family(q)
    assert (fam.s, fam.t) == (q, q)
    cg = coset_geometry(fam)
    assert tuple(verify_gq(cg.geometry)) == (q, q)
    if q <= 3:
        assert geometry_isomorphic(cg.geometry, symplectic_quadrangle(q)) is not None


def test_w3_family_errors():
    with pytest.raises(NotPrimePower):
        w3_kantor_family(6)
    with pytest.raises(SizeBudgetExceeded):
        w3_kantor_family(7)


def test_literal_odd_formula_is_not_a_family():
    # A(u) = {(a, u a^2, u a)} is not closed under multiplication for odd q
    H = heisenberg(1, 3)
    from gqlab.constructions import heisenberg_element

    F = field_create(3)
    els = frozenset(heisenberg_element(H, [a], F.mul(1, F.mul(a, a)), [a]) for a in range(3))
    members = [(SubgroupSet(H, els), SubgroupSet(H, els))] * 4
    assert any(v.clause == "subgroup" for v in validate_kantor_family(H, members).violations)


@pytest.mark.parametrize("q,order", [(2, (4, 2)), (3, (9, 3))])
@pytest.mark.parametrize("side", ["right", "left"])
def test_qclan_coset_geometry(q, order, side):
    fam = qclan_kantor_family(linear_qclan(q))
    assert fam.group.n == q**5
    cg = coset_geometry(fam, side)
    assert tuple(verify_gq(cg.geometry)) == order
    assert cg.infinity == cg.geometry.n_points - 1
    assert is_elation_action(cg.geometry, cg.infinity, cg.action).ok


def test_qclan_q2_is_hermitian():
    cg = coset_geometry(qclan_kantor_family(linear_qclan(2)))
    assert geometry_isomorphic(cg.geometry, hermitian_quadrangle(2)) is not None


def test_qclan_anisotropy():
    F = field_create(3)
    assert not qclan_violations(linear_qclan(3))
    bad = QClan(F, [np.zeros((2, 2), dtype=np.int64)] * 3)
    assert qclan_violations(bad)
    with pytest.raises(ConstructionInvalid):
        qclan_kantor_family(bad)


def test_validation_reports_each_clause():
    fam = w3_kantor_family(3)
    G = fam.group
    good = list(fam.members)
    assert validate_kantor_family(G, good).ok
    # too few members
    assert validate_kantor_family(G, good[:1]).violations[0].clause == "index set"
    # repeat a member: pairwise/triple condition breaks
    rep = validate_kantor_family(G, [good[0], good[0], good[1], good[2]])
    assert {v.clause for v in rep.violations} & {"triple", "star"}
    # swap a star: containment breaks
    swapped = [(good[0][0], good[1][1])] + good[1:]
    assert "containment" in {v.clause for v in validate_kantor_family(G, swapped).violations}
    # a non-subgroup
    junk = SubgroupSet(G, frozenset({0, 1, 2}) if G.mul[1, 1] not in (0, 1, 2) else frozenset({0, 1, 5}))
    broken = [(junk, good[0][1])] + good[1:]
    clauses = {v.clause for v in validate_kantor_family(G, broken).violations}
    assert "subgroup" in clauses
    with pytest.raises(ConstructionInvalid):
        make_kantor_family(G, broken)


def test_cardinality_clause():
    G = cyclic(8)
    a = SubgroupSet(G, frozenset({0, 4}))
    b = SubgroupSet(G, frozenset({0, 2, 4, 6}))
    rep = validate_kantor_family(G, [(a, b), (a, b)])
    assert "cardinality" in {v.clause for v in rep.violations}


def test_coset_geometry_labels(w3_triple):
    geo = w3_triple.geometry
    assert geo.n_points == 27 + 4 * 3 + 1  # elements, (q+1) q star cosets, (inf)
    assert geo.n_lines == 4 * 9 + 4
    assert set(geo.point_lines[w3_triple.x]) == set(range(36, 40))
