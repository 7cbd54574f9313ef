import itertools

import numpy as np
import pytest

from gqlab.algebra.groups import SubgroupSet
from gqlab.constructions import symplectic_quadrangle, w3_kantor_family
from gqlab.errors import InvalidPoint, NoKantorFamily, NotSTGQ
from gqlab.geometry import triad_centers
from gqlab.search import search_elation_groups
from gqlab.stgq import (
    find_ideal_subgq,
    gamma_phi,
    generic_conditions,
    is_stgq,
    kantor_family_from_action,
    mstgq_check,
    property_C,
    property_report,
    property_star,
    triple_from_family,
)
from gqlab.symmetry import StgqTriple, geometry_isomorphic, stabilizer
from gqlab.constructions import KantorFamily

TRIPLES = ["w2_triple", "w3_triple", "h34_triple"]


@pytest.mark.parametrize("name", TRIPLES)
def test_is_stgq_certificates_agree(name, request):
    T = request.getfixturevalue(name)
    rep = is_stgq(T)
    assert rep.is_egq and rep.is_stgq and rep.certificates_agree
    assert rep.symmetry_order == T.order.t == rep.symmetries_in_E


def test_not_an_elation_action(W2):
    act = stabilizer(W2, points=[0]).action()
    T = StgqTriple(W2, 0, act)
    rep = is_stgq(T)
    assert not rep.is_egq and rep.is_stgq is None
    with pytest.raises(NotSTGQ):
        property_C(T)
    with pytest.raises(NotSTGQ):
        property_star(T)
    with pytest.raises(NotSTGQ):
        gamma_phi(T)


def test_non_regular_egq_is_not_stgq():
    # C3^3 carries a (3,3) family whose coset geometry is the dual of W(3): EGQ but not STGQ
    from gqlab.catalog import catalog_groups
    from gqlab.search import search_kantor_families

    G = catalog_groups(27)[4]
    fam = search_kantor_families(G, 3, 3, modulo_aut=True).families[0]
    T = triple_from_family(fam)
    rep = is_stgq(T)
    assert rep.is_egq and rep.is_stgq is False and rep.certificates_agree
    assert rep.symmetry_order == 1 and not rep.regular_point


@pytest.mark.parametrize("name", TRIPLES)
def test_property_C(name, request):
    T = request.getfixturevalue(name)
    assert property_C(T).ok


def test_property_C_both_h34_classes(H34):
    res = search_elation_groups(H34, 0)
    for act in res.groups:
        assert property_C(StgqTriple(H34, 0, act)).ok


@pytest.mark.parametrize("name", TRIPLES)
def test_property_star_per_line(name, request):
    T = request.getfixturevalue(name)
    rep = property_star(T)
    assert rep.ok and rep.passing == T.order.t + 1
    for L in rep.lines:
        # independence of the chosen point, recomputed directly
        stabs = {frozenset(np.nonzero(T.action.point_perms[:, y] == y)[0].tolist())
                 for y in T.geometry.lines[L.line] if y != T.x}
        assert len(stabs) == 1 and stabs.pop() == frozenset(L.stabilizer)


def test_star_passing_count_zero_one_all(H34):
    res = search_elation_groups(H34, 0)
    for act in res.groups:
        rep = property_star(StgqTriple(H34, 0, act))
        assert rep.passing in (0, 1, 3)


def _m3_bruteforce(geo, x):
    on_x = set(geo.point_lines[x])
    L = geo.n_lines
    for V in on_x:
        for W, X in itertools.combinations(range(L), 2):
            trip = (V, W, X)
            if len(set(trip)) < 3:
                continue
            try:
                c = triad_centers(geo, trip, "lines")
            except Exception:
                continue
            if len(c) == 1 and next(iter(c)) in on_x:
                return False
    return True


@pytest.mark.parametrize("name", TRIPLES)
def test_mstgq_check(name, request):
    T = request.getfixturevalue(name)
    rep = mstgq_check(T)
    assert rep.M1
    assert rep.M3 == _m3_bruteforce(T.geometry, T.x)


def test_gamma_phi_degrees(w3_triple, h34_triple, w2_triple):
    for T in (w2_triple, w3_triple, h34_triple):
        q = gamma_phi(T)
        assert q.degree_ok
        # every Gamma(Phi) line lies inside one line through x
        inv = {}
        for p, V in q.line_orbit.items():
            inv.setdefault(V, set()).add(p)
        for pts in inv.values():
            lines = {L for L in T.geometry.point_lines[T.x] if pts <= set(T.geometry.lines[L])}
            assert len(lines) == 1


def test_gamma_phi_w3_singletons(w3_triple):
    q = gamma_phi(w3_triple)
    # Phi = Z = S fixes x^perp pointwise, so every line orbit is a single point
    assert len(q.phi) == 3
    assert len(q.line_orbit) == len(set(q.line_orbit.values()))


def test_gamma_phi_trivial_phi(w3_triple):
    T = w3_triple
    triv = SubgroupSet(T.group, frozenset({0}))
    q = gamma_phi(T, phi=triv)
    assert q.geometry.n_points == len(T.geometry.opposite_points(T.x))
    assert len(q.line_orbit) == (T.order.t + 1) * T.order.s


def test_generic_conditions(w3_triple, h34_triple):
    for T in (w3_triple, h34_triple):
        rep = generic_conditions(T)
        assert rep.b_checked > 0
        assert rep.as_dict()["only_extension_hypothesis"] == "unchecked hypothesis"
    empty = KantorFamily(w3_triple.group, [], None)
    with pytest.raises(NoKantorFamily):
        generic_conditions(w3_triple, empty)


def test_kantor_family_from_action(w3_triple):
    fam = kantor_family_from_action(w3_triple)
    assert (fam.s, fam.t) == (3, 3)
    with pytest.raises(InvalidPoint):
        kantor_family_from_action(w3_triple, y=w3_triple.geometry.lines[w3_triple.geometry.point_lines[w3_triple.x][0]][0])


def test_ideal_subgq_h34(h34_triple):
    subs = find_ideal_subgq(h34_triple)
    assert subs
    W2 = symplectic_quadrangle(2)
    for s in subs:
        assert tuple(s.order) == (2, 2) and s.certificate
        assert geometry_isomorphic(s.coset.geometry, W2) is not None


def test_ideal_subgq_w3_none(w3_triple):
    assert find_ideal_subgq(w3_triple) == []


def test_ideal_subgq_wrong_point(h34_triple):
    with pytest.raises(InvalidPoint):
        find_ideal_subgq(h34_triple, x=0)


def test_property_report_text(h34_triple):
    rep = property_report(h34_triple)
    text = rep.text()
    keys = [ln.split(":")[0] for ln in text.splitlines()]
    assert keys == sorted(keys)
    assert rep.ok
