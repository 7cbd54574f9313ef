import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gqlab.constructions import hermitian_quadrangle, symplectic_quadrangle
from gqlab.errors import InvalidAction, InvalidPoint
from gqlab.geometry import dual, grid, roots_on
from gqlab.symmetry import (
    GeometryAction,
    automorphism_group,
    canonical_form,
    canonical_hash,
    geometry_isomorphic,
    is_elation_action,
    is_isomorphism,
    is_moufang_iroot,
    line_fixing_kernel,
    random_relabeling,
    root_group,
    stabilizer,
    symmetries_about,
    triple_isomorphic,
)
from gqlab.symmetry.elation import StgqTriple

BASES = {
    "W2": lambda: symplectic_quadrangle(2),
    "W3": lambda: symplectic_quadrangle(3),
    "H34": lambda: hermitian_quadrangle(2),
    "grid": lambda: grid(3, 3),
}


@pytest.mark.parametrize("name,order,geom_order,self_dual", [
    ("W2", 1440, 720, True),
    ("W3", 51840, 51840, False),
    ("H34", 51840, 51840, False),
    ("grid", 72, 72, False),
])
def test_automorphism_orders(name, order, geom_order, self_dual):
    aut = automorphism_group(BASES[name]())
    assert aut.order == order
    assert aut.geometry_order == geom_order
    assert aut.has_dualities == self_dual
    assert aut.verified


def test_w4_order():
    # |PSp(4,4)| * |Aut GF(4)| = 979200 * 2
    assert automorphism_group(symplectic_quadrangle(4)).geometry_order == 1958400


def test_duality_swaps_sides():
    aut = automorphism_group(symplectic_quadrangle(2))
    assert aut.is_duality(aut.duality)
    assert aut.graph.is_automorphism(aut.duality)


def test_action_validates():
    geo = symplectic_quadrangle(2)
    act = automorphism_group(geo).action()
    assert act.group.n == 720
    act.validate(geo)


def test_bad_action_rejected():
    geo = symplectic_quadrangle(2)
    act = stabilizer(geo, points=[0]).action()
    bad = GeometryAction(act.group, act.point_perms.copy(), act.line_perms.copy())
    bad.point_perms[1] = bad.point_perms[1][::-1]
    with pytest.raises(InvalidAction):
        bad.validate(geo)
    assert bad.problems(geo)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["W2", "W3", "H34"]), st.integers(0, 2**32 - 1))
def test_hash_invariant_under_relabeling(name, seed):
    base = BASES[name]()
    g, _ = random_relabeling(base, np.random.default_rng(seed))
    assert canonical_hash(g) == canonical_hash(base)
    iso = geometry_isomorphic(base, g)
    assert iso is not None and is_isomorphism(base, g, iso)


def test_hashes_separate_non_isomorphic():
    hashes = {canonical_hash(BASES[n]()) for n in ("W2", "W3", "H34", "grid")}
    assert len(hashes) == 4
    # W(3) and its dual Q(4,3) have the same size but are not isomorphic
    W3 = symplectic_quadrangle(3)
    assert canonical_hash(W3) != canonical_hash(dual(W3))
    assert geometry_isomorphic(W3, dual(W3)) is None
    # W(2) is self-dual
    W2 = symplectic_quadrangle(2)
    assert canonical_hash(W2) == canonical_hash(dual(W2))


def test_marked_canonical_form():
    W2 = symplectic_quadrangle(2)
    a = canonical_form(W2, marked_points=[0])
    b = canonical_form(W2, marked_points=[5])
    assert a.text == b.text  # point-transitive
    iso = geometry_isomorphic(W2, W2, ((0,), ()), ((5,), ()))
    assert iso.point_map[0] == 5


def test_elation_action_of_coset_model(w3_triple, h34_triple):
    for T in (w3_triple, h34_triple):
        rep = is_elation_action(T.geometry, T.x, T.action)
        assert rep.ok and rep.checks["regular"]


def test_non_elation_rejected(W2):
    act = stabilizer(W2, points=[0]).action()
    rep = is_elation_action(W2, 0, act)
    assert not rep.ok and rep.witness is not None
    with pytest.raises(InvalidPoint):
        is_elation_action(W2, 99, act)


def test_symmetries(w3_triple, h34_triple):
    for T in (w3_triple, h34_triple):
        t = T.order.t
        assert len(T.symmetries) == t
        assert symmetries_about(T.geometry, T.x).order == t


def test_kernel_orders(H34, W3):
    assert line_fixing_kernel(H34, 0).group.n == 192
    assert line_fixing_kernel(W3, 0).group.n == 54


@pytest.mark.parametrize("fixture", ["w2_triple", "h34_triple"])
def test_dual_roots_at_x_are_moufang(fixture, request):
    T = request.getfixturevalue(fixture)
    t = T.order.t
    for r in roots_on(T.geometry, T.x, "dual_root"):
        rep = is_moufang_iroot(T.geometry, r)
        assert rep.ok and rep.checks["sharp"] and rep.checks["apartments"] == t
        # the root group is exactly the symmetry group about x
        A = root_group(T.geometry, r)
        assert A.group.n == t


def test_moufang_candidate_outside_root_group(w3_triple):
    T = w3_triple
    r = next(iter(roots_on(T.geometry, T.x, "dual_root")))
    rep = is_moufang_iroot(T.geometry, r, T.action)  # E is not inside A(root)
    assert not rep.ok and rep.checks["contained"] is False


def test_triple_isomorphic_with_itself_and_relabeled(h34_triple):
    T = h34_triple
    res = triple_isomorphic(T, T)
    assert res and res.morphism.group_map is not None
    g, iso = random_relabeling(T.geometry, np.random.default_rng(3))
    act = GeometryAction(T.group, iso.point_map[T.action.point_perms][:, np.argsort(iso.point_map)],
                         iso.line_map[T.action.line_perms][:, np.argsort(iso.line_map)])
    T2 = StgqTriple(g, int(iso.point_map[T.x]), act)
    T2.elation  # validates the transported action
    assert triple_isomorphic(T, T2)
