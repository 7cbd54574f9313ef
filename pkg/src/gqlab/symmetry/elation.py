"""Elation actions, symmetries about a point, root groups and isomorphism of triples."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ..algebra.groups import GroupTable, SubgroupSet
from ..algebra.iso import groups_isomorphic
from ..errors import InvalidPoint
from ..geometry import Apartment, IncidenceGeometry, Root, apartments_through, check_root
from .action import GeometryAction
from .automorphisms import GeometryIsomorphism, geometry_isomorphic, stabilizer


@dataclass
class Report:
    ok: bool
    checks: dict = field(default_factory=dict)
    witness: object = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def _check_point(geo: IncidenceGeometry, x: int):
    if not (0 <= x < geo.n_points):
        raise InvalidPoint(f"point {x} out of range")


def is_elation_action(geo: IncidenceGeometry, x: int, action: GeometryAction, validate: bool = True) -> Report:
    """Every element fixes each line on x, and the points opposite x form one regular orbit."""
    _check_point(geo, x)
    if validate:
        action.validate(geo)
    Pp, Lp = action.point_perms, action.line_perms
    lines_x = list(geo.point_lines[x])
    fix_x = Pp[:, x] == x
    fix_lines = (Lp[:, lines_x] == np.array(lines_x)).all(axis=1)
    checks = {"fixes_x": bool(fix_x.all()), "fixes_lines_on_x": bool(fix_lines.all())}
    if not fix_lines.all():
        g = int(np.nonzero(~fix_lines)[0][0])
        return Report(False, checks, witness=("moves a line on x", g), reason="not linewise fixing x")
    opp = geo.opposite_points(x)
    n = action.group.n
    checks["order_equals_opposite_count"] = n == len(opp)
    if not len(opp):
        return Report(False, checks, reason="no opposite points")
    orbit = Pp[:, opp[0]]
    distinct = len(np.unique(orbit))
    checks["transitive"] = distinct == len(opp) and bool(np.isin(orbit, opp).all())
    checks["regular"] = checks["transitive"] and distinct == n
    ok = all(checks.values())
    witness = None
    if not checks["regular"]:
        witness = ("orbit of opposite point", int(opp[0]), distinct, n)
    return Report(ok, checks, witness, "" if ok else "not sharply transitive on opposite points")


@dataclass
class Symmetries:
    """The symmetry group about x: as its own action, and inside ``within`` when one was given."""

    action: GeometryAction
    subgroup: SubgroupSet | None = None

    @property
    def order(self) -> int:
        return self.action.group.n


def _symmetry_mask(geo: IncidenceGeometry, x: int, action: GeometryAction) -> np.ndarray:
    perp_x = np.nonzero(geo.collinearity[x])[0]
    return (action.point_perms[:, perp_x] == perp_x).all(axis=1)


def symmetries_about(geo: IncidenceGeometry, x: int, within: GeometryAction | None = None) -> Symmetries:
    """Automorphisms fixing every point collinear with x (inside ``within`` when given)."""
    _check_point(geo, x)
    if within is not None:
        mask = _symmetry_mask(geo, x, within)
        S = SubgroupSet(within.group, frozenset(np.nonzero(mask)[0].tolist()))
        return Symmetries(within.restrict(S), S)
    perp_x = np.nonzero(geo.collinearity[x])[0].tolist()
    return Symmetries(stabilizer(geo, points=perp_x).action())


# -- root groups ------------------------------------------------------------------------------


def _root_fixed(geo: IncidenceGeometry, r: Root) -> tuple[list[int], list[int]]:
    """Points and lines that A(root) must fix: lines on interior points, points on interior lines."""
    pts, lns = set(), set()
    for p in r.interior_points():
        lns.update(geo.point_lines[p])
    for L in r.interior_lines():
        pts.update(geo.lines[L])
    return sorted(pts), sorted(lns)


def root_group(geo: IncidenceGeometry, r: Root, within: GeometryAction | None = None) -> GeometryAction:
    """A(root): the automorphisms fixing the interior elementwise-with-neighbours."""
    check_root(geo, r)
    pts, lns = _root_fixed(geo, r)
    if within is None:
        return stabilizer(geo, points=pts, lines=lns).action()
    mask = (within.point_perms[:, pts] == pts).all(axis=1) & (within.line_perms[:, lns] == lns).all(axis=1)
    return within.restrict(SubgroupSet(within.group, frozenset(np.nonzero(mask)[0].tolist())))


def _apartment_key(a: Apartment) -> tuple:
    return (frozenset(a.points), frozenset(a.lines))


def is_moufang_iroot(geo: IncidenceGeometry, r: Root, candidate: GeometryAction | None = None) -> Report:
    """Transitivity (and sharpness) of A(root) on the apartments through the root.

    Without a candidate, A(root) is taken from the full automorphism group.  A
    candidate must lie inside A(root); otherwise it is rejected with the
    offending element as witness.
    """
    check_root(geo, r)
    pts, lns = _root_fixed(geo, r)
    if candidate is None:
        A = root_group(geo, r)
    else:
        A = candidate
        bad = ~((A.point_perms[:, pts] == pts).all(axis=1) & (A.line_perms[:, lns] == lns).all(axis=1))
        if bad.any():
            g = int(np.nonzero(bad)[0][0])
            return Report(False, {"contained": False}, witness=("moves an element incident with the interior", g),
                          reason="candidate is not inside A(root)")
    aps = apartments_through(geo, r)
    keys = [_apartment_key(a) for a in aps]
    if not aps:
        return Report(False, {"apartments": 0}, reason="no apartments through the root")
    a0 = aps[0]
    images = set()
    for g in range(A.group.n):
        img = Apartment(tuple(int(A.point_perms[g, p]) for p in a0.points), tuple(int(A.line_perms[g, L]) for L in a0.lines))
        images.add(_apartment_key(img))
    transitive = images == set(keys)
    sharp = transitive and A.group.n == len(aps)
    checks = {"contained": True, "apartments": len(aps), "group_order": A.group.n, "transitive": transitive, "sharp": sharp}
    return Report(transitive, checks, None if transitive else ("unreached apartments", len(set(keys) - images)))


# -- triples ---------------------------------------------------------------------------------------


@dataclass
class StgqTriple:
    """(geometry, base point x, action of E)."""

    geometry: IncidenceGeometry
    x: int
    action: GeometryAction
    name: str = ""

    def __post_init__(self):
        _check_point(self.geometry, self.x)

    @property
    def group(self) -> GroupTable:
        return self.action.group

    @cached_property
    def elation(self) -> Report:
        return is_elation_action(self.geometry, self.x, self.action)

    @cached_property
    def symmetries(self) -> SubgroupSet:
        """The symmetries about x that lie in E."""
        return symmetries_about(self.geometry, self.x, within=self.action).subgroup

    @cached_property
    def order(self):
        from ..geometry import order_of

        return order_of(self.geometry)


@dataclass
class TripleMorphism:
    isomorphism: GeometryIsomorphism
    group_map: np.ndarray | None = None  # element of E -> element of E'


@dataclass
class TripleComparison:
    morphism: TripleMorphism | None
    reason: str = ""

    def __bool__(self):
        return self.morphism is not None


def _perm_set(V: np.ndarray) -> set:
    return {row.tobytes() for row in V.astype(np.int64)}


def triple_isomorphic(T1: StgqTriple, T2: StgqTriple, stabilizer_limit: int = 200_000) -> TripleComparison:
    """A geometry isomorphism sending x to x' and conjugating E onto E', or the reason none exists.

    One isomorphism g0 with g0(x) = x' comes from marked canonical forms; every
    other one is a * g0 with a in the stabiliser of x', which is scanned for an
    element conjugating g0 E g0^-1 onto E'.
    """
    g1, g2 = T1.geometry, T2.geometry
    if T1.group.n != T2.group.n:
        return TripleComparison(None, "groups have different orders")
    if groups_isomorphic(T1.group, T2.group) is None:
        return TripleComparison(None, "groups are not isomorphic")
    iso = geometry_isomorphic(g1, g2, ((T1.x,), ()), ((T2.x,), ()))
    if iso is None:
        return TripleComparison(None, "no geometry isomorphism maps x to x'")
    g0 = iso.vertex_map()
    g0inv = np.argsort(g0)
    V1, V2 = T1.action.vertex_perms(), T2.action.vertex_perms()
    target = _perm_set(V2)
    # E transported to the second geometry: v -> g0(e(g0^-1 v))
    moved = g0[V1[:, g0inv]]
    from ..algebra.groups import generating_set

    gens = moved[generating_set(T1.group)]
    stab = stabilizer(g2, points=[T2.x])
    elems = stab.elements(limit=stabilizer_limit)
    for a in elems:
        ainv = np.argsort(a)
        conj = a[gens[:, ainv]]
        if all(row.tobytes() in target for row in conj.astype(np.int64)):
            full = a[g0]
            P = g1.n_points
            gi = GeometryIsomorphism(full[:P], full[P:] - P)
            image = a[moved[:, ainv]]
            index = {row.tobytes(): i for i, row in enumerate(V2.astype(np.int64))}
            gmap = np.array([index[row.tobytes()] for row in image.astype(np.int64)])
            return TripleComparison(TripleMorphism(gi, gmap))
    return TripleComparison(None, "E and E' are not conjugate under isomorphisms fixing the base point")
