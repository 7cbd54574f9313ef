"""Properties of elation quadrangles with a regular elation point.

All functions take a :class:`~gqlab.symmetry.StgqTriple` (geometry, base
point x, action of E) and decide each property by exhaustive enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebra.field import prime_power
from .algebra.groups import (
    SubgroupSet,
    maximal_subgroups,
    normality_witness,
    subgroup_generated,
)
from .constructions import CosetGeometry, KantorFamily, coset_geometry, make_kantor_family, validate_kantor_family
from .errors import AxiomViolation, InvalidPoint, NoKantorFamily, NotSTGQ, NotUniformOrder
from .geometry import IncidenceGeometry, Order, is_regular_point, order_of, roots_on, verify_gq
from .search import enumerate_subgroups, pgroup_subgroups_of_order
from .symmetry import (
    GeometryAction,
    StgqTriple,
    geometry_isomorphic,
    is_moufang_iroot,
    root_group,
    symmetries_about,
)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "n/a"
    return str(v)


class _KeyValue:
    """Reports print as sorted ``key: value`` lines; ``as_dict`` has the same keys."""

    def as_dict(self) -> dict:
        raise NotImplementedError

    def text(self) -> str:
        d = self.as_dict()
        return "\n".join(f"{k}: {_fmt(d[k])}" for k in sorted(d)) + "\n"


# -- STGQ recognition ---------------------------------------------------------------------------


@dataclass
class StgqReport(_KeyValue):
    params: Order | None
    is_egq: bool
    is_stgq: bool | None = None
    symmetry_order: int | None = None
    symmetries_in_E: int | None = None
    regular_point: bool | None = None
    certificates_agree: bool | None = None
    witness: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        s, t = (self.params.s, self.params.t) if self.params else (None, None)
        ps, pt = (prime_power(s) if s else None), (prime_power(t) if t else None)
        return {
            "order": f"({s},{t})" if self.params else None,
            "s_prime_power": f"{ps[0]}^{ps[1]}" if ps else None,
            "t_prime_power": f"{pt[0]}^{pt[1]}" if pt else None,
            "is_EGQ": self.is_egq,
            "is_STGQ": self.is_stgq,
            "symmetry_group_order": self.symmetry_order,
            "symmetries_in_E": self.symmetries_in_E,
            "regular_point": self.regular_point,
            "certificates_agree": self.certificates_agree,
            "certified_by": "full symmetry group about x (|S| = t) and exhaustive span test (regularity)",
        }


def is_stgq(T: StgqTriple) -> StgqReport:
    """Elation check, then both STGQ certificates: |S| = t and regularity of x."""
    geo, x = T.geometry, T.x
    try:
        params = verify_gq(geo)
    except (AxiomViolation, NotUniformOrder) as exc:
        return StgqReport(None, False, witness={"gq": str(exc)})
    el = T.elation
    if not el.ok:
        return StgqReport(params, False, witness={"elation": el.witness or el.reason})
    sym = symmetries_about(geo, x)
    inside = T.symmetries
    reg, pair = is_regular_point(geo, x, params.t)
    by_count = sym.order == params.t
    rep = StgqReport(params, True, by_count and reg, sym.order, len(inside), reg, by_count == reg)
    if not reg:
        rep.witness["regularity"] = pair
    if not by_count:
        rep.witness["symmetries"] = sym.order
    return rep


def _require(T: StgqTriple) -> StgqReport:
    rep = is_stgq(T)
    if not rep.is_stgq:
        raise NotSTGQ(f"triple is not an STGQ (EGQ={rep.is_egq}, |S|={rep.symmetry_order}, regular={rep.regular_point})")
    return rep


# -- (C) and (*) ----------------------------------------------------------------------------------


@dataclass
class ClauseReport(_KeyValue):
    name: str
    ok: bool
    method: str
    witness: object = None

    def __bool__(self):
        return self.ok

    def as_dict(self) -> dict:
        return {self.name: self.ok, "method": self.method, "witness": self.witness}


def property_C(T: StgqTriple, require_stgq: bool = True) -> ClauseReport:
    """S <= Z(E), with S the symmetries about x inside E."""
    if require_stgq:
        _require(T)
    S, Z = T.symmetries, T.group.center
    outside = sorted(S.members - Z.members)
    return ClauseReport("property_C", not outside, "membership of every symmetry in the centre of E",
                        None if not outside else {"non_central_symmetry": outside[0]})


@dataclass
class LineStar:
    line: int
    stabilizers_equal: bool
    normal: bool
    stabilizer: tuple
    witness: object = None

    @property
    def ok(self) -> bool:
        return self.stabilizers_equal and self.normal


@dataclass
class StarReport(_KeyValue):
    ok: bool
    lines: list[LineStar]

    @property
    def passing(self) -> int:
        return sum(1 for L in self.lines if L.ok)

    def __bool__(self):
        return self.ok

    def as_dict(self) -> dict:
        return {
            "property_star": self.ok,
            "passing_lines": self.passing,
            "lines_on_x": len(self.lines),
            "passing_count_in_0_1_all": self.passing in (0, 1, len(self.lines)),
            "per_line": " ".join(f"{L.line}:{'pass' if L.ok else 'fail'}" for L in self.lines),
            "method": "point stabilisers computed for every point of every line on x",
        }


def point_stabilizer(T: StgqTriple, y: int) -> SubgroupSet:
    mask = T.action.point_perms[:, y] == y
    return SubgroupSet(T.group, frozenset(np.nonzero(mask)[0].tolist()))


def property_star(T: StgqTriple, require_stgq: bool = True) -> StarReport:
    """Per line Y on x: E_y is the same for all y != x on Y, and normal in E.

    ``require_stgq=False`` allows EGQ inputs (needed to test (*) => STGQ).
    """
    if require_stgq:
        _require(T)
    geo, x = T.geometry, T.x
    out = []
    for Y in geo.point_lines[x]:
        stabs = [point_stabilizer(T, y) for y in geo.lines[Y] if y != x]
        equal = all(s.members == stabs[0].members for s in stabs)
        w = normality_witness(T.group, stabs[0])
        witness = None
        if not equal:
            witness = {"different_stabilizers": [len(s) for s in stabs]}
        elif w is not None:
            witness = {"conjugation": w}
        out.append(LineStar(Y, equal, w is None, stabs[0].elements, witness))
    return StarReport(all(L.ok for L in out), out)


# -- (M1), (M3) ---------------------------------------------------------------------------------------


@dataclass
class MoufangReport(_KeyValue):
    M1: bool
    M3: bool
    iroots: int
    roots: int
    M1_witness: object = None
    M3_witness: object = None
    M3_triads_checked: int = 0

    def as_dict(self) -> dict:
        return {
            "M1": self.M1,
            "M3": self.M3,
            "M1_iroots": self.iroots,
            "M1_roots": self.roots,
            "M3_triads": self.M3_triads_checked,
            "M1_witness": self.M1_witness,
            "M3_witness": self.M3_witness,
            "M2": "not evaluated",
        }


def mstgq_check(T: StgqTriple) -> MoufangReport:
    """(M1) every i-root with x in its interior is Moufang with its root group inside E;
    (M3) no line on x is the unique centre of a line triad containing a line on x."""
    _require(T)
    geo, x = T.geometry, T.x
    E_perms = {row.tobytes() for row in T.action.vertex_perms().astype(np.int64)}
    roots = list(roots_on(geo, x, "dual_root")) + list(roots_on(geo, x, "root", "interior"))
    by_interior: dict = {}
    for r in roots:
        by_interior.setdefault((r.kind, r.interior), []).append(r)
    m1, m1w = True, None
    for (kind, interior), rs in by_interior.items():
        A = root_group(geo, rs[0])
        inside = all(row.tobytes() in E_perms for row in A.vertex_perms().astype(np.int64))
        for r in rs:
            rep = is_moufang_iroot(geo, r, A)
            if not (rep.ok and rep.checks.get("sharp") and inside):
                m1 = False
                m1w = m1w or {"root": r.elements, "kind": kind, "transitive": rep.ok,
                              "sharp": rep.checks.get("sharp"), "root_group_in_E": inside}
    # (M3)
    N = geo.incidence.astype(np.int64)
    Cl = (N.T @ N) > 0
    np.fill_diagonal(Cl, False)
    on_x = set(geo.point_lines[x])
    m3, m3w, checked = True, None, 0
    for V in sorted(on_x):
        free = np.nonzero(~Cl[V])[0]
        free = free[free != V]
        for W, X in itertools.combinations(free.tolist(), 2):
            if Cl[W, X]:
                continue
            checked += 1
            centers = np.nonzero(Cl[V] & Cl[W] & Cl[X])[0]
            if len(centers) == 1 and int(centers[0]) in on_x:
                m3 = False
                m3w = m3w or {"triad": (V, W, X), "center": int(centers[0])}
    return MoufangReport(m1, m3, len(by_interior), len(roots), m1w, m3w, checked)


# -- Kantor family of a triple ----------------------------------------------------------------------


def kantor_family_from_action(T: StgqTriple, y: int | None = None) -> KantorFamily:
    """E_i = stabiliser of the line through y meeting L_i, E_i* = stabiliser of that meeting point."""
    geo, x = T.geometry, T.x
    if not T.elation.ok:
        raise NoKantorFamily("action is not an elation action about x")
    opp = geo.opposite_points(x)
    y = int(opp[0]) if y is None else y
    if geo.collinear(x, y):
        raise InvalidPoint(f"point {y} is collinear with the base point")
    members = []
    for L in geo.point_lines[x]:
        z = geo.projection(y, L)
        M = geo.line_through(y, z)
        Ei = np.nonzero(T.action.line_perms[:, M] == M)[0]
        Es = np.nonzero(T.action.point_perms[:, z] == z)[0]
        members.append((SubgroupSet(T.group, frozenset(Ei.tolist())), SubgroupSet(T.group, frozenset(Es.tolist()))))
    return make_kantor_family(T.group, members, name="from-action")


# -- Gamma(Phi) -----------------------------------------------------------------------------------------


@dataclass
class QuotientGeometry(_KeyValue):
    triple: StgqTriple
    phi: SubgroupSet
    geometry: IncidenceGeometry
    point_orbit: dict  # opposite point of the GQ -> point of Gamma(Phi)
    line_orbit: dict  # point != x on a line through x -> line of Gamma(Phi)
    degrees: tuple

    @property
    def degree_ok(self) -> bool:
        t = self.triple.order.t
        return all(d == t + 1 for d in self.degrees)

    def as_dict(self) -> dict:
        return {
            "phi_order": len(self.phi),
            "points": self.geometry.n_points,
            "lines": self.geometry.n_lines,
            "point_degrees": " ".join(map(str, sorted(set(self.degrees)))),
            "degree_t_plus_1": self.degree_ok,
            "line_reading": "Phi-orbits on points != x of lines through x",
        }


def _orbits(perms: np.ndarray, elements: list[int]) -> list[tuple]:
    seen, out = set(), []
    for p in elements:
        if p in seen:
            continue
        orb = tuple(sorted(set(perms[:, p].tolist())))
        seen.update(orb)
        out.append(orb)
    return out


def gamma_phi(T: StgqTriple, phi: SubgroupSet | None = None) -> QuotientGeometry:
    """Quotient geometry of Phi(E)-orbits (Phi may be overridden for experiments)."""
    _require(T)
    geo, x = T.geometry, T.x
    phi = phi or T.group.frattini
    perms = T.action.point_perms[list(phi.elements)]
    near = sorted({p for L in geo.point_lines[x] for p in geo.lines[L]} - {x})
    opp = geo.opposite_points(x).tolist()
    line_orbs = _orbits(perms, near)
    point_orbs = _orbits(perms, opp)
    lo = {p: i for i, orb in enumerate(line_orbs) for p in orb}
    po = {p: i for i, orb in enumerate(point_orbs) for p in orb}
    C = geo.collinearity
    inc = [set() for _ in line_orbs]
    for u, orb in enumerate(point_orbs):
        for V, vorb in enumerate(line_orbs):
            if C[np.ix_(list(orb), list(vorb))].any():
                inc[V].add(u)
    qgeo = IncidenceGeometry(len(point_orbs), [sorted(s) for s in inc])
    degrees = tuple(len(ls) for ls in qgeo.point_lines)
    return QuotientGeometry(T, phi, qgeo, po, lo, degrees)


# -- generic conditions -------------------------------------------------------------------------------


@dataclass
class GenericReport(_KeyValue):
    a: bool
    a_dual: bool
    b: bool | None
    a_witness: object = None
    b_witness: object = None
    b_checked: int = 0

    def as_dict(self) -> dict:
        return {
            "condition_a": self.a,
            "condition_a_dual_reading": self.a_dual,
            "condition_b": self.b,
            "condition_b_triples": self.b_checked,
            "condition_b_H_read_as": "E",
            "a_witness": self.a_witness,
            "b_witness": self.b_witness,
            "only_extension_hypothesis": "unchecked hypothesis",
        }


def generic_conditions(T: StgqTriple, family: KantorFamily | None = None) -> GenericReport:
    """(a) distinct Gamma(Phi) lines share at most one point (dual reading also reported);
    (b) <A meet K, B> != E for A != B in the family and maximal K not containing A."""
    q = gamma_phi(T)
    g = q.geometry
    a, aw = True, None
    sets = [set(L) for L in g.lines]
    for i, j in itertools.combinations(range(len(sets)), 2):
        if len(sets[i] & sets[j]) > 1:
            a, aw = False, {"lines": (i, j), "common": sorted(sets[i] & sets[j])[:2]}
            break
    pl = [set(ls) for ls in g.point_lines]
    a_dual = all(len(pl[i] & pl[j]) <= 1 for i, j in itertools.combinations(range(len(pl)), 2))
    if family is None:
        family = kantor_family_from_action(T)
    if not family.members:
        raise NoKantorFamily("empty family")
    E = T.group
    maxes = maximal_subgroups(E)
    b, bw, checked = True, None, 0
    for (ia, A), (ib, B) in itertools.permutations(enumerate(family.E), 2):
        for K in maxes:
            if A.members <= K.members:
                continue
            checked += 1
            gen = subgroup_generated(E, (A.members & K.members) | B.members)
            if len(gen) == E.n:
                b = False
                bw = bw or {"A": ia, "B": ib, "K": K.elements[:8]}
    return GenericReport(a, a_dual, b, aw, bw, checked)


# -- ideal sub-quadrangles -----------------------------------------------------------------------------


@dataclass
class IdealSub:
    subgroup: SubgroupSet
    family: KantorFamily
    coset: CosetGeometry
    order: Order
    certificate: bool
    induced: IncidenceGeometry | None
    type_t2_t: bool


def _induced(geo: IncidenceGeometry, pts: set) -> IncidenceGeometry:
    idx = {p: i for i, p in enumerate(sorted(pts))}
    lines = []
    for L in geo.lines:
        inter = [idx[p] for p in L if p in pts]
        if len(inter) >= 2:
            lines.append(inter)
    return IncidenceGeometry(len(idx), lines)


def find_ideal_subgq(T: StgqTriple, x: int | None = None, family: KantorFamily | None = None) -> list[IdealSub]:
    """Sub-quadrangles through x containing every line on x, found from subgroups E' >= S.

    For each s' < s with s'^2 t dividing |E|, every subgroup E' of that order
    containing S gives the trace family (E_i meet E', E_i* meet E').  Accepted
    finds must pass validate_kantor_family and verify_gq on the coset geometry,
    and the point set they span in the original quadrangle must carry an
    isomorphic induced geometry containing all lines on x.
    """
    if x is not None and x != T.x:
        raise InvalidPoint(f"point {x} is not the base point {T.x} of the triple")
    _require(T)
    geo = T.geometry
    s, t = order_of(geo)
    family = family or kantor_family_from_action(T)
    y = int(geo.opposite_points(T.x)[0])
    S = T.symmetries
    E = T.group
    pp = prime_power(E.n)
    found = []
    for s2 in range(1, s):
        size = s2 * s2 * t
        if E.n % size:
            continue
        subs = pgroup_subgroups_of_order(E, size) if pp else enumerate_subgroups(E, size)
        for H in subs:
            if not S.members <= H.members:
                continue
            members = [(SubgroupSet(E, a.members & H.members), SubgroupSet(E, b.members & H.members)) for a, b in family.members]
            sub, emb = H.as_group()
            pos = {int(g): i for i, g in enumerate(emb)}
            local = [(SubgroupSet(sub, frozenset(pos[g] for g in a.members)), SubgroupSet(sub, frozenset(pos[g] for g in b.members))) for a, b in members]
            chk = validate_kantor_family(sub, local)
            if not chk.ok:
                continue
            fam = KantorFamily(sub, local, chk.params, name="trace")
            cg = coset_geometry(fam)
            try:
                order = verify_gq(cg.geometry)
            except (AxiomViolation, NotUniformOrder):
                continue
            # geometric certificate: orbit of y under E', the meeting points, and x
            Pp = T.action.point_perms
            pts = {T.x} | set(Pp[list(H.members), y].tolist())
            for L in geo.point_lines[T.x]:
                z = geo.projection(y, L)
                pts |= set(Pp[list(H.members), z].tolist())
            ind = _induced(geo, pts)
            cert = False
            try:
                if verify_gq(ind) == order:
                    xi = sorted(pts).index(T.x)
                    cert = len(ind.point_lines[xi]) == t + 1 and geometry_isomorphic(ind, cg.geometry) is not None
            except (AxiomViolation, NotUniformOrder):
                cert = False
            found.append(IdealSub(H, fam, cg, order, cert, ind, order.s == order.t**2))
    return found


# -- convenience ----------------------------------------------------------------------------------


def triple_from_family(family: KantorFamily, side: str = "right", name: str = "") -> StgqTriple:
    """The coset geometry of a Kantor family with base point (inf) and E acting on it."""
    cg = coset_geometry(family, side)
    return StgqTriple(cg.geometry, cg.infinity, cg.action, name or family.name)


@dataclass
class PropertyReport(_KeyValue):
    """All STGQ clauses for one triple; clauses that need an STGQ are left unset otherwise."""

    stgq: StgqReport
    C: ClauseReport | None = None
    star: StarReport | None = None
    moufang: MoufangReport | None = None
    generic: GenericReport | None = None
    gamma: QuotientGeometry | None = None

    def as_dict(self) -> dict:
        d = dict(self.stgq.as_dict())
        if self.C is not None:
            d["property_C"] = self.C.ok
            d["property_C_witness"] = self.C.witness
        if self.star is not None:
            d.update(self.star.as_dict())
        if self.moufang is not None:
            d.update(self.moufang.as_dict())
        if self.gamma is not None:
            d.update({f"gamma_{k}": v for k, v in self.gamma.as_dict().items()})
        if self.generic is not None:
            d.update(self.generic.as_dict())
        return d

    @property
    def ok(self) -> bool:
        """True when every asserted clause passed (the generic conditions are reported, not asserted)."""
        if not self.stgq.is_stgq:
            return False
        parts = [self.C, self.star, self.moufang]
        return all(p is None or bool(p.ok if not isinstance(p, MoufangReport) else p.M1 and p.M3) for p in parts) and (
            self.gamma is None or self.gamma.degree_ok)


def property_report(T: StgqTriple, moufang: bool = True, generic: bool = True) -> PropertyReport:
    rep = PropertyReport(is_stgq(T))
    if not rep.stgq.is_stgq:
        return rep
    rep.C = property_C(T)
    rep.star = property_star(T)
    if moufang:
        rep.moufang = mstgq_check(T)
    rep.gamma = gamma_phi(T)
    if generic:
        rep.generic = generic_conditions(T)
    return rep
