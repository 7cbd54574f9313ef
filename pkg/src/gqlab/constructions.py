"""Concrete groups, quadrangles and Kantor families.

Kantor families are stored as pairs (E_i, E_i*) of subgroups of a group E.
The coset geometry uses right cosets so that right multiplication by E is an
elation about the special point (inf).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra.field import FiniteField, field_create, prime_power
from .algebra.groups import MAX_GROUP_ORDER, GroupTable, SubgroupSet, subgroup_generated
from .errors import ConstructionInvalid, NotPrimePower, SizeBudgetExceeded
from .geometry import IncidenceGeometry, Order
from .symmetry.action import GeometryAction


# -- Heisenberg groups -------------------------------------------------------------


def _index_of(coords: np.ndarray, q: int) -> np.ndarray:
    m = coords.shape[-1]
    weights = q ** np.arange(m - 1, -1, -1)
    return coords @ weights


def heisenberg(n: int, q: int) -> GroupTable:
    """H_n(q): triples (alpha, c, beta) with alpha, beta in GF(q)^n and c in GF(q).

    (a, c, b)(a', c', b') = (a + a', c + c' + a.b', b + b').
    Element index = base-q number whose digits are (alpha, c, beta).
    """
    if n < 1:
        raise ValueError("n must be positive")
    F = field_create(q)
    m = 2 * n + 1
    size = q**m
    if size > MAX_GROUP_ORDER:
        raise SizeBudgetExceeded(f"H_{n}({q}) has order {size} > {MAX_GROUP_ORDER}")
    digits = np.array(list(itertools.product(range(q), repeat=m)), dtype=np.int64)
    A, C, B = digits[:, :n], digits[:, n], digits[:, n + 1 :]
    add, mul = F.add_table, F.mul_table
    dot = np.zeros((size, size), dtype=np.int64)
    for i in range(n):
        dot = add[dot, mul[A[:, i][:, None], B[:, i][None, :]]]
    prod = np.empty((size, size, m), dtype=np.int64)
    for k in range(m):
        prod[:, :, k] = add[digits[:, k][:, None], digits[:, k][None, :]]
    prod[:, :, n] = add[prod[:, :, n], dot]
    table = _index_of(prod, q)
    labels = [_triple_label(row, n) for row in digits]
    digits.setflags(write=False)
    return GroupTable(table, labels=labels, name=f"H_{n}({q})", coords=digits, field=F)


def _triple_label(row, n) -> str:
    a = " ".join(str(int(x)) for x in row[:n])
    b = " ".join(str(int(x)) for x in row[n + 1 :])
    return f"({a};{int(row[n])};{b})"


def heisenberg_element(H: GroupTable, alpha, c, beta) -> int:
    q = H.field.q
    return int(_index_of(np.array([*alpha, c, *beta], dtype=np.int64), q))


# -- classical quadrangles -----------------------------------------------------------


def _projective_points(F: FiniteField, dim: int) -> list[tuple[int, ...]]:
    """Vectors of GF(q)^dim whose first non-zero coordinate is 1, in lexicographic order."""
    pts = []
    for v in itertools.product(range(F.q), repeat=dim):
        nz = [x for x in v if x]
        if nz and nz[0] == 1:
            pts.append(v)
    return pts


def _normalize(F: FiniteField, v) -> tuple[int, ...]:
    lead = next(x for x in v if x)
    inv = F.inv(lead)
    return tuple(F.mul(inv, x) for x in v)


def _span_points(F: FiniteField, u, v) -> frozenset:
    pts = {tuple(u), tuple(v)}
    for a in range(1, F.q):
        w = tuple(F.add(F.mul(a, x), y) for x, y in zip(u, v))
        pts.add(_normalize(F, w))
    return frozenset(pts)


def _polar_geometry(F: FiniteField, points, form) -> IncidenceGeometry:
    index = {p: i for i, p in enumerate(points)}
    lines = set()
    covered = set()
    for i, u in enumerate(points):
        for j in range(i + 1, len(points)):
            if (i, j) in covered or form(u, points[j]) != 0:
                continue
            sp = _span_points(F, u, points[j])
            if all(p in index for p in sp) and all(form(a, b) == 0 for a in sp for b in sp):
                line = tuple(sorted(index[p] for p in sp))
                lines.add(line)
                covered.update(itertools.combinations(line, 2))
    lines = sorted(lines)
    tags = ["(" + ",".join(map(str, p)) + ")" for p in points]
    return IncidenceGeometry(len(points), lines, point_tags=tags)


def symplectic_quadrangle(q: int) -> IncidenceGeometry:
    """W_3(q): points of PG(3,q) with the lines totally isotropic for x0y1 - x1y0 + x2y3 - x3y2."""
    if prime_power(q) is None:
        raise NotPrimePower(f"{q} is not a prime power")
    if q > 5:
        raise SizeBudgetExceeded(f"W_3({q}) is beyond the size budget (q <= 5)")
    F = field_create(q)

    def form(x, y):
        a = F.sub(F.mul(x[0], y[1]), F.mul(x[1], y[0]))
        b = F.sub(F.mul(x[2], y[3]), F.mul(x[3], y[2]))
        return F.add(a, b)

    return _polar_geometry(F, _projective_points(F, 4), form)


def hermitian_quadrangle(q: int) -> IncidenceGeometry:
    """H(3,q^2) from the form x0^(q+1) + x1^(q+1) + x2^(q+1) + x3^(q+1)."""
    if q not in (2, 3):
        raise SizeBudgetExceeded("hermitian_quadrangle supports q in {2, 3}")
    F = field_create(q * q)

    def herm(x, y):
        s = 0
        for a, b in zip(x, y):
            s = F.add(s, F.mul(a, F.pow(b, q)))
        return s

    pts = [p for p in _projective_points(F, 4) if herm(p, p) == 0]
    return _polar_geometry(F, pts, herm)


# -- Kantor families ---------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    clause: str
    message: str
    witness: tuple = ()


@dataclass
class KantorCheck:
    params: Order | None
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


@dataclass
class KantorFamily:
    group: GroupTable
    members: list[tuple[SubgroupSet, SubgroupSet]]
    params: Order
    name: str = ""

    @property
    def s(self) -> int:
        return self.params.s

    @property
    def t(self) -> int:
        return self.params.t

    @property
    def E(self) -> list[SubgroupSet]:
        return [a for a, _ in self.members]

    @property
    def Estar(self) -> list[SubgroupSet]:
        return [b for _, b in self.members]

    def key(self) -> tuple:
        """Order-independent identity of the family inside its group."""
        return tuple(sorted((a.elements, b.elements) for a, b in self.members))


def _is_subgroup(G: GroupTable, H: SubgroupSet) -> tuple | None:
    if 0 not in H.members:
        return (0,)
    el = np.array(H.elements)
    prods = G.mul[el[:, None], el[None, :]]
    bad = ~H.mask[prods]
    if bad.any():
        i, j = np.argwhere(bad)[0]
        return (int(el[i]), int(el[j]))
    return None


def validate_kantor_family(group: GroupTable, members: Sequence[tuple[SubgroupSet, SubgroupSet]]) -> KantorCheck:
    """Check the four Kantor axioms by enumeration; every violated clause is listed."""
    G = group
    out: list[Violation] = []
    k = len(members)
    if k < 2:
        return KantorCheck(None, [Violation("index set", f"|I| = {k}, need t + 1 >= 2")])
    t = k - 1
    sizes = {len(a) for a, _ in members}
    if len(sizes) != 1:
        out.append(Violation("cardinality", f"members E_i have sizes {sorted(sizes)}"))
        return KantorCheck(None, out)
    s = sizes.pop()
    if s * s * t != G.n:
        out.append(Violation("cardinality", f"|E| = {G.n} but s^2 t = {s * s * t} (s={s}, t={t}, |I| = t+1 = {k})"))
    for i, (a, b) in enumerate(members):
        for name, H in ((f"E_{i}", a), (f"E_{i}*", b)):
            w = _is_subgroup(G, H)
            if w is not None:
                out.append(Violation("subgroup", f"{name} is not a subgroup", w))
        if len(b) != s * t:
            out.append(Violation("cardinality", f"|E_{i}*| = {len(b)}, expected st = {s * t}", (i,)))
        extra = sorted(a.members - b.members)
        if extra:
            out.append(Violation("containment", f"E_{i} is not contained in E_{i}*", (i, extra[0])))
    els = [np.array(a.elements) for a, _ in members]
    for i, j in itertools.permutations(range(k), 2):
        prod = np.zeros(G.n, dtype=bool)
        prod[G.mul[els[i][:, None], els[j][None, :]].ravel()] = True
        for m in range(k):
            if m in (i, j):
                continue
            hit = prod & members[m][0].mask
            hit[0] = False
            if hit.any():
                out.append(Violation("triple", f"E_{i}E_{j} meets E_{m} non-trivially", (i, j, m, int(np.argmax(hit)))))
    for i, j in itertools.permutations(range(k), 2):
        common = members[i][1].members & members[j][0].members - {0}
        if common:
            out.append(Violation("star", f"E_{i}* meets E_{j} non-trivially", (i, j, min(common))))
    return KantorCheck(Order(s, t) if not out else None, out)


def make_kantor_family(group: GroupTable, members, name: str = "") -> KantorFamily:
    chk = validate_kantor_family(group, members)
    if not chk.ok:
        raise ConstructionInvalid(f"not a Kantor family: {chk.violations[0].message}", chk.violations)
    return KantorFamily(group, list(members), chk.params, name)


# -- q-clans -------------------------------------------------------------------------------


@dataclass
class QClan:
    field: FiniteField
    matrices: list[np.ndarray]  # A_u for u = 0..q-1 (field element indices)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def n(self) -> int:
        return self.matrices[0].shape[0]

    def K(self, u: int) -> np.ndarray:
        A = self.matrices[u]
        return self.field.add_table[A, A.T]


def _quadratic(F: FiniteField, A: np.ndarray, x) -> int:
    s = 0
    for i in range(len(x)):
        for j in range(len(x)):
            s = F.add(s, F.mul(F.mul(x[i], int(A[i, j])), x[j]))
    return s


def qclan_violations(clan: QClan) -> list[Violation]:
    """Pairs u != v and a non-zero x with x (A_u - A_v) x^T = 0."""
    F = clan.field
    out = []
    vecs = [v for v in itertools.product(range(F.q), repeat=clan.n) if any(v)]
    for u, v in itertools.combinations(range(F.q), 2):
        D = F.add_table[clan.matrices[u], F.neg_table[clan.matrices[v]]]
        for x in vecs:
            if _quadratic(F, D, x) == 0:
                out.append(Violation("anisotropy", f"A_{u} - A_{v} represents zero", (u, v, x)))
                break
    return out


def linear_qclan(q: int) -> QClan:
    """A_u = u [[1, b], [0, c]] with x^2 + bx + c irreducible, (b, c) least."""
    F = field_create(q)
    for b, c in itertools.product(range(q), repeat=2):
        if all(F.add(F.add(F.mul(x, x), F.mul(b, x)), c) != 0 for x in range(q)):
            break
    base = np.array([[1, b], [0, c]], dtype=np.int64)
    mats = [F.mul_table[u, base] for u in range(q)]
    clan = QClan(F, mats)
    bad = qclan_violations(clan)
    if bad:  # pragma: no cover - irreducibility guarantees anisotropy
        raise ConstructionInvalid("linear q-clan failed anisotropy", bad)
    return clan


def _clan_family(H: GroupTable, clan: QClan) -> list[tuple[SubgroupSet, SubgroupSet]]:
    F, n, q = clan.field, clan.n, clan.q
    Z = subgroup_generated(H, [heisenberg_element(H, [0] * n, c, [0] * n) for c in range(q)])
    members = []
    alphas = list(itertools.product(range(q), repeat=n))
    for u in range(q):
        A, K = clan.matrices[u], clan.K(u)
        elems = []
        for a in alphas:
            c = _quadratic(F, A, a)
            beta = [0] * n
            for j in range(n):
                for i in range(n):
                    beta[j] = F.add(beta[j], F.mul(a[i], int(K[i, j])))
            elems.append(heisenberg_element(H, a, c, beta))
        Au = SubgroupSet(H, frozenset(elems))
        star = frozenset(int(H.mul[g, z]) for g in elems for z in Z.members)
        members.append((Au, SubgroupSet(H, star)))
    inf = frozenset(heisenberg_element(H, [0] * n, 0, b) for b in alphas)
    inf_star = frozenset(heisenberg_element(H, [0] * n, c, b) for b in alphas for c in range(q))
    members.append((SubgroupSet(H, inf), SubgroupSet(H, inf_star)))
    return members


def qclan_kantor_family(clan: QClan) -> KantorFamily:
    """A(u) = {(a, a A_u a^T, a K_u)}, A(inf) = {(0, 0, b)} in H_n(q), with A*(u) = A(u) Z."""
    bad = qclan_violations(clan)
    if bad:
        raise ConstructionInvalid("matrices do not form a q-clan", bad)
    H = heisenberg(clan.n, clan.q)
    return make_kantor_family(H, _clan_family(H, clan), name=f"qclan({clan.q})")


def w3_kantor_family(q: int) -> KantorFamily:
    """A Kantor family of type (q, q) whose coset geometry is W_3(q).

    Odd q: A(u) = {(a, u a^2, 2ua)} in H_1(q), the one-dimensional q-clan
    A_u = u.  q = 2: first family found by exhaustive search over the bundled
    groups of order 8.  q = 4: the translation family of a conic in GF(4)^3
    (subspaces spanned by a conic point, and by that point plus the nucleus).
    """
    pp = prime_power(q)
    if pp is None:
        raise NotPrimePower(f"{q} is not a prime power")
    if q > 5:
        raise SizeBudgetExceeded("w3_kantor_family supports q <= 5")
    F = field_create(q)
    if q % 2:
        clan = QClan(F, [np.array([[u]], dtype=np.int64) for u in range(q)])
        H = heisenberg(1, q)
        return make_kantor_family(H, _clan_family(H, clan), name=f"w3({q})")
    if q == 2:
        from .catalog import catalog_groups
        from .search import search_kantor_families

        for G in catalog_groups(8):
            fams = search_kantor_families(G, 2, 2, modulo_aut=True).families
            if fams:
                fam = fams[0]
                return make_kantor_family(fam.group, fam.members, name="w3(2)")
        raise ConstructionInvalid("no (2,2) family found in the order-8 catalog")  # pragma: no cover
    return _conic_family(F)


def _conic_family(F: FiniteField) -> KantorFamily:
    q = F.q
    vecs = list(itertools.product(range(q), repeat=3))
    index = {v: i for i, v in enumerate(vecs)}
    add = F.add_table
    table = np.array([[index[tuple(add[a, b] for a, b in zip(u, v))] for v in vecs] for u in vecs])
    G = GroupTable(table, labels=["(" + ",".join(map(str, v)) + ")" for v in vecs], name=f"GF({q})^3")

    def sub(*gens):
        pts = set()
        for coeffs in itertools.product(range(q), repeat=len(gens)):
            w = [0, 0, 0]
            for c, g in zip(coeffs, gens):
                w = [F.add(x, F.mul(c, y)) for x, y in zip(w, g)]
            pts.add(index[tuple(w)])
        return SubgroupSet(G, frozenset(pts))

    conic = [(1, u, F.mul(u, u)) for u in range(q)] + [(0, 0, 1)]
    nucleus = (0, 1, 0)
    members = [(sub(P), sub(P, nucleus)) for P in conic]
    return make_kantor_family(G, members, name=f"w3({q})")


# -- coset geometry ----------------------------------------------------------------------


def right_cosets(G: GroupTable, H: SubgroupSet) -> tuple[np.ndarray, list[int]]:
    """(coset id per element, least representative per coset); cosets ordered by representative."""
    el = np.array(H.elements)
    ids = np.full(G.n, -1, dtype=np.int64)
    reps = []
    for g in range(G.n):
        if ids[g] < 0:
            ids[G.mul[el, g]] = len(reps)
            reps.append(g)
    return ids, reps


def left_cosets(G: GroupTable, H: SubgroupSet) -> tuple[np.ndarray, list[int]]:
    el = np.array(H.elements)
    ids = np.full(G.n, -1, dtype=np.int64)
    reps = []
    for g in range(G.n):
        if ids[g] < 0:
            ids[G.mul[g, el]] = len(reps)
            reps.append(g)
    return ids, reps


@dataclass
class CosetGeometry:
    geometry: IncidenceGeometry
    family: KantorFamily
    infinity: int
    action: GeometryAction
    side: str = "right"

    @property
    def special_lines(self) -> list[int]:
        """Indices of the lines [E_i]."""
        L = self.geometry.n_lines
        k = self.family.t + 1
        return list(range(L - k, L))


def coset_geometry(family: KantorFamily, side: str = "right") -> CosetGeometry:
    """Points: g, E_i* g, (inf); lines: E_i g, [E_i].  ``side='left'`` uses gE_i, gE_i*.

    Group elements keep their indices as points; the E_i* cosets follow
    (grouped by i), and (inf) is the last point.  Lines E_i g come first and
    the t+1 lines [E_i] are last.  E acts by right multiplication
    (by left multiplication with the inverse for ``side='left'``).
    """
    G = family.group
    n = G.n
    cos = right_cosets if side == "right" else left_cosets
    if side not in ("right", "left"):
        raise ValueError("side must be 'right' or 'left'")
    star_ids, star_reps, line_ids, line_reps = [], [], [], []
    for a, b in family.members:
        ids, reps = cos(G, b)
        star_ids.append(ids)
        star_reps.append(reps)
        ids, reps = cos(G, a)
        line_ids.append(ids)
        line_reps.append(reps)
    star_off, off = [], n
    for reps in star_reps:
        star_off.append(off)
        off += len(reps)
    inf = off
    P = off + 1
    line_off, off = [], 0
    for reps in line_reps:
        line_off.append(off)
        off += len(reps)
    special_off = off
    lines: list[list[int]] = []
    ltags: list[str] = []
    for i, reps in enumerate(line_reps):
        for c, r in enumerate(reps):
            pts = np.nonzero(line_ids[i] == c)[0].tolist()
            pts.append(star_off[i] + int(star_ids[i][r]))
            lines.append(pts)
            ltags.append(f"E{i}g[{G.label(r)}]")
    for i, reps in enumerate(star_reps):
        lines.append([inf] + [star_off[i] + c for c in range(len(reps))])
        ltags.append(f"[E{i}]")
    ptags = [G.label(g) for g in range(n)]
    for i, reps in enumerate(star_reps):
        ptags += [f"E{i}*g[{G.label(r)}]" for r in reps]
    ptags.append("(inf)")
    geo = IncidenceGeometry(P, lines, point_tags=ptags, line_tags=ltags)

    # action: element h sends g -> gh (right) or g -> h^-1 g (left)
    if side == "right":
        img = G.mul[np.arange(n)[:, None], np.arange(n)[None, :]].T  # img[h, g] = g h
    else:
        img = G.mul[G.inv[:, None], np.arange(n)[None, :]]  # img[h, g] = h^-1 g
    pp = np.empty((n, P), dtype=np.int64)
    lp = np.empty((n, geo.n_lines), dtype=np.int64)
    pp[:, :n] = img
    pp[:, inf] = inf
    for i in range(len(family.members)):
        reps = np.array(star_reps[i])
        pp[:, star_off[i] : star_off[i] + len(reps)] = star_off[i] + star_ids[i][img[:, reps]]
        reps = np.array(line_reps[i])
        lp[:, line_off[i] : line_off[i] + len(reps)] = line_off[i] + line_ids[i][img[:, reps]]
        lp[:, special_off + i] = special_off + i
    action = GeometryAction(G, pp, lp)
    return CosetGeometry(geo, family, inf, action, side)
