"""Point-line incidence geometries and generalized-quadrangle combinatorics.

A geometry stores, for every line, the ascending tuple of its points.  In the
incidence graph the vertices are the points ``0..P-1`` followed by the lines
``P..P+L-1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import AxiomViolation, InvalidPoint, InvalidRoot, NotTriad, NotUniformOrder


class IncidenceGeometry:
    def __init__(
        self,
        n_points: int,
        lines: Iterable[Iterable[int]],
        point_tags: Sequence[str] | None = None,
        line_tags: Sequence[str] | None = None,
    ):
        self.n_points = int(n_points)
        self.lines = tuple(tuple(sorted(int(p) for p in line)) for line in lines)
        for j, line in enumerate(self.lines):
            if len(set(line)) != len(line):
                raise ValueError(f"line {j} repeats a point")
            if line and (line[0] < 0 or line[-1] >= self.n_points):
                raise ValueError(f"line {j} has a point index out of range")
        self.n_lines = len(self.lines)
        through: list[list[int]] = [[] for _ in range(self.n_points)]
        for j, line in enumerate(self.lines):
            for p in line:
                through[p].append(j)
        self.point_lines = tuple(tuple(ls) for ls in through)
        self.point_tags = list(point_tags) if point_tags is not None else None
        self.line_tags = list(line_tags) if line_tags is not None else None

    def __repr__(self):
        return f"IncidenceGeometry(P={self.n_points}, L={self.n_lines})"

    def __eq__(self, other):
        return (
            isinstance(other, IncidenceGeometry)
            and self.n_points == other.n_points
            and self.lines == other.lines
        )

    def __hash__(self):
        return hash((self.n_points, self.lines))

    @property
    def n_vertices(self) -> int:
        return self.n_points + self.n_lines

    @cached_property
    def incidence(self) -> np.ndarray:
        N = np.zeros((self.n_points, self.n_lines), dtype=bool)
        for j, line in enumerate(self.lines):
            N[list(line), j] = True
        N.setflags(write=False)
        return N

    @cached_property
    def collinearity(self) -> np.ndarray:
        """C[p, q] true iff p and q share a line; the diagonal is true."""
        N = self.incidence.astype(np.int64)
        C = (N @ N.T) > 0
        np.fill_diagonal(C, True)
        C.setflags(write=False)
        return C

    @cached_property
    def line_of_pair(self) -> np.ndarray:
        """Index of a line through two distinct points (-1 if none)."""
        M = np.full((self.n_points, self.n_points), -1, dtype=np.int64)
        for j, line in enumerate(self.lines):
            idx = np.array(line)
            M[idx[:, None], idx[None, :]] = j
        np.fill_diagonal(M, -1)
        return M

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Dense adjacency matrix of the incidence graph."""
        P, V = self.n_points, self.n_vertices
        A = np.zeros((V, V), dtype=bool)
        A[:P, P:] = self.incidence
        A[P:, :P] = self.incidence.T
        A.setflags(write=False)
        return A

    @cached_property
    def edges(self) -> np.ndarray:
        e = [(p, self.n_points + j) for j, line in enumerate(self.lines) for p in line]
        return np.array(e, dtype=np.int64).reshape(-1, 2)

    def neighbors(self, v: int) -> tuple[int, ...]:
        if v < self.n_points:
            return tuple(self.n_points + j for j in self.point_lines[v])
        return self.lines[v - self.n_points]

    def collinear(self, p: int, q: int) -> bool:
        return bool(self.collinearity[p, q])

    def line_through(self, p: int, q: int) -> int:
        return int(self.line_of_pair[p, q])

    def concurrent(self, L: int, M: int) -> bool:
        return bool(set(self.lines[L]) & set(self.lines[M]))

    def meet(self, L: int, M: int) -> int:
        common = set(self.lines[L]) & set(self.lines[M])
        return min(common) if common else -1

    def projection(self, p: int, L: int) -> int:
        """The point of L collinear with p (p itself when p lies on L)."""
        hits = [q for q in self.lines[L] if self.collinearity[p, q]]
        if p in self.lines[L]:
            return p
        return hits[0] if len(hits) == 1 else -1

    def opposite_points(self, x: int) -> np.ndarray:
        return np.nonzero(~self.collinearity[x])[0]

    def relabel(self, point_perm, line_perm) -> "IncidenceGeometry":
        """Image geometry: point p becomes point_perm[p], line j becomes line_perm[j]."""
        point_perm = np.asarray(point_perm)
        new_lines: list = [None] * self.n_lines
        for j, line in enumerate(self.lines):
            new_lines[int(line_perm[j])] = [int(point_perm[p]) for p in line]
        return IncidenceGeometry(self.n_points, new_lines)


@dataclass(frozen=True)
class Order:
    s: int
    t: int

    def __iter__(self):
        return iter((self.s, self.t))

    def __str__(self):
        return f"({self.s},{self.t})"


def dual(geo: IncidenceGeometry) -> IncidenceGeometry:
    return IncidenceGeometry(geo.n_lines, geo.point_lines, point_tags=geo.line_tags, line_tags=geo.point_tags)


def _degrees(geo: IncidenceGeometry):
    return {len(line) for line in geo.lines}, {len(ls) for ls in geo.point_lines}


def find_ordinary_pentagon(geo: IncidenceGeometry):
    """A 10-cycle of the incidence graph as (p0, L0, p1, L1, ...), or None.

    Depth-first with a distance bound; starting points are tried in order, so a
    None answer is an exhaustive certificate.
    """
    V = geo.n_vertices
    nbrs = [geo.neighbors(v) for v in range(V)]
    for start in range(geo.n_points):
        dist = np.full(V, -1)
        dist[start] = 0
        frontier = [start]
        while frontier:
            nxt = []
            for u in frontier:
                for w in nbrs[u]:
                    if dist[w] < 0:
                        dist[w] = dist[u] + 1
                        nxt.append(w)
            frontier = nxt
        path = [start]
        on_path = {start}

        def dfs(u):
            k = len(path)
            if k == 10:
                return start in nbrs[u]
            remaining = 10 - k
            for w in nbrs[u]:
                if w in on_path or w < start and w < geo.n_points:
                    continue
                if dist[w] < 0 or dist[w] > remaining:
                    continue
                path.append(w)
                on_path.add(w)
                if dfs(w):
                    return True
                path.pop()
                on_path.discard(w)
            return False

        if dfs(start):
            return tuple(v if v < geo.n_points else v - geo.n_points for v in path)
    return None


def verify_gq(geo: IncidenceGeometry) -> Order:
    """Check the quadrangle axioms and return the order (s, t).

    Axiom (i) is checked as "no two lines share two points" and "no triangle";
    axiom (ii) through the projection property (given (i) these agree);
    axiom (iii) by an exhaustive search for an ordinary pentagon.
    """
    if geo.n_lines == 0 or geo.n_points == 0:
        raise AxiomViolation("ii", "geometry has no points or no lines")
    N = geo.incidence.astype(np.int64)
    meet = N.T @ N
    np.fill_diagonal(meet, 0)
    if (meet >= 2).any():
        L, M = (int(x) for x in np.argwhere(meet >= 2)[0])
        common = sorted(set(geo.lines[L]) & set(geo.lines[M]))[:2]
        raise AxiomViolation("i", f"lines {L} and {M} share points {common} (digon)", witness=(L, M, tuple(common)))
    C = geo.collinearity.astype(np.int64).copy()
    np.fill_diagonal(C, 0)
    counts = C @ N  # counts[p, L] = points of L collinear with p (p excluded)
    off = ~geo.incidence
    tri = off & (counts >= 2)
    if tri.any():
        p, L = (int(x) for x in np.argwhere(tri)[0])
        q, r = [x for x in geo.lines[L] if geo.collinearity[p, x]][:2]
        raise AxiomViolation("i", f"points {p}, {q}, {r} form a triangle", witness=(p, q, r))
    none = off & (counts == 0)
    if none.any():
        p, L = (int(x) for x in np.argwhere(none)[0])
        raise AxiomViolation("ii", f"point {p} and line {L} lie in no common quadrangle", witness=(p, L))
    line_sizes, point_degrees = _degrees(geo)
    if len(line_sizes) != 1 or len(point_degrees) != 1:
        raise NotUniformOrder(
            f"non-uniform degrees: line sizes {sorted(line_sizes)}, point degrees {sorted(point_degrees)}",
            witness=(sorted(line_sizes), sorted(point_degrees)),
        )
    s, t = line_sizes.pop() - 1, point_degrees.pop() - 1
    if s < 1 or t < 1:
        raise AxiomViolation("ii", f"order ({s},{t}) leaves some pair outside every quadrangle", witness=(s, t))
    if find_ordinary_pentagon(geo) is None:
        raise AxiomViolation("iii", "no ordinary pentagon exists", witness=None)
    return Order(s, t)


def is_gq(geo: IncidenceGeometry) -> bool:
    try:
        verify_gq(geo)
        return True
    except (AxiomViolation, NotUniformOrder):
        return False


def order_of(geo: IncidenceGeometry) -> Order:
    """Order from the degrees alone (no axiom check)."""
    line_sizes, point_degrees = _degrees(geo)
    if len(line_sizes) != 1 or len(point_degrees) != 1:
        raise NotUniformOrder("non-uniform degrees")
    return Order(line_sizes.pop() - 1, point_degrees.pop() - 1)


# -- perp, span, regularity -------------------------------------------------------


def perp(geo: IncidenceGeometry, S: Iterable[int]) -> frozenset:
    S = list(S)
    if not S:
        return frozenset(range(geo.n_points))
    return frozenset(np.nonzero(geo.collinearity[S].all(axis=0))[0].tolist())


def span(geo: IncidenceGeometry, S: Iterable[int]) -> frozenset:
    return perp(geo, perp(geo, S))


def is_regular_point(geo: IncidenceGeometry, x: int, t: int | None = None) -> tuple[bool, tuple | None]:
    """x is regular iff |{x,y}^perp-perp| = t+1 for every y opposite x.

    Returns (verdict, first failing pair).
    """
    if t is None:
        t = order_of(geo).t
    C = geo.collinearity
    for y in geo.opposite_points(x):
        pp = np.nonzero(C[x] & C[y])[0]
        sp = np.nonzero(C[pp].all(axis=0))[0]
        if len(sp) != t + 1:
            return False, (int(x), int(y))
    return True, None


def triad_centers(geo: IncidenceGeometry, triple: Sequence[int], kind: str = "points") -> frozenset:
    """Common perp of a point triad, or the lines concurrent with all of a line triad."""
    a, b, c = triple
    if len({a, b, c}) != 3:
        raise NotTriad("triad elements must be distinct")
    if kind == "points":
        if geo.collinear(a, b) or geo.collinear(a, c) or geo.collinear(b, c):
            raise NotTriad(f"points {triple} are not pairwise non-collinear")
        return perp(geo, [a, b, c])
    if kind == "lines":
        if geo.concurrent(a, b) or geo.concurrent(a, c) or geo.concurrent(b, c):
            raise NotTriad(f"lines {triple} are not pairwise non-concurrent")
        N = geo.incidence
        meets = [N[list(geo.lines[m])].any(axis=0) for m in (a, b, c)]
        return frozenset(np.nonzero(meets[0] & meets[1] & meets[2])[0].tolist())
    raise ValueError(f"unknown triad kind {kind!r}")


# -- roots and apartments -----------------------------------------------------------


@dataclass(frozen=True)
class Root:
    """Chain e0..e4 with consecutive elements incident.

    kind 'dual_root' has point extremities (e0, e2, e4 points; e1, e3 lines);
    kind 'root' has line extremities.
    """

    elements: tuple
    kind: str

    @property
    def interior(self) -> tuple:
        return self.elements[1:4]

    def points(self) -> tuple:
        e = self.elements
        return (e[0], e[2], e[4]) if self.kind == "dual_root" else (e[1], e[3])

    def lines(self) -> tuple:
        e = self.elements
        return (e[1], e[3]) if self.kind == "dual_root" else (e[0], e[2], e[4])

    def interior_points(self) -> tuple:
        e = self.elements
        return (e[2],) if self.kind == "dual_root" else (e[1], e[3])

    def interior_lines(self) -> tuple:
        e = self.elements
        return (e[1], e[3]) if self.kind == "dual_root" else (e[2],)


def check_root(geo: IncidenceGeometry, r: Root) -> None:
    if r.kind not in ("root", "dual_root") or len(r.elements) != 5:
        raise InvalidRoot(f"malformed root {r}")
    pts, lns = r.points(), r.lines()
    if len(set(pts)) != len(pts) or len(set(lns)) != len(lns):
        raise InvalidRoot("root elements are not distinct")
    if not all(0 <= p < geo.n_points for p in pts) or not all(0 <= L < geo.n_lines for L in lns):
        raise InvalidRoot("root element out of range")
    e = r.elements
    for i in range(4):
        a, b = e[i], e[i + 1]
        p, L = (a, b) if (r.kind == "dual_root") == (i % 2 == 0) else (b, a)
        if not geo.incidence[p, L]:
            raise InvalidRoot(f"elements e{i} and e{i + 1} are not incident")


@dataclass(frozen=True)
class Apartment:
    points: tuple
    lines: tuple


def apartments_through(geo: IncidenceGeometry, r: Root) -> list[Apartment]:
    """Every ordinary quadrangle containing the five elements of r."""
    check_root(geo, r)
    e = r.elements
    out = []
    if r.kind == "dual_root":
        p0, L1, p2, L3, p4 = e
        for z in sorted(perp(geo, [p0, p4]) - {p2, p0, p4}):
            La, Lb = geo.line_through(p4, z), geo.line_through(z, p0)
            if len({L1, L3, La, Lb}) == 4:
                out.append(Apartment((p0, p2, p4, z), (L1, L3, La, Lb)))
    else:
        L0, p1, L2, p3, L4 = e
        N = geo.incidence
        touch0 = N[list(geo.lines[L0])].any(axis=0)
        touch4 = N[list(geo.lines[L4])].any(axis=0)
        for Z in sorted(np.nonzero(touch0 & touch4)[0].tolist()):
            if Z in (L0, L2, L4):
                continue
            a, b = geo.meet(L4, Z), geo.meet(Z, L0)
            if len({p1, p3, a, b}) == 4:
                out.append(Apartment((p1, p3, a, b), (L0, L2, L4, Z)))
    return out


def roots_on(geo: IncidenceGeometry, x: int, kind: str = "dual_root", position: str = "center") -> Iterator[Root]:
    """Roots (as sets, each listed once) having the point x at e2 or in the interior.

    Dual roots have their only interior point at the centre, so both positions
    give the same dual roots; roots have line centres, so ('root', 'center')
    yields nothing.
    """
    if not (0 <= x < geo.n_points) or not geo.point_lines[x]:
        raise InvalidPoint(f"point {x} is not a point on some line")
    if kind == "dual_root":
        lines = geo.point_lines[x]
        for L1, L3 in itertools.combinations(lines, 2):
            for p0 in geo.lines[L1]:
                if p0 == x:
                    continue
                for p4 in geo.lines[L3]:
                    if p4 != x:
                        yield Root((p0, L1, x, L3, p4), "dual_root")
    elif kind == "root":
        if position == "center":
            return
        for L0 in geo.point_lines[x]:
            for L2 in geo.point_lines[x]:
                if L2 == L0:
                    continue
                for p3 in geo.lines[L2]:
                    if p3 == x:
                        continue
                    for L4 in geo.point_lines[p3]:
                        if L4 != L2:
                            yield Root((L0, x, L2, p3, L4), "root")
    else:
        raise ValueError(f"unknown root kind {kind!r}")


def all_roots(geo: IncidenceGeometry, kind: str) -> Iterator[Root]:
    """Every root of the given kind, one orientation each (e0 < e4 on the extremity index)."""
    if kind == "dual_root":
        for p2 in range(geo.n_points):
            for L1 in geo.point_lines[p2]:
                for L3 in geo.point_lines[p2]:
                    if L1 == L3:
                        continue
                    for p0 in geo.lines[L1]:
                        for p4 in geo.lines[L3]:
                            if p0 != p2 and p4 != p2 and p0 < p4:
                                yield Root((p0, L1, p2, L3, p4), kind)
    else:
        for L2 in range(geo.n_lines):
            for p1 in geo.lines[L2]:
                for p3 in geo.lines[L2]:
                    if p1 == p3:
                        continue
                    for L0 in geo.point_lines[p1]:
                        for L4 in geo.point_lines[p3]:
                            if L0 != L2 and L4 != L2 and L0 < L4:
                                yield Root((L0, p1, L2, p3, L4), kind)


def grid(rows: int, cols: int) -> IncidenceGeometry:
    """The rows x cols grid: points (i, j), lines = rows and columns."""
    lines = [[i * cols + j for j in range(cols)] for i in range(rows)]
    lines += [[i * cols + j for i in range(rows)] for j in range(cols)]
    return IncidenceGeometry(rows * cols, lines)
