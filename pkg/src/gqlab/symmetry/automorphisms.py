"""Automorphism groups, canonical forms and isomorphisms of incidence geometries.

The incidence graph has the points as vertices 0..P-1 and the lines as
vertices P..P+L-1.  Geometry automorphisms are computed with points and lines
in different colour classes; :func:`automorphism_group` leaves the two sides
uncoloured so that dualities of a self-dual geometry are found as well.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ..algebra.groups import group_from_permutations
from ..errors import SizeBudgetExceeded
from ..geometry import IncidenceGeometry, dual
from .action import GeometryAction
from .engine import Chain, Graph, automorphism_chain, canonical_labeling, fnv1a64, leaf_map

MAX_VERTICES = 600
ELEMENT_PRUNING_LIMIT = 25_000_000  # |Aut| * n entries kept in memory for canonical pruning


def incidence_graph(geo: IncidenceGeometry) -> Graph:
    if geo.n_vertices > MAX_VERTICES:
        raise SizeBudgetExceeded(f"{geo.n_vertices} vertices exceed the budget of {MAX_VERTICES}")
    return Graph(geo.n_vertices, geo.edges)


def vertex_colors(geo: IncidenceGeometry, point_colors=None, line_colors=None, sides: bool = True) -> np.ndarray:
    """Colour array; points and lines are kept apart when ``sides`` is set."""
    P, L = geo.n_points, geo.n_lines
    pc = np.zeros(P, dtype=np.int64) if point_colors is None else np.asarray(point_colors, dtype=np.int64)
    lc = np.zeros(L, dtype=np.int64) if line_colors is None else np.asarray(line_colors, dtype=np.int64)
    if sides:
        return np.concatenate([pc, lc + (int(pc.max()) + 1 if P else 0)])
    return np.concatenate([pc, lc])


def _deadline(seconds):
    return None if seconds is None else time.monotonic() + seconds


@dataclass
class AutomorphismGroup:
    """Automorphisms preserving ``colors`` (a chain), plus an optional duality.

    ``duality`` is a vertex permutation swapping points and lines; when present
    the full incidence-graph group is the chain group extended by it, of twice
    the order.
    """

    geometry: IncidenceGeometry
    colors: np.ndarray
    chain: Chain
    graph: Graph = field(repr=False)
    duality: np.ndarray | None = None

    @property
    def order(self) -> int:
        return self.chain.order * (2 if self.duality is not None else 1)

    @property
    def geometry_order(self) -> int:
        """Order of the group of incidence-preserving point/line permutations."""
        return self.chain.order

    @property
    def generators(self) -> list[np.ndarray]:
        return list(self.chain.generators) + ([self.duality] if self.duality is not None else [])

    @property
    def n_points(self) -> int:
        return self.geometry.n_points

    def is_duality(self, g: np.ndarray) -> bool:
        return bool(len(g) and g[0] >= self.n_points)

    @property
    def has_dualities(self) -> bool:
        return self.duality is not None

    @property
    def verified(self) -> bool:
        ok = self.chain.verified
        if self.duality is not None:
            ok = ok and self.graph.is_automorphism(self.duality)
        return ok

    def generator_pairs(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """Generators of the geometry automorphisms as (point permutation, line permutation)."""
        P = self.n_points
        return [(g[:P], g[P:] - P) for g in self.chain.generators]

    def elements(self, limit: int = 500_000) -> np.ndarray:
        """Geometry automorphisms as vertex permutations (identity first); dualities excluded."""
        return self.chain.elements(limit)

    def action(self, max_order: int = 4096) -> GeometryAction:
        """The geometry automorphisms as a GeometryAction (table built from the generators)."""
        gens = self.chain.generators or [np.arange(self.geometry.n_vertices)]
        G, perms = group_from_permutations(gens, max_order=max_order, name="Aut")
        assert G.n == self.chain.order
        P = self.n_points
        return GeometryAction(G, perms[:, :P].astype(np.int64), perms[:, P:].astype(np.int64) - P)

    @cached_property
    def canonical(self):
        elems = None
        if self.chain.order * self.graph.n <= ELEMENT_PRUNING_LIMIT:
            elems = self.elements()
        return canonical_labeling(self.graph, self.colors, chain=self.chain, elements=elems)


def colored_automorphisms(
    geo: IncidenceGeometry,
    point_colors=None,
    line_colors=None,
    sides: bool = True,
    seconds: float | None = None,
    deadline: float | None = None,
) -> AutomorphismGroup:
    g = incidence_graph(geo)
    colors = vertex_colors(geo, point_colors, line_colors, sides)
    chain = automorphism_chain(g, colors, deadline if deadline is not None else _deadline(seconds))
    return AutomorphismGroup(geo, colors, chain, g)


def automorphism_group(geo: IncidenceGeometry, seconds: float | None = None) -> AutomorphismGroup:
    """Automorphisms of the incidence graph, dualities included when the geometry is self-dual.

    The geometry automorphisms come from a run with points and lines coloured
    apart; a duality, if any, is an isomorphism onto the dual geometry.
    """
    aut = colored_automorphisms(geo, seconds=seconds)
    if geo.n_points == geo.n_lines:
        iso = geometry_isomorphic(geo, dual(geo))
        if iso is not None:
            P = geo.n_points
            aut.duality = np.concatenate([iso.point_map + P, iso.line_map])
            assert aut.graph.is_automorphism(aut.duality)
    return aut


def geometry_automorphisms(geo: IncidenceGeometry, seconds: float | None = None) -> AutomorphismGroup:
    return colored_automorphisms(geo, seconds=seconds)


def _distinct(n: int, special) -> np.ndarray:
    c = np.zeros(n, dtype=np.int64)
    for k, v in enumerate(special, start=1):
        c[v] = k
    return c


def stabilizer(geo: IncidenceGeometry, points=(), lines=(), deadline=None) -> AutomorphismGroup:
    """Automorphisms fixing each listed point and line."""
    return colored_automorphisms(geo, _distinct(geo.n_points, points), _distinct(geo.n_lines, lines), deadline=deadline)


def line_fixing_kernel(geo: IncidenceGeometry, x: int, deadline=None) -> GeometryAction:
    """Automorphisms fixing x and every line through x, as a GeometryAction."""
    return stabilizer(geo, [x], geo.point_lines[x], deadline=deadline).action()


# -- canonical forms and isomorphism -----------------------------------------------------------


@dataclass
class CanonicalForm:
    text: str
    labeling: np.ndarray  # vertex -> canonical vertex

    @property
    def hash(self) -> str:
        return f"{fnv1a64(self.text.encode()):016x}"


def canonical_form(geo: IncidenceGeometry, marked_points=(), marked_lines=(), aut: AutomorphismGroup | None = None) -> CanonicalForm:
    """Canonical .geo text: isomorphic geometries (respecting marks) get identical text."""
    if aut is None:
        aut = colored_automorphisms(geo, _distinct(geo.n_points, marked_points), _distinct(geo.n_lines, marked_lines))
    lab = aut.canonical.labeling
    P = geo.n_points
    lines = sorted(tuple(sorted(int(lab[p]) for p in line)) for line in geo.lines)
    out = [f"geometry {P} {geo.n_lines}"] + [" ".join(map(str, ln)) for ln in lines]
    out += [f"mark point {int(lab[p])}" for p in marked_points]
    out += [f"mark line {int(lab[P + j]) - P}" for j in marked_lines]
    return CanonicalForm("\n".join(out) + "\n", lab)


def canonical_hash(geo: IncidenceGeometry) -> str:
    return canonical_form(geo).hash


@dataclass
class GeometryIsomorphism:
    point_map: np.ndarray
    line_map: np.ndarray

    def vertex_map(self) -> np.ndarray:
        return np.concatenate([self.point_map, self.line_map + len(self.point_map)])


def is_isomorphism(g1: IncidenceGeometry, g2: IncidenceGeometry, iso: GeometryIsomorphism) -> bool:
    if len(np.unique(iso.point_map)) != g1.n_points or len(np.unique(iso.line_map)) != g1.n_lines:
        return False
    N1, N2 = g1.incidence, g2.incidence
    return bool((N2[np.ix_(iso.point_map, iso.line_map)] == N1).all())


def geometry_isomorphic(
    g1: IncidenceGeometry,
    g2: IncidenceGeometry,
    marks1=((), ()),
    marks2=((), ()),
) -> GeometryIsomorphism | None:
    """Explicit isomorphism g1 -> g2 (sending marks1 to marks2 in order) or None."""
    if (g1.n_points, g1.n_lines) != (g2.n_points, g2.n_lines):
        return None
    if sorted(map(len, g1.lines)) != sorted(map(len, g2.lines)):
        return None
    c1 = canonical_form(g1, *marks1)
    c2 = canonical_form(g2, *marks2)
    if c1.text != c2.text:
        return None
    v = leaf_map(c1.labeling, c2.labeling)
    P = g1.n_points
    iso = GeometryIsomorphism(v[:P], v[P:] - P)
    if not is_isomorphism(g1, g2, iso):  # pragma: no cover - equal canonical forms guarantee this
        raise AssertionError("canonical forms agree but the induced map is not an isomorphism")
    return iso


def random_relabeling(geo: IncidenceGeometry, rng: np.random.Generator) -> tuple[IncidenceGeometry, GeometryIsomorphism]:
    pp = rng.permutation(geo.n_points)
    lp = rng.permutation(geo.n_lines)
    return geo.relabel(pp, lp), GeometryIsomorphism(pp, lp)
