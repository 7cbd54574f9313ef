"""Individualisation-refinement engine for small coloured graphs.

Everything here works on plain integer arrays:

* a graph is an undirected edge list over vertices ``0..n-1``;
* a colouring is an integer array whose values are ordered colour classes;
* a permutation ``g`` maps vertex ``v`` to ``g[v]``.

Refinement is colour refinement (1-dimensional Weisfeiler-Leman) with colours
re-ranked by sorted signature, which makes every step label-invariant.  The
target cell is the first smallest non-singleton cell.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from ..errors import BudgetExceeded


class Graph:
    def __init__(self, n: int, edges):
        self.n = int(n)
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        self.edges = e
        self.src = np.concatenate([e[:, 0], e[:, 1]])
        self.dst = np.concatenate([e[:, 1], e[:, 0]])
        A = np.zeros((self.n, self.n), dtype=bool)
        A[self.src, self.dst] = True
        A.setflags(write=False)
        self.adj = A

    def is_automorphism(self, g: np.ndarray, colors: np.ndarray | None = None) -> bool:
        if len(g) != self.n or len(np.unique(g)) != self.n:
            return False
        if colors is not None and not (colors[g] == colors).all():
            return False
        return bool((self.adj[np.ix_(g, g)] == self.adj).all())


def rank(keys: np.ndarray) -> np.ndarray:
    _, inv = np.unique(keys, return_inverse=True)
    return inv.reshape(-1).astype(np.int64)


def refine(g: Graph, colors: np.ndarray) -> tuple[np.ndarray, bytes]:
    """Equitable refinement; returns (colours, invariant bytes)."""
    colors = rank(colors)
    k = int(colors.max()) + 1 if len(colors) else 0
    n = g.n
    while True:
        idx = g.src * k + colors[g.dst]
        counts = np.bincount(idx, minlength=n * k).reshape(n, k)
        sig = np.concatenate([colors[:, None], counts], axis=1)
        uniq, new = np.unique(sig, axis=0, return_inverse=True)
        if len(uniq) == k:
            return colors, np.int64(k).tobytes() + uniq.astype(np.int32).tobytes()
        colors = new.reshape(-1).astype(np.int64)
        k = len(uniq)


def individualize(colors: np.ndarray, v: int) -> np.ndarray:
    key = 2 * colors + 1
    key[v] -= 1
    return rank(key)


def target_cell(colors: np.ndarray) -> np.ndarray | None:
    sizes = np.bincount(colors)
    big = np.nonzero(sizes > 1)[0]
    if not len(big):
        return None
    c = big[np.argmin(sizes[big])]
    return np.nonzero(colors == c)[0]


def leaf_map(leaf_from: np.ndarray, leaf_to: np.ndarray) -> np.ndarray:
    """Permutation sending the vertex labelled l in leaf_from to the one labelled l in leaf_to."""
    return np.argsort(leaf_to)[leaf_from]


def orbit_reps(cell, gens: list[np.ndarray]):
    """First vertex of each orbit (under gens) meeting ``cell``, in cell order."""
    seen: set[int] = set()
    reps = []
    for x in cell:
        x = int(x)
        if x in seen:
            continue
        reps.append(x)
        stack = [x]
        seen.add(x)
        while stack:
            u = stack.pop()
            for h in gens:
                w = int(h[u])
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    return reps


def orbit_of(x: int, gens: list[np.ndarray]) -> list[int]:
    seen = {x}
    stack = [x]
    while stack:
        u = stack.pop()
        for h in gens:
            w = int(h[u])
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return sorted(seen)


def _fixing(gens, path):
    if not path:
        return list(gens)
    p = np.asarray(path)
    return [h for h in gens if (h[p] == p).all()]


@dataclass
class Chain:
    """Stabiliser chain read off the first path of the search tree."""

    n: int
    base: list[int]
    generators: list[np.ndarray]
    orbit_sizes: list[int]
    transversals: list[dict[int, np.ndarray]]
    first_leaf: np.ndarray
    path_invariants: list[bytes]
    nodes: int = 0
    verified: bool = False

    @property
    def order(self) -> int:
        o = 1
        for s in self.orbit_sizes:
            o *= s
        return o

    def elements(self, limit: int = 500_000) -> np.ndarray:
        """All group elements as rows; identity first."""
        if self.order > limit:
            raise BudgetExceeded(f"group of order {self.order} exceeds enumeration limit {limit}")
        E = np.arange(self.n, dtype=np.int32)[None, :]
        for T in reversed(self.transversals):
            reps = np.array([T[w] for w in sorted(T)], dtype=np.int32)
            E = reps[:, E].reshape(-1, self.n)
        ident = np.arange(self.n)
        pos = int(np.nonzero((E == ident).all(axis=1))[0][0])
        if pos:
            E[[0, pos]] = E[[pos, 0]]
        return E


class _Search:
    def __init__(self, g: Graph, colors0, deadline=None):
        self.g = g
        self.colors0 = rank(np.asarray(colors0))
        self.deadline = deadline
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.deadline is not None and (self.nodes & 63) == 1 and time.monotonic() > self.deadline:
            raise BudgetExceeded("automorphism search exceeded its time budget")

    def child(self, colors, v):
        self.tick()
        return refine(self.g, individualize(colors, v))


def automorphism_chain(g: Graph, colors0, deadline: float | None = None) -> Chain:
    """Generators and exact order of the colour-preserving automorphism group.

    For each level i of the first path and each w in the target cell not yet in
    the known orbit of the base point, the subtree under w is searched for a
    leaf equivalent to the first leaf.  Orbit sizes multiply to the order.
    """
    S = _Search(g, colors0, deadline)
    c, inv = refine(g, S.colors0)
    colors_path = [c]
    invs = [inv]
    cells = []
    base = []
    while True:
        cell = target_cell(c)
        if cell is None:
            break
        v = int(cell[0])
        cells.append(cell)
        base.append(v)
        c, inv = S.child(c, v)
        colors_path.append(c)
        invs.append(inv)
    leaf0 = c
    k = len(base)
    gens: list[np.ndarray] = []
    orbit_sizes = [1] * k
    transversals: list[dict[int, np.ndarray]] = [dict() for _ in range(k)]

    def descend(colors, depth, path):
        if depth == k:
            h = leaf_map(leaf0, colors)
            return h if g.is_automorphism(h, S.colors0) else None
        cell = target_cell(colors)
        local = _fixing(gens, path)
        for x in orbit_reps(cell, local):
            c2, inv2 = S.child(colors, x)
            if inv2 != invs[depth + 1]:
                continue
            h = descend(c2, depth + 1, path + [x])
            if h is not None:
                return h
        return None

    for level in range(k - 1, -1, -1):
        v = base[level]
        prefix = base[:level]
        for w in cells[level]:
            w = int(w)
            if w in orbit_of(v, gens):
                continue
            c2, inv2 = S.child(colors_path[level], w)
            if inv2 != invs[level + 1]:
                continue
            h = descend(c2, level + 1, prefix + [w])
            if h is not None:
                gens.append(h)
        # transversal: Schreier tree from v under generators fixing the prefix
        level_gens = _fixing(gens, prefix)
        T = {v: np.arange(g.n)}
        stack = [v]
        while stack:
            u = stack.pop()
            for h in level_gens:
                w = int(h[u])
                if w not in T:
                    T[w] = h[T[u]]
                    stack.append(w)
        transversals[level] = T
        orbit_sizes[level] = len(T)
    chain = Chain(g.n, base, gens, orbit_sizes, transversals, leaf0, invs, nodes=S.nodes)
    chain.verified = verify_chain(g, chain, S.colors0)
    if not chain.verified:
        raise AssertionError("stabiliser chain failed re-verification")  # pragma: no cover
    return chain


def verify_chain(g: Graph, chain: Chain, colors0) -> bool:
    """Every generator and coset representative preserves edges and colours."""
    for h in chain.generators:
        if not g.is_automorphism(h, colors0):
            return False
    for level, T in enumerate(chain.transversals):
        prefix = np.asarray(chain.base[:level], dtype=np.int64)
        v = chain.base[level]
        for w, h in T.items():
            if int(h[v]) != w or (len(prefix) and not (h[prefix] == prefix).all()):
                return False
            if not g.is_automorphism(h, colors0):
                return False
    return True


def _leaf_key(g: Graph, leaf: np.ndarray) -> bytes:
    e = leaf[g.edges]
    e.sort(axis=1)
    order = np.lexsort((e[:, 1], e[:, 0]))
    return e[order].astype(np.int32).tobytes()


@dataclass
class Canonical:
    labeling: np.ndarray  # vertex -> canonical label
    trace: tuple
    key: bytes
    leaves: int = 0


def canonical_labeling(
    g: Graph,
    colors0,
    chain: Chain | None = None,
    elements: np.ndarray | None = None,
    deadline: float | None = None,
) -> Canonical:
    """Least (trace, relabelled edge list) over all leaves of the search tree.

    Subtrees are pruned only when an automorphism fixing the current path maps
    one child onto another, so the result is exact.  With ``elements`` (the
    whole group) the pruning uses full path stabilisers; otherwise it uses the
    chain generators that happen to fix the path.
    """
    S = _Search(g, colors0, deadline)
    if chain is None:
        chain = automorphism_chain(g, colors0, deadline)
    gens = chain.generators
    best: dict = {"trace": None, "key": None, "leaf": None, "leaves": 0}
    c0, inv0 = refine(g, S.colors0)

    def children(colors, path):
        cell = target_cell(colors)
        if elements is not None:
            sub = elements
            if path:
                p = np.asarray(path)
                sub = elements[(elements[:, p] == p).all(axis=1)]
            reps, seen = [], set()
            for x in cell:
                x = int(x)
                if x in seen:
                    continue
                reps.append(x)
                seen.update(np.unique(sub[:, x]).tolist())
            return reps
        return orbit_reps(cell, _fixing(gens, path))

    def visit(colors, trace, path):
        tr = tuple(trace)
        if best["trace"] is not None and tr > best["trace"][: len(tr)]:
            return
        if target_cell(colors) is None:
            best["leaves"] += 1
            key = _leaf_key(g, colors)
            if best["trace"] is None or (tr, key) < (best["trace"], best["key"]):
                best.update(trace=tr, key=key, leaf=colors)
            return
        for x in children(colors, path):
            c2, inv2 = S.child(colors, x)
            visit(c2, trace + [inv2], path + [x])

    visit(c0, [inv0], [])
    return Canonical(best["leaf"], best["trace"], best["key"], best["leaves"])


def fnv1a64(data: bytes) -> int:
    h = 0xCBF29CE484222325
    for b in data:
        h ^= b
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h
