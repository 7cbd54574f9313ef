"""Group isomorphism and automorphism enumeration by generator-image backtracking."""

from __future__ import annotations

from collections import Counter

import numpy as np

from .groups import GroupTable, generating_set


def _profile(G: GroupTable, g: int) -> tuple:
    return (int(G.element_orders[g]), int(G.class_sizes[g]))


def invariant_mismatch(G: GroupTable, H: GroupTable) -> str | None:
    """Name the first invariant that separates G and H, or None."""
    if G.n != H.n:
        return "order"
    if G.exponent != H.exponent:
        return "exponent"
    if Counter(G.element_orders.tolist()) != Counter(H.element_orders.tolist()):
        return "order statistics"
    if len(G.center) != len(H.center):
        return "center size"
    if len(G.derived_subgroup) != len(H.derived_subgroup):
        return "derived subgroup size"
    if G.invariant_key() != H.invariant_key():
        return "class-size census"
    return None


def _extend(G, H, gens, images, depth):
    """Extend the partial map on <gens[:depth]> by breadth-first words; None on conflict."""
    phi = np.full(G.n, -1, dtype=np.int64)
    phi[0] = 0
    used = np.zeros(H.n, dtype=bool)
    used[0] = True
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g, img in zip(gens[:depth], images[:depth]):
                y = int(G.mul[x, g])
                iy = int(H.mul[phi[x], img])
                if phi[y] < 0:
                    if used[iy]:
                        return None
                    phi[y] = iy
                    used[iy] = True
                    nxt.append(y)
                elif phi[y] != iy:
                    return None
        frontier = nxt
    return phi


def _is_isomorphism(G, H, phi) -> bool:
    if (phi < 0).any() or len(np.unique(phi)) != G.n:
        return False
    return bool((phi[G.mul] == H.mul[phi[:, None], phi[None, :]]).all())


def _search(G: GroupTable, H: GroupTable, find_all: bool, limit: int | None = None):
    gens = generating_set(G)
    cand = []
    for g in gens:
        prof = _profile(G, g)
        cand.append([h for h in range(H.n) if _profile(H, h) == prof])
    images: list[int] = [0] * len(gens)
    found = []

    def rec(depth):
        if depth == len(gens):
            phi = _extend(G, H, gens, images, depth)
            if phi is not None and _is_isomorphism(G, H, phi):
                found.append(phi)
                return not find_all or (limit is not None and len(found) >= limit)
            return False
        for h in cand[depth]:
            images[depth] = h
            if _extend(G, H, gens, images, depth + 1) is None:
                continue
            if rec(depth + 1):
                return True
        return False

    rec(0)
    return found


def groups_isomorphic(G: GroupTable, H: GroupTable) -> np.ndarray | None:
    """An explicit isomorphism (phi[g] = image of g) or None."""
    if invariant_mismatch(G, H) is not None:
        return None
    found = _search(G, H, find_all=False)
    return found[0] if found else None


def automorphisms(G: GroupTable, limit: int | None = None) -> np.ndarray:
    """All automorphisms of G as rows of an index array (identity first)."""
    found = _search(G, G, find_all=True, limit=limit)
    arr = np.array(found, dtype=np.int32)
    ident = np.arange(G.n)
    order = np.lexsort(arr.T[::-1])
    arr = arr[order]
    # identity is lexicographically least
    assert (arr[0] == ident).all()
    return arr
