"""Exhaustive searches: subgroups, Kantor families, elation groups.

Every search is complete or raises :class:`BudgetExceeded` carrying the
partial results, so nothing downstream can silently rest on a truncated run.
"""

from __future__ import annotations

import itertools
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .algebra.field import prime_power
from .algebra.groups import (
    GroupTable,
    SubgroupSet,
    group_from_permutations,
    maximal_subgroups,
    subgroup_generated,
    sylow_subgroup,
)
from .algebra.iso import automorphisms, groups_isomorphic
from .errors import BudgetExceeded


@dataclass
class SearchBudget:
    max_subgroups: int = 200_000
    max_candidates: int = 5_000_000
    seconds: float | None = None
    jobs: int = 1

    def __post_init__(self):
        if self.max_subgroups <= 0 or self.max_candidates <= 0 or self.jobs <= 0:
            raise ValueError("budget fields must be positive")
        if self.seconds is not None and self.seconds <= 0:
            raise ValueError("budget fields must be positive")

    @classmethod
    def from_env(cls, **kw) -> "SearchBudget":
        env = os.environ.get("GQLAB_BUDGET_SECONDS")
        if env and "seconds" not in kw:
            kw["seconds"] = float(env)
        return cls(**kw)

    def deadline(self) -> float | None:
        return None if self.seconds is None else time.monotonic() + self.seconds


def _check_time(deadline, partial=None):
    if deadline is not None and time.monotonic() > deadline:
        raise BudgetExceeded("search exceeded its time budget", partial)


# -- subgroups ------------------------------------------------------------------------------


def _conjugacy_key(G: GroupTable, H: SubgroupSet) -> tuple:
    el = np.array(H.elements)
    conj = np.sort(G.conjugation[:, el], axis=1)
    rows = {tuple(r) for r in conj.tolist()}
    return min(rows)


def enumerate_subgroups(
    G: GroupTable,
    order: int | None = None,
    up_to_conjugacy: bool = False,
    budget: SearchBudget | None = None,
) -> list[SubgroupSet]:
    """All subgroups (of the given order), sorted by (size, members).

    Bottom-up closure extension: every subgroup K != 1 is <H, g> for a maximal
    subgroup H of K, so extending each found subgroup by one element at a
    time reaches everything.  With a target order only subgroups whose order
    divides it are extended.
    """
    budget = budget or SearchBudget()
    deadline = budget.deadline()
    if order is not None and (order <= 0 or G.n % order):
        return []
    triv = SubgroupSet(G, frozenset({0}))
    found = {triv.members: triv}
    frontier = [triv]
    while frontier:
        nxt = []
        for H in frontier:
            _check_time(deadline, list(found.values()))
            if order is not None and len(H) == order:
                continue
            covered = H.mask.copy()
            el = np.array(H.elements)
            for g in range(G.n):
                if covered[g]:
                    continue
                covered[G.mul[el, g]] = True
                covered[G.mul[el, G.inv[g]]] = True
                K = subgroup_generated(G, list(H.members) + [g])
                if order is not None and order % len(K):
                    continue
                if K.members not in found:
                    found[K.members] = K
                    nxt.append(K)
                    if len(found) > budget.max_subgroups:
                        raise BudgetExceeded(f"more than {budget.max_subgroups} subgroups", list(found.values()))
        frontier = nxt
    subs = [H for H in found.values() if order is None or len(H) == order]
    if up_to_conjugacy:
        reps = {}
        for H in subs:
            reps.setdefault(_conjugacy_key(G, H), H)
        subs = list(reps.values())
    return sorted(subs, key=lambda H: (len(H), H.elements))


def pgroup_subgroups_of_order(G: GroupTable, order: int, within: SubgroupSet | None = None) -> list[SubgroupSet]:
    """Subgroups of the given order inside a p-subgroup ``within``, by descent through maximal subgroups."""
    top = within or SubgroupSet(G, frozenset(range(G.n)))
    if len(top) % order:
        return []
    level = {top.members: top}
    while True:
        size = len(next(iter(level.values())))
        if size == order:
            return sorted(level.values(), key=lambda H: H.elements)
        nxt = {}
        for H in level.values():
            sub, emb = H.as_group()
            for M in maximal_subgroups(sub):
                members = frozenset(int(emb[i]) for i in M.members)
                if members not in nxt:
                    nxt[members] = SubgroupSet(G, members)
        level = nxt


# -- Kantor families --------------------------------------------------------------------------------


@dataclass
class SearchResult:
    families: list
    complete: bool = True
    stats: dict = field(default_factory=dict)


def _bits(members) -> int:
    b = 0
    for x in members:
        if x:
            b |= 1 << x
    return b


class _KantorSearch:
    def __init__(self, G: GroupTable, s: int, t: int, budget: SearchBudget):
        self.G, self.s, self.t = G, s, t
        self.budget = budget
        small = enumerate_subgroups(G, s, budget=budget)
        star = enumerate_subgroups(G, s * t, budget=budget)
        # an E_i is only useful if some order-st subgroup contains it
        self.star = star
        self.cands = [A for A in small if any(A.members <= S.members for S in star)]
        self.bits = [_bits(A.members) for A in self.cands]
        self.star_bits = [_bits(S.members) for S in star]
        self._prod: dict = {}
        self.nodes = 0

    def prod(self, i: int, j: int) -> int:
        key = (i, j)
        if key not in self._prod:
            a = np.array(self.cands[i].elements)
            b = np.array(self.cands[j].elements)
            self._prod[key] = _bits(np.unique(self.G.mul[a[:, None], b[None, :]]).tolist())
        return self._prod[key]

    def compatible(self, chosen: list[int], c: int) -> bool:
        bc = self.bits[c]
        for i in chosen:
            if self.bits[i] & bc:
                return False
        for i, j in itertools.combinations(chosen, 2):
            if self.prod(i, j) & bc or self.prod(j, i) & bc:
                return False
        for i in chosen:
            for j in chosen:
                if i != j and (self.prod(i, c) & self.bits[j] or self.prod(c, i) & self.bits[j]):
                    return False
        return True

    def star_options(self, chosen: list[int]) -> list[list[int]]:
        opts = []
        for i in chosen:
            Ai = self.cands[i].members
            others = 0
            for j in chosen:
                if j != i:
                    others |= self.bits[j]
            opts.append([k for k, S in enumerate(self.star) if Ai <= S.members and not (self.star_bits[k] & others)])
        return opts

    def run(self, first_choices, deadline) -> list[tuple]:
        out = []
        k = self.t + 1

        def rec(chosen, start):
            self.nodes += 1
            if self.nodes % 256 == 0:
                _check_time(deadline, out)
                if self.nodes > self.budget.max_candidates:
                    raise BudgetExceeded("candidate budget exhausted", out)
            if len(chosen) == k:
                for stars in itertools.product(*self.star_options(chosen)):
                    out.append((tuple(chosen), stars))
                return
            for c in range(start, len(self.cands)):
                if self.compatible(chosen, c):
                    chosen.append(c)
                    rec(chosen, c + 1)
                    chosen.pop()

        for f in first_choices:
            rec([f], f + 1)
        return out


def _family_from(G, search: _KantorSearch, chosen, stars):
    from .constructions import make_kantor_family

    members = [(search.cands[i], search.star[k]) for i, k in zip(chosen, stars)]
    return make_kantor_family(G, members, name=G.name)


def _worker(args):
    G, s, t, budget, firsts = args
    ks = _KantorSearch(G, s, t, budget)
    return ks.run(firsts, budget.deadline()), ks.nodes


def family_image_key(family, phi: np.ndarray) -> tuple:
    return tuple(sorted((tuple(sorted(phi[list(a.members)].tolist())), tuple(sorted(phi[list(b.members)].tolist()))) for a, b in family.members))


def search_kantor_families(
    G: GroupTable,
    s: int,
    t: int,
    modulo_aut: bool = False,
    jobs: int = 1,
    budget: SearchBudget | None = None,
    aut_limit: int = 200_000,
) -> SearchResult:
    """All Kantor families of type (s, t) in G (one per Aut(G)-orbit when ``modulo_aut``).

    Members are built as an unordered set {E_0, ..., E_t} in increasing
    candidate order; every pair must meet trivially and every triple satisfy
    E_iE_j meets E_k trivially.  E_i* then ranges over order-st subgroups
    containing E_i and meeting the other members trivially.  Every emitted
    family is re-validated.
    """
    budget = budget or SearchBudget.from_env(jobs=jobs)
    if G.n != s * s * t or s < 1 or t < 1:
        return SearchResult([], True, {"reason": f"|G| = {G.n} != s^2 t = {s * s * t}"})
    deadline = budget.deadline()
    ks = _KantorSearch(G, s, t, budget)
    firsts = list(range(len(ks.cands)))
    jobs = max(1, jobs)
    if jobs == 1 or len(firsts) < 2:
        raw = ks.run(firsts, deadline)
        nodes = ks.nodes
    else:
        parts = [(G, s, t, budget, firsts[i::jobs]) for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_worker, parts))
        raw = [r for part, _ in results for r in part]
        nodes = sum(n for _, n in results)
    fams = [_family_from(G, ks, c, st) for c, st in raw]
    fams.sort(key=lambda f: f.key())
    stats = {"E_candidates": len(ks.cands), "star_candidates": len(ks.star), "nodes": nodes, "families": len(fams)}
    if modulo_aut and fams:
        auts = automorphisms(G, limit=aut_limit + 1)
        if len(auts) > aut_limit:
            raise BudgetExceeded(f"|Aut(G)| exceeds {aut_limit}; cannot reduce modulo automorphisms", fams)
        seen: set = set()
        reps = []
        for f in fams:
            k = f.key()
            if k in seen:
                continue
            reps.append(f)
            for phi in auts:
                seen.add(family_image_key(f, phi))
        stats["aut_order"] = len(auts)
        stats["orbits"] = len(reps)
        fams = reps
    return SearchResult(fams, True, stats)


# -- elation groups ----------------------------------------------------------------------------


@dataclass
class ElationSearchResult:
    point: int
    order: tuple
    kernel_order: int
    candidates: int
    groups: list  # list of GeometryAction, one per subgroup found
    classes: list  # list of lists of indices into ``groups``, grouped by abstract isomorphism
    complete: bool = True


def search_elation_groups(geo, x: int, jobs: int = 1, budget: SearchBudget | None = None) -> ElationSearchResult:
    """Elation groups about x, up to conjugacy in the line-fixing stabiliser of x.

    The kernel K (automorphisms fixing x and each line on x) is computed
    exactly; when s^2 t is a power of p the subgroups of that order are taken
    inside one Sylow p-subgroup of K, which meets every K-conjugacy class of
    such subgroups.  Each candidate is tested with is_elation_action.
    """
    from .geometry import verify_gq
    from .symmetry.automorphisms import line_fixing_kernel
    from .symmetry.elation import is_elation_action

    budget = budget or SearchBudget.from_env(jobs=jobs)
    s, t = verify_gq(geo)
    target = s * s * t
    K = line_fixing_kernel(geo, x, deadline=budget.deadline())
    G, perms = K.group, K.vertex_perms()
    pp = prime_power(target)
    if pp is not None:
        P = sylow_subgroup(G, pp[0])
        subs = pgroup_subgroups_of_order(G, target, within=P)
    else:
        subs = enumerate_subgroups(G, target, budget=budget)
    groups = []
    for H in subs:
        act = K.restrict(H)
        if is_elation_action(geo, x, act).ok:
            groups.append(act)
    classes: list[list[int]] = []
    tables = [a.group for a in groups]
    for i, T in enumerate(tables):
        for cls in classes:
            if groups_isomorphic(tables[cls[0]], T) is not None:
                cls.append(i)
                break
        else:
            classes.append([i])
    return ElationSearchResult(x, (s, t), G.n, len(subs), groups, classes, True)
