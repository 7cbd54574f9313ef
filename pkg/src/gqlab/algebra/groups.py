"""Finite groups as explicit multiplication tables.

Element 0 is always the identity.  ``G.mul[a, b]`` is the index of ``a*b``.
Tables are small (orders up to a few thousand), so most derived data is
computed by vectorised brute force and cached on the instance.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from ..errors import (
    NoIdentity,
    NoInverse,
    NotAssociative,
    NotNormal,
    SizeBudgetExceeded,
    GroupTableError,
)
from .field import prime_power

MAX_GROUP_ORDER = 4096
FULL_ASSOCIATIVITY_LIMIT = 128


class GroupTable:
    """A validated finite group.

    Use :func:`group_from_table` to build one from untrusted data; the
    constructor itself trusts its input.
    """

    def __init__(self, mul, labels: Sequence[str] | None = None, name: str = "", coords=None, field=None):
        mul = np.ascontiguousarray(mul, dtype=np.int32)
        mul.setflags(write=False)
        self.mul = mul
        self.n = int(mul.shape[0])
        inv = np.argmin(mul, axis=1).astype(np.int32)  # position of identity in each row
        inv.setflags(write=False)
        self.inv = inv
        self.labels = list(labels) if labels is not None else None
        self.name = name
        # optional coordinates over a field (Heisenberg groups); used by commutator_form
        self.coords = coords
        self.field = field

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"GroupTable(n={self.n}{', ' + self.name if self.name else ''})"

    @property
    def order(self) -> int:
        return self.n

    @property
    def identity(self) -> int:
        return 0

    def op(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = int(self.inv[a]), -k
        r = 0
        for _ in range(k):
            r = self.mul[r, a]
        return int(r)

    def commutator(self, a: int, b: int) -> int:
        """[a, b] = a^-1 b^-1 a b."""
        m = self.mul
        return int(m[m[self.inv[a], self.inv[b]], m[a, b]])

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)

    # -- cached invariants -------------------------------------------------

    @cached_property
    def element_orders(self) -> np.ndarray:
        orders = np.zeros(self.n, dtype=np.int64)
        cur = np.arange(self.n)
        k = 1
        while (orders == 0).any():
            hit = (cur == 0) & (orders == 0)
            orders[hit] = k
            cur = self.mul[cur, np.arange(self.n)]
            k += 1
        orders.setflags(write=False)
        return orders

    @cached_property
    def exponent(self) -> int:
        return int(np.lcm.reduce(self.element_orders))

    @cached_property
    def is_abelian(self) -> bool:
        return bool((self.mul == self.mul.T).all())

    @cached_property
    def conjugation(self) -> np.ndarray:
        """conj[h, g] = h^-1 g h."""
        if self.n > 2048:
            raise SizeBudgetExceeded("conjugation table beyond order 2048")
        m, ar = self.mul, np.arange(self.n)
        return m[m[self.inv[:, None], ar[None, :]], ar[:, None]]

    @cached_property
    def class_sizes(self) -> np.ndarray:
        conj = self.conjugation
        srt = np.sort(conj, axis=0)
        sizes = 1 + (np.diff(srt, axis=0) != 0).sum(axis=0)
        sizes.setflags(write=False)
        return sizes

    @cached_property
    def center(self) -> "SubgroupSet":
        members = np.nonzero((self.mul == self.mul.T).all(axis=0))[0]
        return SubgroupSet(self, frozenset(int(x) for x in members))

    @cached_property
    def derived_subgroup(self) -> "SubgroupSet":
        m = self.mul
        comms = m[m[self.inv[:, None], self.inv[None, :]], m]
        return subgroup_generated(self, np.unique(comms))

    @cached_property
    def frattini(self) -> "SubgroupSet":
        pp = prime_power(self.n) if self.n > 1 else None
        if self.n == 1:
            return SubgroupSet(self, frozenset({0}))
        if pp is not None:
            p = pp[0]
            powers = np.arange(self.n)
            cur = powers
            for _ in range(p - 1):
                cur = self.mul[cur, powers]
            return subgroup_generated(self, set(self.derived_subgroup.members) | set(int(x) for x in cur))
        return frattini_by_maximal(self)

    def invariant_key(self) -> tuple:
        """Cheap isomorphism invariant used to bucket candidate groups."""
        orders = self.element_orders
        census = Counter(zip(orders.tolist(), self.class_sizes.tolist()))
        sq = self.mul[np.arange(self.n), np.arange(self.n)]
        sq_census = Counter(zip(orders.tolist(), orders[sq].tolist()))
        return (
            self.n,
            tuple(sorted(census.items())),
            tuple(sorted(sq_census.items())),
            len(self.center),
            len(self.derived_subgroup),
        )


@dataclass(frozen=True)
class SubgroupSet:
    """A subgroup of ``parent`` given by its member indices."""

    parent: GroupTable = field(repr=False, compare=False, hash=False)
    members: frozenset

    def __len__(self):
        return len(self.members)

    def __contains__(self, g):
        return g in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    @property
    def order(self):
        return len(self.members)

    @property
    def elements(self) -> tuple:
        return tuple(sorted(self.members))

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.n, dtype=bool)
        m[list(self.members)] = True
        return m

    @cached_property
    def bits(self) -> int:
        b = 0
        for x in self.members:
            b |= 1 << x
        return b

    def is_subgroup_of(self, other: "SubgroupSet") -> bool:
        return self.members <= other.members

    def __le__(self, other):
        return self.members <= other.members

    def intersection(self, other: "SubgroupSet") -> "SubgroupSet":
        return SubgroupSet(self.parent, self.members & other.members)

    def is_normal(self) -> bool:
        return normality_witness(self.parent, self) is None

    def as_group(self) -> tuple[GroupTable, np.ndarray]:
        """The subgroup as its own GroupTable plus the embedding (index map)."""
        elems = np.array(self.elements)
        pos = np.full(self.parent.n, -1)
        pos[elems] = np.arange(len(elems))
        table = pos[self.parent.mul[elems[:, None], elems[None, :]]]
        return GroupTable(table, name=f"sub({self.parent.name})"), elems


def subgroup_generated(G: GroupTable, gens: Iterable[int]) -> SubgroupSet:
    """Least subgroup containing ``gens`` (closure under right multiplication)."""
    gens = np.unique(np.asarray(list(gens), dtype=np.int64))
    gens = gens[gens != 0]
    seen = np.zeros(G.n, dtype=bool)
    seen[0] = True
    frontier = np.array([0])
    while len(gens) and len(frontier):
        nxt = np.unique(G.mul[frontier[:, None], gens[None, :]].ravel())
        nxt = nxt[~seen[nxt]]
        seen[nxt] = True
        frontier = nxt
    return SubgroupSet(G, frozenset(np.nonzero(seen)[0].tolist()))


def normality_witness(G: GroupTable, N: SubgroupSet):
    """Return (g, n) with g^-1 n g outside N, or None when N is normal."""
    elems = np.array(N.elements)
    conj = G.mul[G.mul[G.inv[:, None], elems[None, :]], np.arange(G.n)[:, None]]
    bad = ~N.mask[conj]
    if bad.any():
        g, j = np.argwhere(bad)[0]
        return int(g), int(elems[j])
    return None


def normalizer(G: GroupTable, H: SubgroupSet) -> SubgroupSet:
    elems = np.array(H.elements)
    conj = G.mul[G.mul[G.inv[:, None], elems[None, :]], np.arange(G.n)[:, None]]
    ok = H.mask[conj].all(axis=1)
    return SubgroupSet(G, frozenset(np.nonzero(ok)[0].tolist()))


def _check_square(table) -> np.ndarray:
    t = np.asarray(table)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise GroupTableError("multiplication table must be a non-empty square array")
    n = t.shape[0]
    if n > MAX_GROUP_ORDER:
        raise SizeBudgetExceeded(f"group order {n} exceeds {MAX_GROUP_ORDER}")
    t = t.astype(np.int64)
    if t.min() < 0 or t.max() >= n:
        raise GroupTableError("table entries out of range")
    return t


def _magma_generators(t: np.ndarray) -> list[int]:
    """Greedy set whose closure under the (possibly non-associative) product is everything."""
    n = t.shape[0]
    seen = np.zeros(n, dtype=bool)
    gens: list[int] = []
    for cand in range(n):
        if seen[cand]:
            continue
        gens.append(cand)
        seen[cand] = True
        frontier = np.nonzero(seen)[0]
        while True:
            idx = np.nonzero(seen)[0]
            g = np.array(gens)
            prods = np.concatenate([t[idx[:, None], g[None, :]].ravel(), t[g[:, None], idx[None, :]].ravel()])
            new = np.unique(prods[~seen[prods]])
            if not len(new):
                break
            seen[new] = True
        if seen.all():
            break
    return gens


def group_from_table(table, labels: Sequence[str] | None = None, name: str = "") -> GroupTable:
    """Validate a multiplication table and relabel so that the identity is 0.

    Raises NoIdentity, NoInverse or NotAssociative with a witness.
    """
    t = _check_square(table)
    n = t.shape[0]
    ar = np.arange(n)
    ids = np.nonzero((t == ar[None, :]).all(axis=1) & (t == ar[:, None]).all(axis=0))[0]
    if not len(ids):
        raise NoIdentity("no two-sided identity element")
    e = int(ids[0])
    if e != 0:
        perm = ar.copy()
        perm[[0, e]] = [e, 0]  # perm[new] = old
        pos = np.argsort(perm)
        t = pos[t[perm[:, None], perm[None, :]]]
        if labels is not None:
            labels = [labels[i] for i in perm]
    # every row and column must be a permutation (Latin square) for inverses to exist
    for axis in (0, 1):
        srt = np.sort(t, axis=axis)
        ok = (srt == (ar[:, None] if axis == 0 else ar[None, :])).all(axis=axis)
        if not ok.all():
            g = int(np.nonzero(~ok)[0][0])
            raise NoInverse(f"element {g} has no inverse", witness=g)
    if n <= FULL_ASSOCIATIVITY_LIMIT:
        bs = range(n)
    else:
        bs = _magma_generators(t)
    for b in bs:
        lhs = t[t[:, b][:, None], ar[None, :]]
        rhs = t[ar[:, None], t[b, :][None, :]]
        bad = lhs != rhs
        if bad.any():
            a, c = np.argwhere(bad)[0]
            raise NotAssociative("table is not associative", witness=(int(a), int(b), int(c)))
    return GroupTable(t, labels=labels, name=name)


def group_from_permutations(gens: Sequence[np.ndarray], max_order: int = MAX_GROUP_ORDER, name: str = ""):
    """Closure of permutation generators.

    Returns ``(G, perms)`` where ``perms[i]`` is the permutation of element i.
    The product ``a*b`` means "apply a, then b", i.e. perms[a*b] = perms[b][perms[a]].
    """
    gens = [np.asarray(g, dtype=np.int32) for g in gens]
    if not gens:
        raise ValueError("need at least one generator (pass the identity for the trivial group)")
    deg = len(gens[0])
    ident = np.arange(deg, dtype=np.int32)
    elems = [ident]
    index = {ident.tobytes(): 0}
    parent = [(-1, -1)]
    i = 0
    while i < len(elems):
        for k, g in enumerate(gens):
            prod = g[elems[i]]
            key = prod.tobytes()
            if key not in index:
                if len(elems) >= max_order:
                    raise SizeBudgetExceeded(f"permutation group larger than {max_order}")
                index[key] = len(elems)
                elems.append(prod)
                parent.append((i, k))
        i += 1
    perms = np.array(elems, dtype=np.int32)
    n = len(elems)
    right = np.empty((len(gens), n), dtype=np.int32)
    for k, g in enumerate(gens):
        imgs = g[perms]
        right[k] = [index[row.tobytes()] for row in imgs]
    table = np.empty((n, n), dtype=np.int32)
    table[:, 0] = np.arange(n)
    for j in range(1, n):
        pj, k = parent[j]
        table[:, j] = right[k][table[:, pj]]
    perms.setflags(write=False)
    return GroupTable(table, name=name), perms


# -- small constructors ---------------------------------------------------------


def cyclic(n: int) -> GroupTable:
    ar = np.arange(n)
    return GroupTable((ar[:, None] + ar[None, :]) % n, name=f"C{n}")


def direct_product(G: GroupTable, H: GroupTable, name: str = "") -> GroupTable:
    a = np.arange(G.n)[:, None, None, None]
    b = np.arange(H.n)[None, :, None, None]
    c = np.arange(G.n)[None, None, :, None]
    d = np.arange(H.n)[None, None, None, :]
    table = G.mul[a, c] * H.n + H.mul[b, d]
    table = table.reshape(G.n * H.n, G.n * H.n)
    return GroupTable(table, name=name or f"{G.name}x{H.name}")


def semidirect_product(N: GroupTable, K: GroupTable, action: np.ndarray, name: str = "") -> GroupTable:
    """N x| K with (n1,k1)(n2,k2) = (n1 * action[k1][n2], k1 k2).

    ``action[k]`` is an automorphism of N (as an index permutation) and
    k -> action[k] must be a homomorphism; the result is validated.
    """
    action = np.asarray(action)
    n1 = np.arange(N.n)[:, None, None, None]
    k1 = np.arange(K.n)[None, :, None, None]
    n2 = np.arange(N.n)[None, None, :, None]
    k2 = np.arange(K.n)[None, None, None, :]
    table = N.mul[n1, action[k1, n2]] * K.n + K.mul[k1, k2]
    table = table.reshape(N.n * K.n, N.n * K.n)
    return group_from_table(table, name=name)


# -- derived subgroups and quotients -------------------------------------------


def center(G: GroupTable) -> SubgroupSet:
    return G.center


def derived_subgroup(G: GroupTable) -> SubgroupSet:
    return G.derived_subgroup


def frattini(G: GroupTable) -> SubgroupSet:
    return G.frattini


def is_elementary_abelian(G: GroupTable, H: SubgroupSet | None = None) -> bool:
    elems = np.array(H.elements if H is not None else range(G.n))
    sub = G.mul[elems[:, None], elems[None, :]]
    if not (sub == sub.T).all():
        return False
    orders = G.element_orders[elems]
    if len(elems) == 1:
        return True
    pp = prime_power(len(elems))
    return pp is not None and set(orders.tolist()) <= {1, pp[0]}


@dataclass(frozen=True)
class Quotient:
    group: GroupTable
    projection: np.ndarray  # element of G -> coset index
    representatives: tuple  # coset index -> least element of the coset


def quotient_group(G: GroupTable, N: SubgroupSet) -> Quotient:
    wit = normality_witness(G, N)
    if wit is not None:
        raise NotNormal(f"subgroup is not normal: conjugating {wit[1]} by {wit[0]} leaves it", witness=wit)
    elems = np.array(N.elements)
    proj = np.full(G.n, -1, dtype=np.int64)
    reps = []
    for g in range(G.n):
        if proj[g] < 0:
            proj[G.mul[g, elems]] = len(reps)
            reps.append(g)
    reps_a = np.array(reps)
    table = proj[G.mul[reps_a[:, None], reps_a[None, :]]]
    labels = [f"{G.label(r)}N" for r in reps]
    Q = GroupTable(table, labels=labels, name=f"{G.name}/N")
    return Quotient(Q, proj, tuple(reps))


# -- maximal subgroups and Frattini ---------------------------------------------


def elementary_abelian_coordinates(G: GroupTable, Phi: SubgroupSet):
    """Coordinates of G/Phi over GF(p) when that quotient is elementary abelian.

    Returns (p, basis, coords) with coords[g] the vector of g modulo Phi.
    """
    Q = quotient_group(G, Phi)
    q = Q.group
    if q.n == 1:
        return None, [], np.zeros((G.n, 0), dtype=np.int64)
    pp = prime_power(q.n)
    if pp is None or not is_elementary_abelian(q):
        raise GroupTableError("quotient is not elementary abelian")
    p, d = pp
    basis: list[int] = []
    span = np.zeros(q.n, dtype=bool)
    span[0] = True
    vec = {0: ()}
    for cand in range(q.n):
        if span[cand]:
            continue
        basis.append(cand)
        new_vec = {}
        for x, v in vec.items():
            cur = x
            for c in range(p):
                new_vec[cur] = v + (c,)
                cur = int(q.mul[cur, cand])
        vec = new_vec
        span[:] = False
        span[list(vec)] = True
        if len(basis) == d:
            break
    qcoords = np.array([vec[x] for x in range(q.n)], dtype=np.int64)
    coords = qcoords[Q.projection]
    return p, [Q.representatives[b] for b in basis], coords


def maximal_subgroups(G: GroupTable) -> list[SubgroupSet]:
    """Maximal subgroups; hyperplane method for p-groups, lattice scan otherwise."""
    if G.n == 1:
        return []
    pp = prime_power(G.n)
    if pp is None:
        return maximal_subgroups_bruteforce(G)
    p, _, coords = elementary_abelian_coordinates(G, G.frattini)
    d = coords.shape[1]
    result = []
    seen = set()
    for func in np.ndindex(*([p] * d)):
        f = np.array(func)
        if not f.any():
            continue
        nz = np.nonzero(f)[0][0]
        if f[nz] != 1:  # one functional per projective class
            continue
        members = np.nonzero((coords @ f) % p == 0)[0]
        key = frozenset(members.tolist())
        if key not in seen:
            seen.add(key)
            result.append(SubgroupSet(G, key))
    return sorted(result, key=lambda H: H.elements)


def maximal_subgroups_bruteforce(G: GroupTable) -> list[SubgroupSet]:
    """Literal definition: proper subgroups not properly contained in another proper one."""
    from ..search import enumerate_subgroups

    subs = [H for H in enumerate_subgroups(G) if len(H) < G.n]
    maximal = [H for H in subs if not any(H.members < K.members for K in subs)]
    return sorted(maximal, key=lambda H: H.elements)


def frattini_by_maximal(G: GroupTable, maximal: list[SubgroupSet] | None = None) -> SubgroupSet:
    maximal = maximal_subgroups_bruteforce(G) if maximal is None else maximal
    members = frozenset(range(G.n))
    for M in maximal:
        members &= M.members
    return SubgroupSet(G, members)


# -- special p-groups ---------------------------------------------------------------


@dataclass
class SpecialGroupReport:
    clauses: dict

    @property
    def ok(self) -> bool:
        return all(v for v in self.clauses.values() if v is not None)

    def failed(self) -> list[str]:
        return [k for k, v in self.clauses.items() if v is False]

    def __bool__(self):
        return self.ok


def is_special_pgroup(G: GroupTable, q: int, check_order: bool = True) -> SpecialGroupReport:
    """Check Z = Phi = [G,G], elementary abelian of order q (and |G| = q^5 if asked)."""
    Z, Phi, D = G.center, G.frattini, G.derived_subgroup
    pp = prime_power(G.n)
    clauses = {
        "p_group": pp is not None,
        "center_eq_frattini": Z.members == Phi.members,
        "center_eq_derived": Z.members == D.members,
        "center_elementary_abelian": is_elementary_abelian(G, Z),
        "center_order_q": len(Z) == q,
        "order_q5": (G.n == q**5) if check_order else None,
    }
    return SpecialGroupReport(clauses)


def nilpotency_class_two(G: GroupTable) -> bool:
    """True iff G is nonabelian and G/Z(G) is abelian."""
    if G.is_abelian:
        return False
    Q = quotient_group(G, G.center).group
    return Q.is_abelian


def sylow_subgroup(G: GroupTable, p: int) -> SubgroupSet:
    """A Sylow p-subgroup, grown one step at a time inside normalizers."""
    n = G.n
    target = 1
    while n % (target * p) == 0:
        target *= p
    P = SubgroupSet(G, frozenset({0}))
    orders = G.element_orders
    while len(P) < target:
        N = normalizer(G, P)
        grown = None
        for g in N.elements:
            if g in P.members:
                continue
            o = int(orders[g])
            if _is_p_power(o, p):
                cand = subgroup_generated(G, set(P.members) | {g})
                if _is_p_power(len(cand), p):
                    grown = cand
                    break
        if grown is None:
            raise AssertionError("Sylow growth failed")  # pragma: no cover
        P = grown
    return P


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def order_statistics(G: GroupTable) -> dict:
    return dict(sorted(Counter(G.element_orders.tolist()).items()))


def generating_set(G: GroupTable, elements: Iterable[int] | None = None) -> list[int]:
    """Greedy small generating set, preferring elements of large order and small class."""
    cands = list(range(1, G.n)) if elements is None else [e for e in elements if e != 0]
    cands.sort(key=lambda g: (-int(G.element_orders[g]), int(G.class_sizes[g]) if G.n <= 2048 else 0, g))
    gens: list[int] = []
    H = SubgroupSet(G, frozenset({0}))
    target = G.n if elements is None else len(subgroup_generated(G, cands))
    for g in cands:
        if len(H) == target:
            break
        if g not in H.members:
            gens.append(g)
            H = subgroup_generated(G, gens)
    return gens


def log_p(n: int, p: int) -> int:
    return int(round(math.log(n, p))) if n > 1 else 0
