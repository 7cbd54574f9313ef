"""Bilinear forms over GF(q) and the commutator form of a class-two group."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import CenterNotElementaryAbelian, CenterNotFieldSized, NotClassTwo
from .field import FiniteField, field_create, prime_power
from .groups import GroupTable, elementary_abelian_coordinates, is_elementary_abelian


def field_rank(F: FiniteField, M: np.ndarray) -> int:
    """Rank by Gaussian elimination with the field tables."""
    A = [list(map(int, row)) for row in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    rank = 0
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if A[r][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = F.inv(A[rank][c])
        A[rank] = [F.mul(inv, x) for x in A[rank]]
        for r in range(rows):
            if r != rank and A[r][c]:
                f = A[r][c]
                A[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(A[r], A[rank])]
        rank += 1
    return rank


@dataclass(frozen=True)
class BilinearForm:
    field: FiniteField
    matrix: np.ndarray
    alternating: bool
    nonsingular: bool
    # element of G -> coordinate vector of its image in V, and centre element -> field value
    coords: np.ndarray | None = None
    center_values: dict | None = None

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def evaluate(self, u, v) -> int:
        F = self.field
        s = 0
        for i, ui in enumerate(u):
            if not ui:
                continue
            for j, vj in enumerate(v):
                if vj:
                    s = F.add(s, F.mul(F.mul(int(ui), int(self.matrix[i, j])), int(vj)))
        return s


def make_form(F: FiniteField, M, coords=None, center_values=None) -> BilinearForm:
    M = np.asarray(M, dtype=np.int64)
    d = M.shape[0]
    alt = bool(all(M[i, i] == 0 for i in range(d)) and all(
        F.add(int(M[i, j]), int(M[j, i])) == 0 for i in range(d) for j in range(d)
    ))
    nonsing = d > 0 and field_rank(F, M) == d
    M.setflags(write=False)
    return BilinearForm(F, M, alt, nonsing, coords, center_values)


def commutator_form(G: GroupTable, q: int | None = None) -> BilinearForm:
    """The form (aZ, bZ) -> [a, b] on V = G/Z(G), valued in Z(G) ~ GF(q).

    For a prime q the centre is identified with GF(q) through its least
    non-identity element.  For q = p^h with h > 1 the group must carry field
    coordinates (as Heisenberg groups built here do).  An abelian group gets
    the zero form on G/Phi(G), flagged singular.
    """
    if G.is_abelian:
        pp = prime_power(G.n)
        p = pp[0] if pp else 2
        F = field_create(q or p)
        d = 0
        if G.n > 1 and pp is not None:
            _, basis, _ = elementary_abelian_coordinates(G, G.frattini)
            d = len(basis)
        M = np.zeros((d, d), dtype=np.int64)
        form = make_form(F, M)
        return BilinearForm(F, form.matrix, True, False)
    Z, D = G.center, G.derived_subgroup
    if not D.members <= Z.members:
        raise NotClassTwo("[G,G] is not central")
    if not is_elementary_abelian(G, Z):
        raise CenterNotElementaryAbelian(f"centre of order {len(Z)} is not elementary abelian")
    q = q or len(Z)
    if len(Z) != q or prime_power(q) is None:
        raise CenterNotFieldSized(f"centre has order {len(Z)}, expected q = {q}")
    F = field_create(q)
    if F.h == 1:
        z0 = min(Z.members - {0})
        zval = {0: 0}
        cur = 0
        for c in range(1, q):
            cur = G.op(cur, z0)
            zval[cur] = c
        try:
            _, basis, coords = elementary_abelian_coordinates(G, Z)
        except Exception as exc:  # G/Z not elementary abelian
            raise NotClassTwo(str(exc)) from exc
    else:
        if G.coords is None or G.field is None or G.field.q != q:
            raise CenterNotFieldSized(f"no GF({q}) structure attached to the group")
        n2 = G.coords.shape[1] - 1
        half = n2 // 2
        vcols = [i for i in range(n2 + 1) if i != half]
        coords = G.coords[:, vcols]
        zval = {int(z): int(G.coords[z, half]) for z in Z.members}
        basis = []
        for k in range(n2):
            target = np.zeros(n2 + 1, dtype=np.int64)
            target[vcols[k]] = 1
            basis.append(int(np.nonzero((G.coords == target).all(axis=1))[0][0]))
    d = len(basis)
    M = np.zeros((d, d), dtype=np.int64)
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            M[i, j] = zval[G.commutator(a, b)]
    return make_form(F, M, coords=coords, center_values=zval)


def verify_commutator_form(G: GroupTable, form: BilinearForm) -> bool:
    """Exhaustively compare [a, b] with the matrix evaluation on all pairs."""
    if form.coords is None:
        return bool(not form.matrix.any())
    for a in range(G.n):
        for b in range(G.n):
            if form.center_values[G.commutator(a, b)] != form.evaluate(form.coords[a], form.coords[b]):
                return False
    return True
