"""Bundled catalog of small groups and the enumerator that generated it.

Groups of order 8, 27 and 16 are produced as split extensions N x| C_m over
every automorphism of order dividing m (one per conjugacy class), plus the
cyclic and generalised-quaternion groups, then deduplicated by isomorphism.
Order 48 uses C3 x| P and P x| C3 over all groups P of order 16, plus the
four groups in which neither Sylow subgroup is normal (GL(2,3), the binary
octahedral group, A4 x| C4 and C2 x S4).

Run ``python -m gqlab.catalog`` to regenerate the files in ``data/groups``.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from .algebra.groups import (
    GroupTable,
    cyclic,
    direct_product,
    group_from_permutations,
    group_from_table,
    maximal_subgroups,
    semidirect_product,
)
from .algebra.iso import automorphisms, groups_isomorphic, invariant_mismatch

CATALOG_ORDERS = (8, 16, 27, 48)
EXPECTED_COUNTS = {8: 5, 16: 14, 27: 5, 48: 52}


def _power(phi: np.ndarray, k: int) -> np.ndarray:
    out = np.arange(len(phi))
    for _ in range(k):
        out = phi[out]
    return out


def _aut_classes_of_exponent(N: GroupTable, m: int) -> list[np.ndarray]:
    """Automorphisms phi with phi^m = 1, one per conjugacy class in Aut(N)."""
    auts = automorphisms(N)
    inv = np.argsort(auts, axis=1)
    ident = np.arange(N.n)
    seen: set = set()
    reps = []
    for phi in auts:
        if not (_power(phi, m) == ident).all() or phi.tobytes() in seen:
            continue
        reps.append(phi)
        # psi^-1 phi psi for every psi
        conj = auts[np.arange(len(auts))[:, None], phi[inv]]
        seen.update(row.tobytes() for row in conj)
    return reps


def split_extensions(N: GroupTable, m: int) -> list[GroupTable]:
    """N x| C_m for one automorphism of order dividing m per conjugacy class."""
    K = cyclic(m)
    out = []
    for phi in _aut_classes_of_exponent(N, m):
        action = np.array([_power(phi, k) for k in range(m)])
        trivial = (phi == np.arange(N.n)).all()
        out.append(semidirect_product(N, K, action, name=f"{N.name or N.n}{'x' if trivial else ':'}C{m}"))
    return out


def generalized_quaternion(n: int) -> GroupTable:
    """Dicyclic group of order n = 4k: <a, b | a^2k = 1, b^2 = a^k, b^-1 a b = a^-1>."""
    k = n // 4
    # elements a^i b^j, i < 2k, j < 2
    def mul(x, y):
        i1, j1 = x
        i2, j2 = y
        if j1 == 0:
            return ((i1 + i2) % (2 * k), j2)
        # b a^i2 = a^-i2 b
        i = (i1 - i2) % (2 * k)
        if j2 == 0:
            return (i, 1)
        return ((i + k) % (2 * k), 0)

    els = [(i, j) for j in range(2) for i in range(2 * k)]
    idx = {e: t for t, e in enumerate(els)}
    table = [[idx[mul(x, y)] for y in els] for x in els]
    return group_from_table(table, name=f"Q{n}")


def matrix_group(gens, p: int, name: str = "") -> GroupTable:
    """Closure of 2x2 matrices over GF(p), as a group table."""
    gens = [tuple(int(x) % p for x in np.asarray(g).ravel()) for g in gens]

    def mul(a, b):
        return (
            (a[0] * b[0] + a[1] * b[2]) % p,
            (a[0] * b[1] + a[1] * b[3]) % p,
            (a[2] * b[0] + a[3] * b[2]) % p,
            (a[2] * b[1] + a[3] * b[3]) % p,
        )

    ident = (1, 0, 0, 1)
    els = [ident]
    index = {ident: 0}
    i = 0
    while i < len(els):
        for g in gens:
            h = mul(els[i], g)
            if h not in index:
                index[h] = len(els)
                els.append(h)
        i += 1
    table = [[index[mul(a, b)] for b in els] for a in els]
    return group_from_table(table, name=name)


def _perm_group(gens, name="") -> GroupTable:
    G, _ = group_from_permutations([np.array(g) for g in gens], name=name)
    return G


def _dedupe(groups: list[GroupTable]) -> list[GroupTable]:
    out: list[GroupTable] = []
    for G in groups:
        if not any(invariant_mismatch(G, H) is None and groups_isomorphic(G, H) is not None for H in out):
            out.append(G)
    return out


def _sort_key(G: GroupTable):
    return (G.n, G.invariant_key(), G.name)


def generate_groups(n: int) -> list[GroupTable]:
    """All groups of order n in {8, 16, 27, 48} up to isomorphism (generated, not loaded)."""
    if n == 8:
        cands = [cyclic(8), generalized_quaternion(8)]
        for N in (cyclic(4), direct_product(cyclic(2), cyclic(2))):
            cands += split_extensions(N, 2)
    elif n == 27:
        cands = [cyclic(27)]
        for N in (cyclic(9), direct_product(cyclic(3), cyclic(3))):
            cands += split_extensions(N, 3)
    elif n == 16:
        cands = [cyclic(16), generalized_quaternion(16)]
        for N in generate_groups(8):
            cands += split_extensions(N, 2)
        for N in (cyclic(4), direct_product(cyclic(2), cyclic(2))):
            cands += split_extensions(N, 4)
    elif n == 48:
        cands = []
        C3 = cyclic(3)
        inv3 = np.array([[0, 1, 2], [0, 2, 1]])
        for P in generate_groups(16):
            # C3 x| P over every homomorphism P -> Aut(C3) = C2 (kernel = maximal subgroup or P)
            kernels = [frozenset(range(P.n))] + [M.members for M in maximal_subgroups(P)]
            for ker in kernels:
                action = np.array([inv3[0] if k in ker else inv3[1] for k in range(P.n)])
                cands.append(semidirect_product(C3, P, action, name=f"C3{'x' if len(ker) == P.n else ':'}{P.name or P.n}"))
            cands += split_extensions(P, 3)
        gl23 = matrix_group([[[1, 1], [0, 1]], [[0, 1], [2, 0]], [[2, 0], [0, 1]]], 3, "GL(2,3)")
        # binary octahedral group inside SL(2,7): (1+i)/sqrt2 and (1+i+j+k)/2
        i_ = np.array([[2, 3], [3, -2]])
        j_ = np.array([[0, 1], [-1, 0]])
        k_ = (i_ @ j_) % 7
        one = np.eye(2, dtype=np.int64)
        a = (5 * (one + i_)) % 7
        b = (4 * (one + i_ + j_ + k_)) % 7
        bo = matrix_group([a, b], 7, "2O")
        s4 = _perm_group([[1, 2, 3, 0], [1, 0, 2, 3]], "S4")
        c2s4 = direct_product(cyclic(2), s4, name="C2xS4")
        a4c4 = _perm_group([[1, 2, 0, 3, 4, 5, 6, 7], [1, 0, 3, 2, 4, 5, 6, 7], [1, 0, 2, 3, 5, 6, 7, 4]], "A4:C4")
        cands += [gl23, bo, c2s4, a4c4]
    else:
        raise ValueError(f"no generator for order {n}")
    groups = [G for G in cands if G.n == n]
    if len(groups) != len(cands):
        raise AssertionError("generator produced a group of the wrong order")
    return sorted(_dedupe(groups), key=_sort_key)


def _data_dir() -> Path:
    return Path(str(resources.files("gqlab") / "data" / "groups"))


def catalog_files(n: int) -> list[Path]:
    return sorted(_data_dir().glob(f"g{n:03d}_*.grp"))


@lru_cache(maxsize=None)
def _load(n: int) -> tuple[GroupTable, ...]:
    from .io import read_group

    files = catalog_files(n)
    if not files:
        raise FileNotFoundError(f"no bundled groups of order {n}")
    return tuple(read_group(f) for f in files)


def catalog_groups(n: int) -> list[GroupTable]:
    """The bundled groups of order n, in file order."""
    return list(_load(n))


def write_catalog(orders=CATALOG_ORDERS, directory: Path | None = None) -> dict[int, int]:
    from .io import format_group

    directory = Path(directory) if directory else _data_dir()
    directory.mkdir(parents=True, exist_ok=True)
    counts = {}
    for n in orders:
        groups = generate_groups(n)
        for k, G in enumerate(groups):
            (directory / f"g{n:03d}_{k:02d}.grp").write_text(format_group(G))
        counts[n] = len(groups)
    return counts


if __name__ == "__main__":  # pragma: no cover
    print(write_catalog())
