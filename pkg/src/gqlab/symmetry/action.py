"""Group actions on incidence geometries."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..algebra.groups import GroupTable, SubgroupSet, generating_set
from ..errors import InvalidAction
from ..geometry import IncidenceGeometry


@dataclass
class GeometryAction:
    """Right action of ``group`` on a geometry.

    ``point_perms[g]`` and ``line_perms[g]`` are the permutations induced by
    element g; the product a*b acts as a followed by b.
    """

    group: GroupTable
    point_perms: np.ndarray
    line_perms: np.ndarray

    @property
    def n_points(self) -> int:
        return self.point_perms.shape[1]

    @property
    def n_lines(self) -> int:
        return self.line_perms.shape[1]

    def vertex_perms(self) -> np.ndarray:
        P = self.n_points
        return np.concatenate([self.point_perms, self.line_perms + P], axis=1)

    def restrict(self, H: SubgroupSet) -> "GeometryAction":
        sub, emb = H.as_group()
        return GeometryAction(sub, self.point_perms[emb], self.line_perms[emb])

    def image_key(self) -> frozenset:
        """The set of permutations, as a hashable value (the permutation group)."""
        V = self.vertex_perms()
        return frozenset(row.tobytes() for row in V.astype(np.int32))

    def problems(self, geo: IncidenceGeometry) -> list[str]:
        G = self.group
        P, L = self.point_perms, self.line_perms
        out = []
        if P.shape != (G.n, geo.n_points) or L.shape != (G.n, geo.n_lines):
            return [f"permutation arrays have shape {P.shape}/{L.shape}, expected ({G.n}, {geo.n_points})/({G.n}, {geo.n_lines})"]
        if not (P[0] == np.arange(geo.n_points)).all() or not (L[0] == np.arange(geo.n_lines)).all():
            out.append("identity does not act trivially")
        for g in generating_set(G):
            # perm[a*g] must equal perm[g] after perm[a], for every a
            lhs = P[G.mul[:, g]]
            rhs = P[g][P]
            if not (lhs == rhs).all():
                out.append(f"point action is not a homomorphism at generator {g}")
                break
            if not (L[G.mul[:, g]] == L[g][L]).all():
                out.append(f"line action is not a homomorphism at generator {g}")
                break
        N = geo.incidence
        for g in range(G.n):
            if not (N[np.ix_(P[g], L[g])] == N).all():
                out.append(f"element {g} does not preserve incidence")
                break
        return out

    def validate(self, geo: IncidenceGeometry) -> "GeometryAction":
        bad = self.problems(geo)
        if bad:
            raise InvalidAction("; ".join(bad))
        return self


def action_from_vertex_perms(G: GroupTable, perms: np.ndarray, n_points: int) -> GeometryAction:
    perms = np.asarray(perms)
    return GeometryAction(G, perms[:, :n_points], perms[:, n_points:] - n_points)
