"""Text formats: .grp groups, .geo geometries, .kf Kantor families, aut files, manifests."""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .algebra.groups import GroupTable, SubgroupSet, group_from_table
from .errors import FormatError
from .geometry import IncidenceGeometry


def _lines(text: str) -> list[str]:
    return [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]


def _ints(tokens, what) -> list[int]:
    try:
        return [int(x) for x in tokens]
    except ValueError as exc:
        raise FormatError(f"non-integer entry in {what}: {exc}") from None


def write_text(path, text: str, force: bool = False) -> None:
    path = Path(path)
    if path.exists() and not force:
        raise FileExistsError(f"{path} exists (use --force to overwrite)")
    path.write_text(text)


# -- groups ------------------------------------------------------------------------------


def format_group(G: GroupTable) -> str:
    out = [f"group {G.n}"]
    out += [" ".join(map(str, row)) for row in G.mul.tolist()]
    if G.labels:
        out += [f"label {i} {lab}" for i, lab in enumerate(G.labels)]
    return "\n".join(out) + "\n"


def parse_group(text: str, name: str = "") -> GroupTable:
    rows = _lines(text)
    if not rows or not rows[0].startswith("group"):
        raise FormatError("group file must start with 'group <n>'")
    head = rows[0].split()
    if len(head) != 2:
        raise FormatError("malformed header; expected 'group <n>'")
    n = _ints(head[1:], "header")[0]
    body = rows[1 : n + 1]
    if len(body) != n:
        raise FormatError(f"expected {n} table rows, found {len(body)}")
    table = np.array([_ints(r.split(), "table") for r in body], dtype=np.int64)
    if table.shape != (n, n):
        raise FormatError(f"table is {table.shape}, expected ({n}, {n})")
    if not (table[0] == np.arange(n)).all() or not (table[:, 0] == np.arange(n)).all():
        raise FormatError("element 0 must be the identity")
    labels = None
    extra = rows[n + 1 :]
    if extra:
        labels = [str(i) for i in range(n)]
        for r in extra:
            parts = r.split(maxsplit=2)
            if parts[0] != "label" or len(parts) < 3:
                raise FormatError(f"unexpected trailer line {r!r}")
            labels[int(parts[1])] = parts[2]
    return group_from_table(table, labels=labels, name=name)


def read_group(path) -> GroupTable:
    path = Path(path)
    return parse_group(path.read_text(), name=path.stem)


# -- geometries ----------------------------------------------------------------------------


def format_geometry(geo: IncidenceGeometry, tags: bool = True) -> str:
    out = [f"geometry {geo.n_points} {geo.n_lines}"]
    out += [" ".join(map(str, line)) for line in geo.lines]
    if tags and geo.point_tags:
        out += [f"tag point {i} {t}" for i, t in enumerate(geo.point_tags)]
    if tags and geo.line_tags:
        out += [f"tag line {j} {t}" for j, t in enumerate(geo.line_tags)]
    return "\n".join(out) + "\n"


def parse_geometry(text: str) -> IncidenceGeometry:
    rows = _lines(text)
    if not rows or not rows[0].startswith("geometry"):
        raise FormatError("geometry file must start with 'geometry <P> <L>'")
    head = rows[0].split()
    if len(head) != 3:
        raise FormatError("malformed header; expected 'geometry <P> <L>'")
    P, L = _ints(head[1:], "header")
    body = rows[1 : L + 1]
    if len(body) != L or any(r.startswith("tag") for r in body):
        raise FormatError(f"expected {L} line rows")
    lines = [_ints(r.split(), "line") for r in body]
    for j, line in enumerate(lines):
        if line != sorted(line):
            raise FormatError(f"line {j} is not in ascending order")
    ptags, ltags = None, None
    for r in rows[L + 1 :]:
        parts = r.split(maxsplit=3)
        if len(parts) < 4 or parts[0] != "tag" or parts[1] not in ("point", "line"):
            raise FormatError(f"unexpected trailer line {r!r}")
        if parts[1] == "point":
            ptags = ptags or [""] * P
            ptags[int(parts[2])] = parts[3]
        else:
            ltags = ltags or [""] * L
            ltags[int(parts[2])] = parts[3]
    try:
        return IncidenceGeometry(P, lines, point_tags=ptags, line_tags=ltags)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def read_geometry(path) -> IncidenceGeometry:
    return parse_geometry(Path(path).read_text())


# -- Kantor families ---------------------------------------------------------------------------


def format_kantor(family, group_file: str) -> str:
    out = [f"kantor {group_file} {len(family.members)}"]
    for i, (a, b) in enumerate(family.members):
        out.append(f"E{i}: " + " ".join(map(str, a.elements)))
        out.append(f"E{i}*: " + " ".join(map(str, b.elements)))
    return "\n".join(out) + "\n"


def parse_kantor(text: str, base_dir=".") -> tuple[GroupTable, list[tuple[SubgroupSet, SubgroupSet]], str]:
    """Returns (group, members, group file name); the group file is resolved next to the .kf file."""
    rows = _lines(text)
    head = rows[0].split() if rows else []
    if len(head) != 3 or head[0] != "kantor":
        raise FormatError("kantor file must start with 'kantor <group-file> <t+1>'")
    gfile, k = head[1], _ints(head[2:], "header")[0]
    gpath = Path(gfile)
    if not gpath.is_absolute():
        gpath = Path(base_dir) / gpath
    G = read_group(gpath)
    found: dict[str, list[int]] = {}
    for r in rows[1:]:
        key, _, rest = r.partition(":")
        found[key.strip()] = _ints(rest.split(), key)
    members = []
    for i in range(k):
        try:
            a, b = found[f"E{i}"], found[f"E{i}*"]
        except KeyError as exc:
            raise FormatError(f"missing member {exc}") from None
        if any(not 0 <= x < G.n for x in a + b):
            raise FormatError(f"member {i} has an index out of range")
        members.append((SubgroupSet(G, frozenset(a)), SubgroupSet(G, frozenset(b))))
    return G, members, gfile


def read_kantor(path):
    path = Path(path)
    return parse_kantor(path.read_text(), base_dir=path.parent)


# -- automorphism / permutation lists -------------------------------------------------------------


def format_aut(pairs, order: int) -> str:
    out = [f"aut {len(pairs)} {order}"]
    for pts, lns in pairs:
        out.append(" ".join(map(str, pts)) + " | " + " ".join(map(str, lns)))
    return "\n".join(out) + "\n"


def parse_aut(text: str, n_points: int | None = None) -> tuple[list[tuple[np.ndarray, np.ndarray]], int]:
    """Permutation lines are 'point images | line images'; without '|' the split uses n_points."""
    rows = _lines(text)
    head = rows[0].split() if rows else []
    if len(head) != 3 or head[0] != "aut":
        raise FormatError("aut file must start with 'aut <k> <order>'")
    k, order = _ints(head[1:], "header")
    pairs = []
    for r in rows[1 : k + 1]:
        if "|" in r:
            a, b = r.split("|")
            pts, lns = _ints(a.split(), "perm"), _ints(b.split(), "perm")
        else:
            if n_points is None:
                raise FormatError("permutation line without '|' needs the point count")
            vals = _ints(r.split(), "perm")
            pts, lns = vals[:n_points], vals[n_points:]
        pairs.append((np.array(pts), np.array(lns)))
    if len(pairs) != k:
        raise FormatError(f"expected {k} permutation lines, found {len(pairs)}")
    return pairs, order


# -- manifest ----------------------------------------------------------------------------------------


def format_manifest(entries: list[dict], complete: bool) -> str:
    out = [f"manifest {len(entries)} complete={'yes' if complete else 'no'}"]
    for e in entries:
        out.append(" ".join(f"{k}={e[k]}" for k in sorted(e)))
    return "\n".join(out) + "\n"


def ensure_dir(path) -> Path:
    p = Path(path)
    os.makedirs(p, exist_ok=True)
    return p
