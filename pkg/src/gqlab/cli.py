"""Command-line entry point: ``gqlab <command> ...``.

Exit codes: 0 when every asserted clause passes, 1 when a verification
fails (or a search runs out of budget), 2 for usage and input errors.
"""

from __future__ import annotations

import argparse
import json
import shutil
import sys
from pathlib import Path

import numpy as np

from . import io
from .algebra.groups import generating_set, group_from_permutations
from .constructions import (
    coset_geometry,
    heisenberg,
    hermitian_quadrangle,
    linear_qclan,
    make_kantor_family,
    qclan_kantor_family,
    validate_kantor_family,
    w3_kantor_family,
)
from .errors import AxiomViolation, BudgetExceeded, FormatError, GQLabError, NotUniformOrder
from .geometry import verify_gq
from .search import SearchBudget, search_elation_groups, search_kantor_families
from .stgq import _fmt, property_report
from .symmetry import (
    StgqTriple,
    action_from_vertex_perms,
    automorphism_group,
    canonical_hash,
    geometry_isomorphic,
)
from .theorems import THEOREMS, theorem_harness

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _plain(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, (tuple, set, frozenset, np.ndarray)):
        return [_plain(x) for x in (sorted(v) if isinstance(v, (set, frozenset)) else v)]
    if isinstance(v, list):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    return v


def emit(data: dict, as_json: bool, out=None) -> None:
    out = out or sys.stdout
    if as_json:
        out.write(json.dumps(_plain(data), sort_keys=True, indent=2) + "\n")
    else:
        out.write("".join(f"{k}: {_fmt(data[k])}\n" for k in sorted(data)))


def _action_pairs(action) -> list[tuple[np.ndarray, np.ndarray]]:
    gens = generating_set(action.group) or [0]
    return [(action.point_perms[g], action.line_perms[g]) for g in gens]


def _read_action(path, geo):
    pairs, order = io.parse_aut(Path(path).read_text(), geo.n_points)
    P = geo.n_points
    for p, L in pairs:
        if len(p) != P or len(L) != geo.n_lines:
            raise FormatError("permutation length does not match the geometry")
    perms = [np.concatenate([p, L + P]) for p, L in pairs]
    G, vp = group_from_permutations(perms, name=Path(path).stem)
    if order and G.n != order:
        raise FormatError(f"generators give a group of order {G.n}, header says {order}")
    return action_from_vertex_perms(G, vp, P)


# -- commands --------------------------------------------------------------------------------------


def cmd_construct(a) -> int:
    out = Path(a.output)
    data = {"type": a.type, "q": a.q, "output": str(out)}
    if a.type == "heisenberg":
        G = heisenberg(a.n, a.q)
        io.write_text(out, io.format_group(G), a.force)
        data.update(order=G.n, n=a.n)
        emit(data, a.json)
        return OK
    if a.type == "hermitian":
        geo, action = hermitian_quadrangle(a.q), None
    else:
        fam = w3_kantor_family(a.q) if a.type == "w3" else qclan_kantor_family(linear_qclan(a.q))
        cg = coset_geometry(fam)
        geo, action = cg.geometry, cg.action
        data["base_point"] = cg.infinity
    if a.elation and action is None:
        raise UsageError("--elation is only available for coset-model types (w3, qclan-gq)")
    io.write_text(out, io.format_geometry(geo), a.force)
    if a.elation:
        io.write_text(a.elation, io.format_aut(_action_pairs(action), action.group.n), a.force)
        data["elation"] = a.elation
    data.update(points=geo.n_points, lines=geo.n_lines, hash=canonical_hash(geo))
    emit(data, a.json)
    return OK


def cmd_verify_gq(a) -> int:
    geo = io.read_geometry(a.path)
    try:
        order = verify_gq(geo)
    except AxiomViolation as exc:
        emit({"gq": False, "axiom": exc.axiom, "message": str(exc), "witness": exc.witness}, a.json)
        return FAILED
    except NotUniformOrder as exc:
        emit({"gq": False, "axiom": "order", "message": str(exc), "witness": exc.witness}, a.json)
        return FAILED
    emit({"gq": True, "order": str(order), "points": geo.n_points, "lines": geo.n_lines}, a.json)
    return OK


def cmd_verify_kantor(a) -> int:
    G, members, gfile = io.read_kantor(a.path)
    chk = validate_kantor_family(G, members)
    data = {"group": gfile, "group_order": G.n, "members": len(members), "kantor_family": chk.ok,
            "violations": len(chk.violations)}
    if chk.violations:
        v = chk.violations[0]
        data.update(first_clause=v.clause, first_message=v.message, first_witness=v.witness)
        emit(data, a.json)
        return FAILED
    fam = make_kantor_family(G, members)
    cg = coset_geometry(fam)
    data.update(params=f"({fam.s},{fam.t})", coset_order=str(verify_gq(cg.geometry)), coset_hash=canonical_hash(cg.geometry))
    emit(data, a.json)
    return OK


def cmd_analyze_stgq(a) -> int:
    geo = io.read_geometry(a.geo)
    action = _read_action(a.group, geo)
    T = StgqTriple(geo, a.point, action, name=Path(a.geo).stem)
    rep = property_report(T)
    emit(rep.as_dict(), a.json)
    return OK if rep.ok else FAILED


def cmd_aut(a) -> int:
    geo = io.read_geometry(a.path)
    budget = SearchBudget.from_env()
    aut = automorphism_group(geo, seconds=budget.seconds)
    data = {"order": aut.order, "geometry_order": aut.geometry_order, "self_dual": aut.has_dualities,
            "verified": aut.verified, "base": " ".join(map(str, aut.chain.base)),
            "orbit_sizes": " ".join(map(str, aut.chain.orbit_sizes)), "hash": canonical_hash(geo)}
    if a.output:
        io.write_text(a.output, io.format_aut(aut.generator_pairs(), aut.geometry_order), a.force)
        data["output"] = a.output
    emit(data, a.json)
    return OK if aut.verified else FAILED


def cmd_iso(a) -> int:
    g1, g2 = io.read_geometry(a.a), io.read_geometry(a.b)
    iso = geometry_isomorphic(g1, g2)
    data = {"isomorphic": iso is not None, "hash_a": canonical_hash(g1), "hash_b": canonical_hash(g2)}
    if iso is not None:
        data["point_map"] = " ".join(map(str, iso.point_map.tolist()))
        data["line_map"] = " ".join(map(str, iso.line_map.tolist()))
    emit(data, a.json)
    return OK if iso is not None else FAILED


def cmd_search_kantor(a) -> int:
    G = io.read_group(a.path)
    budget = SearchBudget.from_env(jobs=a.jobs)
    res = search_kantor_families(G, a.s, a.t, modulo_aut=a.modulo_aut, jobs=a.jobs, budget=budget)
    data = {"group": Path(a.path).name, "group_order": G.n, "s": a.s, "t": a.t, "modulo_aut": a.modulo_aut,
            "families": len(res.families), "complete": res.complete}
    data.update({f"stat_{k}": v for k, v in sorted(res.stats.items()) if k != "families"})
    if a.output:
        d = io.ensure_dir(a.output)
        gname = Path(a.path).name
        if not (d / gname).exists():
            shutil.copyfile(a.path, d / gname)
        entries = []
        for k, fam in enumerate(res.families):
            name = f"family_{k:04d}.kf"
            io.write_text(d / name, io.format_kantor(fam, gname), a.force)
            cg = coset_geometry(fam)
            entries.append({"file": name, "hash": canonical_hash(cg.geometry)})
        io.write_text(d / "manifest", io.format_manifest(entries, res.complete), a.force)
        data["output"] = str(d)
    emit(data, a.json)
    return OK


def cmd_search_elation(a) -> int:
    geo = io.read_geometry(a.path)
    budget = SearchBudget.from_env(jobs=a.jobs)
    res = search_elation_groups(geo, a.point, jobs=a.jobs, budget=budget)
    data = {"point": a.point, "order": f"({res.order[0]},{res.order[1]})", "kernel_order": res.kernel_order,
            "candidates": res.candidates, "elation_groups": len(res.groups), "classes": len(res.classes),
            "class_members": " ; ".join(" ".join(map(str, c)) for c in res.classes), "complete": res.complete}
    if a.output:
        d = io.ensure_dir(a.output)
        entries = []
        for k, act in enumerate(res.groups):
            name = f"elation_{k:03d}.aut"
            io.write_text(d / name, io.format_aut(_action_pairs(act), act.group.n), a.force)
            cls = next(i for i, c in enumerate(res.classes) if k in c)
            entries.append({"file": name, "class": cls, "order": act.group.n})
        io.write_text(d / "manifest", io.format_manifest(entries, res.complete), a.force)
        data["output"] = str(d)
    emit(data, a.json)
    return OK


def cmd_theorem(a) -> int:
    rep = theorem_harness(a.name, q=a.q, jobs=a.jobs)
    emit(rep.as_dict(), a.json)
    return OK if rep.passed else FAILED


# -- parser ---------------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the report as JSON (same keys)")
    common.add_argument("--force", action="store_true", help="overwrite existing output files")

    ap = argparse.ArgumentParser(prog="gqlab", description="Generalized quadrangles, Kantor families and elation groups.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="build a group or quadrangle and write it out")
    p.add_argument("--type", required=True, choices=["heisenberg", "w3", "hermitian", "qclan-gq"])
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, default=1, help="Heisenberg dimension (heisenberg only)")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--elation", help="also write the elation group about the base point as an aut file")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify-gq", parents=[common], help="check the quadrangle axioms")
    p.add_argument("path")
    p.set_defaults(func=cmd_verify_gq)

    p = sub.add_parser("verify-kantor", parents=[common], help="check the Kantor family axioms")
    p.add_argument("path")
    p.set_defaults(func=cmd_verify_kantor)

    p = sub.add_parser("analyze-stgq", parents=[common], help="STGQ property report for (geometry, point, group)")
    p.add_argument("--geo", required=True)
    p.add_argument("--group", required=True, help="aut file with generators of the elation group")
    p.add_argument("--point", type=int, required=True)
    p.set_defaults(func=cmd_analyze_stgq)

    p = sub.add_parser("aut", parents=[common], help="automorphism group and canonical hash")
    p.add_argument("path")
    p.add_argument("-o", "--output", help="write generators as an aut file")
    p.set_defaults(func=cmd_aut)

    p = sub.add_parser("iso", parents=[common], help="decide isomorphism of two geometries")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("search-kantor", parents=[common], help="exhaustive Kantor family search")
    p.add_argument("path")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--modulo-aut", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output", help="directory for .kf files and the manifest")
    p.set_defaults(func=cmd_search_kantor)

    p = sub.add_parser("search-elation", parents=[common], help="elation groups about a point")
    p.add_argument("path")
    p.add_argument("--point", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output", help="directory for aut files and the manifest")
    p.set_defaults(func=cmd_search_elation)

    p = sub.add_parser("theorem", parents=[common], help="run a scripted verification experiment")
    p.add_argument("--name", required=True, help=", ".join(sorted(THEOREMS)))
    p.add_argument("--q", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_theorem)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    if getattr(args, "jobs", 1) < 1:
        print("gqlab: error: --jobs must be positive", file=sys.stderr)
        return USAGE
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        emit({"complete": False, "incomplete": True, "error": str(exc), "partial_results": len(exc.partial)}, args.json)
        return FAILED
    except (UsageError, FormatError, FileNotFoundError, FileExistsError, IsADirectoryError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"gqlab: error: {msg}", file=sys.stderr)
        return USAGE
    except GQLabError as exc:
        print(f"gqlab: error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
