"""Command-line front end.

JSON goes to stdout, a short human summary to stderr.  Exit codes: 0 success,
2 input validation failure, 3 computation error.  MPP_THREADS caps the worker
pool used by parameter sweeps (library calls are pure, so sweeps parallelize
safely).
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import degeneration as dg
from . import family, jsonio, lattice, tropical
from .geometry import GeometryError, face_lattice, vertices
from .poset import MarkedPoset, PosetError, regularize, validate
from .rationals import rat_str

EXIT_INPUT = 2
EXIT_COMPUTE = 3


class InputError(Exception):
    pass


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_poset(path: str) -> MarkedPoset:
    poset = jsonio.poset_from_json(_load_json(path))
    problems = validate(poset)
    if problems:
        raise InputError("invalid poset: " + "; ".join(problems))
    return poset


def _resolve_parameter(args, poset) -> tuple[family.Parameter, dict]:
    """Parameter from --t/--partition flags; records the choice for the header."""
    header = {}
    if getattr(args, "partition", None) and getattr(args, "t", None):
        raise InputError("--t and --partition are mutually exclusive")
    if getattr(args, "partition", None):
        part = jsonio.partition_from_json(_load_json(args.partition), poset)
        t = family.parameter_of_partition(poset, part)
        header["partition"] = jsonio.partition_to_json(part)
    elif getattr(args, "t", None):
        if args.t == "generic":
            t = family.generic_parameter(poset)
        else:
            t = jsonio.parameter_from_json(_load_json(args.t), poset)
    else:
        t = family.zero_parameter(poset)
    header.update(jsonio.parameter_to_json(t))
    return t, header


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("MPP_THREADS", "1")))
    except ValueError:
        return 1


def _pmap(fn, items):
    items = list(items)
    w = _workers()
    if w <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=w) as pool:
        return list(pool.map(fn, items))


def _emit(payload: dict, summary: str) -> int:
    json.dump(jsonio.jsonable(payload), sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    print(summary, file=sys.stderr)
    return 0


# -- subcommands ---------------------------------------------------------------

def cmd_hrep(args) -> int:
    poset = _load_poset(args.poset)
    t, header = _resolve_parameter(args, poset)
    if "partition" in header:
        part = family.partition_of_parameter(poset, t)
        h = family.hrep_chain_order(poset, part, projected=args.projected)
    else:
        h = family.hrep_general(poset, t, projected=args.projected)
    if args.irredundant:
        h = family.eliminate_redundancy(h)
    payload = {"command": "hrep", **header, "hrep": jsonio.hrep_to_json(h)}
    return _emit(payload, f"hrep: {len(h.equations)} equations, "
                          f"{len(h.inequalities)} inequalities")


def cmd_vertices(args) -> int:
    poset = _load_poset(args.poset)
    t, header = _resolve_parameter(args, poset)
    h = family.hrep_general(poset, t, projected=True)
    if args.method == "bruteforce":
        from .geometry import vertices_bruteforce
        v = vertices_bruteforce(h)
    elif args.method == "tropical":
        pts = tropical.generic_vertices(poset, t)
        payload = {"command": "vertices", **header, "method": "tropical",
                   "coords": list(h.coords),
                   "vertices": [[rat_str(x) for x in p] for p in pts], "rays": []}
        return _emit(payload, f"vertices: {len(pts)} (tropical path)")
    else:
        v = vertices(h)
    payload = {"command": "vertices", **header, "method": args.method,
               **jsonio.vrep_to_json(v)}
    return _emit(payload, f"vertices: {len(v.vertices)}, rays: {len(v.rays)}")


def cmd_fvector(args) -> int:
    poset = _load_poset(args.poset)
    t, header = _resolve_parameter(args, poset)
    h = family.hrep_general(poset, t, projected=True)
    v = vertices(h)
    lat = face_lattice(h, v)
    payload = {"command": "fvector", **header, "f_vector": list(lat.f_vector()),
               "dim": lat.dim}
    return _emit(payload, f"f-vector: {lat.f_vector()}")


def cmd_ehrhart(args) -> int:
    poset = _load_poset(args.poset)
    t, header = _resolve_parameter(args, poset)
    # full space: marked coordinates participate in lattice-point counts
    h = family.hrep_general(poset, t, projected=False)
    data = lattice.ehrhart(h, args.dilations)
    payload = {"command": "ehrhart", **header,
               "counts": [list(c) for c in data.counts],
               "coefficients": [rat_str(c) for c in data.coefficients]}
    return _emit(payload, "ehrhart: " + ", ".join(
        f"{k}:{c}" for k, c in data.counts))


def cmd_lattice_points(args) -> int:
    poset = _load_poset(args.poset)
    t, header = _resolve_parameter(args, poset)
    h = family.hrep_general(poset, t, projected=False)
    pts = lattice.lattice_points(h)
    payload = {"command": "lattice-points", **header, "coords": list(h.coords),
               "points": [[int(x) for x in p] for p in pts]}
    return _emit(payload, f"lattice points: {len(pts)}")


def cmd_subdivision(args) -> int:
    poset = _load_poset(args.poset)
    if args.ideal_chains:
        cells = tropical.ideal_chain_cells(poset)
        kind = "ideal-chain"
    else:
        cells = tropical.tropical_subdivision(poset)
        kind = "tropical"
    sub_vertices = sorted({p for c in cells for p in c.vertices})
    payload = {"command": "subdivision", "kind": kind,
               "cells": [{"vertices": [[rat_str(x) for x in p] for p in c.vertices],
                          "dim": c.dim,
                          "covector": {r: list(m) for r, m in c.covector},
                          "tight": sorted(c.tight),
                          "origin": list(c.origin)} for c in cells],
               "vertices": [[rat_str(x) for x in p] for p in sub_vertices]}
    if args.off:
        with open(args.off, "w", encoding="utf-8") as fh:
            fh.write(tropical.export_off(poset))
    return _emit(payload, f"{kind} subdivision: {len(cells)} cells, "
                          f"{len(sub_vertices)} vertices")


def cmd_degenerate(args) -> int:
    poset = _load_poset(args.poset)
    u = jsonio.parameter_from_json(_load_json(args.from_t), poset)
    u2 = jsonio.parameter_from_json(_load_json(args.to_t), poset)
    pair = dg.DegenerationPair(u, u2)
    fmap = dg.degeneration_map(poset, pair)
    dom = dg.check_fvector_domination(poset, pair)
    payload = {"command": "degenerate",
               "from": jsonio.parameter_to_json(u)["t"],
               "to": jsonio.parameter_to_json(u2)["t"],
               "face_map": fmap.as_index_pairs(),
               "surjective": fmap.is_surjective(),
               "order_preserving": fmap.is_order_preserving(),
               "dims_nondecreasing": fmap.dims_nondecreasing(),
               "f_vector_domination": dom}
    ok = all([fmap.is_surjective(), fmap.is_order_preserving(),
              fmap.dims_nondecreasing(), dom["pass"]])
    return _emit(payload, f"degeneration map: {'PASS' if ok else 'FAIL'}")


def _guarded(fn):
    """Per-item kernel-error capture so sweeps can emit partial reports."""
    def run(item):
        try:
            return fn(item), None
        except GeometryError as exc:
            return None, f"{type(exc).__name__}: {exc}"
    return run


def _sweep_ehrhart(poset) -> dict:
    parts = [family.partition_of_parameter(poset, t)
             for t in family.hypercube_vertices(poset)]

    def one(part):
        h = family.hrep_chain_order(poset, part, projected=False)
        data = lattice.ehrhart(h)
        return (sorted(part.C), [rat_str(c) for c in data.coefficients])

    results = _pmap(_guarded(one), parts)
    rows = [r for r, err in results if err is None]
    errors = [{"C": sorted(part.C), "error": err}
              for part, (_, err) in zip(parts, results) if err is not None]
    polys = {tuple(p) for _, p in rows}
    report = {"check": "ehrhart", "pass": len(polys) == 1 and not errors,
              "polynomials": [{"C": c, "coefficients": p} for c, p in rows]}
    if errors:
        report["errors"] = errors
    return report


def _sweep_types(poset) -> dict:
    faces = [{}]
    for p in sorted(poset.unmarked):
        faces.append({p: Fraction(0)})
        faces.append({p: Fraction(1)})
    results = _pmap(_guarded(lambda f: dg.combinatorial_type_sweep(poset, f)), faces)
    reports = [r for r, err in results if err is None]
    errors = [{"face": {k: rat_str(v) for k, v in sorted(f.items())}, "error": err}
              for f, (_, err) in zip(faces, results) if err is not None]
    report = {"check": "types",
              "pass": bool(reports) and all(r["pass"] for r in reports) and not errors,
              "faces": reports}
    if errors:
        report["errors"] = errors
    return report


def _sweep_domination(poset) -> dict:
    t = family.generic_parameter(poset)

    def one(u):
        pair = dg.DegenerationPair(t, u)
        fmap = dg.degeneration_map(poset, pair)
        rep = dg.check_fvector_domination(poset, pair)
        rep["map_ok"] = (fmap.is_surjective() and fmap.is_order_preserving()
                         and fmap.dims_nondecreasing())
        return rep

    targets = list(family.hypercube_vertices(poset))
    results = _pmap(_guarded(one), targets)
    reports = [r for r, err in results if err is None]
    errors = [{"t": jsonio.parameter_to_json(u)["t"], "error": err}
              for u, (_, err) in zip(targets, results) if err is not None]
    report = {"check": "domination", "generic_t": jsonio.parameter_to_json(t)["t"],
              "pass": bool(reports) and not errors
                      and all(r["pass"] and r["map_ok"] for r in reports),
              "targets": reports}
    if errors:
        report["errors"] = errors
    return report


def _sweep_hibi_li(poset) -> dict:
    unmarked = sorted(poset.unmarked)
    tame = family.is_tame(poset)
    rows = []
    table_errors = []
    for k in range(len(unmarked) + 1):
        for C in itertools.combinations(unmarked, k):
            part = family.Partition(frozenset(C), frozenset(unmarked) - frozenset(C))
            try:
                h = family.hrep_chain_order(poset, part, projected=True)
                lat = face_lattice(h, vertices(h))
            except GeometryError as exc:
                table_errors.append({"C": list(C),
                                     "error": f"{type(exc).__name__}: {exc}"})
                continue
            rows.append({"C": list(C), "f_vector": list(lat.f_vector())})
    moves = []
    errors = []
    ok = True
    for k in range(len(unmarked)):
        for C in itertools.combinations(unmarked, k):
            base = frozenset(C)
            for q in unmarked:
                if q in base:
                    continue
                part_a = family.Partition(base, frozenset(unmarked) - base)
                part_b = family.Partition(base | {q}, frozenset(unmarked) - base - {q})
                try:
                    rep = dg.hibi_li_check(poset, part_a, part_b, tame=tame)
                except GeometryError as exc:
                    errors.append({"C": sorted(base), "moved": q,
                                   "error": f"{type(exc).__name__}: {exc}"})
                    continue
                ok = ok and rep["dominated"] and rep.get("facet_delta_match", True)
                moves.append(rep)
    errors = table_errors + errors
    report = {"check": "hibi-li", "tame": tame, "pass": ok and not errors,
              "f_vectors": rows, "moves": moves}
    if errors:
        report["errors"] = errors
    return report


def cmd_sweep(args) -> int:
    poset = _load_poset(args.poset)
    if len(poset.unmarked) > 12:
        raise InputError("sweeps are capped at 12 unmarked elements")
    if args.check == "ehrhart":
        report = _sweep_ehrhart(poset)
    elif args.check == "types":
        report = _sweep_types(poset)
    elif args.check == "domination":
        report = _sweep_domination(poset)
    elif args.check == "tame":
        report = {"check": "tame", "pass": family.is_tame(poset)}
    elif args.check == "hibi-li":
        report = _sweep_hibi_li(poset)
    else:  # conjecture5
        t = family.generic_parameter(poset)
        report = tropical.check_vertex_degeneration_conjecture(poset, t)
    payload = {"command": "sweep", "checked": args.check, **report}
    status = "PASS" if report.get("pass") else "FAIL"
    if report.get("errors"):
        _emit(payload, f"sweep {args.check}: {status} "
                       f"({len(report['errors'])} items failed to compute)")
        return EXIT_COMPUTE
    return _emit(payload, f"sweep {args.check}: {status}")


def cmd_regularize(args) -> int:
    poset = _load_poset(args.poset)
    result, elem_map = regularize(poset)
    payload = {"command": "regularize",
               "poset": jsonio.poset_to_json(result),
               "element_map": {k: elem_map[k] for k in sorted(elem_map)}}
    return _emit(payload, f"regularized: {len(result.elements)} elements, "
                          f"{len(result.covers)} covers")


def cmd_tame(args) -> int:
    poset = _load_poset(args.poset)
    result = family.is_tame(poset)
    payload = {"command": "tame", "pass": result}
    return _emit(payload, f"tame: {'PASS' if result else 'FAIL'}")


def cmd_hibi_li(args) -> int:
    poset = _load_poset(args.poset)
    part_a = jsonio.partition_from_json(_load_json(args.part_a), poset)
    part_b = jsonio.partition_from_json(_load_json(args.part_b), poset)
    report = dg.hibi_li_check(poset, part_a, part_b)
    payload = {"command": "hibi-li", **report}
    return _emit(payload, f"hibi-li dominated: {report['dominated']}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mpp",
                                 description="marked poset polyhedra toolkit")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("poset", help="poset JSON file")
        p.set_defaults(fn=fn)
        return p

    def add_param_flags(p):
        p.add_argument("--t", help="parameter JSON file, or 'generic'")
        p.add_argument("--partition", help="partition JSON file")

    p = add("hrep", cmd_hrep, help="inequality description of O_t")
    add_param_flags(p)
    p.add_argument("--irredundant", action="store_true")
    p.add_argument("--projected", action="store_true",
                   help="eliminate marked coordinates")

    p = add("vertices", cmd_vertices, help="vertex enumeration")
    add_param_flags(p)
    p.add_argument("--method", choices=("dd", "bruteforce", "tropical"),
                   default="dd")

    p = add("fvector", cmd_fvector, help="f-vector of a bounded member")
    add_param_flags(p)

    p = add("ehrhart", cmd_ehrhart, help="Ehrhart counts and polynomial")
    add_param_flags(p)
    p.add_argument("--dilations", type=int, default=None)

    p = add("lattice-points", cmd_lattice_points, help="integer points")
    add_param_flags(p)

    p = add("subdivision", cmd_subdivision, help="tropical subdivision of O(P,lambda)")
    p.add_argument("--ideal-chains", action="store_true",
                   help="ideal-chain cells instead of the tropical subdivision")
    p.add_argument("--off", help="also write an OFF 2-skeleton to this path")

    p = add("degenerate", cmd_degenerate, help="degeneration face map")
    p.add_argument("--from-t", required=True, dest="from_t")
    p.add_argument("--to-t", required=True, dest="to_t")

    p = add("sweep", cmd_sweep, help="family-wide checks")
    p.add_argument("--check", required=True,
                   choices=("ehrhart", "types", "domination", "tame",
                            "hibi-li", "conjecture5"))

    add("regularize", cmd_regularize, help="contract + remove redundant covers")
    add("tame", cmd_tame, help="tameness sweep")

    p = add("hibi-li", cmd_hibi_li, help="compare two chain-order polytopes")
    p.add_argument("--part-a", required=True, dest="part_a")
    p.add_argument("--part-b", required=True, dest="part_b")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (InputError, jsonio.SchemaError, PosetError, ValueError) as exc:
        print(json.dumps({"error": str(exc), "kind": "input"}), file=sys.stdout)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (GeometryError, AssertionError) as exc:
        print(json.dumps({"error": str(exc), "kind": "computation"}), file=sys.stdout)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
