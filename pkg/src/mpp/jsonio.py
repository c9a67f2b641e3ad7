"""Strict JSON schemas for posets, parameters, partitions and geometry data.

Rationals travel as strings ("3", "-1/2") and round-trip bit-exactly.
Unknown keys are rejected so that typos fail loudly.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .family import Parameter, Partition
from .geometry import HRep, VRep
from .poset import MarkedPoset, PosetError
from .rationals import rat, rat_str


class SchemaError(ValueError):
    pass


def _expect_keys(obj: dict, required: set[str], optional: set[str] = frozenset(),
                 what: str = "object"):
    if not isinstance(obj, dict):
        raise SchemaError(f"{what} must be a JSON object")
    keys = set(obj)
    missing = required - keys
    unknown = keys - required - optional
    if missing:
        raise SchemaError(f"{what} misses keys {sorted(missing)}")
    if unknown:
        raise SchemaError(f"{what} has unknown keys {sorted(unknown)}")


def poset_from_json(data) -> MarkedPoset:
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    _expect_keys(data, {"elements", "covers", "marking"}, what="poset")
    elements = data["elements"]
    if (not isinstance(elements, list)
            or not all(isinstance(e, str) for e in elements)):
        raise SchemaError("elements must be a list of strings")
    covers = data["covers"]
    if (not isinstance(covers, list)
            or not all(isinstance(c, list) and len(c) == 2
                       and all(isinstance(e, str) for e in c) for c in covers)):
        raise SchemaError("covers must be a list of [lower, upper] pairs")
    marking = data["marking"]
    if not isinstance(marking, dict):
        raise SchemaError("marking must map elements to rational strings")
    try:
        lam = {k: rat(v) for k, v in marking.items()}
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"bad marking value: {exc}") from exc
    try:
        return MarkedPoset(tuple(elements), frozenset(map(tuple, covers)), lam)
    except PosetError as exc:
        raise SchemaError(str(exc)) from exc


def poset_to_json(poset: MarkedPoset) -> dict:
    return {
        "elements": list(poset.elements),
        "covers": [list(c) for c in sorted(poset.covers)],
        "marking": {a: rat_str(poset.marking[a]) for a in sorted(poset.marking)},
    }


def parameter_from_json(data, poset: MarkedPoset) -> Parameter:
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    _expect_keys(data, {"t"}, what="parameter")
    t = data["t"]
    if not isinstance(t, dict):
        raise SchemaError("t must map unmarked elements to rational strings")
    if set(t) != set(poset.unmarked):
        raise SchemaError(f"t must assign exactly the unmarked elements "
                          f"{sorted(poset.unmarked)}")
    try:
        return Parameter({k: rat(v) for k, v in t.items()})
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def parameter_to_json(t: Parameter) -> dict:
    return {"t": {k: rat_str(v) for k, v in sorted(t.values.items())}}


def partition_from_json(data, poset: MarkedPoset) -> Partition:
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    _expect_keys(data, {"C", "O"}, what="partition")
    for key in ("C", "O"):
        if not isinstance(data[key], list) or not all(isinstance(e, str) for e in data[key]):
            raise SchemaError(f"{key} must be a list of element names")
    part = Partition(frozenset(data["C"]), frozenset(data["O"]))
    if part.C | part.O != frozenset(poset.unmarked):
        raise SchemaError("C and O must partition the unmarked elements")
    return part


def partition_to_json(part: Partition) -> dict:
    return {"C": sorted(part.C), "O": sorted(part.O)}


def hrep_to_json(h: HRep) -> dict:
    def row(c):
        coeffs = {h.coords[i]: rat_str(x) for i, x in enumerate(c.coeffs) if x != 0}
        return {"coeffs": coeffs, "rhs": rat_str(c.rhs), "origin": list(c.origin)}

    return {"coords": list(h.coords),
            "equations": [row(c) for c in h.equations],
            "inequalities": [row(c) for c in h.inequalities]}


def vrep_to_json(v: VRep) -> dict:
    return {"coords": list(v.coords),
            "vertices": [[rat_str(x) for x in p] for p in v.vertices],
            "rays": [[rat_str(x) for x in r] for r in v.rays]}


def jsonable(obj):
    """Recursively convert Fractions to rational strings for emission."""
    if isinstance(obj, Fraction):
        return rat_str(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    if isinstance(obj, frozenset):
        return sorted(jsonable(x) for x in obj)
    return obj
