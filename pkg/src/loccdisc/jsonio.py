"""Lossless JSON forms of kets, state sets, protocol trees and reports.

Rationals are written as ``"p/q"`` strings (or as separate numerator and
denominator integers inside ket amplitude rows); basis labels are 1-based.
Every top-level document carries ``"schema": 1``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, List

from . import families as fam
from .engine import FAIL, Leaf, Node, Outcome, Protocol, Report, Resource, Tree
from .linalg import Ket, LocalOperator, Register, SystemLayout
from .rational import fstr, parse_fraction
from .verification import CountAudit, WitnessResult

SCHEMA = 1


class SchemaError(ValueError):
    """Malformed document; the message names the offending JSON path."""


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _get(d, key, path, kind=None):
    if not isinstance(d, dict):
        raise SchemaError(f"{path}: expected an object")
    if key not in d:
        raise SchemaError(f"{path}.{key}: missing")
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        raise SchemaError(f"{path}.{key}: expected {kind.__name__ if isinstance(kind, type) else kind}")
    return v


def _frac(v, path) -> Fraction:
    try:
        return parse_fraction(v)
    except (ValueError, ZeroDivisionError, TypeError):
        raise SchemaError(f"{path}: not an exact rational: {v!r}") from None


def _schema(doc, path="$"):
    if _get(doc, "schema", path) != SCHEMA:
        raise SchemaError(f"{path}.schema: unsupported version {doc['schema']!r}")


# -- layout / ket -------------------------------------------------------------

def layout_to_json(layout: SystemLayout) -> List[dict]:
    return [{"id": r.id, "party": r.party, "dim": r.dim, "role": r.role} for r in layout.registers]


def layout_from_json(doc, path="$.layout") -> SystemLayout:
    if not isinstance(doc, list):
        raise SchemaError(f"{path}: expected a list of registers")
    regs = []
    for i, r in enumerate(doc):
        p = f"{path}[{i}]"
        try:
            regs.append(Register(_get(r, "id", p, str), _get(r, "party", p, str), _get(r, "dim", p, int),
                                 r.get("role", "principal")))
        except ValueError as e:
            if isinstance(e, SchemaError):
                raise
            raise SchemaError(f"{p}: {e}") from None
    try:
        return SystemLayout(tuple(regs))
    except ValueError as e:
        raise SchemaError(f"{path}: {e}") from None


def ket_to_json(ket: Ket) -> dict:
    rows = []
    for idx, v in sorted(ket.amplitudes.items()):
        rows.append(list(idx) + [v.numerator, v.denominator])
    return {"layout": layout_to_json(ket.layout), "amps": rows}


def ket_from_json(doc, path="$") -> Ket:
    layout = layout_from_json(_get(doc, "layout", path, list), f"{path}.layout")
    amps = {}
    n = len(layout)
    for i, row in enumerate(_get(doc, "amps", path, list)):
        p = f"{path}.amps[{i}]"
        if not isinstance(row, list) or len(row) != n + 2 or not all(isinstance(x, int) for x in row):
            raise SchemaError(f"{p}: expected {n} indices then numerator, denominator")
        if row[-1] == 0:
            raise SchemaError(f"{p}: zero denominator")
        amps[tuple(row[:n])] = Fraction(row[n], row[n + 1])
    try:
        return Ket(layout, amps)
    except ValueError as e:
        raise SchemaError(f"{path}.amps: {e}") from None


# -- state sets -----------------------------------------------------------------

def set_to_json(states: fam.StateSet) -> dict:
    return {
        "schema": SCHEMA,
        "family": states.family,
        "params": list(states.params),
        "claimed_count": states.claimed_count,
        "stopper": states.stopper,
        "states": [{"label": l, "ket": ket_to_json(k)} for l, k in states],
    }


def set_from_json(doc, path="$") -> fam.StateSet:
    _schema(doc, path)
    family = _get(doc, "family", path, str)
    params = _get(doc, "params", path, list)
    entries = _get(doc, "states", path, list)
    if not entries:
        raise SchemaError(f"{path}.states: empty")
    labels, kets = [], []
    for i, e in enumerate(entries):
        p = f"{path}.states[{i}]"
        labels.append(_get(e, "label", p, str))
        kets.append(ket_from_json(_get(e, "ket", p, dict), f"{p}.ket"))
    active = {}
    if family in (fam.EVEN, fam.ODD):
        for l in labels:
            if l.startswith("S") and "." in l:
                active[l] = int(l[1:l.index(".")]) - 1
    try:
        return fam.StateSet(family, tuple(params), tuple(labels), tuple(kets),
                            _get(doc, "claimed_count", path, int), _get(doc, "stopper", path, str), active)
    except ValueError as e:
        raise SchemaError(f"{path}: {e}") from None


# -- operators and trees -----------------------------------------------------------

def op_to_json(op: LocalOperator) -> dict:
    ents = sorted(op.entries.items())
    return {
        "label": op.label,
        "party": op.party,
        "registers": list(op.registers),
        "dims": list(op.dims),
        "matrix": [[list(r), list(c), fstr(v)] for (r, c), v in ents],
    }


def op_from_json(doc, path) -> LocalOperator:
    regs = _get(doc, "registers", path, list)
    dims = _get(doc, "dims", path, list)
    ents = {}
    for i, e in enumerate(_get(doc, "matrix", path, list)):
        p = f"{path}.matrix[{i}]"
        if not (isinstance(e, list) and len(e) == 3 and isinstance(e[0], list) and isinstance(e[1], list)):
            raise SchemaError(f"{p}: expected [row-indices, col-indices, \"p/q\"]")
        ents[(tuple(e[0]), tuple(e[1]))] = _frac(e[2], f"{p}[2]")
    try:
        return LocalOperator(_get(doc, "party", path, str), regs, dims, ents, doc.get("label", ""))
    except ValueError as e:
        raise SchemaError(f"{path}: {e}") from None


def tree_to_json(tree: Tree) -> dict:
    if isinstance(tree, Leaf):
        out = {"declare": tree.declare}
        if tree.blocks:
            out["blocks"] = list(tree.blocks)
        return out
    return {
        "party": tree.party,
        "resource": tree.resource,
        "outcomes": [op_to_json(o.op) | {"label": o.label} for o in tree.outcomes],
        "children": {o.label: tree_to_json(o.child) for o in tree.outcomes},
        "complement": None if tree.complement is None else tree_to_json(tree.complement),
    }


def tree_from_json(doc, path="$.root") -> Tree:
    if not isinstance(doc, dict):
        raise SchemaError(f"{path}: expected a node or leaf object")
    if "declare" in doc:
        d = doc["declare"]
        if not isinstance(d, str):
            raise SchemaError(f"{path}.declare: expected a state label or {FAIL!r}")
        return Leaf(d, tuple(doc.get("blocks", ())))
    party = _get(doc, "party", path, str)
    children = _get(doc, "children", path, dict)
    outs = []
    for i, o in enumerate(_get(doc, "outcomes", path, list)):
        p = f"{path}.outcomes[{i}]"
        label = _get(o, "label", p, str)
        if label not in children:
            raise SchemaError(f"{path}.children.{label}: missing")
        outs.append(Outcome(label, op_from_json(o, p), tree_from_json(children[label], f"{path}.children.{label}")))
    comp = doc.get("complement")
    comp = None if comp is None else tree_from_json(comp, f"{path}.complement")
    return Node(party, tuple(outs), comp, bool(doc.get("resource", False)))


def protocol_to_json(p: Protocol) -> dict:
    return {
        "schema": SCHEMA,
        "set": {"family": p.family, "params": list(p.params)},
        "layout": layout_to_json(p.layout),
        "resources": [{"parties": list(r.parties), "registers": list(r.registers), "dim": r.dim}
                      for r in p.resources],
        "discrepancies": list(p.discrepancies),
        "notes": list(p.notes),
        "root": tree_to_json(p.root),
    }


def protocol_from_json(doc, path="$") -> Protocol:
    _schema(doc, path)
    ref = _get(doc, "set", path, dict)
    res = []
    for i, r in enumerate(_get(doc, "resources", path, list)):
        p = f"{path}.resources[{i}]"
        res.append(Resource(tuple(_get(r, "parties", p, list)), tuple(_get(r, "registers", p, list)),
                            _get(r, "dim", p, int)))
    return Protocol(
        tree_from_json(_get(doc, "root", path), f"{path}.root"),
        layout_from_json(_get(doc, "layout", path, list), f"{path}.layout"),
        tuple(res),
        _get(ref, "family", f"{path}.set", str),
        tuple(_get(ref, "params", f"{path}.set", list)),
        tuple(doc.get("discrepancies", ())),
        tuple(doc.get("notes", ())),
    )


# -- reports ------------------------------------------------------------------------

def report_to_json(r: Report) -> dict:
    d = r.diagnostics
    return {
        "schema": SCHEMA,
        "perfect": r.perfect,
        "post_selected": r.post_selected,
        "states": [
            {
                "label": s.label,
                "ok": s.ok(r.post_selected),
                "identified": fstr(s.identified),
                "accepted": fstr(s.accepted),
                "failed": fstr(s.failed),
                "wrong": {k: fstr(v) for k, v in sorted(s.wrong.items())},
                "leaves": {k: fstr(v) for k, v in sorted(s.leaves.items())},
            }
            for s in r.states
        ],
        "shared_leaves": r.shared_leaves,
        "diagnostics": {
            "ok": d.ok,
            "locality": d.locality,
            "not_projector": d.not_projector,
            "non_orthogonal": d.non_orthogonal,
            "duplicate_labels": d.duplicate_labels,
            "unknown_states": d.unknown_states,
            "missing_registers": d.missing_registers,
            "forbidden_incomplete": d.forbidden_incomplete,
            "completeness_defect": {k: fstr(v) for k, v in sorted(d.completeness_defect.items())},
        },
    }


def witness_to_json(w: WitnessResult) -> dict:
    return {
        "party": w.party,
        "solution_dim": w.solution_dim,
        "trivial_only": w.trivial_only,
        "basis": [[[list(r), list(c), fstr(v)] for (r, c), v in sorted(m.items())] for m in w.basis],
        "scope": w.scope,
    }


def audit_to_json(a: CountAudit) -> dict:
    return {"family": a.family, "params": list(a.params), "actual": a.actual, "claimed": a.claimed,
            "formula": a.formula, "ok": a.ok}
