"""Command line entry point.

Exit status: 0 when every check passes, 2 on a verification failure,
1 on usage, input or schema errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import families as fam
from . import jsonio, protocols, tiles, verification
from .engine import simulate_state, verify_perfect
from .rational import fstr

OK, USAGE, FAILED = 0, 1, 2


class CliError(Exception):
    pass


def _dims(s: Optional[str]):
    if not s:
        return ()
    try:
        return tuple(int(x) for x in s.split(","))
    except ValueError:
        raise CliError(f"--dims must be a comma list of integers, got {s!r}") from None


def _read_json(path: str):
    try:
        with open(path) as f:
            return json.load(f)
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise CliError(f"{path}: invalid JSON ({e})") from None


def _emit(args, doc, text: Optional[str] = None):
    out = text if (args.format == "text" and text is not None) else jsonio.dumps(doc)
    if getattr(args, "out", None):
        try:
            with open(args.out, "w") as f:
                f.write(out)
        except OSError as e:
            raise CliError(f"cannot write {args.out}: {e.strerror}") from None
    else:
        sys.stdout.write(out)


def _load_set(args) -> fam.StateSet:
    if getattr(args, "set_in", None):
        return jsonio.set_from_json(_read_json(args.set_in))
    if not args.family:
        raise CliError("give --in set.json or --family with --dims")
    return fam.build(args.family, _dims(args.dims))


def _load_protocol(args):
    prot = jsonio.protocol_from_json(_read_json(args.proto_in))
    if args.set:
        states = jsonio.set_from_json(_read_json(args.set))
    else:
        states = fam.build(prot.family, prot.params)
    return prot, states


# -- commands -----------------------------------------------------------------

def cmd_build_set(args):
    states = fam.build(args.family, _dims(args.dims))
    doc = jsonio.set_to_json(states)
    text = "\n".join(f"{l}: {k!r}" for l, k in states) + "\n"
    _emit(args, doc, text)
    return OK


def check_set_doc(states: fam.StateSet, witness: bool = True) -> dict:
    g = verification.gram_matrix(states)
    bad = verification.off_diagonal_nonzero(g)
    table = verification.product_certificate(states)
    audit = verification.count_audit(states)
    doc = {
        "schema": jsonio.SCHEMA,
        "family": states.family,
        "params": list(states.params),
        "count": states.count,
        "gram_ok": not bad,
        "gram_violations": [[states.labels[i], states.labels[j]] for i, j in bad],
        "product_ok": verification.all_product(table),
        "product_violations": sorted(l for l, row in table.items() if any(r != 1 for r in row.values())),
        "count_ok": audit.ok,
        "count_audit": jsonio.audit_to_json(audit),
    }
    if witness:
        doc["witness"] = [jsonio.witness_to_json(verification.indistinguishability_witness(states, p))
                          for p in states.layout.parties]
    return doc


def cmd_check_set(args):
    states = _load_set(args)
    doc = check_set_doc(states, not args.no_witness)
    lines = [f"{k}: {doc[k]}" for k in ("count", "gram_ok", "product_ok", "count_ok")]
    a = doc["count_audit"]
    lines.append(f"count audit: actual {a['actual']}, claimed {a['claimed']} ({a['formula']})")
    for w in doc.get("witness", []):
        lines.append(f"witness {w['party']}: solution_dim {w['solution_dim']}, trivial_only {w['trivial_only']}")
    _emit(args, doc, "\n".join(lines) + "\n")
    return OK if doc["gram_ok"] and doc["product_ok"] and doc["count_ok"] else FAILED


def cmd_build_protocol(args):
    try:
        prot = protocols.build_protocol(args.theorem, _dims(args.dims))
    except fam.FamilyError:
        raise
    except ValueError as e:
        raise CliError(str(e)) from None
    _emit(args, jsonio.protocol_to_json(prot))
    return OK


def cmd_run_protocol(args):
    prot, states = _load_protocol(args)
    labels = [args.state] if args.state else list(states.labels)
    doc = {"schema": jsonio.SCHEMA, "runs": []}
    lines = []
    for label in labels:
        try:
            ket = states[label]
        except KeyError:
            raise CliError(f"no state {label!r} in the set") from None
        probs = simulate_state(prot, ket)
        info = prot.leaves()
        leaves = {p: {"probability": fstr(v), "declare": info[p][0].declare} for p, v in sorted(probs.items())}
        doc["runs"].append({"state": label, "leaves": leaves})
        lines.append(label)
        lines.extend(f"  {p or '<root>'} -> {x['declare']}: {x['probability']}" for p, x in leaves.items())
    _emit(args, doc, "\n".join(lines) + "\n")
    return OK


def _report_text(rep) -> str:
    lines = [f"perfect: {rep.perfect} (post-selected: {rep.post_selected})"]
    for s in rep.states:
        lines.append(f"  {s.label}: identified {fstr(s.identified)} of accepted {fstr(s.accepted)}"
                     f"{'' if s.ok(rep.post_selected) else '  FAIL'}")
    for leaf, ls in rep.shared_leaves.items():
        lines.append(f"  shared leaf {leaf}: {', '.join(ls)}")
    if not rep.diagnostics.ok:
        lines.append(f"  diagnostics: {rep.diagnostics}")
    return "\n".join(lines) + "\n"


def cmd_verify_protocol(args):
    prot, states = _load_protocol(args)
    rep = verify_perfect(prot, states, args.post_selected)
    _emit(args, jsonio.report_to_json(rep), _report_text(rep))
    return OK if rep.perfect else FAILED


def cmd_witness(args):
    states = _load_set(args)
    parties = [args.party] if args.party else list(states.layout.parties)
    try:
        ws = [verification.indistinguishability_witness(states, p) for p in parties]
    except ValueError as e:
        raise CliError(str(e)) from None
    doc = {"schema": jsonio.SCHEMA, "witness": [jsonio.witness_to_json(w) for w in ws]}
    text = "".join(f"{w.party}: solution_dim {w.solution_dim}, trivial_only {w.trivial_only}\n" for w in ws)
    _emit(args, doc, text + verification.WITNESS_SCOPE + "\n")
    return OK


def cmd_render_tiles(args):
    if not args.family and not args.set_in:
        args.family = fam.BIPARTITE
    states = _load_set(args)
    try:
        grids = tiles.tile_grids(states)
    except ValueError as e:
        raise CliError(str(e)) from None
    doc = {"schema": jsonio.SCHEMA, "family": states.family, "params": list(states.params), "tiles": grids}
    _emit(args, doc, tiles.render_text(states, grids))
    return OK


def _grid(theorem: str, lo: int, hi: int):
    if theorem == "1":
        return [(m, n) for m in range(lo, hi + 1) for n in range(m, hi + 1)]
    if theorem == "3":
        return [(a, b, c) for a in range(lo, hi + 1) for b in range(a, hi + 1) for c in range(b, hi + 1)]
    if theorem == "2":
        return [(a, b, c, d) for a in range(lo, hi + 1) for b in range(a, hi + 1)
                for c in range(lo, hi + 1) for d in range(c, hi + 1)]
    raise CliError("sweep supports --theorem 1, 2 or 3")


def cmd_sweep(args):
    rows = []
    for dims in _grid(args.theorem, args.min, args.max):
        prot = protocols.build_protocol(args.theorem, dims)
        states = protocols.states_for(prot)
        rep = verify_perfect(prot, states, args.post_selected)
        acc = sorted({s.accepted for s in rep.states})
        rows.append({"dims": list(dims), "states": states.count, "perfect": rep.perfect,
                     "accepted": [fstr(a) for a in acc]})
    doc = {"schema": jsonio.SCHEMA, "theorem": args.theorem, "post_selected": args.post_selected, "rows": rows}
    lines = [f"{'dims':<14}{'states':>7}  {'perfect':<8} accepted"]
    for r in rows:
        lines.append(f"{','.join(map(str, r['dims'])):<14}{r['states']:>7}  {str(r['perfect']):<8} "
                     f"{' '.join(r['accepted'])}")
    _emit(args, doc, "\n".join(lines) + "\n")
    return OK if all(r["perfect"] for r in rows) else FAILED


# -- parser -------------------------------------------------------------------

def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="loccdisc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out=True):
        sp.add_argument("--format", choices=("json", "text"), default="json")
        if out:
            sp.add_argument("--out", help="write here instead of stdout")

    def set_source(sp):
        sp.add_argument("--in", dest="set_in", help="state set JSON file")
        sp.add_argument("--family", choices=fam.FAMILIES)
        sp.add_argument("--dims", help="comma-separated dimensions")

    sp = sub.add_parser("build-set", help="construct a state family")
    sp.add_argument("--family", choices=fam.FAMILIES, required=True)
    sp.add_argument("--dims", default="")
    common(sp)
    sp.set_defaults(func=cmd_build_set)

    sp = sub.add_parser("check-set", help="orthogonality, product and count checks plus the witness")
    set_source(sp)
    sp.add_argument("--no-witness", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_check_set)

    sp = sub.add_parser("build-protocol", help="emit a protocol tree")
    sp.add_argument("--theorem", choices=protocols.THEOREMS, required=True)
    sp.add_argument("--dims", default="")
    common(sp)
    sp.set_defaults(func=cmd_build_protocol)

    for name, func, help_ in (("run-protocol", cmd_run_protocol, "leaf probabilities per input state"),
                              ("verify-protocol", cmd_verify_protocol, "perfect-discrimination verdict")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--in", dest="proto_in", required=True, help="protocol JSON file")
        sp.add_argument("--set", help="state set JSON (default: rebuild from the protocol's set reference)")
        if name == "run-protocol":
            sp.add_argument("--state", help="only this state label")
        else:
            sp.add_argument("--post-selected", action="store_true",
                            help="score conditionally on the resource projections succeeding")
        common(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("witness", help="first-move indistinguishability witness")
    set_source(sp)
    sp.add_argument("--party")
    common(sp)
    sp.set_defaults(func=cmd_witness)

    sp = sub.add_parser("render-tiles", help="text tile diagram")
    set_source(sp)
    common(sp)
    sp.set_defaults(func=cmd_render_tiles)

    sp = sub.add_parser("sweep", help="verify a protocol family over a dimension grid")
    sp.add_argument("--theorem", choices=("1", "2", "3"), default="1")
    sp.add_argument("--min", type=int, default=4)
    sp.add_argument("--max", type=int, default=7)
    sp.add_argument("--post-selected", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_sweep)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return OK if e.code == 0 else USAGE
    try:
        return args.func(args)
    except (CliError, jsonio.SchemaError, fam.FamilyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
