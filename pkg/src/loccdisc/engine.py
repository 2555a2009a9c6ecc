"""Measurement-tree protocols: representation, validation and exact simulation.

A protocol is a tree of :class:`Node` objects. Each node is one party's
projective measurement; every outcome leads to a subtree and the
complement ``I - sum P_i`` leads to ``complement`` (``None`` forbids it).
Leaves declare a state label or ``FAIL``.

Leaves are addressed by the path of outcome labels from the root, joined
with ``/``; the complement edge is labelled ``~``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple, Union

from .families import StateSet
from .linalg import Ket, LayoutError, LocalOperator, SystemLayout, apply_local, identity, tensor

FAIL = "FAIL"
COMPLEMENT = "~"


@dataclass(frozen=True)
class Leaf:
    declare: str = FAIL
    # per-block verdicts for block-composed protocols, e.g. ("SF", "phi3")
    blocks: Tuple[str, ...] = ()

    @property
    def is_fail(self) -> bool:
        return self.declare == FAIL


@dataclass(frozen=True)
class Outcome:
    label: str
    op: LocalOperator
    child: "Tree"


@dataclass(frozen=True)
class Node:
    party: str
    outcomes: Tuple[Outcome, ...]
    complement: Optional["Tree"] = Leaf()
    # a resource node's complement is the post-selection rejection branch
    resource: bool = False

    def __post_init__(self):
        object.__setattr__(self, "outcomes", tuple(self.outcomes))


Tree = Union[Node, Leaf]


@dataclass(frozen=True)
class Resource:
    """One shared maximally entangled pair: ``(party_a, reg_a), (party_b, reg_b), dim``."""

    parties: Tuple[str, str]
    registers: Tuple[str, str]
    dim: int

    def ket(self) -> Ket:
        from .families import maximally_entangled
        return maximally_entangled(self.dim, self.registers, self.parties)


@dataclass(frozen=True)
class Protocol:
    root: Tree
    layout: SystemLayout
    resources: Tuple[Resource, ...]
    family: str = ""
    params: Tuple[int, ...] = ()
    discrepancies: Tuple[str, ...] = ()
    notes: Tuple[str, ...] = ()

    def resource_ket(self) -> Optional[Ket]:
        kets = [r.ket() for r in self.resources]
        return tensor(*kets) if kets else None

    def prepare(self, state: Ket) -> Ket:
        """``state (x) resource`` laid out as the protocol expects."""
        res = self.resource_ket()
        x = state if res is None else tensor(state, res)
        return x.reorder(self.layout) if x.layout != self.layout else x

    def leaves(self) -> Dict[str, Tuple[Leaf, bool]]:
        """Every leaf by path, with whether it is a post-selection rejection."""
        return {p: (lf, rej) for p, lf, rej in walk(self.root)}


def walk(tree: Tree, path: Tuple[str, ...] = (), rejected: bool = False) -> Iterator[Tuple[str, Leaf, bool]]:
    if isinstance(tree, Leaf):
        yield "/".join(path), tree, rejected
        return
    for o in tree.outcomes:
        yield from walk(o.child, path + (o.label,), rejected)
    if tree.complement is not None:
        yield from walk(tree.complement, path + (COMPLEMENT,), rejected or tree.resource)


def nodes(tree: Tree, path: Tuple[str, ...] = ()) -> Iterator[Tuple[str, Node]]:
    if isinstance(tree, Leaf):
        return
    yield "/".join(path), tree
    for o in tree.outcomes:
        yield from nodes(o.child, path + (o.label,))
    if tree.complement is not None:
        yield from nodes(tree.complement, path + (COMPLEMENT,))


# -- validation --------------------------------------------------------------

@dataclass
class Diagnostics:
    locality: List[str] = field(default_factory=list)
    not_projector: List[str] = field(default_factory=list)
    non_orthogonal: List[str] = field(default_factory=list)
    duplicate_labels: List[str] = field(default_factory=list)
    unknown_states: List[str] = field(default_factory=list)
    missing_registers: List[str] = field(default_factory=list)
    forbidden_incomplete: List[str] = field(default_factory=list)
    # path -> trace of I - sum P_i over the registers the node touches
    completeness_defect: Dict[str, Fraction] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not (self.locality or self.not_projector or self.non_orthogonal or self.duplicate_labels
                    or self.unknown_states or self.missing_registers or self.forbidden_incomplete)


def validate(protocol: Protocol, states: StateSet | None = None) -> Diagnostics:
    """Check locality, projector algebra and leaf labels of every node."""
    diag = Diagnostics()
    layout = protocol.layout
    known = set(states.labels) if states is not None else None
    for path, leaf, _ in walk(protocol.root):
        if known is not None and not leaf.is_fail and leaf.declare not in known:
            diag.unknown_states.append(f"{path or '<root>'}: {leaf.declare}")
    for path, node in nodes(protocol.root):
        where = path or "<root>"
        labels = [o.label for o in node.outcomes]
        if len(set(labels)) != len(labels) or COMPLEMENT in labels:
            diag.duplicate_labels.append(where)
        ops = []
        for o in node.outcomes:
            op = o.op
            bad = False
            for rid, d in zip(op.registers, op.dims):
                if rid not in layout:
                    diag.missing_registers.append(f"{where}/{o.label}: {rid}")
                    bad = True
                elif layout[rid].dim != d:
                    diag.missing_registers.append(f"{where}/{o.label}: {rid} has dim {layout[rid].dim}, not {d}")
                    bad = True
                elif layout[rid].party != node.party:
                    diag.locality.append(f"{where}/{o.label}: {rid} belongs to {layout[rid].party}, not {node.party}")
            if op.party != node.party:
                diag.locality.append(f"{where}/{o.label}: operator labelled for {op.party} at {node.party}'s node")
            if not op.is_projector():
                diag.not_projector.append(f"{where}/{o.label}")
            if not bad:
                ops.append((o.label, op))
        if not ops:
            continue
        regs = []
        for _, op in ops:
            regs.extend(r for r in op.registers if r not in regs)
        dims = [layout[r].dim for r in regs]
        full = [(lab, op.embed(regs, dims)) for lab, op in ops]
        for (la, pa), (lb, pb) in itertools.combinations(full, 2):
            if pa.matmul(pb):
                diag.non_orthogonal.append(f"{where}: {la} x {lb}")
        total = identity(node.party, regs, dims).dim
        trace = Fraction(total) - sum(
            (v for _, op in full for (r, c), v in op.entries0() if r == c), Fraction(0))
        diag.completeness_defect[where] = trace
        if node.complement is None and trace != 0:
            diag.forbidden_incomplete.append(where)
    return diag


# -- simulation -----------------------------------------------------------------

def simulate(protocol: Protocol, x: Ket) -> Dict[str, Fraction]:
    """Exact leaf probabilities for the (unnormalized) input ket ``x``.

    Only leaves with nonzero probability are returned. Operators are taken
    to be mutually orthogonal projectors; the complement branch carries
    ``x - sum P_i x``.
    """
    if x.layout != protocol.layout:
        raise LayoutError(f"input layout {x.layout.ids} does not match protocol layout {protocol.layout.ids}")
    if x.is_zero():
        raise ValueError("cannot simulate the zero ket")
    total = x.norm2
    out: Dict[str, Fraction] = {}

    def rec(tree: Tree, y: Ket, path: Tuple[str, ...]):
        if isinstance(tree, Leaf):
            out["/".join(path)] = y.norm2 / total
            return
        rest = y
        for o in tree.outcomes:
            z = apply_local(o.op, y)
            if not z.is_zero():
                rec(o.child, z, path + (o.label,))
                rest = rest - z
        if not rest.is_zero():
            if tree.complement is None:
                raise ValueError(f"input reaches the forbidden complement at {'/'.join(path) or '<root>'}")
            rec(tree.complement, rest, path + (COMPLEMENT,))

    rec(protocol.root, x, ())
    return out


def simulate_state(protocol: Protocol, state: Ket) -> Dict[str, Fraction]:
    return simulate(protocol, protocol.prepare(state))


# -- perfect discrimination ---------------------------------------------------

@dataclass
class StateResult:
    label: str
    leaves: Dict[str, Fraction]
    identified: Fraction  # mass on leaves declaring this state
    accepted: Fraction  # mass not rejected by post-selection
    wrong: Dict[str, Fraction]  # leaves declaring another state
    failed: Fraction  # FAIL mass outside post-selection rejection

    def ok(self, post_selected: bool) -> bool:
        if self.wrong or self.failed:
            return False
        if post_selected:
            return self.accepted > 0 and self.identified == self.accepted
        return self.identified == 1


@dataclass
class Report:
    post_selected: bool
    states: List[StateResult]
    shared_leaves: Dict[str, List[str]]
    diagnostics: Diagnostics
    perfect: bool

    def result(self, label: str) -> StateResult:
        for r in self.states:
            if r.label == label:
                return r
        raise KeyError(label)


def verify_perfect(protocol: Protocol, states: StateSet, post_selected: bool = False) -> Report:
    """Run every state of ``states`` through the protocol and judge perfection.

    With ``post_selected`` each state's identified mass must equal the mass
    surviving the resource nodes' designated outcomes; otherwise it must be 1.
    Either way no non-FAIL leaf may be reached by two states.
    """
    diag = validate(protocol, states)
    leaf_info = protocol.leaves()
    results = []
    reached: Dict[str, List[str]] = {}
    for label, ket in states:
        probs = simulate_state(protocol, ket)
        ident = Fraction(0)
        rejected = Fraction(0)
        failed = Fraction(0)
        wrong = {}
        for path, p in probs.items():
            leaf, rej = leaf_info[path]
            if leaf.is_fail:
                if rej:
                    rejected += p
                else:
                    failed += p
                continue
            reached.setdefault(path, []).append(label)
            if leaf.declare == label:
                ident += p
            else:
                wrong[path] = p
        results.append(StateResult(label, probs, ident, 1 - rejected, wrong, failed))
    shared = {p: ls for p, ls in sorted(reached.items()) if len(ls) > 1}
    perfect = diag.ok and not shared and all(r.ok(post_selected) for r in results)
    return Report(post_selected, results, shared, diag, perfect)


# -- tree utilities -----------------------------------------------------------

def relabel_outcomes(tree: Tree, rename) -> Tree:
    """Copy of ``tree`` with each outcome label replaced by ``rename(label)``."""
    if isinstance(tree, Leaf):
        return tree
    outs = tuple(Outcome(rename(o.label), o.op.relabel(rename(o.label)), relabel_outcomes(o.child, rename))
                 for o in tree.outcomes)
    comp = None if tree.complement is None else relabel_outcomes(tree.complement, rename)
    return Node(tree.party, outs, comp, tree.resource)


def leaf_profile(protocol: Protocol, states: StateSet) -> Dict[str, List[Tuple[str, Fraction]]]:
    """Per state, the sorted ``(declared label, probability)`` of reached leaves.

    Independent of outcome labels and of the order of outcomes in each node.
    """
    info = protocol.leaves()
    out = {}
    for label, ket in states:
        probs = simulate_state(protocol, ket)
        out[label] = sorted((info[p][0].declare, v) for p, v in probs.items())
    return out
