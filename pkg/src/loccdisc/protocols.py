"""Builders for the entanglement-assisted discrimination trees.

All builders share one pattern. A party ``R`` projects its principal
register together with its half of a shared maximally entangled pair onto
``sum_i |ii><ii|``; afterwards the partner ``M`` measures its own principal
register together with *its* ancilla half. Each non-stopper state of the
bipartite family is either

* a *pair* state ``|r>_M (|p> - |q>)_R``, which ``M`` isolates with
  ``(|p><p| + |q><q|)_anc (x) |r><r|`` together with part of the stopper, or
* a *single* state ``(|u> - |v>)_M |c>_R``, which ``M`` isolates alone with
  ``|c><c|_anc (x) |u-v><u-v|``.

A pair branch still holds two candidates of the form ``|pp>|p> +- |qq>|q>``
spread over ``R``'s registers and ``M``'s ancilla. ``R`` projects onto
``|pp> +- |qq>`` and ``M`` then reads its ancilla in the ``|p +- q>``
basis; equal signs mean stopper, opposite signs the pair state.

Block-composed trees are built with continuation passing: ``found(label)``
gives the subtree reached once a state is identified and ``sf`` the
subtree for "stopper or fill" in the current block.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import families as fam
from .engine import Leaf, Node, Outcome, Protocol, Resource, Tree
from .linalg import ANCILLA, LocalOperator, Register, SystemLayout, projector

SF = "SF"

PAIR_NOTE = ("A paired outcome leaves the stopper and one state as |pp>|p> +- |qq>|q> across one party's "
             "registers and the other party's ancilla; a +- projection by the first party alone does not "
             "separate them, so the other party then measures its ancilla in the |p+-q> basis.")


@dataclass(frozen=True)
class StageOutcome:
    """One outcome of the measuring party in a bipartite stage."""

    state: str  # label within the bipartite family, e.g. "phi5"
    kind: str  # "pair" or "single"
    anc: Tuple[int, ...]  # pair: (p, q); single: (c,)
    principal: Tuple[int, ...]  # pair: (r,); single: (u, v)


def bipartite_stage(m: int, n: int) -> List[StageOutcome]:
    """Outcomes for every non-stopper state of the ``(m, n)`` family, in order."""
    out = []
    for label, a, b in fam.bipartite_factors(m, n)[1:]:
        if len(a) == 1:
            (r,) = a
            p, q = sorted(b, key=lambda i: -b[i])
            out.append(StageOutcome(label, "pair", (p, q), (r,)))
        else:
            (c,) = b
            u, v = sorted(a, key=lambda i: -a[i])
            out.append(StageOutcome(label, "single", (c,), (u, v)))
    return out


@dataclass(frozen=True)
class Side:
    """A party with one principal and one ancilla register."""

    party: str
    principal: str
    anc: str
    principal_dim: int
    anc_dim: int

    def op(self, vectors, label: str) -> LocalOperator:
        """Projector on ``(anc, principal)`` from ``{(anc, principal): amp}`` vectors."""
        return projector(self.party, [self.anc, self.principal], [self.anc_dim, self.principal_dim],
                         vectors, label)

    def anc_op(self, vec, label: str) -> LocalOperator:
        return projector(self.party, [self.anc], [self.anc_dim], [{(k,): v for k, v in vec.items()}], label)

    def resource_projector(self, label: str) -> LocalOperator:
        d = min(self.anc_dim, self.principal_dim)
        return self.op([{(i, i): 1} for i in range(1, d + 1)], label)


def stage_operator(side: Side, o: StageOutcome, label: str) -> LocalOperator:
    if o.kind == "pair":
        p, q = o.anc
        (r,) = o.principal
        return side.op([{(p, r): 1}, {(q, r): 1}], label)
    (c,) = o.anc
    u, v = o.principal
    return side.op([{(c, u): 1, (c, v): -1}], label)


def pm_branch(res: Side, meas: Side, p: int, q: int, state: Tree, stopper: Tree, tag: str) -> Node:
    """Separate ``|pp>|p> + |qq>|q>`` (stopper) from the minus combination (state)."""

    def anc_node(plus_is_stopper: bool) -> Node:
        a, b = (stopper, state) if plus_is_stopper else (state, stopper)
        return Node(meas.party, (
            Outcome(f"{meas.anc}+", meas.anc_op({p: 1, q: 1}, f"{meas.anc}+"), a),
            Outcome(f"{meas.anc}-", meas.anc_op({p: 1, q: -1}, f"{meas.anc}-"), b),
        ))

    plus = res.op([{(p, p): 1, (q, q): 1}], f"{tag}1")
    minus = res.op([{(p, p): 1, (q, q): -1}], f"{tag}2")
    return Node(res.party, (
        Outcome(f"{tag}1", plus, anc_node(True)),
        Outcome(f"{tag}2", minus, anc_node(False)),
    ))


# -- bipartite ------------------------------------------------------------------

def _bipartite_block(m: int, n: int, alice: Side, bob: Side,
                     found: Callable[[str], Tree], sf: Tree) -> Node:
    """Resource projection by Bob, then Alice's stage with Bob's +- resolution."""
    outs = []
    letter = bob.party[0]
    for k, o in enumerate(bipartite_stage(m, n), start=1):
        label = f"{alice.party[0]}{k}"
        if o.kind == "pair":
            child = pm_branch(bob, alice, *o.anc, found(o.state), sf, f"{letter}{k}")
        else:
            child = found(o.state)
        outs.append(Outcome(label, stage_operator(alice, o, label), child))
    alice_node = Node(alice.party, tuple(outs), complement=sf)
    b1 = f"{letter}1"
    return Node(bob.party, (Outcome(b1, bob.resource_projector(b1), alice_node),), Leaf(), resource=True)


def _bipartite_sides(m: int, n: int, tag: str = ""):
    alice = Side(f"Alice{tag}", f"A{tag}", f"a{tag}", m, n)
    bob = Side(f"Bob{tag}", f"B{tag}", f"b{tag}", n, n)
    return alice, bob


def _ancilla_layout(*sides_and_dims) -> SystemLayout:
    return SystemLayout(tuple(Register(rid, party, d, ANCILLA) for rid, party, d in sides_and_dims))


def bipartite_protocol(m: int, n: int) -> Protocol:
    """Tree distinguishing the ``(m, n)`` bipartite family with an ``n x n`` pair."""
    states = fam.bipartite_set(m, n)
    alice, bob = _bipartite_sides(m, n)
    root = _bipartite_block(m, n, alice, bob, Leaf, Leaf(states.stopper))
    layout = states.layout.concat(_ancilla_layout(("a", "Alice", n), ("b", "Bob", n)))
    return Protocol(root, layout, (Resource(("Alice", "Bob"), ("a", "b"), n),),
                    fam.BIPARTITE, (m, n), (), (PAIR_NOTE,))


# -- tripartite -----------------------------------------------------------------

def _charles_op(party: str, reg: str, dim: int, vec: Dict[int, int], label: str) -> LocalOperator:
    return projector(party, [reg], [dim], [{(k,): v for k, v in vec.items()}], label)


def _tripartite_block(n1: int, n2: int, n3: int, tag: str, found: Callable[[str], Tree], sf: Tree,
                      case: Optional[str] = None) -> Tuple[Node, List[str]]:
    """Alice's resource projection, Bob's stage, Charles's follow-ups.

    Returns the block tree and provenance notes describing the branches
    that go beyond the bipartite stage.
    """
    rel = fam.RelabelMap.for_dims(n2, n3, case)
    alice = Side(f"Alice{tag}", f"A{tag}", f"a{tag}", n3, n3)
    bob = Side(f"Bob{tag}", f"B{tag}", f"b{tag}", n2, n3)
    charles, creg = f"Charles{tag}", f"C{tag}"

    def t_label(bip: str) -> str:
        return "T" + bip[3:]

    def c_op(vec, label):
        return _charles_op(charles, creg, n1, vec, label)

    stage = bipartite_stage(n2, n3)
    # vertical states grouped by Bob's label
    v_by_label: Dict[int, List[int]] = {}
    for i in range(1, n1):
        v_by_label.setdefault(rel(fam.v_label(n1, n2, i)), []).append(i)
    h_dir = {rel(1), rel(2)}
    notes = []
    outs = []
    covered = set()
    letter = bob.party[0]
    for k, o in enumerate(stage, start=1):
        label = f"{letter}{k}"
        if o.kind == "single":
            (c,) = o.anc
            if c == n3 and set(o.principal) == h_dir:
                # horizontal states share this outcome; Charles reads his label
                c_outs = [Outcome(f"C{k},{i}", c_op({i: 1}, f"C{k},{i}"),
                                  found(t_label(o.state) if i == n1 else f"H{i}"))
                          for i in range(1, n1 + 1)]
                child = Node(charles, tuple(c_outs))
                notes.append(f"{label}: horizontal states share the outcome with {t_label(o.state)}; "
                             f"Charles measures his computational basis")
            else:
                child = found(t_label(o.state))
        else:
            p, q = o.anc
            (r,) = o.principal
            resolve = pm_branch(alice, bob, p, q, found(t_label(o.state)), sf, f"{alice.party[0]}{k}")
            vs = v_by_label.get(r, []) if n3 in (p, q) else []
            if vs:
                covered.add(r)
                if n1 - 1 in vs:
                    raise AssertionError("vertical state adjacent to |n1> shares a paired outcome")
                c_outs = [Outcome(f"C{k},{i}-", c_op({i: 1, i + 1: -1}, f"C{k},{i}-"), found(f"V{i}"))
                          for i in vs]
                c_outs.append(Outcome(f"C{k},{n1}", c_op({n1: 1}, f"C{k},{n1}"), resolve))
                child = Node(charles, tuple(c_outs), complement=sf)
                notes.append(f"{label}: vertical states {', '.join(f'V{i}' for i in vs)} share the outcome "
                             f"with {t_label(o.state)}; Charles splits them off before the +- resolution")
            else:
                child = resolve
        outs.append(Outcome(label, stage_operator(bob, o, label), child))
    k = len(stage)
    for y in sorted(v_by_label):
        if y in covered:
            continue
        k += 1
        label = f"{letter}{k}"
        vs = v_by_label[y]
        c_outs = []
        for i in vs:
            c_outs.append(Outcome(f"C{k},{i}-", c_op({i: 1, i + 1: -1}, f"C{k},{i}-"), found(f"V{i}")))
            c_outs.append(Outcome(f"C{k},{i}+", c_op({i: 1, i + 1: 1}, f"C{k},{i}+"), sf))
        child = Node(charles, tuple(c_outs), complement=sf)
        op = bob.op([{(n3, y): 1}], label)
        outs.append(Outcome(label, op, child))
        notes.append(f"{label}: extra outcome |{n3}><{n3}|_b (x) |{y}><{y}|_B for vertical states "
                     f"{', '.join(f'V{i}' for i in vs)}; Charles measures |i-+(i+1)>")
    bob_node = Node(bob.party, tuple(outs), complement=sf)
    a1 = f"{alice.party[0]}1"
    root = Node(alice.party, (Outcome(a1, alice.resource_projector(a1), bob_node),), Leaf(), resource=True)
    return root, notes


def tripartite_protocol(n1: int, n2: int, n3: int, case: Optional[str] = None) -> Protocol:
    """Tree for the general tripartite family; every relabel case is supported."""
    states = fam.tripartite_set(n1, n2, n3, case)
    root, notes = _tripartite_block(n1, n2, n3, "", Leaf, Leaf(states.stopper), case)
    layout = states.layout.concat(_ancilla_layout(("a", "Alice", n3), ("b", "Bob", n3)))
    rel = fam.RelabelMap.for_dims(n2, n3, case)
    notes = [f"relabel case ({rel.case}): Bob's labels map {list(rel.mapping)}",
             "the state |n1>|n2>|3-(n2+1)> or its relabelled analogue is resolved inside the shared paired "
             "outcome after Charles projects onto |n1>", PAIR_NOTE] + notes
    return Protocol(root, layout, (Resource(("Alice", "Bob"), ("a", "b"), n3),),
                    fam.TRIPARTITE, (n1, n2, n3), (), tuple(notes))


B10_NOTE = ("Bob's tenth outcome is printed as |3><3|_b (x) |6><6|_B + |6><6|_b (x) |5><5|_B; Bob's principal "
            "register has dimension 5, so |6>_B does not exist and the printed operator annihilates the "
            "transformed phi10. Substituted (|3><3| + |6><6|)_b (x) |5><5|_B.")
SIGN_NOTE = ("The transformed phi10 is printed as |4>|5>(|333> + |666>); applying Alice's resource projector "
             "to |4>|5>|3-6> gives |333> - |666>. The tree is built for the computed minus sign, which "
             "decides the +- resolution after Charles's |4> outcome.")


def tripartite_example_protocol() -> Protocol:
    """The C(4) (x) B(5) (x) A(6) walkthrough, operator by operator."""
    alice = Side("Alice", "A", "a", 6, 6)
    bob = Side("Bob", "B", "b", 5, 6)
    L = Leaf
    stop = L("phi1")

    def c(vec, label):
        return _charles_op("Charles", "C", 4, vec, label)

    outs = []
    # B1..B4: single states identified directly
    for k, (bl, (u, v), st) in enumerate([(2, (1, 5), "phi6"), (3, (1, 2), "phi7"),
                                           (4, (1, 3), "phi8"), (5, (1, 4), "phi9")], start=1):
        outs.append(Outcome(f"B{k}", bob.op([{(bl, u): 1, (bl, v): -1}], f"B{k}"), L(st)))
    # B5..B8: phi_i against the stopper, resolved by Alice then Bob's ancilla
    for i in range(2, 6):
        lab = f"B{i + 3}"
        outs.append(Outcome(lab, bob.op([{(1, i): 1}, {(i, i): 1}], lab),
                            pm_branch(alice, bob, 1, i, L(f"phi{i}"), stop, f"A{i + 3},")))
    outs.append(Outcome("B9", bob.op([{(6, 1): 1, (6, 2): -1}], "B9"), Node("Charles", tuple(
        Outcome(f"C9{i}", c({i: 1}, f"C9{i}"), L(f"phi{15 - i}")) for i in range(1, 5)))))
    b10 = bob.op([{(3, 5): 1}, {(6, 5): 1}], "B10")
    outs.append(Outcome("B10", b10, Node("Charles", (
        Outcome("C10,1", c({2: 1, 3: -1}, "C10,1"), L("phi16")),
        Outcome("C10,2", c({4: 1}, "C10,2"), pm_branch(alice, bob, 3, 6, L("phi10"), stop, "A10,")),
    ), complement=stop)))
    outs.append(Outcome("B11", bob.op([{(6, 4): 1}], "B11"), Node("Charles", (
        Outcome("C11,1", c({1: 1, 2: -1}, "C11,1"), L("phi15")),
        Outcome("C11,2", c({1: 1, 2: 1}, "C11,2"), stop),
        Outcome("C11,3", c({3: 1, 4: -1}, "C11,3"), L("phi17")),
        Outcome("C11,4", c({3: 1, 4: 1}, "C11,4"), stop),
    ))))
    bob_node = Node("Bob", tuple(outs), complement=stop)
    root = Node("Alice", (Outcome("A1", alice.resource_projector("A1"), bob_node),), Leaf(), resource=True)
    layout = fam.tripartite_layout(4, 5, 6).concat(_ancilla_layout(("a", "Alice", 6), ("b", "Bob", 6)))
    return Protocol(root, layout, (Resource(("Alice", "Bob"), ("a", "b"), 6),),
                    fam.TRIPARTITE_EXAMPLE, (4, 5, 6), (B10_NOTE, SIGN_NOTE), (PAIR_NOTE,))


# -- block composition ------------------------------------------------------------

COMPOSE_NOTE = ("Blocks are measured in order. Inside a block the fill state |1...1> and the block stopper "
                "are not orthogonal, so a block reports either a specific state or the merged class SF "
                "(stopper or fill); the first block reporting a state identifies the global state and "
                "all-SF identifies the global stopper.")


def _compose(block_builders, n_blocks: int, stopper: str) -> Tree:
    """Chain block trees; ``block_builders[s](found, sf)`` builds block ``s``."""

    def build(s: int) -> Tree:
        if s == n_blocks:
            return Leaf(stopper, (SF,) * n_blocks)
        sf = build(s + 1)
        prefix = (SF,) * s

        def found(label, s=s, prefix=prefix):
            return Leaf(f"S{s + 1}.{label}", prefix + (label,))

        return block_builders[s](found, sf)

    return build(0)


def even_protocol(dims: Sequence[int]) -> Protocol:
    states = fam.even_partite_set(dims)
    dims = states.params
    k = len(dims) // 2
    builders, resources, anc = [], [], []
    for s in range(k):
        m, n = dims[2 * s], dims[2 * s + 1]
        tag = str(s + 1)
        alice, bob = _bipartite_sides(m, n, tag)
        builders.append(lambda found, sf, m=m, n=n, a=alice, b=bob: _bipartite_block(m, n, a, b, found, sf))
        resources.append(Resource((alice.party, bob.party), (alice.anc, bob.anc), n))
        anc += [(alice.anc, alice.party, n), (bob.anc, bob.party, n)]
    root = _compose(builders, k, states.stopper)
    layout = states.layout.concat(_ancilla_layout(*anc))
    return Protocol(root, layout, tuple(resources), fam.EVEN, dims, (), (COMPOSE_NOTE, PAIR_NOTE))


def odd_protocol(dims: Sequence[int]) -> Protocol:
    states = fam.odd_partite_set(dims)
    dims = states.params
    k = (len(dims) - 1) // 2
    n1, n2, n3 = dims[:3]
    notes: List[str] = []

    def tri(found, sf):
        node, ns = _tripartite_block(n1, n2, n3, "1", found, sf)
        if not notes:
            notes.extend(f"block 1 {x}" for x in ns)
        return node

    builders = [tri]
    resources = [Resource(("Alice1", "Bob1"), ("a1", "b1"), n3)]
    anc = [("a1", "Alice1", n3), ("b1", "Bob1", n3)]
    for s in range(2, k + 1):
        m, n = dims[2 * s - 1], dims[2 * s]
        tag = str(s)
        alice, bob = _bipartite_sides(m, n, tag)
        builders.append(lambda found, sf, m=m, n=n, a=alice, b=bob: _bipartite_block(m, n, a, b, found, sf))
        resources.append(Resource((alice.party, bob.party), (alice.anc, bob.anc), n))
        anc += [(alice.anc, alice.party, n), (bob.anc, bob.party, n)]
    root = _compose(builders, k, states.stopper)
    layout = states.layout.concat(_ancilla_layout(*anc))
    return Protocol(root, layout, tuple(resources), fam.ODD, dims, (),
                    tuple([COMPOSE_NOTE, PAIR_NOTE] + notes))


THEOREMS = ("1", "2", "3", "4", "example1", "example456")


def build_protocol(theorem: str, dims: Sequence[int] = ()) -> Protocol:
    dims = tuple(int(d) for d in dims)
    if theorem == "1":
        if len(dims) != 2:
            raise ValueError("--theorem 1 takes dims m,n")
        return bipartite_protocol(*dims)
    if theorem == "example1":
        return bipartite_protocol(4, 5)
    if theorem == "2":
        return even_protocol(dims)
    if theorem == "3":
        if len(dims) != 3:
            raise ValueError("--theorem 3 takes dims n1,n2,n3")
        return tripartite_protocol(*dims)
    if theorem == "4":
        return odd_protocol(dims)
    if theorem == "example456":
        return tripartite_example_protocol()
    raise ValueError(f"unknown theorem {theorem!r}; choose from {', '.join(THEOREMS)}")


def states_for(protocol: Protocol) -> fam.StateSet:
    """The state set a protocol was built for."""
    return fam.build(protocol.family, protocol.params)
