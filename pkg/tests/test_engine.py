from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from loccdisc import families as fam
from loccdisc.engine import (FAIL, Leaf, Node, Outcome, Protocol, leaf_profile, relabel_outcomes, simulate,
                             simulate_state, validate, verify_perfect)
from loccdisc.linalg import Ket, LocalOperator, SystemLayout, basis_ket, projector
from loccdisc.protocols import bipartite_protocol

AB = SystemLayout.of(("A", "Alice", 2), ("B", "Bob", 2))


def a_proj(*vecs, label="", party="Alice", reg="A"):
    return projector(party, [reg], [2], [{(k,): v for k, v in vec.items()} for vec in vecs], label)


def two_states():
    k1, k2 = basis_ket(AB, 1, 1), basis_ket(AB, 2, 1)
    return fam.StateSet("toy", (2, 2), ("x", "y"), (k1, k2), 2, "x")


def protocol(root):
    return Protocol(root, AB, ())


def good_tree():
    return Node("Alice", (Outcome("1", a_proj({1: 1}), Leaf("x")), Outcome("2", a_proj({2: 1}), Leaf("y"))),
                complement=None)


def test_two_outcome_protocol_is_perfect():
    rep = verify_perfect(protocol(good_tree()), two_states())
    assert rep.perfect
    assert rep.result("x").identified == 1


def test_locality_violation_is_flagged():
    bad = Node("Alice", (Outcome("1", a_proj({1: 1}, party="Bob", reg="B"), Leaf("x")),))
    d = validate(protocol(bad))
    assert d.locality and not d.ok
    assert not verify_perfect(protocol(bad), two_states()).perfect


def test_overlapping_projectors_are_flagged():
    bad = Node("Alice", (Outcome("1", a_proj({1: 1}), Leaf("x")), Outcome("2", a_proj({1: 1, 2: 1}), Leaf("y"))))
    d = validate(protocol(bad))
    assert d.non_orthogonal == ["<root>: 1 x 2"]


def test_non_projector_is_flagged():
    op = LocalOperator("Alice", ["A"], [2], {((1,), (1,)): 2})
    d = validate(protocol(Node("Alice", (Outcome("1", op, Leaf("x")),))))
    assert d.not_projector == ["<root>/1"]


def test_shared_leaf_is_reported():
    tree = Node("Bob", (Outcome("1", a_proj({1: 1}, party="Bob", reg="B"), Leaf("x")),))
    rep = verify_perfect(protocol(tree), two_states())
    assert rep.shared_leaves == {"1": ["x", "y"]}
    assert not rep.perfect


def test_fail_leaf_with_certainty():
    tree = Node("Alice", (Outcome("1", a_proj({1: 1}), Leaf("x")),), complement=Leaf(FAIL))
    rep = verify_perfect(protocol(tree), two_states())
    assert rep.result("y").failed == 1
    assert not rep.perfect


def test_forbidden_complement_raises_and_is_flagged():
    tree = Node("Alice", (Outcome("1", a_proj({1: 1}), Leaf("x")),), complement=None)
    assert validate(protocol(tree)).forbidden_incomplete == ["<root>"]
    with pytest.raises(ValueError):
        simulate(protocol(tree), basis_ket(AB, 2, 2))


def test_unknown_leaf_label():
    tree = Node("Alice", (Outcome("1", a_proj({1: 1}), Leaf("z")),))
    assert validate(protocol(tree), two_states()).unknown_states == ["1: z"]


def test_duplicate_outcome_labels():
    tree = Node("Alice", (Outcome("1", a_proj({1: 1}), Leaf("x")), Outcome("1", a_proj({2: 1}), Leaf("y"))))
    assert validate(protocol(tree)).duplicate_labels == ["<root>"]


def test_probabilities_of_superposition():
    x = Ket(AB, {(1, 1): 1, (2, 1): 2})
    assert simulate(protocol(good_tree()), x) == {"1": Fraction(1, 5), "2": Fraction(4, 5)}


def test_relabelling_keeps_leaf_profile():
    prot = bipartite_protocol(4, 5)
    states = fam.bipartite_set(4, 5)
    renamed = Protocol(relabel_outcomes(prot.root, lambda s: "x" + s[::-1]), prot.layout, prot.resources,
                       prot.family, prot.params)
    assert leaf_profile(renamed, states) == leaf_profile(prot, states)
    assert verify_perfect(renamed, states, True).perfect


def test_post_selection_changes_verdict_only():
    prot, states = bipartite_protocol(4, 5), fam.bipartite_set(4, 5)
    assert verify_perfect(prot, states, True).perfect
    rep = verify_perfect(prot, states, False)
    assert not rep.perfect and not rep.shared_leaves and rep.diagnostics.ok


amp = st.fractions(min_value=-3, max_value=3, max_denominator=3)


@given(st.dictionaries(st.tuples(st.integers(1, 4), st.integers(1, 5)), amp, min_size=1, max_size=8))
@settings(max_examples=30, deadline=None)
def test_leaf_probabilities_sum_to_one(amps):
    s = fam.bipartite_set(4, 5)
    x = Ket(s.layout, amps)
    if x.is_zero():
        return
    probs = simulate_state(bipartite_protocol(4, 5), x)
    assert sum(probs.values()) == 1
    assert all(p > 0 for p in probs.values())
