from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from loccdisc.families import maximally_entangled
from loccdisc.linalg import (Ket, LayoutError, LocalOperator, SystemLayout, apply_local, basis_change_projectors,
                             basis_ket, identity, inner, projector, schmidt_rank_across, tensor)

AB = SystemLayout.of(("A", "Alice", 3), ("B", "Bob", 4))
amp = st.fractions(min_value=-4, max_value=4, max_denominator=5)


def kets(layout):
    idx = st.tuples(*(st.integers(1, d) for d in layout.dims))
    return st.dictionaries(idx, amp, min_size=1, max_size=6).map(lambda a: Ket(layout, a)).filter(
        lambda k: not k.is_zero())


def test_layout_rejects_duplicates_and_bad_dims():
    with pytest.raises(LayoutError):
        SystemLayout.of(("A", "Alice", 3), ("A", "Bob", 3))
    with pytest.raises(ValueError):
        SystemLayout.of(("A", "Alice", 0))


def test_ket_is_one_based_and_checks_range():
    k = basis_ket(AB, 3, 4)
    assert k.amplitude(3, 4) == 1
    with pytest.raises(LayoutError):
        Ket(AB, {(0, 1): 1})


def test_tensor_and_inner_of_products():
    a = Ket(SystemLayout.of(("A", "Alice", 2)), {(1,): 1, (2,): -1})
    b = Ket(SystemLayout.of(("B", "Bob", 2)), {(1,): 1, (2,): 1})
    ab = tensor(a, b)
    assert ab.layout.ids == ("A", "B")
    assert ab.norm2 == 4
    b_minus = Ket(b.layout, {(1,): 1, (2,): -1})
    assert inner(ab, tensor(a, b_minus)) == 0
    assert inner(ab, tensor(a, b)) == 4


@given(kets(AB), kets(AB))
def test_inner_is_symmetric(x, y):
    assert inner(x, y) == inner(y, x)


@given(kets(AB))
def test_norm_is_inner_with_self(x):
    assert x.norm2 == inner(x, x) > 0


@given(kets(AB))
def test_reorder_round_trip(x):
    ba = SystemLayout((AB["B"], AB["A"]))
    y = x.reorder(ba)
    assert y.amplitude(*reversed(next(iter(x.amplitudes)))) == x.amplitude(*next(iter(x.amplitudes)))
    assert y.reorder(AB) == x


@given(kets(AB), st.lists(st.tuples(st.integers(1, 3), amp), min_size=1, max_size=3))
def test_projector_idempotent_and_self_adjoint(x, vec):
    v = {}
    for i, a in vec:
        v[(i,)] = a
    if not any(v.values()):
        return
    p = projector("Alice", ["A"], [3], [v])
    assert p.is_projector() and p.is_symmetric()
    once = apply_local(p, x)
    assert apply_local(p, once) == once
    # <x|P x> = |P x|^2
    assert inner(x, once) == once.norm2


@given(kets(AB))
def test_identity_acts_trivially(x):
    assert apply_local(identity("Bob", ["B"], [4]), x) == x


def test_apply_local_checks_dimension():
    op = identity("Bob", ["B"], [3])
    with pytest.raises(LayoutError):
        apply_local(op, basis_ket(AB, 1, 1))


def test_operator_index_range():
    with pytest.raises(LayoutError):
        LocalOperator("Alice", ["A"], [2], {((3,), (1,)): 1})


@given(kets(AB))
def test_product_states_have_rank_one(x):
    a = {(i,): x.amplitude(i, 1) for i in range(1, 4)}
    if not any(a.values()):
        return
    prod = tensor(Ket(SystemLayout.of(("A", "Alice", 3)), a), Ket(SystemLayout.of(("B", "Bob", 4)), {(2,): 1}))
    assert schmidt_rank_across(prod, ["A"], ["B"]).rank == 1


@pytest.mark.parametrize("d", range(2, 9))
def test_mes_rank_and_balance(d):
    r = schmidt_rank_across(maximally_entangled(d), ["a"], ["b"])
    assert r == (d, True)


def test_unbalanced_full_rank():
    x = Ket(SystemLayout.of(("a", "A", 2), ("b", "B", 2)), {(1, 1): 1, (2, 2): 2})
    assert schmidt_rank_across(x, ["a"], ["b"]) == (2, False)


def test_schmidt_rejects_zero_and_bad_cut():
    with pytest.raises(ValueError):
        schmidt_rank_across(Ket(AB, {}), ["A"], ["B"])
    with pytest.raises(LayoutError):
        schmidt_rank_across(basis_ket(AB, 1, 1), ["A"], ["A"])


def test_basis_change_pair_resolves_identity_on_span():
    minus, plus = basis_change_projectors("Bob", "B", 4, 1, 3)
    assert minus.entries[((1,), (3,))] == Fraction(-1, 2)
    assert not minus.matmul(plus)
    x = basis_ket(AB, 2, 3)
    assert apply_local(minus, x) + apply_local(plus, x) == x
    with pytest.raises(ValueError):
        basis_change_projectors("Bob", "B", 4, 3, 3)
