import itertools

import pytest
from hypothesis import given, settings, strategies as st

from loccdisc import families as fam
from loccdisc.families import FamilyError, RelabelMap, build
from loccdisc.linalg import inner
from loccdisc.verification import all_product, off_diagonal_nonzero, gram_matrix, product_certificate

from reference_sets import BIPARTITE_45, TRIPARTITE_456, product


def same_rays(states, expected):
    return len(states.kets) == len(expected) and all(
        sum(k.is_proportional(e) for e in expected) == 1 for k in states.kets)


def test_bipartite_45_matches_reference_list():
    s = fam.bipartite_set(4, 5)
    expected = [product(s.layout, t) for t in BIPARTITE_45]
    assert s.count == 9
    assert same_rays(s, expected)
    # labels follow the reference numbering too
    for label, e in zip(s.labels, expected):
        assert s[label].is_proportional(e)


def test_tripartite_example_matches_reference_list():
    s = fam.tripartite_example_set()
    assert s.count == 17
    assert same_rays(s, [product(s.layout, t) for t in TRIPARTITE_456])


def test_general_tripartite_reproduces_example():
    assert same_rays(fam.tripartite_set(4, 5, 6), list(fam.tripartite_example_set().kets))


@pytest.mark.parametrize("m,n", [(m, n) for m in range(4, 9) for n in range(m, 9)])
def test_bipartite_count(m, n):
    assert fam.bipartite_set(m, n).count == 2 * n - 1


@pytest.mark.parametrize("dims", [(4, 4, 4), (4, 5, 6), (4, 5, 7), (4, 6, 6), (4, 6, 8), (5, 6, 9), (6, 7, 7)])
def test_tripartite_count_and_orthogonality(dims):
    s = fam.tripartite_set(*dims)
    assert s.count == 2 * (dims[0] + dims[2]) - 3
    assert not off_diagonal_nonzero(gram_matrix(s))


@pytest.mark.parametrize("dims", [(4, 5, 4, 5), (4, 4, 5, 6), (5, 6, 4, 4, 4, 7)])
def test_even_family(dims):
    s = fam.even_partite_set(dims)
    assert s.count == s.claimed_count
    assert not off_diagonal_nonzero(gram_matrix(s))
    assert all_product(product_certificate(s))


def test_odd_family_count_differs_from_formula():
    s = fam.odd_partite_set((4, 5, 6, 4, 5))
    assert (s.count, s.claimed_count) == (25, 27)
    assert not off_diagonal_nonzero(gram_matrix(s))


def test_active_block_is_the_only_non_fill_block():
    s = fam.even_partite_set((4, 5, 4, 6))
    fill = {"A1": 1, "B1": 1, "A2": 1, "B2": 1}
    for label, ket in s.non_stoppers():
        act = s.active_block[label]
        regs = s.layout.ids[2 * act:2 * act + 2]
        for z in ket.amplitudes:
            for rid, i in zip(s.layout.ids, z):
                if rid not in regs:
                    assert i == fill[rid]


@pytest.mark.parametrize("n2,n3,case", [(5, 6, "a"), (5, 7, "b"), (6, 6, "c"), (4, 8, "b")])
def test_relabel_case_selection(n2, n3, case):
    assert fam.tripartite_case(n2, n3) == case
    rel = RelabelMap.for_dims(n2, n3)
    assert sorted(rel.mapping) == list(range(1, n2 + 1))


@given(st.integers(4, 9), st.integers(0, 5), st.sampled_from("abc"))
@settings(max_examples=25, deadline=None)
def test_relabel_is_a_permutation(n2, gap, case):
    rel = RelabelMap.for_dims(n2, n2 + gap, case)
    assert sorted(rel(i) for i in range(1, n2 + 1)) == list(range(1, n2 + 1))


@pytest.mark.parametrize("bad", [(3, 5), (5, 4), (4,)])
def test_bipartite_rejects_bad_dims(bad):
    with pytest.raises(FamilyError):
        build(fam.BIPARTITE, bad)


def test_even_rejects_odd_length():
    with pytest.raises(FamilyError):
        fam.even_partite_set((4, 5, 4))


def test_unknown_family():
    with pytest.raises(FamilyError):
        build("nope", (4, 5))


def test_stopper_is_all_plus():
    s = fam.bipartite_set(4, 6)
    stop = s[s.stopper]
    assert set(stop.amplitudes.values()) == {1} and len(stop.amplitudes) == 24


@given(st.integers(4, 8).flatmap(lambda m: st.tuples(st.just(m), st.integers(m, 9))))
@settings(max_examples=15, deadline=None)
def test_bipartite_orthogonal_and_product(mn):
    s = fam.bipartite_set(*mn)
    for (i, x), (j, y) in itertools.combinations(enumerate(s.kets), 2):
        assert inner(x, y) == 0
    assert all(fam.is_product(k) for k in s.kets)
