import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from forestpat.core import (
    CLASSICAL,
    CONSECUTIVE,
    FOREST,
    TREE,
    LabeledForest,
    Pattern,
    avoids,
    complement,
    consecutive_instances,
    contains,
    contains_naive,
    count_avoiding,
    count_avoiding_many,
    count_by_instances,
    count_consecutive_instances,
    forest_shape_key,
    iter_parent_vectors,
    iterate_forests,
    iterate_trees,
    parse_pattern_set,
    root_path,
    standardize,
)
from forestpat.errors import (
    CapExceededError,
    EmptyLabelSetError,
    InvalidForestError,
    InvalidPatternError,
    NoncontiguousLabelsError,
    UnknownLabelError,
)


def chain(*labels):
    par = {labels[0]: None}
    for a, b in zip(labels, labels[1:]):
        par[b] = a
    return LabeledForest(par)


@st.composite
def forests(draw, max_n=7):
    n = draw(st.integers(0, max_n))
    # vertex i picks a parent among earlier vertices of a random order, so no cycles
    order = draw(st.permutations(list(range(1, n + 1))))
    par = {}
    for i, v in enumerate(order):
        j = draw(st.integers(-1, i - 1))
        par[v] = None if j < 0 else order[j]
    return LabeledForest(par)


patterns = st.integers(1, 5).flatmap(lambda k: st.permutations(list(range(1, k + 1)))).map(Pattern)


# ---- patterns


def test_pattern_parse_and_complement():
    assert Pattern.parse("123").complement() == Pattern.parse("321")
    assert complement(Pattern.parse("12")) == Pattern.parse("21")
    assert str(Pattern.parse("10,1,2,3,4,5,6,7,8,9")) == "10,1,2,3,4,5,6,7,8,9"
    with pytest.raises(InvalidPatternError):
        Pattern.parse("999")
    with pytest.raises(InvalidPatternError):
        Pattern.parse("")


def test_parse_pattern_set():
    assert parse_pattern_set("213,231") == {Pattern((2, 1, 3)), Pattern((2, 3, 1))}
    with pytest.raises(InvalidPatternError):
        parse_pattern_set("12,x")


# ---- forests


def test_forest_validation():
    with pytest.raises(InvalidForestError):
        LabeledForest({1: 2, 2: 1})
    with pytest.raises(InvalidForestError):
        LabeledForest({1: 5})


def test_root_path_examples():
    assert root_path(LabeledForest({1: None}), 1) == [1]
    assert root_path(LabeledForest({1: None, 3: 1}), 3) == [1, 3]
    assert root_path(LabeledForest({7: None, 5: 7, 2: 5}), 2) == [7, 5, 2]
    with pytest.raises(UnknownLabelError):
        root_path(LabeledForest({1: None}), 9)


def test_contains_examples():
    assert contains(chain(1, 2, 3), Pattern.parse("123"), CLASSICAL)
    assert contains(chain(2, 1, 3), Pattern.parse("213"), CONSECUTIVE)
    assert contains(chain(2, 1, 4, 3), Pattern.parse("213"), CONSECUTIVE)
    assert not contains(chain(1, 3, 2), Pattern.parse("123"), CLASSICAL)
    # depth < k never contains
    star = LabeledForest({1: None, 2: 1, 3: 1, 4: 1})
    for sigma in itertools.permutations(range(1, 4)):
        for mode in (CLASSICAL, CONSECUTIVE):
            assert not contains(star, Pattern(sigma), mode)


def test_classical_vs_consecutive():
    F = chain(1, 3, 2, 4)
    assert contains(F, Pattern.parse("123"), CLASSICAL)
    assert not contains(F, Pattern.parse("123"), CONSECUTIVE)


def test_count_consecutive_instances_examples():
    assert count_consecutive_instances(chain(1, 2, 3, 4), Pattern.parse("12")) == 3
    star = LabeledForest({1: None, 2: 1, 3: 1, 4: 1})
    assert count_consecutive_instances(star, Pattern.parse("12")) == 3
    assert count_consecutive_instances(chain(3, 2, 1), Pattern.parse("12")) == 0


def test_complement_forest():
    F = LabeledForest({1: None, 2: 1, 3: None})
    assert complement(F) == LabeledForest({3: None, 2: 3, 1: None})
    with pytest.raises(NoncontiguousLabelsError):
        complement(LabeledForest({1: None, 5: 1}))


def test_iterate_forests_counts():
    assert len(list(iterate_forests([]))) == 1
    assert len(list(iterate_forests([1, 2]))) == 3
    assert len(list(iterate_forests(range(1, 5)))) == 125
    for n in range(1, 6):
        fs = list(iterate_forests(range(1, n + 1)))
        assert len(fs) == len(set(fs)) == (n + 1) ** (n - 1)


def test_iterate_forests_partitions_cover_stream():
    labels = range(1, 5)
    whole = set(iterate_forests(labels))
    parts = [set(iterate_forests(labels, partition=p)) for p in [None, 2, 3, 4]]
    assert sum(map(len, parts)) == len(whole)
    assert set().union(*parts) == whole


def test_iterate_trees():
    assert len(list(iterate_trees([1]))) == 1
    trees = list(iterate_trees([1, 2, 3]))
    assert len(trees) == 9
    assert all(t.is_tree() for t in trees)
    with pytest.raises(EmptyLabelSetError):
        list(iterate_trees([]))


def test_count_avoiding_examples():
    assert count_avoiding(3, "21") == 6
    assert count_avoiding(3, "213") == 15
    for S in ("12", "123", "213,231"):
        for mode in (CLASSICAL, CONSECUTIVE):
            assert count_avoiding(0, S, mode) == 1
    assert count_avoiding(0, "12", universe=TREE) == 0
    with pytest.raises(CapExceededError):
        count_avoiding(9, "12")


def test_count_avoiding_many_matches_single():
    sets = [parse_pattern_set(s) for s in ("12", "213", "123,132", "321")]
    for n in range(5):
        for mode in (CLASSICAL, CONSECUTIVE):
            for uni in (FOREST, TREE):
                many = count_avoiding_many(n, sets, mode, uni)
                assert many == [count_avoiding(n, S, mode, uni) for S in sets]


def test_count_by_instances_examples():
    assert count_by_instances(1, Pattern.parse("12")) == {0: 1}
    assert count_by_instances(3, Pattern.parse("123")) == {0: 15, 1: 1}
    for n in range(6):
        assert sum(count_by_instances(n, Pattern.parse("132")).values()) == (n + 1) ** (n - 1)


def test_small_n_factorials():
    for n in range(7):
        assert count_avoiding(n, "21") == count_avoiding(n, "12") == math.factorial(n)


def test_brute_counts_via_iterated_forests():
    # a slow oracle: filter every forest object with the naive predicate
    for n in range(5):
        for S in ("12", "213", "132,231"):
            pats = parse_pattern_set(S)
            slow = sum(1 for F in iterate_forests(range(1, n + 1))
                       if not any(contains_naive(F, p, CLASSICAL) for p in pats))
            assert slow == count_avoiding(n, S)


def test_parent_vectors_lexicographic():
    vecs = list(iter_parent_vectors(3))
    assert vecs == sorted(vecs)
    assert len(vecs) == 16


def test_shape_key_isomorphism_invariant():
    a = LabeledForest({1: None, 2: 1, 3: 1, 4: 3})
    b = LabeledForest({4: None, 1: 4, 2: 4, 3: 2})
    c = chain(1, 2, 3, 4)
    assert forest_shape_key(a) == forest_shape_key(b) != forest_shape_key(c)


def test_json_round_trip():
    F = LabeledForest({1: None, 2: 1, 3: None})
    assert LabeledForest.from_json(F.to_json()) == F


# ---- properties


@settings(max_examples=150, deadline=None)
@given(forests(), patterns)
def test_contains_matches_naive(F, sigma):
    for mode in (CLASSICAL, CONSECUTIVE):
        assert contains(F, sigma, mode) == contains_naive(F, sigma, mode)


@settings(max_examples=150, deadline=None)
@given(forests(), patterns)
def test_complement_symmetry(F, sigma):
    if len(F) == 0:
        return
    Fc = complement(F)
    assert complement(Fc) == F
    for mode in (CLASSICAL, CONSECUTIVE):
        assert contains(F, sigma, mode) == contains(Fc, sigma.complement(), mode)
    assert count_consecutive_instances(F, sigma) == count_consecutive_instances(Fc, sigma.complement())


@settings(max_examples=100, deadline=None)
@given(forests(), patterns)
def test_instances_are_parent_child_chains(F, sigma):
    for inst in consecutive_instances(F, sigma):
        assert standardize(inst) == sigma.entries
        for a, b in zip(inst, inst[1:]):
            assert F.parent(b) == a


@settings(max_examples=100, deadline=None)
@given(forests())
def test_patterns_longer_than_depth_are_avoided(F):
    depth = max((F.depth(v) for v in F.labels), default=0)
    sigma = Pattern(tuple(range(1, depth + 2)))
    assert avoids(F, [sigma])
