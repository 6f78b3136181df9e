import itertools
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from forestpat.core import Pattern, seq_contains
from forestpat.errors import InvalidDiagramError, NoI2InstanceError, NoJ2InstanceError, PreconditionViolatedError
from forestpat.young import (
    EMPTY,
    I2,
    J2,
    ForestYoungDiagram,
    PermMatrix,
    Transversal,
    block_matrix,
    blocks_bijection,
    coloring,
    count_avoiding_transversals,
    enumerate_transversals,
    enumerate_transversals_naive,
    fswe_bijection,
    fswe_inverse,
    full_square,
    has_i2,
    has_j2,
    i2j2_f,
    i2j2_g,
    iterate_diagrams,
    pair_matrices,
    pattern_to_matrix,
    phi,
    psi,
    transversal_avoids,
    transversal_contains,
)


def path(n):
    return {i: (None if i == 1 else i - 1) for i in range(1, n + 1)}


def all_diagrams(max_n, max_h=None):
    for n in range(1, max_n + 1):
        yield from iterate_diagrams(n, max_h)


def test_pattern_to_matrix():
    assert pattern_to_matrix("12") == J2
    assert pattern_to_matrix("21") == I2
    assert I2.to_matrix() == [[1, 0], [0, 1]]
    assert J2.to_matrix() == [[0, 1], [1, 0]]
    for sigma in itertools.permutations(range(1, 5)):
        assert pattern_to_matrix(Pattern(sigma)).to_pattern() == Pattern(sigma)


def test_block_matrix():
    M = block_matrix(J2, PermMatrix((1,)))
    assert M.to_matrix() == [[0, 0, 1], [0, 1, 0], [1, 0, 0]]


def test_diagram_validation():
    with pytest.raises(InvalidDiagramError):
        ForestYoungDiagram({1: None, 2: 1}, {1: 3, 2: 2})   # child shorter than parent
    with pytest.raises(InvalidDiagramError):
        ForestYoungDiagram({1: None}, {1: 0})


def test_enumerate_transversals_examples():
    assert len(list(enumerate_transversals(ForestYoungDiagram({1: None}, {1: 1})))) == 1
    for n in range(1, 6):
        Y = full_square(path(n))
        assert len(list(enumerate_transversals(Y))) == factorial(n)
    Y = ForestYoungDiagram(path(3), {1: 2, 2: 2, 3: 2})
    assert list(enumerate_transversals(Y)) == []


def test_backtracking_matches_naive():
    for Y in all_diagrams(5, 5):
        fast = set(enumerate_transversals(Y))
        assert fast == set(enumerate_transversals_naive(Y))
        for T in fast:
            T.validate(Y)


def test_naive_oracle_on_seven_vertices():
    Y = ForestYoungDiagram({1: None, 2: 1, 3: 1, 4: 2, 5: 2, 6: 3, 7: 3},
                           {1: 4, 2: 5, 3: 6, 4: 7, 5: 7, 6: 7, 7: 7})
    assert set(enumerate_transversals(Y)) == set(enumerate_transversals_naive(Y))


def test_diagram_corpus_size():
    counts = [sum(1 for _ in iterate_diagrams(n, 5)) for n in range(1, 6)]
    assert counts == [5, 30, 180, 1115, 7005]


def test_single_entry_matrix():
    M = PermMatrix((1,))
    for Y in all_diagrams(3):
        for T in enumerate_transversals(Y):
            assert transversal_contains(Y, T, M)


def test_worked_example_transversal():
    # columns 1..8 of the example drawn as a path rooted at column 8
    cols = [8, 7, 6, 5, 4, 3, 2, 1]
    rows = {1: 4, 2: 8, 3: 7, 4: 5, 5: 3, 6: 6, 7: 1, 8: 2}
    heights = {1: 8, 2: 8, 3: 7, 4: 6, 5: 6, 6: 6, 7: 3, 8: 2}
    parent = {c: (None if i == 0 else cols[i - 1]) for i, c in enumerate(cols)}
    Y = ForestYoungDiagram(parent, heights)
    T = Transversal(rows).validate(Y)
    # antidiagonal matrix; read along the path it becomes the identity
    M = PermMatrix((1, 2, 3))
    assert transversal_avoids(Y, T, [M])
    grown = dict(heights)
    grown[7] = 4
    Y2 = ForestYoungDiagram(parent, grown)
    T.validate(Y2)
    assert transversal_contains(Y2, T, M)


def test_full_square_matches_classical_containment():
    for n in range(1, 6):
        Y = full_square(path(n))
        for T in enumerate_transversals(Y):
            labels = tuple(T.label_of(v) for v in range(1, n + 1))
            for k in (2, 3):
                for sigma in itertools.permutations(range(1, k + 1)):
                    M = pattern_to_matrix(Pattern(sigma))
                    assert transversal_contains(Y, T, M) == seq_contains(labels, Pattern(sigma))


def test_phi_psi_minimal():
    Y = ForestYoungDiagram({"u": None, "w": "u"}, {"u": 2, "w": 2})
    L = Transversal({"u": 1, "w": 2})
    assert transversal_contains(Y, L, I2)
    T = phi(Y, L)
    assert T == Transversal({"u": 2, "w": 1})
    assert transversal_contains(Y, T, J2) and not transversal_contains(Y, T, I2)
    assert psi(Y, T) == L
    with pytest.raises(NoI2InstanceError):
        phi(Y, T)
    with pytest.raises(NoJ2InstanceError):
        psi(Y, L)


def test_phi_psi_inverse_steps():
    for Y in all_diagrams(4, 4):
        for L in enumerate_transversals(Y):
            if has_i2(Y, L):
                T = phi(Y, L)
                assert sorted(T.row_of.values()) == sorted(L.row_of.values())
                if not has_j2(Y, L):
                    assert psi(Y, T) == L
            if has_j2(Y, L):
                T = psi(Y, L)
                if not has_i2(Y, L):
                    assert phi(Y, T) == L


def test_i2j2_identity_and_preconditions():
    Y = ForestYoungDiagram({"u": None, "w": "u"}, {"u": 2, "w": 2})
    T = Transversal({"u": 2, "w": 1})
    with pytest.raises(PreconditionViolatedError):
        i2j2_f(Y, T)
    L = Transversal({"u": 1, "w": 2})
    with pytest.raises(PreconditionViolatedError):
        i2j2_g(Y, L)
    # a transversal avoiding both is fixed
    Y1 = ForestYoungDiagram({1: None, 2: None}, {1: 1, 2: 2})
    for L in enumerate_transversals(Y1):
        if not has_i2(Y1, L) and not has_j2(Y1, L):
            assert i2j2_f(Y1, L) == L


def test_i2j2_bijection_small():
    for Y in all_diagrams(4, 4):
        src = [L for L in enumerate_transversals(Y) if not has_j2(Y, L)]
        dst = {T for T in enumerate_transversals(Y) if not has_i2(Y, T)}
        imgs = {i2j2_f(Y, L) for L in src}
        assert imgs == dst
        assert all(i2j2_g(Y, i2j2_f(Y, L)) == L for L in src)


def test_coloring_vacuous():
    Y = full_square(path(2))
    A = [PermMatrix((1, 2, 3))]
    for L in enumerate_transversals(Y):
        col = coloring(Y, L, A)
        assert col.diagram.n == 0 and not col.white


def test_coloring_properties():
    A = [PermMatrix((1,))]
    src = [block_matrix(J2, a) for a in A]
    for Y in all_diagrams(4):
        for L in enumerate_transversals(Y):
            if not transversal_avoids(Y, L, src):
                continue
            col = coloring(Y, L, A)
            if col.diagram.n:
                col.transversal.validate(col.diagram)
                assert not transversal_contains(col.diagram, col.transversal, J2)
            out = blocks_bijection(Y, L, J2, I2, A, i2j2_f)
            again = coloring(Y, out, A)
            assert again.white == col.white and again.vertices == col.vertices


def test_blocks_bijection_small():
    A = [PermMatrix((1,))]
    src = [block_matrix(J2, a) for a in A]
    dst = [block_matrix(I2, a) for a in A]
    for Y in all_diagrams(4):
        S = [L for L in enumerate_transversals(Y) if transversal_avoids(Y, L, src)]
        D = {L for L in enumerate_transversals(Y) if transversal_avoids(Y, L, dst)}
        assert len(S) == len(D)
        imgs = {blocks_bijection(Y, L, J2, I2, A, i2j2_f) for L in S}
        assert imgs == D
        for L in S:
            T = blocks_bijection(Y, L, J2, I2, A, i2j2_f)
            assert blocks_bijection(Y, T, I2, J2, A, i2j2_g) == L


def test_blocks_with_empty_prefix_is_base_map():
    for Y in all_diagrams(3):
        for L in enumerate_transversals(Y):
            if not has_j2(Y, L):
                assert blocks_bijection(Y, L, J2, I2, [EMPTY], i2j2_f) == i2j2_f(Y, L)


def test_fswe_full_square_examples():
    Y = full_square(path(4))
    for pairs in ([("123", "132")], [("123", "132"), ("1234", "1243")]):
        src, dst = pair_matrices(pairs)
        assert count_avoiding_transversals(Y, src) == count_avoiding_transversals(Y, dst)
        for L in enumerate_transversals(Y):
            if transversal_avoids(Y, L, src):
                T = fswe_bijection(Y, L, pairs)
                assert transversal_avoids(Y, T, dst)
                assert fswe_inverse(Y, T, pairs) == L
    with pytest.raises(PreconditionViolatedError):
        pair_matrices([("132", "123")])


def test_pattern_matrices_match_patterns():
    src, dst = pair_matrices([("123", "132")])
    assert src[0].to_pattern() == Pattern.parse("123")
    assert dst[0].to_pattern() == Pattern.parse("132")


def test_json_round_trip():
    Y = ForestYoungDiagram({1: None, 2: 1, 3: 1}, {1: 2, 2: 3, 3: 3})
    assert ForestYoungDiagram.from_json(Y.to_json()) == Y
    for T in enumerate_transversals(Y):
        assert Transversal.from_json(T.to_json()) == T


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.integers(0, 9), min_size=n, max_size=n))))
def test_random_diagrams_i2_j2_equal(data):
    n, seeds = data
    parent = {1: None}
    for v in range(2, n + 1):
        parent[v] = None if seeds[v - 1] % 3 == 0 else 1 + seeds[v - 1] % (v - 1)
    height = {}
    for v in range(1, n + 1):
        base = height[parent[v]] if parent[v] else 1
        height[v] = base + seeds[v - 1] % 2
    Y = ForestYoungDiagram(parent, height)
    assert count_avoiding_transversals(Y, [I2]) == count_avoiding_transversals(Y, [J2])
