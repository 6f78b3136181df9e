import itertools

import pytest

from forestpat.clusters import (
    ClusterCounts,
    ClusterTable,
    ForestCluster,
    cluster_table,
    cluster_tables,
    clusters_from_forest_counts,
    compare_tables,
    counts_from_clusters,
    enumerate_clusters,
    equivalence_classes,
    exact_from_highlighted,
    first_value_test,
    highlighted_from_exact,
    r_closed_form,
    strong_cfw_equivalent,
)
from forestpat.core import LabeledForest, Pattern, count_by_instances
from forestpat.errors import CapExceededError, MissingClusterDataError


def perms(k):
    return [Pattern(p) for p in itertools.permutations(range(1, k + 1))]


@pytest.fixture(scope="module")
def s3_tables():
    return cluster_tables(3, 7)


@pytest.fixture(scope="module")
def s4_tables():
    return cluster_tables(4, 7)


def test_single_instance_clusters(s3_tables, s4_tables):
    for tabs, k in ((s3_tables, 3), (s4_tables, 4)):
        for sigma, tab in tabs.items():
            assert tab.r(k, 1) == 1
            for n in range(1, k):
                assert all(tab.r(n, m) == 0 for m in range(0, 4))


def test_r52_for_123(s3_tables):
    assert s3_tables[Pattern.parse("123")].r(5, 2) == 7


def test_closed_form_examples():
    assert r_closed_form("123") == 7
    assert r_closed_form("1324") == 25
    for sigma in perms(3) + perms(4):
        assert r_closed_form(sigma) == r_closed_form(sigma.complement())


def test_closed_form_matches_enumeration_s3(s3_tables):
    for sigma, tab in s3_tables.items():
        assert tab.r(5, 2) == r_closed_form(sigma)


def test_closed_form_matches_enumeration_s4(s4_tables):
    for sigma, tab in s4_tables.items():
        assert tab.r(7, 2) == r_closed_form(sigma)


def test_complement_tables_equal(s3_tables, s4_tables):
    for tabs in (s3_tables, s4_tables):
        for sigma, tab in tabs.items():
            assert tab.entries == tabs[sigma.complement()].entries


def test_enumerated_clusters_are_valid_and_distinct():
    sigma = Pattern.parse("132")
    seen = set()
    for X in enumerate_clusters(sigma, 5):
        X.validate()
        key = (X.tree, X.instances)
        assert key not in seen
        seen.add(key)
    tab = cluster_table(sigma, 5)
    assert len(seen) == sum(v for (n, _), v in tab.entries.items() if n == 5)


def test_cluster_validation():
    T = LabeledForest({1: None, 2: 1, 3: 2, 4: 3})
    ForestCluster(T, [(1, 2, 3), (2, 3, 4)], "123").validate()
    with pytest.raises(ValueError):
        ForestCluster(T, [(1, 2, 3)], "123").validate()       # vertex 4 uncovered
    with pytest.raises(ValueError):
        ForestCluster(T, [(1, 2, 3), (2, 3, 4)], "132").validate()
    with pytest.raises(ValueError):
        # disjoint instances do not form a cluster
        ForestCluster(LabeledForest({1: None, 2: 1, 3: 2, 4: None, 5: 4, 6: 5}),
                      [(1, 2, 3), (4, 5, 6)], "123").validate()
    # sharing just the root is enough overlap
    U = LabeledForest({1: None, 2: 1, 3: 2, 4: 1, 5: 4, 6: 5})
    ForestCluster(U, [(1, 2, 3), (1, 4, 5), (4, 5, 6)], "123").validate()


def test_cap():
    with pytest.raises(CapExceededError):
        list(enumerate_clusters("123", 12))


@pytest.mark.parametrize("sigma", ["123", "1324", "1423"])
def test_counts_from_clusters_match_oracle(sigma):
    tab = cluster_table(sigma, 6)
    for n in range(0, 7):
        oracle = count_by_instances(n, Pattern.parse(sigma))
        for m in range(0, n + 1):
            assert counts_from_clusters(tab, n, m).f == oracle.get(m, 0)


def test_cluster_counts_base_cases():
    cc = ClusterCounts(cluster_table("123", 4))
    for i in (1, 2, 3):
        assert cc.F(0, i, 0) == 1
        assert cc.F(0, i, 2) == 0


def test_missing_cluster_data():
    tab = cluster_table("123", 4)
    with pytest.raises(MissingClusterDataError):
        counts_from_clusters(tab, 6, 1)
    with pytest.raises(MissingClusterDataError):
        tab.r(6, 1)


def test_inclusion_exclusion_inverse():
    sigma = Pattern.parse("1324")
    tab = cluster_table(sigma, 6)
    cc = ClusterCounts(tab)
    for n in range(0, 7):
        exact = count_by_instances(n, sigma)
        top = max(exact)
        F = {m: highlighted_from_exact(lambda j: exact.get(j, 0), m, top) for m in range(top + 1)}
        for m in range(top + 1):
            assert F[m] == cc.F(n, 1, m)
            assert exact_from_highlighted(lambda j: F[j], m, top) == exact.get(m, 0)


def test_tables_recovered_from_forest_counts():
    for sigma in ("123", "213", "1423"):
        tab = cluster_table(sigma, 6)
        cc = ClusterCounts(tab)
        F1 = {(n, m): cc.F(n, 1, m) for n in range(0, 7) for m in range(0, n + 1)}
        back = clusters_from_forest_counts(F1, 6, sigma)
        assert back.entries == {k: v for k, v in tab.entries.items() if v}


def test_verdicts(s3_tables):
    assert strong_cfw_equivalent("123", "123", 6).equal
    v = strong_cfw_equivalent("123", "132", 5, s3_tables)
    assert not v.equal and v.witness[0] <= 5
    assert str(v).startswith("DIFFER at n=")
    v = compare_tables(s3_tables[Pattern.parse("123")], s3_tables[Pattern.parse("321")])
    assert v.equal and str(v) == "EQUAL-UP-TO n=7"


def test_first_value_test():
    assert first_value_test("1324", "1423")
    assert first_value_test("2134", "3124")
    assert not first_value_test("1234", "2134")


def test_s3_classes_are_complement_pairs(s3_tables):
    for cls in equivalence_classes(s3_tables):
        assert len(cls) <= 2
        if len(cls) == 2:
            assert cls[0].complement() == cls[1]


def test_table_json_round_trip():
    tab = cluster_table("1423", 6)
    assert ClusterTable.from_json(tab.to_json()) == tab
