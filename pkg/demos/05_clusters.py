"""
Consecutive patterns through clusters
=====================================

A cluster is a tree covered by overlapping highlighted instances of a
consecutive pattern. Cluster numbers r_{n,m} determine how many forests
have exactly m instances.
"""

from forestpat.clusters import cluster_table, compare_tables, counts_from_clusters, r_closed_form
from forestpat.core import count_by_instances

tab = cluster_table("123", 6)
print("r_{5,2}(123) =", tab.r(5, 2), " closed form:", r_closed_form("123"))
print("r_{7,2}(1324) closed form:", r_closed_form("1324"))

# forests on [6] by number of consecutive 1324 instances, two ways
t1324 = cluster_table("1324", 6)
print({m: counts_from_clusters(t1324, 6, m).f for m in range(4)})
print(count_by_instances(6, "1324"))

# 1324 and 1423 have the same cluster numbers; 1234 does not
print("1324 vs 1423:", compare_tables(t1324, cluster_table("1423", 6)))
print("1324 vs 1234:", compare_tables(t1324, cluster_table("1234", 6)))
