"""Forest clusters for consecutive patterns and the counts they determine.

An m-cluster of size n is a tree on n vertices with m highlighted consecutive
instances of a pattern that cover every vertex and whose overlap graph is
connected.  ``r[n, m]`` is the number of clusters on [n].
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

from .core import (
    LabeledForest,
    Pattern,
    _vector_paths,
    consecutive_instances,
    iter_parent_vectors,
    standardize,
)
from .errors import CapExceededError, MissingClusterDataError

DEFAULT_CLUSTER_CAPS = {2: 9, 3: 9, 4: 8}


def cluster_cap(k):
    return DEFAULT_CLUSTER_CAPS.get(k, 8)


@dataclass(frozen=True)
class ForestCluster:
    tree: LabeledForest
    instances: frozenset  # label tuples, oldest first
    sigma: Pattern

    def __post_init__(self):
        object.__setattr__(self, "sigma", Pattern.parse(self.sigma))
        object.__setattr__(self, "instances", frozenset(tuple(i) for i in self.instances))

    @property
    def m(self):
        return len(self.instances)

    @property
    def n(self):
        return len(self.tree)

    def validate(self):
        T = self.tree
        if not T.is_tree():
            raise ValueError("a cluster is a single tree")
        allowed = set(consecutive_instances(T, self.sigma))
        if not self.instances <= allowed:
            raise ValueError("highlighted chains must be consecutive instances")
        covered = set().union(*self.instances) if self.instances else set()
        if covered != set(T.labels):
            raise ValueError("every vertex must lie in a highlighted instance")
        if not overlap_connected([frozenset(i) for i in self.instances]):
            raise ValueError("highlighted instances must overlap in a connected way")
        return self


class _DSU:
    def __init__(self, n):
        self.p = list(range(n))

    def find(self, x):
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            self.p[a] = b
            return True
        return False


def overlap_connected(sets) -> bool:
    sets = list(sets)
    if not sets:
        return False
    d = _DSU(len(sets))
    comps = len(sets)
    for i, j in itertools.combinations(range(len(sets)), 2):
        if sets[i] & sets[j] and d.union(i, j):
            comps -= 1
    return comps == 1


def _mask_connected(masks) -> bool:
    d = _DSU(len(masks))
    comps = len(masks)
    for i in range(len(masks)):
        for j in range(i + 1, len(masks)):
            if masks[i] & masks[j] and d.union(i, j):
                comps -= 1
    return comps == 1


def _cluster_subsets(masks, full):
    """Index subsets of ``masks`` that cover ``full`` and overlap connectedly."""
    r = len(masks)
    for bits in range(1, 1 << r):
        chosen = [masks[i] for i in range(r) if bits >> i & 1]
        cov = 0
        for m in chosen:
            cov |= m
        if cov == full and _mask_connected(chosen):
            yield [i for i in range(r) if bits >> i & 1]


def enumerate_clusters(sigma, n: int, cap=None):
    """Every cluster on [n] for ``sigma``, trees in parent-vector order."""
    sigma = Pattern.parse(sigma)
    k = sigma.k
    cap = cluster_cap(k) if cap is None else cap
    if n > cap:
        raise CapExceededError(f"cluster enumeration capped at n={cap} for k={k}")
    if n < 1:
        return
    full = (1 << n) - 1
    for vec in iter_parent_vectors(n):
        if vec.count(0) != 1:
            continue
        chains = []
        for p in _vector_paths(vec)[1:]:
            if len(p) >= k and standardize(p[-k:]) == sigma.entries:
                chains.append(p[-k:])
        if not chains:
            continue
        masks = [sum(1 << (v - 1) for v in c) for c in chains]
        cov = 0
        for m in masks:
            cov |= m
        if cov != full:
            continue
        tree = None
        for idx in _cluster_subsets(masks, full):
            if tree is None:
                tree = LabeledForest.from_parent_vector(vec)
            yield ForestCluster(tree, frozenset(chains[i] for i in idx), sigma)


@dataclass
class ClusterTable:
    """r[n, m] for 1 <= n <= max_n (absent entries are zero)."""
    sigma: Pattern
    max_n: int
    entries: dict = field(default_factory=dict)

    def r(self, n, m):
        if n > self.max_n:
            raise MissingClusterDataError(
                f"cluster numbers for {self.sigma} only known up to n={self.max_n}, need n={n}")
        return self.entries.get((n, m), 0)

    def rows(self):
        return sorted((n, m, v) for (n, m), v in self.entries.items() if v)

    def __eq__(self, other):
        if not isinstance(other, ClusterTable):
            return NotImplemented
        N = min(self.max_n, other.max_n)
        a = {key: v for key, v in self.entries.items() if v and key[0] <= N}
        b = {key: v for key, v in other.entries.items() if v and key[0] <= N}
        return a == b

    def to_json(self):
        return {"sigma": str(self.sigma), "max_n": self.max_n,
                "entries": [[n, m, v] for n, m, v in self.rows()]}

    @classmethod
    def from_json(cls, obj):
        return cls(Pattern.parse(obj["sigma"]), obj["max_n"],
                   {(n, m): v for n, m, v in obj["entries"]})


def cluster_tables(k: int, max_n: int, patterns=None, cap=None) -> dict:
    """Cluster tables for many patterns of length k with one pass over the trees per n."""
    cap = cluster_cap(k) if cap is None else cap
    if max_n > cap:
        raise CapExceededError(f"cluster enumeration capped at n={cap} for k={k}")
    if patterns is None:
        patterns = [Pattern(p) for p in itertools.permutations(range(1, k + 1))]
    patterns = [Pattern.parse(p) for p in patterns]
    wanted = {p.entries: p for p in patterns}
    tables = {p: ClusterTable(p, max_n) for p in patterns}
    std_memo = {}
    for n in range(1, max_n + 1):
        full = (1 << n) - 1
        for vec in iter_parent_vectors(n):
            if vec.count(0) != 1:
                continue
            groups = {}
            for v, p in enumerate(_vector_paths(vec)[1:], 1):
                if len(p) >= k:
                    w = p[-k:]
                    s = std_memo.get(w)
                    if s is None:
                        s = std_memo[w] = standardize(w)
                    if s in wanted:
                        groups.setdefault(s, []).append(sum(1 << (u - 1) for u in w))
            for s, masks in groups.items():
                cov = 0
                for m in masks:
                    cov |= m
                if cov != full:
                    continue
                ent = tables[wanted[s]].entries
                for idx in _cluster_subsets(masks, full):
                    key = (n, len(idx))
                    ent[key] = ent.get(key, 0) + 1
    return tables


def cluster_table(sigma, max_n: int, cap=None) -> ClusterTable:
    sigma = Pattern.parse(sigma)
    return cluster_tables(sigma.k, max_n, [sigma], cap)[sigma]


def r_closed_form(sigma) -> int:
    """r[2k-1, 2]: two instances sharing exactly one vertex."""
    sigma = Pattern.parse(sigma)
    k, s = sigma.k, sigma[0]
    twice = 2 * comb(2 * k - 1, k) - comb(2 * s - 2, s - 1) * comb(2 * k - 2 * s, k - s)
    assert twice % 2 == 0
    return twice // 2


# --------------------------------------------------------------------------
# from cluster numbers to forest counts and back


class ClusterCounts:
    """F(n, i, m), T(n, m) and f(n, m) determined by a cluster table.

    F(n, i, m): forests on [n] in i pots with m highlighted instances;
    T(n, m): trees on [n] with m highlighted instances;
    f(n, m): forests on [n] with exactly m instances.
    """

    def __init__(self, table: ClusterTable):
        self.table = table
        self._F = {}
        self._T = {}

    def _r(self, n, m):
        return self.table.r(n, m)

    def F(self, n, i, m):
        if m < 0:
            return 0
        if n == 0:
            return 1 if m == 0 else 0
        key = (n, i, m)
        if key not in self._F:
            total = 0
            for ell in range(1, n + 1):
                c = comb(n - 1, ell - 1)
                for j in range(m + 1):
                    t = self.T(ell, j)
                    if t:
                        total += c * t * self.F(n - ell, i, m - j)
            self._F[key] = i * total
        return self._F[key]

    def T(self, n, m):
        if n < 1 or m < 0:
            return 0
        key = (n, m)
        if key not in self._T:
            total = n * self.F(n - 1, 1, m)
            for ell in range(1, n + 1):
                for j in range(1, m + 1):
                    r = self._r(ell, j)
                    if r:
                        total += comb(n, ell) * r * self.F(n - ell, ell, m - j)
            self._T[key] = total
        return self._T[key]

    def f(self, n, m):
        if n > self.table.max_n:
            raise MissingClusterDataError(
                f"cluster numbers for {self.table.sigma} only known up to n={self.table.max_n}")
        return exact_from_highlighted(lambda mm: self.F(n, 1, mm), m, n)


@dataclass
class CountsFromClusters:
    F: dict   # i -> F(n, i, m)
    T: int
    f: int


def counts_from_clusters(table: ClusterTable, n: int, m: int, pots=None) -> CountsFromClusters:
    if n > table.max_n:
        raise MissingClusterDataError(
            f"cluster numbers for {table.sigma} only known up to n={table.max_n}, need n={n}")
    cc = ClusterCounts(table)
    pots = range(1, max(n, 1) + 1) if pots is None else pots
    return CountsFromClusters({i: cc.F(n, i, m) for i in pots}, cc.T(n, m), cc.f(n, m))


def highlighted_from_exact(f_row, m, n_max_m):
    """F(n,1,m) = sum_i C(m+i, m) f(n, m+i)."""
    return sum(comb(m + i, m) * f_row(m + i) for i in range(n_max_m - m + 1))


def exact_from_highlighted(F_row, m, n_max_m):
    """f(n,m) = sum_i (-1)^i C(m+i, m) F(n, 1, m+i)."""
    return sum((-1) ** i * comb(m + i, m) * F_row(m + i) for i in range(n_max_m - m + 1))


def clusters_from_forest_counts(F1: dict, max_n: int, sigma=None) -> ClusterTable:
    """Recover r[n, m] from F(n, 1, m) values (``F1[(n, m)]``, missing = 0)."""
    def F1v(n, m):
        if n == 0:
            return 1 if m == 0 else 0
        return F1.get((n, m), 0)

    Fi = {}

    def F(n, i, m):
        # pots are independent: convolve F(., i-1, .) with F(., 1, .)
        if m < 0:
            return 0
        if i == 1:
            return F1v(n, m)
        if i == 0:
            return 1 if (n == 0 and m == 0) else 0
        key = (n, i, m)
        if key not in Fi:
            total = 0
            for a in range(n + 1):
                c = comb(n, a)
                for b in range(m + 1):
                    x = F1v(a, b)
                    if x:
                        total += c * x * F(n - a, i - 1, m - b)
            Fi[key] = total
        return Fi[key]

    T = {}

    def Tv(n, m):
        if n < 1 or m < 0:
            return 0
        key = (n, m)
        if key not in T:
            total = F1v(n, m)
            for ell in range(1, n + 1):
                for j in range(m + 1):
                    if (ell, j) == (n, m):
                        continue
                    total -= comb(n - 1, ell - 1) * F1v(n - ell, m - j) * Tv(ell, j)
            T[key] = total
        return T[key]

    r = {}
    for n in range(1, max_n + 1):
        for m in range(1, n + 1):
            total = Tv(n, m) - n * F1v(n - 1, m)
            for ell in range(1, n + 1):
                for j in range(1, m + 1):
                    if (ell, j) == (n, m):
                        continue
                    rv = r.get((ell, j), 0)
                    if rv:
                        total -= comb(n, ell) * rv * F(n - ell, ell, m - j)
            if total:
                r[(n, m)] = total
    return ClusterTable(Pattern.parse(sigma) if sigma is not None else None, max_n, r)


# --------------------------------------------------------------------------
# equivalence checks


@dataclass
class Verdict:
    equal: bool
    max_n: int
    witness: tuple | None = None   # (n, m, r_sigma, r_tau) at the first difference

    def __str__(self):
        if self.equal:
            return f"EQUAL-UP-TO n={self.max_n}"
        n, m, a, b = self.witness
        return f"DIFFER at n={n}, m={m}: {a} vs {b}"


def compare_tables(a: ClusterTable, b: ClusterTable) -> Verdict:
    N = min(a.max_n, b.max_n)
    keys = sorted(set(a.entries) | set(b.entries))
    for n, m in keys:
        if n <= N and a.entries.get((n, m), 0) != b.entries.get((n, m), 0):
            return Verdict(False, N, (n, m, a.entries.get((n, m), 0), b.entries.get((n, m), 0)))
    return Verdict(True, N)


def strong_cfw_equivalent(sigma, tau, max_n: int, tables=None) -> Verdict:
    """Compare cluster numbers of two patterns up to ``max_n``."""
    sigma, tau = Pattern.parse(sigma), Pattern.parse(tau)
    if tables is None:
        if sigma.k == tau.k:
            tables = cluster_tables(sigma.k, max_n, [sigma, tau] if sigma != tau else [sigma])
        else:
            tables = {sigma: cluster_table(sigma, max_n), tau: cluster_table(tau, max_n)}
    return compare_tables(tables[sigma], tables[tau])


def first_value_test(sigma, tau) -> bool:
    """Necessary condition for equivalence: same first value up to complement."""
    sigma, tau = Pattern.parse(sigma), Pattern.parse(tau)
    k = sigma.k
    return sigma[0] == tau[0] or sigma[0] + tau[0] == k + 1


def equivalence_classes(tables: dict) -> list:
    """Group patterns whose tables agree entrywise."""
    classes = []
    for p in sorted(tables):
        for cls in classes:
            if tables[cls[0]] == tables[p]:
                cls.append(p)
                break
        else:
            classes.append([p])
    return classes
