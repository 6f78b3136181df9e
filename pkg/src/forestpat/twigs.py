"""Nice trees, twig collections, the gamma involution and the G map.

Depth counts from 1 at the root.  A forest is sigma-nice when every
odd-depth vertex has a child, and every even-depth vertex beats its parent's
label and (from depth 4 on) ends a consecutive instance of sigma.  Cutting a
nice forest at its odd-depth vertices gives a collection of twigs
(parent, set of children).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .core import LabeledForest, Pattern, iter_parent_vectors, _vector_paths, standardize
from .errors import (
    NotNiceError,
    NotProperError,
    NotSubsetError,
    OddSizeError,
    SizeMismatchError,
    UnsupportedPatternError,
)

P1423 = Pattern((1, 4, 2, 3))
P1324 = Pattern((1, 3, 2, 4))
P1234 = Pattern((1, 2, 3, 4))


# --------------------------------------------------------------------------
# nice forests


def _nice_from_paths(paths, child_count, sigma, extra=False):
    ent = sigma.entries
    k = sigma.k
    for v, p in paths.items():
        d = len(p)
        if d % 2:
            c = child_count.get(v, 0)
            if c == 0 or (extra and c != 1):
                return False
        else:
            if p[-1] < p[-2]:
                return False
            if d >= 4 and (d < k or standardize(p[-k:]) != ent):
                return False
    return True


def is_nice(F: LabeledForest, sigma) -> bool:
    sigma = Pattern.parse(sigma)
    if len(F) == 0:
        return False
    counts = {v: len(F.children(v)) for v in F.labels}
    return _nice_from_paths(F.root_paths(), counts, sigma)


def is_extranice(F: LabeledForest, sigma) -> bool:
    sigma = Pattern.parse(sigma)
    if len(F) == 0:
        return False
    counts = {v: len(F.children(v)) for v in F.labels}
    return _nice_from_paths(F.root_paths(), counts, sigma, extra=True)


def _vector_nice(vec, sigma, extra=False):
    if not vec:
        return False
    paths = _vector_paths(vec)
    counts = {}
    for p in vec:
        if p:
            counts[p] = counts.get(p, 0) + 1
    return _nice_from_paths({v: paths[v] for v in range(1, len(vec) + 1)}, counts, sigma, extra)


def count_nice(n: int, sigma, universe="tree", extra=False) -> int:
    """Exhaustive count of sigma-nice (or extranice) trees or forests on [n]."""
    sigma = Pattern.parse(sigma)
    tree = universe == "tree"
    total = 0
    for vec in iter_parent_vectors(n):
        if tree and vec.count(0) != 1:
            continue
        if _vector_nice(vec, sigma, extra):
            total += 1
    return total


# --------------------------------------------------------------------------
# twigs


@dataclass(frozen=True, order=True)
class Twig:
    parent: int
    children: frozenset

    def __post_init__(self):
        object.__setattr__(self, "children", frozenset(int(c) for c in self.children))
        if not self.children:
            raise ValueError("a twig needs at least one child")

    def is_proper(self):
        return all(c > self.parent for c in self.children)

    @property
    def min_child(self):
        return min(self.children)

    @property
    def max_child(self):
        return max(self.children)

    def __repr__(self):
        return f"({self.parent}, {{{', '.join(map(str, sorted(self.children)))}}})"


class TwigCollection:
    """A nonempty set of twigs with pairwise disjoint child label sets."""

    __slots__ = ("twigs",)

    def __init__(self, twigs):
        twigs = frozenset(t if isinstance(t, Twig) else Twig(t[0], t[1]) for t in twigs)
        if not twigs:
            raise ValueError("a twig collection is nonempty")
        seen = set()
        for t in twigs:
            if seen & t.children:
                raise ValueError("child label sets must be disjoint")
            seen |= t.children
        self.twigs = twigs

    def sorted(self):
        return sorted(self.twigs, key=lambda t: t.parent)

    @property
    def child_labels(self) -> frozenset:
        return frozenset().union(*(t.children for t in self.twigs))

    @property
    def parent_labels(self) -> list:
        return sorted(t.parent for t in self.twigs)

    @property
    def labels(self) -> frozenset:
        return self.child_labels | frozenset(self.parent_labels)

    @property
    def n_vertices(self) -> int:
        return len(self.twigs) + sum(len(t.children) for t in self.twigs)

    def is_proper(self) -> bool:
        if not all(t.is_proper() for t in self.twigs):
            return False
        return len(self.labels) == self.n_vertices

    def __len__(self):
        return len(self.twigs)

    def __iter__(self):
        return iter(self.sorted())

    def __eq__(self, other):
        return isinstance(other, TwigCollection) and self.twigs == other.twigs

    def __hash__(self):
        return hash(self.twigs)

    def __repr__(self):
        return "{" + ", ".join(map(repr, self.sorted())) + "}"

    def relabeled(self, mapping):
        return TwigCollection(Twig(mapping[t.parent], [mapping[c] for c in t.children])
                              for t in self.twigs)

    def standardized(self) -> "TwigCollection":
        """Order-preserving relabeling onto 1..(number of vertices)."""
        labs = sorted(self.labels)
        return self.relabeled({v: i for i, v in enumerate(labs, 1)})

    def to_json(self):
        return [{"parent": t.parent, "children": sorted(t.children)} for t in self.sorted()]

    @classmethod
    def from_json(cls, obj):
        return cls(Twig(int(d["parent"]), [int(c) for c in d["children"]]) for d in obj)


def decompose(F: LabeledForest, sigma=None) -> TwigCollection:
    """One twig per odd-depth vertex: the vertex with its children."""
    if sigma is not None and not is_nice(F, sigma):
        raise NotNiceError(f"forest is not {Pattern.parse(sigma)}-nice")
    paths = F.root_paths()
    twigs = []
    for v, p in paths.items():
        if len(p) % 2:
            ch = F.children(v)
            if not ch:
                raise NotNiceError(f"odd-depth vertex {v} has no children")
            twigs.append(Twig(v, ch))
    return TwigCollection(twigs)


def rel(W: TwigCollection, T) -> TwigCollection:
    """Relabel child vertices onto ``T`` keeping their relative order; parents stay."""
    T = sorted(T)
    kids = sorted(W.child_labels)
    if len(T) != len(kids):
        raise SizeMismatchError(f"need {len(kids)} labels, got {len(T)}")
    m = dict(zip(kids, T))
    return TwigCollection(Twig(t.parent, [m[c] for c in t.children]) for t in W.twigs)


def alpha_E(t: Twig, E) -> Twig:
    """Reverse the rank of each child label inside the sorted set E."""
    E = sorted(E)
    if not t.children <= set(E):
        raise NotSubsetError("E must contain the child label set")
    pos = {x: i for i, x in enumerate(E)}
    n = len(E)
    return Twig(t.parent, [E[n - 1 - pos[c]] for c in t.children])


def gamma(W: TwigCollection) -> TwigCollection:
    """The relabeling involution on proper twig collections."""
    if not W.is_proper():
        raise NotProperError("gamma is defined on proper twig collections")
    return _gamma(W)


def _gamma(W):
    ts = W.sorted()
    if len(ts) == 1:
        return W
    last = ts[-1]
    C = W.child_labels
    E = [c for c in C if c > last.parent]
    new_last = alpha_E(last, E)
    D = new_last.children
    rest = _gamma(TwigCollection(ts[:-1]))
    out = rel(rest, C - D)
    return TwigCollection(list(out.twigs) + [new_last])


def iterate_proper_twig_collections(labels):
    """Every proper twig collection whose label set is exactly ``labels``."""
    labels = sorted(labels)
    if len(labels) < 2:
        return
    lo = labels[0]
    rest = labels[1:]
    # the smallest label is always a parent; choose the other parents
    for r in range(len(rest) + 1):
        for others in itertools.combinations(rest, r):
            parents = [lo, *others]
            kids = [x for x in rest if x not in others]
            if len(kids) < len(parents):
                continue
            options = [[p for p in parents if p < c] for c in kids]
            for choice in itertools.product(*options):
                if set(choice) != set(parents):
                    continue
                groups = {p: [] for p in parents}
                for c, p in zip(kids, choice):
                    groups[p].append(c)
                yield TwigCollection(Twig(p, cs) for p, cs in groups.items())


# --------------------------------------------------------------------------
# counting nice forests built from a twig collection


def _assemble(W: TwigCollection, attach: dict) -> LabeledForest | None:
    par = {}
    for t in W.twigs:
        par[t.parent] = attach.get(t.parent)
        for c in t.children:
            par[c] = t.parent
    # reject cycles
    for v in par:
        seen = 0
        u = v
        while u is not None:
            u = par[u]
            seen += 1
            if seen > len(par):
                return None
    return LabeledForest._trusted(par)


def _constructions_brute(W: TwigCollection, sigma):
    ts = W.sorted()
    owner = {c: t.parent for t in ts for c in t.children}
    choices = []
    for t in ts:
        choices.append([None] + sorted(c for c in owner if owner[c] != t.parent))
    F = T = 0
    for pick in itertools.product(*choices):
        attach = {t.parent: a for t, a in zip(ts, pick)}
        forest = _assemble(W, attach)
        if forest is None or not is_nice(forest, sigma):
            continue
        if decompose(forest) != W:
            continue
        F += 1
        if forest.is_tree():
            T += 1
    return F, T


def _constructions_formula(W: TwigCollection, sigma):
    W = W.standardized()
    ts = W.sorted()
    if len(ts) == 1:
        return 1, 1
    last = ts[-1]
    n = W.n_vertices
    p, c, d = last.parent, last.min_child, last.max_child
    Fr, Tr = _constructions_formula(TwigCollection(ts[:-1]), sigma)
    if sigma == P1423:
        return (n - d + 1) * Fr, (n - d) * Tr
    return (c - p) * Fr, (c - p - 1) * Tr


def count_constructions(W: TwigCollection, sigma, method="formula"):
    """(F_sigma(W), T_sigma(W)): nice forests / trees whose decomposition is W."""
    sigma = Pattern.parse(sigma)
    if not W.is_proper():
        raise NotProperError("twig collection must be proper")
    if method == "brute":
        return _constructions_brute(W, sigma)
    if sigma not in (P1423, P1324):
        raise UnsupportedPatternError("the product formula covers 1423 and 1324 only")
    return _constructions_formula(W, sigma)


# --------------------------------------------------------------------------
# A and B counts


def A_table(sigma, max_n: int) -> dict:
    """A[(n, m)]: sigma-nice trees on [n] with exactly m consecutive instances (exhaustive)."""
    sigma = Pattern.parse(sigma)
    k = sigma.k
    out = {}
    for n in range(0, max_n + 1):
        for vec in iter_parent_vectors(n):
            if vec.count(0) != 1 or not _vector_nice(vec, sigma):
                continue
            paths = _vector_paths(vec)
            m = sum(1 for q in paths[1:] if len(q) >= k and standardize(q[-k:]) == sigma.entries)
            out[(n, m)] = out.get((n, m), 0) + 1
    return out


def A_count(sigma, n: int, m: int, method="brute") -> int:
    sigma = Pattern.parse(sigma)
    if method == "brute":
        return A_table(sigma, n).get((n, m), 0) if n >= 0 else 0
    # through twig collections on [n] with m children outside the first twig
    total = 0
    for W in iterate_proper_twig_collections(range(1, n + 1)):
        ts = W.sorted()
        if sum(len(t.children) for t in ts[1:]) == m:
            total += count_constructions(W, sigma, method="formula" if sigma in (P1423, P1324) else "brute")[1]
    return total


def B_table_brute(sigma, max_n: int) -> dict:
    """B[(n, m)]: like A but with no childless depth-2 vertex (exhaustive)."""
    sigma = Pattern.parse(sigma)
    k = sigma.k
    out = {}
    for n in range(0, max_n + 1):
        for vec in iter_parent_vectors(n):
            if vec.count(0) != 1 or not _vector_nice(vec, sigma):
                continue
            paths = _vector_paths(vec)
            has_child = set(vec)
            if any(len(paths[v]) == 2 and v not in has_child for v in range(1, n + 1)):
                continue
            m = sum(1 for q in paths[1:] if len(q) >= k and standardize(q[-k:]) == sigma.entries)
            out[(n, m)] = out.get((n, m), 0) + 1
    return out


def B_from_A(A: dict, max_n: int) -> dict:
    """B(n,m) = A(n,m) - [m=0] - sum_{i=1}^{n-1} C(n-1,i) B(n-i,m), n >= 2; zero for n < 2."""
    B = {}
    ms = {m for (_, m) in A} | {0}
    for m in sorted(ms):
        for n in range(2, max_n + 1):
            v = A.get((n, m), 0) - (1 if m == 0 else 0)
            v -= sum(comb(n - 1, i) * B.get((n - i, m), 0) for i in range(1, n - 1))
            if v:
                B[(n, m)] = v
    return B


def B_count(sigma, n: int, m: int, method="from_A") -> int:
    if method == "brute":
        return B_table_brute(sigma, n).get((n, m), 0)
    return B_from_A(A_table(sigma, n), n).get((n, m), 0)


# --------------------------------------------------------------------------
# maximum nice subtree of a cluster


@dataclass
class NiceSplit:
    t_max: frozenset          # vertex labels of the maximum nice subtree
    t_max_instances: frozenset
    R: frozenset
    attached: dict            # v in R -> ForestCluster rooted at v


def max_nice_subtree(X, sigma=None) -> NiceSplit:
    from .clusters import ForestCluster

    sigma = Pattern.parse(sigma if sigma is not None else X.sigma)
    if sigma not in (P1423, P1324):
        raise UnsupportedPatternError("maximum nice subtrees are defined for 1423 and 1324")
    T = X.tree
    paths = T.root_paths()
    ends = {inst[-1] for inst in X.instances}
    ok = {}
    for v in T.bfs_order():
        p = paths[v]
        d = len(p)
        parent_ok = d == 1 or ok[p[-2]]
        good = parent_ok
        if good and d % 2 == 0:
            good = p[-1] > p[-2] and (d < 4 or v in ends)
        ok[v] = good
    U = {v for v, g in ok.items() if g}
    t_max = {v for v in U if len(paths[v]) % 2 == 0 or any(c in U for c in T.children(v))}
    R = {v for v in t_max if any(c not in t_max for c in T.children(v))}
    attached = {}
    for v in sorted(R):
        verts = {v}
        for c in T.children(v):
            if c not in t_max:
                verts |= T.subtree_labels(c)
        sub = LabeledForest._trusted({u: (None if u == v else T.parent(u)) for u in verts})
        insts = frozenset(i for i in X.instances if set(i) <= verts)
        attached[v] = ForestCluster(sub, insts, sigma)
    t_inst = frozenset(i for i in X.instances if set(i) <= t_max)
    return NiceSplit(frozenset(t_max), t_inst, frozenset(R), attached)


# --------------------------------------------------------------------------
# cluster numbers from nice trees


def _size_profiles(n):
    """Multiset of size vectors (|L_1|, ..., |L_r|) over the admissible (L_R, (L_i)) on [n]."""
    prof = {}
    pool = list(range(2, n + 1))
    for r in range(len(pool) + 1):
        for LR in itertools.combinations(pool, r):
            others = [x for x in pool if x not in LR]
            opts = [[None] + [i for i, ell in enumerate(LR) if ell < x] for x in others]
            for pick in itertools.product(*opts):
                sizes = [1] * r
                for i in pick:
                    if i is not None:
                        sizes[i] += 1
                key = tuple(sizes)
                prof[key] = prof.get(key, 0) + 1
    return prof


def cluster_numbers_from_nice(sigma, max_n: int, B=None) -> dict:
    """r[(n, m)] through the decomposition into a maximum nice subtree plus attached clusters."""
    sigma = Pattern.parse(sigma)
    if B is None:
        B = B_from_A(A_table(sigma, max_n), max_n)
    r = {}

    def rpoly(s):
        return {m: v for (nn, m), v in r.items() if nn == s and v}

    for n in range(1, max_n + 1):
        if n == 1:
            continue
        total = {}
        for sizes, mult in _size_profiles(n).items():
            n0 = n - sum(sizes) + len(sizes)
            poly = {m: v for (nn, m), v in B.items() if nn == n0 and v}
            for s in sizes:
                rp = rpoly(s)
                new = {}
                for a, x in poly.items():
                    for b, y in rp.items():
                        new[a + b] = new.get(a + b, 0) + x * y
                poly = new
                if not poly:
                    break
            for m, v in poly.items():
                total[m] = total.get(m, 0) + mult * v
        for m, v in total.items():
            if m >= 1 and v:
                r[(n, m)] = v
    return r


@dataclass
class RecurrenceVerdict:
    passed: bool
    max_n: int
    mismatches: list

    def __str__(self):
        return "PASS" if self.passed else f"FAIL {self.mismatches[:3]}"


def cluster_recurrence_check(sigma, max_n: int, max_m=None, table=None) -> RecurrenceVerdict:
    """Compare cluster numbers from the nice-tree recurrence with exhaustive ones."""
    from .clusters import cluster_table

    sigma = Pattern.parse(sigma)
    if table is None:
        table = cluster_table(sigma, max_n)
    rec = cluster_numbers_from_nice(sigma, max_n)
    bad = []
    keys = set(rec) | {k for k, v in table.entries.items() if v}
    for n, m in sorted(keys):
        if n > max_n or (max_m is not None and m > max_m):
            continue
        a, b = rec.get((n, m), 0), table.entries.get((n, m), 0)
        if a != b:
            bad.append((n, m, a, b))
    return RecurrenceVerdict(not bad, max_n, bad)


# --------------------------------------------------------------------------
# the G map


def G_map(T: LabeledForest) -> LabeledForest:
    """Apply g_v at every odd-depth vertex, shallowest first."""
    if not T.is_tree():
        raise ValueError("G is defined on trees")
    parent = {v: T.parent(v) for v in T.labels}
    children = {v: T.children(v) for v in T.labels}
    label = {v: v for v in T.labels}
    depth = {v: len(p) for v, p in T.root_paths().items()}

    def subtree(v):
        out = [v]
        i = 0
        while i < len(out):
            out.extend(children[out[i]])
            i += 1
        return out

    for d in range(1, max(depth.values()) + 1, 2):
        for v in sorted(u for u in depth if depth[u] == d):
            rest = sorted(label[u] for u in subtree(v) if u != v)
            if not rest:
                continue
            pos = {x: i for i, x in enumerate(rest)}
            refl = {x: rest[len(rest) - 1 - pos[x]] for x in rest}
            for w in children[v]:
                label[w] = refl[label[w]]
                for x in children[w]:
                    sub = subtree(x)
                    new = sorted(refl[label[u]] for u in sub)
                    for u, lab in zip(sorted(sub, key=lambda u: label[u]), new):
                        label[u] = lab
    return LabeledForest._trusted({label[v]: (None if p is None else label[p]) for v, p in parent.items()})


# --------------------------------------------------------------------------
# extranice counts


def bernoulli(n: int) -> Fraction:
    """B_n (with B_1 = -1/2) from sum_{j=0}^{m} C(m+1, j) B_j = 0."""
    B = [Fraction(1)]
    for m in range(1, n + 1):
        B.append(-sum(comb(m + 1, j) * B[j] for j in range(m)) / (m + 1))
    return B[n]


def extranice_count(n2: int) -> int:
    """sigma-extranice trees on [n2] (sigma in 1234, 1423, 1324) in closed form."""
    if n2 % 2:
        raise OddSizeError("extranice trees only exist on an even number of vertices")
    if n2 <= 0:
        return 0
    n = n2 // 2
    val = Fraction((-1) ** (n - 1) * 2 ** (n + 1) * (2 ** (2 * n) - 1)) * bernoulli(2 * n) / (2 * n)
    assert val.denominator == 1
    return int(val)


def extranice_by_recurrence(max_n2: int) -> list:
    """Trees satisfy T(n) = F(n-2), forests come from trees as usual; returns T(0..max)."""
    from .recurrences import forest_from_tree

    T = {0: 0}
    Fm = {}

    def tree(n):
        return T[n]

    for n in range(1, max_n2 + 1):
        T[n] = forest_from_tree(tree, n - 2, 1, Fm) if n >= 2 else 0
    return [T[n] for n in range(max_n2 + 1)]


def tangent_series_counts(max_n2: int) -> list:
    """T(2n) as coefficients of sqrt(2) tan(x / sqrt(2)) via the series of sin / cos."""
    N = max_n2 + 1
    sin = [Fraction(0)] * N
    cos = [Fraction(0)] * N
    for i in range(N):
        if i % 2:
            sin[i] = Fraction((-1) ** (i // 2), factorial(i))
        else:
            cos[i] = Fraction((-1) ** (i // 2), factorial(i))
    tan = [Fraction(0)] * N
    for i in range(N):
        tan[i] = sin[i] - sum(tan[j] * cos[i - j] for j in range(i))
    out = []
    for n2 in range(2, max_n2 + 1, 2):
        n = n2 // 2
        coeff = tan[2 * n - 1] * factorial(2 * n - 1)
        out.append(int(coeff / 2 ** (n - 1)))
    return out


def _alternating_trees(labels):
    """Trees on ``labels`` in which every odd-depth vertex has exactly one child."""
    labels = tuple(sorted(labels))
    for r in labels:
        rest = [x for x in labels if x != r]
        for c in rest:
            below = [x for x in rest if x != c]
            for forest in _alternating_forests(tuple(below)):
                par = {r: None, c: r}
                for v, p in forest.items():
                    par[v] = c if p is None else p
                yield par


def _alternating_forests(labels):
    if not labels:
        yield {}
        return
    first, rest = labels[0], labels[1:]
    for size in range(1, len(rest) + 1, 2):
        for others in itertools.combinations(rest, size):
            block = (first,) + others
            remaining = tuple(x for x in rest if x not in others)
            for tree in _alternating_trees(block):
                for more in _alternating_forests(remaining):
                    out = dict(tree)
                    out.update(more)
                    yield out


def count_extranice_brute(n2: int, sigma=P1423) -> int:
    """Exhaustive count over trees whose odd-depth vertices have one child each."""
    sigma = Pattern.parse(sigma)
    if n2 % 2:
        raise OddSizeError("extranice trees only exist on an even number of vertices")
    total = 0
    for par in _alternating_trees(range(1, n2 + 1)) if n2 else ():
        if is_extranice(LabeledForest._trusted(par), sigma):
            total += 1
    return total
