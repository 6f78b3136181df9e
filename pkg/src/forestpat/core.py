"""Patterns, labeled rooted forests, containment and exhaustive counting.

A forest is nothing more than its parent map: each label points at another
label or at ``ROOT`` (``None``).  Children are unordered, so two forests are
equal exactly when their parent maps are equal.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import (
    CapExceededError,
    EmptyLabelSetError,
    InvalidForestError,
    InvalidPatternError,
    NoncontiguousLabelsError,
    UnknownLabelError,
)

ROOT = None
DEFAULT_CAP = 8


class AvoidanceMode(enum.Enum):
    CLASSICAL = "classical"
    CONSECUTIVE = "consecutive"


class Universe(enum.Enum):
    FOREST = "forest"
    TREE = "tree"


CLASSICAL = AvoidanceMode.CLASSICAL
CONSECUTIVE = AvoidanceMode.CONSECUTIVE
FOREST = Universe.FOREST
TREE = Universe.TREE


def standardize(seq) -> tuple:
    """Replace each entry by its rank, e.g. (5, 2, 9) -> (2, 1, 3)."""
    rank = {v: i for i, v in enumerate(sorted(seq), 1)}
    return tuple(rank[v] for v in seq)


# --------------------------------------------------------------------------
# patterns


@dataclass(frozen=True, order=True)
class Pattern:
    entries: tuple

    def __post_init__(self):
        entries = tuple(int(e) for e in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise InvalidPatternError("a pattern needs at least one entry")
        if sorted(entries) != list(range(1, len(entries) + 1)):
            raise InvalidPatternError(f"{entries!r} is not a permutation of 1..{len(entries)}")

    @classmethod
    def parse(cls, text) -> "Pattern":
        if isinstance(text, Pattern):
            return text
        if not isinstance(text, str):
            return cls(tuple(text))
        text = text.strip()
        if "," in text:
            parts = [p for p in text.split(",") if p.strip()]
        else:
            parts = list(text)
        try:
            return cls(tuple(int(p) for p in parts))
        except ValueError as exc:
            if isinstance(exc, InvalidPatternError):
                raise
            raise InvalidPatternError(f"cannot parse pattern {text!r}") from None

    @property
    def k(self) -> int:
        return len(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __str__(self):
        if self.k <= 9:
            return "".join(map(str, self.entries))
        return ",".join(map(str, self.entries))

    def __repr__(self):
        return f"Pattern({str(self)!r})"

    def complement(self) -> "Pattern":
        k = self.k
        return Pattern(tuple(k + 1 - e for e in self.entries))

    def reverse(self) -> "Pattern":
        return Pattern(self.entries[::-1])

    def matches(self, seq) -> bool:
        """True if ``seq`` is order-isomorphic to this pattern."""
        return len(seq) == self.k and standardize(seq) == self.entries


def parse_pattern_set(spec) -> frozenset:
    """Parse "12,321" (or "1,2,10,...;12" for long patterns) into a set of patterns."""
    if isinstance(spec, str):
        spec = spec.strip()
        if ";" in spec:
            items = [s for s in spec.split(";") if s.strip()]
        else:
            items = [s for s in spec.replace(" ", ",").split(",") if s]
    else:
        items = list(spec)
    if not items:
        raise InvalidPatternError("empty pattern set")
    return frozenset(Pattern.parse(s) for s in items)


def format_pattern_set(patterns) -> str:
    pats = sorted(patterns, key=lambda p: (p.k, p.entries))
    sep = ";" if any(p.k > 9 for p in pats) else ","
    return sep.join(str(p) for p in pats)


def pattern_set_complement(patterns) -> frozenset:
    return frozenset(p.complement() for p in patterns)


# --------------------------------------------------------------------------
# forests


class LabeledForest:
    """Immutable rooted labeled forest given by its parent map."""

    __slots__ = ("_parent", "_labels", "_children", "_hash")

    def __init__(self, parent: Mapping, labels: Iterable | None = None):
        par = {int(v): (None if p is None else int(p)) for v, p in parent.items()}
        labs = frozenset(par) if labels is None else frozenset(int(v) for v in labels)
        for v in labs:
            par.setdefault(v, ROOT)
        if set(par) != labs:
            raise InvalidForestError("parent map has labels outside the label set")
        for v, p in par.items():
            if v < 1:
                raise InvalidForestError(f"labels must be positive integers, got {v}")
            if p is not None and p not in labs:
                raise InvalidForestError(f"parent {p} of {v} is not a label")
        # acyclicity: every vertex must reach ROOT
        state = {}
        for v in par:
            chain = []
            u = v
            while u is not None and u not in state:
                state[u] = 1
                chain.append(u)
                u = par[u]
            if u is not None and state.get(u) == 1 and u in chain:
                raise InvalidForestError(f"cycle through label {u}")
            for w in chain:
                state[w] = 2
        self._init(par, labs)

    def _init(self, par, labs):
        self._parent = par
        self._labels = labs
        self._children = None
        self._hash = None

    @classmethod
    def _trusted(cls, par: dict) -> "LabeledForest":
        obj = cls.__new__(cls)
        obj._init(par, frozenset(par))
        return obj

    @classmethod
    def from_parent_vector(cls, vec, labels=None) -> "LabeledForest":
        """Build from a vector indexed by sorted labels; entry 0 means ROOT, i means labels[i-1]."""
        labels = sorted(labels) if labels is not None else list(range(1, len(vec) + 1))
        par = {}
        for lab, p in zip(labels, vec):
            par[lab] = None if p == 0 else labels[p - 1]
        return cls(par)

    # basic accessors
    @property
    def labels(self) -> frozenset:
        return self._labels

    @property
    def parent_map(self) -> dict:
        return dict(self._parent)

    def __len__(self):
        return len(self._labels)

    def __contains__(self, v):
        return v in self._labels

    def parent(self, v):
        try:
            return self._parent[v]
        except KeyError:
            raise UnknownLabelError(f"label {v} not in forest") from None

    def _child_map(self):
        if self._children is None:
            ch = {v: [] for v in self._parent}
            for v, p in self._parent.items():
                if p is not None:
                    ch[p].append(v)
            self._children = {v: tuple(sorted(c)) for v, c in ch.items()}
        return self._children

    def children(self, v) -> tuple:
        if v not in self._labels:
            raise UnknownLabelError(f"label {v} not in forest")
        return self._child_map()[v]

    @property
    def roots(self) -> tuple:
        return tuple(sorted(v for v, p in self._parent.items() if p is None))

    def is_tree(self) -> bool:
        return len(self.roots) == 1

    def depth(self, v) -> int:
        """Root has depth 1."""
        return len(self.root_path(v))

    def root_path(self, v) -> list:
        if v not in self._labels:
            raise UnknownLabelError(f"label {v} not in forest")
        path = []
        while v is not None:
            path.append(v)
            v = self._parent[v]
        path.reverse()
        return path

    def descendants(self, v) -> list:
        """Strict descendants of ``v`` in BFS order."""
        ch = self._child_map()
        out = []
        queue = list(ch[v])
        while queue:
            u = queue.pop(0)
            out.append(u)
            queue.extend(ch[u])
        return out

    def subtree_labels(self, v) -> frozenset:
        return frozenset([v, *self.descendants(v)])

    def is_ancestor(self, a, b) -> bool:
        """True if ``a`` is a strict ancestor of ``b``."""
        u = self._parent[b]
        while u is not None:
            if u == a:
                return True
            u = self._parent[u]
        return False

    def bfs_order(self) -> list:
        """Roots by label, then level by level with children sorted by label."""
        ch = self._child_map()
        out = []
        queue = list(self.roots)
        while queue:
            nxt = []
            for v in queue:
                out.append(v)
                nxt.extend(ch[v])
            queue = nxt
        return out

    def trees(self) -> list:
        out = []
        for r in self.roots:
            sub = [r, *self.descendants(r)]
            out.append(LabeledForest._trusted({v: self._parent[v] for v in sub}))
        return out

    def leaves(self) -> list:
        ch = self._child_map()
        return sorted(v for v in self._labels if not ch[v])

    def relabel(self, mapping: Mapping) -> "LabeledForest":
        """Apply a label bijection; the underlying structure is unchanged."""
        par = {}
        for v, p in self._parent.items():
            par[mapping.get(v, v)] = None if p is None else mapping.get(p, p)
        if len(par) != len(self._parent):
            raise InvalidForestError("relabeling is not injective")
        return LabeledForest._trusted(par)

    def root_paths(self) -> dict:
        paths = {}
        for v in self.bfs_order():
            p = self._parent[v]
            paths[v] = (v,) if p is None else paths[p] + (v,)
        return paths

    # equality / hashing
    def _key(self):
        return frozenset(self._parent.items())

    def __eq__(self, other):
        if not isinstance(other, LabeledForest):
            return NotImplemented
        return self._parent == other._parent

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        items = ", ".join(f"{v}:{self._parent[v]}" for v in sorted(self._parent))
        return f"LabeledForest({{{items}}})"

    # serialization
    def to_json(self) -> dict:
        return {
            "labels": sorted(self._labels),
            "parent": {
                str(v): (None if self._parent[v] is None else str(self._parent[v]))
                for v in sorted(self._parent)
            },
        }

    @classmethod
    def from_json(cls, obj) -> "LabeledForest":
        par = {int(k): (None if v is None else int(v)) for k, v in obj.get("parent", {}).items()}
        return cls(par, obj.get("labels"))


def root_path(F: LabeledForest, v) -> list:
    return F.root_path(v)


# --------------------------------------------------------------------------
# containment


def _prefix_patterns(sigma: Pattern):
    return [standardize(sigma.entries[:j]) for j in range(sigma.k + 1)]


def seq_contains(seq, sigma: Pattern) -> bool:
    """Naive classical containment in a sequence: try every k-subset."""
    k = sigma.k
    if len(seq) < k:
        return False
    return any(standardize(c) == sigma.entries for c in itertools.combinations(seq, k))


def seq_contains_ending_at_last(seq, sigma: Pattern) -> bool:
    """Is there an occurrence of ``sigma`` in ``seq`` whose last entry is ``seq[-1]``?"""
    k = sigma.k
    if len(seq) < k:
        return False
    last = seq[-1]
    for c in itertools.combinations(seq[:-1], k - 1):
        if standardize(c + (last,)) == sigma.entries:
            return True
    return False


def seq_contains_consecutive(seq, sigma: Pattern) -> bool:
    k = sigma.k
    return any(standardize(seq[i:i + k]) == sigma.entries for i in range(len(seq) - k + 1))


def _extends(state, x, sigma_entries):
    j = len(state)
    target = sigma_entries[j]
    for i, y in enumerate(state):
        if (y < x) != (sigma_entries[i] < target):
            return False
    return True


def contains(F: LabeledForest, sigma: Pattern, mode: AvoidanceMode = CLASSICAL) -> bool:
    """Does some root-to-vertex path of ``F`` contain ``sigma``?

    Classical mode walks each tree depth-first, carrying the set of partial
    occurrences (label tuples order-isomorphic to a prefix of ``sigma``).
    """
    sigma = Pattern.parse(sigma)
    k = sigma.k
    if mode is CONSECUTIVE:
        paths = F.root_paths()
        return any(
            len(p) >= k and standardize(p[-k:]) == sigma.entries for p in paths.values()
        )
    ent = sigma.entries
    std_ent = [standardize(ent[:j]) for j in range(k + 1)]
    ch = F._child_map()
    stack = [(r, (),) for r in F.roots]
    while stack:
        v, states = stack.pop()
        new = set(states)
        new.add(())
        grown = set()
        for s in new:
            if _extends(s, v, ent):
                t = s + (v,)
                if len(t) == k:
                    return True
                grown.add(t)
        frontier = tuple(set(states) | grown)
        for c in ch[v]:
            stack.append((c, frontier))
    return False


def contains_naive(F: LabeledForest, sigma: Pattern, mode: AvoidanceMode = CLASSICAL) -> bool:
    """Reference checker: test every root path with itertools."""
    sigma = Pattern.parse(sigma)
    test = seq_contains if mode is CLASSICAL else seq_contains_consecutive
    return any(test(p, sigma) for p in F.root_paths().values())


def avoids(F: LabeledForest, patterns, mode: AvoidanceMode = CLASSICAL) -> bool:
    if isinstance(patterns, (Pattern, str)):
        patterns = [Pattern.parse(patterns)]
    return not any(contains(F, Pattern.parse(s), mode) for s in patterns)


def consecutive_instances(F: LabeledForest, sigma: Pattern) -> list:
    """All parent chains (as label tuples, oldest first) order-isomorphic to ``sigma``."""
    sigma = Pattern.parse(sigma)
    k = sigma.k
    out = []
    for v, p in sorted(F.root_paths().items()):
        if len(p) >= k and standardize(p[-k:]) == sigma.entries:
            out.append(p[-k:])
    return out


def count_consecutive_instances(F: LabeledForest, sigma: Pattern) -> int:
    return len(consecutive_instances(F, sigma))


def complement(x):
    """Complement a pattern, or relabel a forest on {1..n} by i -> n+1-i."""
    if isinstance(x, Pattern):
        return x.complement()
    if isinstance(x, LabeledForest):
        n = len(x)
        if x.labels != frozenset(range(1, n + 1)):
            raise NoncontiguousLabelsError("forest complement needs labels exactly 1..n")
        return x.relabel({i: n + 1 - i for i in range(1, n + 1)})
    if isinstance(x, (set, frozenset)):
        return pattern_set_complement(x)
    return Pattern.parse(x).complement()


# --------------------------------------------------------------------------
# enumeration


def iter_parent_vectors(n: int, first=None) -> Iterator[tuple]:
    """All acyclic parent vectors on 1..n in lexicographic order (0 = ROOT first).

    ``first`` restricts the parent of vertex 1, which partitions the stream
    into n independent pieces (0 and 2..n).
    """
    if n == 0:
        yield ()
        return
    par = [0] * (n + 1)

    def rec(v):
        if v > n:
            yield tuple(par[1:])
            return
        if v == 1 and first is not None:
            choices = (first,)
        else:
            choices = range(n + 1)
        for p in choices:
            if p == v:
                continue
            u = p
            while u != 0 and u < v:
                u = par[u]
            if u == v:
                continue
            par[v] = p
            yield from rec(v + 1)
        par[v] = 0

    yield from rec(1)


def forest_partitions(labels) -> list:
    """Keys accepted by ``iterate_forests(..., partition=key)``."""
    labels = sorted(labels)
    if not labels:
        return [None]
    return [ROOT] + [lab for lab in labels[1:]]


def iterate_forests(labels, partition="all") -> Iterator[LabeledForest]:
    """Every forest on ``labels`` exactly once, in lexicographic parent-vector order.

    With ``partition`` set to ROOT or a label, only forests where the smallest
    label has that parent are produced.
    """
    labels = sorted(labels)
    n = len(labels)
    first = None
    if partition != "all" and n:
        first = 0 if partition is ROOT else labels.index(partition) + 1
    for vec in iter_parent_vectors(n, first):
        par = {}
        for lab, p in zip(labels, vec):
            par[lab] = None if p == 0 else labels[p - 1]
        yield LabeledForest._trusted(par)


def iterate_trees(labels) -> Iterator[LabeledForest]:
    labels = sorted(labels)
    if not labels:
        raise EmptyLabelSetError("a tree needs at least one vertex")
    for F in iterate_forests(labels):
        if sum(1 for v in labels if F._parent[v] is None) == 1:
            yield F


def _check_cap(n, cap):
    if cap is None:
        cap = DEFAULT_CAP
    if n > cap:
        raise CapExceededError(f"n={n} exceeds the enumeration cap {cap}; use a recurrence")


def _vector_paths(vec):
    n = len(vec)
    paths = [None] * (n + 1)
    paths[0] = ()
    for v in range(1, n + 1):
        if paths[v] is None:
            stack = []
            u = v
            while paths[u] is None:
                stack.append(u)
                u = vec[u - 1]
            base = paths[u]
            while stack:
                u = stack.pop()
                base = base + (u,)
                paths[u] = base
    return paths


def count_avoiding_many(n: int, sets, mode: AvoidanceMode = CLASSICAL,
                        universe: Universe = FOREST, cap=None) -> list:
    """Exhaustive avoider counts for several pattern sets in one pass over all forests."""
    _check_cap(n, cap)
    sets = [frozenset(Pattern.parse(s) for s in S) if not isinstance(S, Pattern) else frozenset([S])
            for S in sets]
    test = seq_contains if mode is CLASSICAL else (
        lambda seq, s: len(seq) >= s.k and standardize(seq[-s.k:]) == s.entries)
    full = (1 << len(sets)) - 1
    memo = {}

    def path_mask(path):
        m = memo.get(path)
        if m is None:
            m = 0
            for i, S in enumerate(sets):
                if any(test(path, s) for s in S):
                    m |= 1 << i
            memo[path] = m
        return m

    counts = [0] * len(sets)
    for vec in iter_parent_vectors(n):
        if universe is TREE and vec.count(0) != 1:
            continue
        paths = _vector_paths(vec)
        mask = 0
        for p in paths[1:]:
            mask |= path_mask(p)
            if mask == full:
                break
        if mask != full:
            for i in range(len(sets)):
                if not mask >> i & 1:
                    counts[i] += 1
    if universe is TREE and n == 0:
        return [0] * len(sets)
    return counts


def count_avoiding(n: int, S, mode: AvoidanceMode = CLASSICAL,
                   universe: Universe = FOREST, cap=None) -> int:
    """Number of forests (or trees) on [n] avoiding every pattern of ``S``."""
    if isinstance(S, (Pattern, str)):
        S = parse_pattern_set(S) if isinstance(S, str) else [S]
    return count_avoiding_many(n, [S], mode, universe, cap)[0]


def count_by_instances(n: int, sigma: Pattern, universe: Universe = FOREST, cap=None) -> dict:
    """Map m -> number of forests on [n] with exactly m consecutive instances of ``sigma``."""
    _check_cap(n, cap)
    sigma = Pattern.parse(sigma)
    k = sigma.k
    memo = {}
    out = {}
    for vec in iter_parent_vectors(n):
        if universe is TREE and vec.count(0) != 1:
            continue
        m = 0
        for p in _vector_paths(vec)[1:]:
            if len(p) >= k:
                w = p[-k:]
                hit = memo.get(w)
                if hit is None:
                    hit = memo[w] = standardize(w) == sigma.entries
                m += hit
        out[m] = out.get(m, 0) + 1
    if universe is TREE and n == 0:
        return {}
    return dict(sorted(out.items()))


def forest_shape_key(F: LabeledForest) -> str:
    """Canonical string of the unlabeled shape (AHU encoding)."""
    ch = F._child_map()

    def enc(v):
        return "(" + "".join(sorted(enc(c) for c in ch[v])) + ")"

    return "".join(sorted(enc(r) for r in F.roots))
