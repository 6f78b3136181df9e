"""Shuffle/antishuffle bijections between tau-avoiding and tau~-avoiding forests.

Here tau ends with (k-1)k, tau~ swaps those last two values, and tau-bar is
tau with its last entry dropped (so it ends with its maximum k-1).  A vertex
is special when some occurrence of tau-bar ends at it.

The bijections keep the vertices where they are and only move labels, so
internally we work with a fixed structure (vertex ids = original labels) and
a mutable vertex -> label map.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import LabeledForest, Pattern, seq_contains_ending_at_last
from .errors import InvalidPatternError, NotSpecialError


@dataclass(frozen=True)
class TauPair:
    tau: Pattern

    def __post_init__(self):
        tau = Pattern.parse(self.tau)
        object.__setattr__(self, "tau", tau)
        k = tau.k
        if k < 3 or tau[k - 2] != k - 1 or tau[k - 1] != k:
            raise InvalidPatternError("tau must have length >= 3 and end with (k-1)k")

    @property
    def k(self):
        return self.tau.k

    @property
    def tau_tilde(self) -> Pattern:
        e = self.tau.entries
        return Pattern(e[:-2] + (e[-1], e[-2]))

    @property
    def tau_bar(self) -> Pattern:
        return Pattern(self.tau.entries[:-2] + (self.k - 1,))


def _as_pair(pair):
    return pair if isinstance(pair, TauPair) else TauPair(pair)


class _Labeled:
    """Fixed forest structure with a relabelable vertex -> label map."""

    def __init__(self, F: LabeledForest):
        self.parent = {v: F.parent(v) for v in F.labels}
        self.children = {v: F.children(v) for v in F.labels}
        self.label = {v: v for v in F.labels}
        self.bfs = F.bfs_order()

    def ancestors(self, v):
        out = []
        u = self.parent[v]
        while u is not None:
            out.append(u)
            u = self.parent[u]
        out.reverse()
        return out

    def descendants(self, v):
        out = []
        queue = list(self.children[v])
        while queue:
            u = queue.pop(0)
            out.append(u)
            queue.extend(self.children[u])
        return out

    def is_special(self, v, tau_bar, own_label=None):
        lab = self.label[v] if own_label is None else own_label
        path = tuple(self.label[u] for u in self.ancestors(v)) + (lab,)
        return seq_contains_ending_at_last(path, tau_bar)

    def assign_subtree(self, v, top_label):
        """Give ``v`` the label ``top_label``; its strict descendants get the rest
        of the subtree's label set in their current relative order."""
        desc = self.descendants(v)
        pool = sorted([self.label[v]] + [self.label[u] for u in desc])
        pool.remove(top_label)
        order = sorted(desc, key=lambda u: self.label[u])
        self.label[v] = top_label
        for u, lab in zip(order, pool):
            self.label[u] = lab

    def subtree_labels(self, v):
        return [self.label[v]] + [self.label[u] for u in self.descendants(v)]

    def to_forest(self):
        par = {}
        for v, p in self.parent.items():
            par[self.label[v]] = None if p is None else self.label[p]
        return LabeledForest._trusted(par)


def special_vertices(F: LabeledForest, pair) -> set:
    pair = _as_pair(pair)
    tb = pair.tau_bar
    paths = F.root_paths()
    return {v for v, p in paths.items() if seq_contains_ending_at_last(p, tb)}


def _shuffle(S: _Labeled, v, tb):
    if not S.is_special(v, tb):
        raise NotSpecialError(f"vertex labeled {S.label[v]} is not special")
    S.assign_subtree(v, max(S.subtree_labels(v)))


def _antishuffle(S: _Labeled, v, tb):
    if not S.is_special(v, tb):
        raise NotSpecialError(f"vertex labeled {S.label[v]} is not special")
    for y in sorted(S.subtree_labels(v)):
        if S.is_special(v, tb, own_label=y):
            S.assign_subtree(v, y)
            return
    raise AssertionError("a special vertex always keeps at least its own label")


def shuffle(F: LabeledForest, v, pair) -> LabeledForest:
    """Give special vertex ``v`` the largest label of its subtree."""
    pair = _as_pair(pair)
    if v not in F:
        raise NotSpecialError(f"label {v} not in forest")
    S = _Labeled(F)
    _shuffle(S, v, pair.tau_bar)
    return S.to_forest()


def antishuffle(F: LabeledForest, v, pair) -> LabeledForest:
    """Give special vertex ``v`` the smallest subtree label that keeps it special."""
    pair = _as_pair(pair)
    if v not in F:
        raise NotSpecialError(f"label {v} not in forest")
    S = _Labeled(F)
    _antishuffle(S, v, pair.tau_bar)
    return S.to_forest()


def _run(F, pair, order, op):
    pair = _as_pair(pair)
    tb = pair.tau_bar
    S = _Labeled(F)
    special = {v for v in S.bfs if S.is_special(v, tb)}
    for v in order(S):
        now = S.is_special(v, tb)
        # labels only move inside subtrees already handled or not yet reached,
        # and the set of special vertices never changes
        assert now == (v in special), "special vertex set changed during the sweep"
        if now:
            op(S, v, tb)
    assert {v for v in S.bfs if S.is_special(v, tb)} == special
    return S.to_forest()


def alpha(F: LabeledForest, pair) -> LabeledForest:
    """Shuffle special vertices, each after all of its descendants (reverse BFS)."""
    return _run(F, pair, lambda S: reversed(S.bfs), _shuffle)


def beta(F: LabeledForest, pair) -> LabeledForest:
    """Antishuffle special vertices in BFS order; inverse of :func:`alpha`."""
    return _run(F, pair, lambda S: list(S.bfs), _antishuffle)
