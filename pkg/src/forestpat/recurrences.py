"""Counting recurrences for forests avoiding small pattern sets.

Everything here is exact integer arithmetic with memoization; the
exhaustive counters in :mod:`forestpat.core` are the reference these are
tested against.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial

from .core import Pattern, parse_pattern_set, pattern_set_complement
from .errors import InsufficientSequenceError, UnsupportedSetError


class CountMemo(dict):
    """Memo table for one recurrence family, keyed by the parameter tuple."""

    def __init__(self, family):
        super().__init__()
        self.family = family


def forest_from_tree(tree_count, n: int, pots: int = 1, memo=None) -> int:
    """Count potted forests from a tree counter.

    F(0) = 1 and F(n) = pots * sum_{i=1..n} C(n-1, i-1) F(n-i) T(i):
    the tree holding the smallest label has i vertices and sits in one of
    the pots.
    """
    if memo is None:
        memo = {}
    for j in range(n + 1):
        if j in memo:
            continue
        if j == 0:
            memo[0] = 1
            continue
        memo[j] = pots * sum(comb(j - 1, i - 1) * memo[j - i] * tree_count(i)
                             for i in range(1, j + 1))
    return memo[n]


def _key(spec):
    pats = parse_pattern_set(spec) if isinstance(spec, str) else (Pattern.parse(p) for p in spec)
    return frozenset(str(p) for p in pats)


# --------------------------------------------------------------------------
# families built from a root-splitting tree recurrence


class _RootSplit:
    """Tree counts from a rule giving T(n) as a sum over the root label i.

    ``rule(i, n, F)`` returns the number of trees on [n] with root i, where
    ``F(size, pots)`` counts potted forests of the same family.
    """

    def __init__(self, name, rule):
        self.name = name
        self.rule = rule
        self._T = {}
        self._F = {}

    def T(self, n):
        if n <= 0:
            return 0
        if n not in self._T:
            self._T[n] = sum(self.rule(i, n, self.F) for i in range(1, n + 1))
        return self._T[n]

    def F(self, n, pots=1):
        memo = self._F.setdefault(pots, {})
        if n in memo:
            return memo[n]
        return forest_from_tree(self.T, n, pots, memo)


def _rule_213_231(i, n, F):
    return F(i - 1) * F(n - i)


def _rule_213(i, n, F):
    return F(n - i) * F(i - 1, n - i + 1)


def _rule_213_123(i, n, F):
    return factorial(n - i) * F(i - 1, n - i + 1)


def _rule_213_123_132(i, n, F):
    return F(i - 1, n - i + 1)


def _rule_213_231_123(i, n, F):
    return F(i - 1) * factorial(n - i)


class _Family213_321:
    """Avoiders of {213, 321}, tracked by r = number of vertices whose root path is increasing."""

    name = "213,321"

    def __init__(self):
        self._T = {}
        self._F = {}

    def T(self, n, r):
        # trees on [n] with exactly r vertices having an increasing root path
        if n <= 0 or r <= 0 or r > n:
            return 0
        key = (n, r)
        if key not in self._T:
            total = 0
            for i in range(1, n + 1):
                inc = factorial(r + i - 2) // factorial(r - 1)
                total += self.F(n - i, 1, r - 1) * inc
            self._T[key] = total
        return self._T[key]

    def F(self, n, m, r):
        if n == 0:
            return 1 if r == 0 else 0
        if r < 0 or r > n:
            return 0
        key = (n, m, r)
        if key not in self._F:
            total = 0
            for i in range(1, n + 1):
                c = comb(n - 1, i - 1)
                for ell in range(1, min(i, r) + 1):
                    t = self.T(i, ell)
                    if t:
                        total += c * t * self.F(n - i, m, r - ell)
            self._F[key] = m * total
        return self._F[key]

    def forests(self, n):
        return sum(self.F(n, 1, r) for r in range(n + 1))

    def trees(self, n):
        return sum(self.T(n, r) for r in range(n + 1))


def _registry():
    fams = {
        frozenset({"213", "231"}): _RootSplit("213,231", _rule_213_231),
        frozenset({"213"}): _RootSplit("213", _rule_213),
        frozenset({"213", "123"}): _RootSplit("123,213", _rule_213_123),
        frozenset({"213", "132"}): _RootSplit("132,213", _rule_213_123),
        frozenset({"213", "123", "132"}): _RootSplit("123,132,213", _rule_213_123_132),
        frozenset({"213", "231", "123"}): _RootSplit("123,213,231", _rule_213_231_123),
        frozenset({"213", "231", "132"}): _RootSplit("132,213,231", _rule_213_231_123),
        frozenset({"213", "321"}): _Family213_321(),
    }
    return fams


_FAMILIES = _registry()
REGISTRY = tuple(sorted(_FAMILIES, key=lambda s: (len(s), sorted(s))))


def _resolve(S):
    key = _key(S)
    if key in _FAMILIES:
        return _FAMILIES[key]
    ckey = frozenset(str(p) for p in pattern_set_complement(Pattern.parse(s) for s in key))
    if ckey in _FAMILIES:
        return _FAMILIES[ckey]
    raise UnsupportedSetError(f"no recurrence registered for {{{','.join(sorted(key))}}}")


def is_registered(S) -> bool:
    try:
        _resolve(S)
    except UnsupportedSetError:
        return False
    return True


def rec_count(S, n: int, universe="forest") -> int:
    """f_n(S) (or t_n(S) with ``universe="tree"``) for a registered set or its complement."""
    fam = _resolve(S)
    tree = str(getattr(universe, "value", universe)) == "tree"
    if isinstance(fam, _Family213_321):
        return fam.trees(n) if tree else fam.forests(n)
    return fam.T(n) if tree else fam.F(n)


# --------------------------------------------------------------------------
# decreasing patterns k(k-1)...1


def _normalize(n, a):
    """Canonical parameters: a_1 >= 1, strictly increasing, capped at n."""
    out = []
    prev = 0
    for x in a:
        x = max(x, prev + 1)
        x = min(x, n)
        out.append(x)
        prev = x
    return tuple(out)


def _region_choices(n, bounds):
    """Region sizes [2, a_1], (a_1, a_2], ..., (a_last, n] for given increasing bounds."""
    sizes = []
    prev = 1
    for b in bounds:
        sizes.append(max(b - prev, 0))
        prev = max(prev, b)
    sizes.append(max(n - prev, 0))
    return sizes


def _compositions(sizes):
    """All (b_1, ..., b_r) with 0 <= b_j <= sizes[j], with the binomial weight."""
    out = [((), 1)]
    for s in sizes:
        out = [(bs + (b,), w * comb(s, b)) for bs, w in out for b in range(s + 1)]
    return out


class DescendingFull:
    """F(n, a_1..a_{k-1}): forests on [n] where every instance of j(j-1)...1
    (2 <= j <= k) starts at a label greater than a_{j-1}."""

    def __init__(self, k):
        self.k = k
        self._F = {}
        self._T = {}

    def F(self, n, a):
        a = _normalize(n, a) if n else tuple(a)
        if n == 0:
            return 1
        key = (n, a)
        if key in self._F:
            return self._F[key]
        total = 0
        for bs, w in _compositions(_region_choices(n, a)):
            size = 1 + sum(bs)
            tparams = []
            fparams = []
            acc = 0
            for j, bound in enumerate(a):
                acc += bs[j]
                tparams.append(1 + acc)
                fparams.append(bound - 1 - acc)
            total += w * self.T(size, tuple(tparams)) * self.F(n - size, tuple(fparams))
        self._F[key] = total
        return total

    def T(self, n, a):
        if n == 0:
            return 0
        a = _normalize(n, a)
        key = (n, a)
        if key in self._T:
            return self._T[key]
        total = 0
        for m in range(1, n + 1):
            if m <= a[0]:
                if m == 1:
                    total += self.F(n - 1, tuple(x - 1 for x in a))
                continue
            # a_i < m <= a_{i+1}; with a_k taken as +infinity
            i = max(j for j in range(len(a)) if a[j] < m) + 1
            new = []
            for j, x in enumerate(a, 1):
                if j < i:
                    new.append(x)
                elif j == i:
                    new.append(m - 1)
                else:
                    new.append(x - 1)
            total += self.F(n - 1, tuple(new))
        self._T[key] = total
        return total


class DescendingReduced:
    """F'(n, a_1..a_{k-2}) = F(n, a_1..a_{k-2}, n): the last constraint is full avoidance."""

    def __init__(self, k):
        self.k = k
        self._F = {}
        self._T = {}

    def F(self, n, a=()):
        if n == 0:
            return 1
        a = _normalize(n, a)
        key = (n, a)
        if key in self._F:
            return self._F[key]
        total = 0
        for bs, w in _compositions(_region_choices(n, a)):
            size = 1 + sum(bs)
            tparams = []
            fparams = []
            acc = 0
            for j, bound in enumerate(a):
                acc += bs[j]
                tparams.append(1 + acc)
                fparams.append(bound - 1 - acc)
            total += w * self.T(size, tuple(tparams)) * self.F(n - size, tuple(fparams))
        self._F[key] = total
        return total

    def T(self, n, a=()):
        if n == 0:
            return 0
        a = _normalize(n, a)
        key = (n, a)
        if key in self._T:
            return self._T[key]
        total = 0
        bounds = a + (n,)
        for m in range(1, n + 1):
            if m <= bounds[0]:
                if m == 1:
                    total += self.F(n - 1, tuple(x - 1 for x in a))
                continue
            i = max(j for j in range(len(bounds)) if bounds[j] < m) + 1
            new = []
            for j, x in enumerate(a, 1):
                if j < i:
                    new.append(x)
                elif j == i:
                    new.append(m - 1)
                else:
                    new.append(x - 1)
            total += self.F(n - 1, tuple(new))
        self._T[key] = total
        return total


@lru_cache(maxsize=None)
def _reduced(k):
    return DescendingReduced(k)


@lru_cache(maxsize=None)
def _full(k):
    return DescendingFull(k)


def descending_count(k: int, n: int, universe="forest") -> int:
    """Number of forests on [n] avoiding k(k-1)...1."""
    if k < 1:
        raise ValueError("k must be positive")
    if k == 1:
        return 1 if n == 0 else 0
    sys = _reduced(k)
    params = (0,) * (k - 2)
    if str(getattr(universe, "value", universe)) == "tree":
        return sys.T(n, params)
    return sys.F(n, params)


def descending_full_count(k: int, n: int, a=None) -> int:
    """Same count through the full (k-1)-parameter system, F(n, 0, ..., 0, n)."""
    sys = _full(k)
    if a is None:
        a = (0,) * (k - 2) + (n,)
    return sys.F(n, tuple(a))


def descending_reduced(k: int, n: int, a) -> int:
    return _reduced(k).F(n, tuple(a))


def descending_reduced_tree(k: int, n: int, a) -> int:
    return _reduced(k).T(n, tuple(a))


# --------------------------------------------------------------------------
# Bell transform


@dataclass(frozen=True)
class BellTriangle:
    source: tuple
    rows: tuple  # rows[n][m] for 0 <= m <= n

    def row_sums(self) -> list:
        return [sum(r) for r in self.rows]

    def __getitem__(self, nm):
        n, m = nm
        if m < 0 or m > n:
            return 0
        return self.rows[n][m]


def bell_transform(a, rows: int) -> BellTriangle:
    """The triangle D(n, m), 0 <= m <= n < rows, of the sequence ``a``."""
    a = tuple(int(x) for x in a)
    if len(a) < rows:
        raise InsufficientSequenceError(f"need {rows} terms, got {len(a)}")
    D = [[0] * (n + 1) for n in range(rows)]
    if rows:
        D[0][0] = 1
    for n in range(1, rows):
        D[n][1] = a[n - 1]
        for m in range(2, n + 1):
            D[n][m] = sum(comb(n - 1, j - 1) * D[n - j][m - 1] * D[j][1]
                          for j in range(1, n - m + 2))
    return BellTriangle(a, tuple(tuple(r) for r in D))


def higher_order_bell_sequence(order: int, n_terms: int) -> list:
    """S_order(0..n_terms-1), with S_0 all ones and S_{i+1} the row sums of the transform of S_i."""
    length = n_terms + order
    seq = [1] * length
    for _ in range(order):
        seq = bell_transform(seq, length).row_sums()
    return seq[:n_terms]


def higher_order_bell(order: int, n: int) -> int:
    return higher_order_bell_sequence(order, n + 1)[n]


# --------------------------------------------------------------------------
# dispatcher


def _descending_k(p: Pattern):
    if p.entries == tuple(range(p.k, 0, -1)):
        return p.k
    return None


def count_by_recurrence(S, n: int, universe="forest") -> int:
    """Route a pattern set to whichever recurrence covers it.

    Covered: registered sets and complements, {k...1} and {1...k},
    {12, k...1} and {21, 1...k}.
    """
    pats = parse_pattern_set(S) if isinstance(S, str) else frozenset(Pattern.parse(p) for p in S)
    tree = str(getattr(universe, "value", universe)) == "tree"
    if is_registered(pats):
        return rec_count(pats, n, universe)
    for cand in (pats, pattern_set_complement(pats)):
        if len(cand) == 1:
            (p,) = cand
            k = _descending_k(p)
            if k is not None:
                return descending_count(k, n, universe)
        if len(cand) == 2 and Pattern((1, 2)) in cand:
            (other,) = [p for p in cand if p != Pattern((1, 2))]
            k = _descending_k(other)
            if k is not None and k >= 2 and not tree:
                return higher_order_bell(k - 2, n)
    raise UnsupportedSetError(f"no recurrence covers {{{','.join(sorted(map(str, pats)))}}}")
