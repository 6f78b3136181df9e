"""Forest-Young diagrams, transversals and the I2/J2 bijections.

A diagram puts a column of cells (rows 1..height, row 1 on top) on every
vertex of an unlabeled forest, with descendants at least as tall as their
ancestors.  A transversal places one 1 in every column and every row; it
generalizes a labeling (the label of a vertex is ``H + 1 - row``, so a high
label sits near the top).

Matrix conventions: a permutation matrix is stored column by column as the
row holding each 1.  The pattern s maps to rows ``k + 1 - s(j)``, so 21 is
I2 = (1, 2) and 12 is J2 = (2, 1).  "Older" means a strict ancestor,
"above" means a smaller row number.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .core import Pattern, standardize
from .errors import (
    InvalidDiagramError,
    NoI2InstanceError,
    NoJ2InstanceError,
    PreconditionViolatedError,
)


class ForestYoungDiagram:
    __slots__ = ("parent", "height", "_anc", "_children", "_key")

    def __init__(self, parent, height):
        self.parent = dict(parent)
        self.height = {v: int(h) for v, h in height.items()}
        if set(self.parent) != set(self.height):
            raise InvalidDiagramError("parent and height maps must cover the same vertices")
        for v, p in self.parent.items():
            if p is not None and p not in self.parent:
                raise InvalidDiagramError(f"parent {p!r} of {v!r} is not a vertex")
            if self.height[v] < 1:
                raise InvalidDiagramError(f"column {v!r} must have at least one cell")
        anc = {}
        for v in self.parent:
            chain = []
            u = self.parent[v]
            while u is not None:
                if u == v or len(chain) > len(self.parent):
                    raise InvalidDiagramError("parent map has a cycle")
                chain.append(u)
                u = self.parent[u]
            chain.reverse()
            anc[v] = tuple(chain)
        for v, p in self.parent.items():
            if p is not None and self.height[v] < self.height[p]:
                raise InvalidDiagramError(
                    f"column {v!r} is shorter than its ancestor {p!r} (not leaf-heavy)")
        self._anc = anc
        ch = {v: [] for v in self.parent}
        for v, p in self.parent.items():
            if p is not None:
                ch[p].append(v)
        self._children = {v: tuple(sorted(c, key=_sort_key)) for v, c in ch.items()}
        self._key = None

    @property
    def vertices(self):
        return sorted(self.parent, key=_sort_key)

    @property
    def n(self):
        return len(self.parent)

    @property
    def max_height(self):
        return max(self.height.values(), default=0)

    def ancestors(self, v):
        """Strict ancestors, oldest first."""
        return self._anc[v]

    def children(self, v):
        return self._children[v]

    def descendants(self, v):
        out = []
        queue = list(self._children[v])
        while queue:
            u = queue.pop(0)
            out.append(u)
            queue.extend(self._children[u])
        return out

    def is_ancestor(self, a, b):
        return a in self._anc[b]

    def has_cell(self, r, v):
        return 1 <= r <= self.height[v]

    def cells(self):
        return [(r, v) for v in self.vertices for r in range(1, self.height[v] + 1)]

    def row_length(self, r):
        return sum(1 for h in self.height.values() if h >= r)

    def canonical_key(self):
        """Isomorphism-invariant encoding of shape plus heights."""
        if self._key is None:
            def enc(v):
                return f"({self.height[v]}" + "".join(sorted(enc(c) for c in self._children[v])) + ")"
            roots = [v for v, p in self.parent.items() if p is None]
            self._key = "".join(sorted(enc(r) for r in roots))
        return self._key

    def __eq__(self, other):
        return isinstance(other, ForestYoungDiagram) and \
            self.parent == other.parent and self.height == other.height

    def __hash__(self):
        return hash((frozenset(self.parent.items()), frozenset(self.height.items())))

    def __repr__(self):
        return f"ForestYoungDiagram(parent={self.parent!r}, height={self.height!r})"

    def to_json(self):
        return {
            "parent": {str(v): (None if p is None else str(p)) for v, p in sorted(
                self.parent.items(), key=lambda kv: _sort_key(kv[0]))},
            "height": {str(v): h for v, h in sorted(self.height.items(), key=lambda kv: _sort_key(kv[0]))},
        }

    @classmethod
    def from_json(cls, obj):
        conv = _vertex_converter(obj["parent"])
        parent = {conv(v): (None if p is None else conv(p)) for v, p in obj["parent"].items()}
        height = {conv(v): int(h) for v, h in obj["height"].items()}
        return cls(parent, height)


def _sort_key(v):
    return (0, v, "") if isinstance(v, int) else (1, 0, str(v))


def _vertex_converter(keys):
    keys = list(keys)
    if all(str(k).lstrip("-").isdigit() for k in keys):
        return lambda x: int(x)
    return lambda x: x


class Transversal:
    __slots__ = ("row_of", "_hash")

    def __init__(self, row_of):
        self.row_of = dict(row_of)
        self._hash = None

    def validate(self, Y: ForestYoungDiagram):
        if set(self.row_of) != set(Y.parent):
            raise InvalidDiagramError("transversal must place a 1 in every column")
        rows = sorted(self.row_of.values())
        if rows != list(range(1, Y.max_height + 1)):
            raise InvalidDiagramError("transversal needs exactly one 1 in every nonempty row")
        for v, r in self.row_of.items():
            if not Y.has_cell(r, v):
                raise InvalidDiagramError(f"row {r} is outside column {v!r}")
        return self

    def label_of(self, v, H=None):
        if H is None:
            H = len(self.row_of)
        return H + 1 - self.row_of[v]

    def __getitem__(self, v):
        return self.row_of[v]

    def __eq__(self, other):
        return isinstance(other, Transversal) and self.row_of == other.row_of

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.row_of.items()))
        return self._hash

    def __repr__(self):
        items = ", ".join(f"{v!r}: {r}" for v, r in sorted(self.row_of.items(), key=lambda kv: _sort_key(kv[0])))
        return f"Transversal({{{items}}})"

    def to_json(self):
        return {"rowOf": {str(v): r for v, r in sorted(self.row_of.items(), key=lambda kv: _sort_key(kv[0]))}}

    @classmethod
    def from_json(cls, obj):
        conv = _vertex_converter(obj["rowOf"])
        return cls({conv(v): int(r) for v, r in obj["rowOf"].items()})


@dataclass(frozen=True)
class PermMatrix:
    rows: tuple  # rows[j] = row (1-based) of the 1 in column j+1

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if sorted(rows) != list(range(1, len(rows) + 1)):
            raise ValueError(f"{rows!r} does not describe a permutation matrix")

    @property
    def k(self):
        return len(self.rows)

    @classmethod
    def from_matrix(cls, mat):
        k = len(mat)
        rows = []
        for j in range(k):
            col = [mat[i][j] for i in range(k)]
            if sorted(col) != [0] * (k - 1) + [1]:
                raise ValueError("not a permutation matrix")
            rows.append(col.index(1) + 1)
        return cls(tuple(rows))

    @classmethod
    def from_ones(cls, cells):
        cells = sorted(cells, key=lambda rc: rc[1])
        return cls(tuple(r for r, _ in cells))

    def to_matrix(self):
        k = self.k
        mat = [[0] * k for _ in range(k)]
        for j, r in enumerate(self.rows):
            mat[r - 1][j] = 1
        return mat

    def to_pattern(self) -> Pattern:
        return Pattern(tuple(self.k + 1 - r for r in self.rows))

    def __str__(self):
        return "/".join("".join(map(str, row)) for row in self.to_matrix())


I2 = PermMatrix((1, 2))
J2 = PermMatrix((2, 1))
EMPTY = PermMatrix(())


def pattern_to_matrix(sigma) -> PermMatrix:
    sigma = Pattern.parse(sigma)
    k = sigma.k
    return PermMatrix(tuple(k + 1 - s for s in sigma.entries))


def block_matrix(C: PermMatrix, A: PermMatrix) -> PermMatrix:
    """[[0, C], [A, 0]]: A in the bottom-left corner, C in the top-right."""
    c = C.k
    return PermMatrix(tuple(c + r for r in A.rows) + C.rows)


# --------------------------------------------------------------------------
# transversals and containment


def full_square(parent, n=None) -> ForestYoungDiagram:
    """Every column of height n (the number of vertices)."""
    n = len(parent) if n is None else n
    return ForestYoungDiagram(parent, {v: n for v in parent})


def enumerate_transversals(Y: ForestYoungDiagram):
    """All transversals of ``Y`` (none unless the tallest column equals the vertex count)."""
    n = Y.n
    if Y.max_height != n:
        return
    order = sorted(Y.vertices, key=lambda v: (Y.height[v], _sort_key(v)))
    used = [False] * (n + 2)
    rows = {}

    def rec(i):
        if i == n:
            yield Transversal(dict(rows))
            return
        v = order[i]
        for r in range(1, Y.height[v] + 1):
            if not used[r]:
                used[r] = True
                rows[v] = r
                yield from rec(i + 1)
                used[r] = False
        rows.pop(v, None)

    yield from rec(0)


def enumerate_transversals_naive(Y: ForestYoungDiagram):
    """Reference enumeration: every bijection vertices -> rows, filtered."""
    verts = Y.vertices
    H = Y.max_height
    if H != len(verts):
        return
    for perm in itertools.permutations(range(1, H + 1)):
        if all(Y.has_cell(r, v) for v, r in zip(verts, perm)):
            yield Transversal(dict(zip(verts, perm)))


def matrix_instances(Y, T, M: PermMatrix, below=None, among=None):
    """Yield chains (oldest first) carrying an instance of M.

    ``below``: only use vertices whose rows are all > below.
    ``among``: only chains made of strict ancestors of this vertex.
    """
    k = M.k
    if k == 0:
        yield ()
        return
    row = T.row_of
    if among is not None:
        pools = [Y.ancestors(among)]
        ends = None
    else:
        pools = None
    if pools is not None:
        pool = [u for u in pools[0] if below is None or row[u] > below]
        for chain in itertools.combinations(pool, k):
            if _is_instance(Y, row, chain, M):
                yield chain
        return
    for v in Y.vertices:
        if below is not None and row[v] <= below:
            continue
        anc = [u for u in Y.ancestors(v) if below is None or row[u] > below]
        for pre in itertools.combinations(anc, k - 1):
            chain = pre + (v,)
            if _is_instance(Y, row, chain, M):
                yield chain


def _is_instance(Y, row, chain, M):
    rs = [row[u] for u in chain]
    if max(rs) > Y.height[chain[0]]:
        return False
    return standardize(rs) == M.rows


def transversal_contains(Y, T, M) -> bool:
    if not isinstance(M, PermMatrix):
        M = pattern_to_matrix(M)
    return next(matrix_instances(Y, T, M), None) is not None


def transversal_avoids(Y, T, matrices) -> bool:
    return not any(transversal_contains(Y, T, M) for M in matrices)


def count_avoiding_transversals(Y, matrices) -> int:
    return sum(1 for T in enumerate_transversals(Y) if transversal_avoids(Y, T, matrices))


# --------------------------------------------------------------------------
# I2 <-> J2


def _i2_pairs(Y, T):
    """(older, younger) pairs forming I2: older above, and the lower-left zero in Y."""
    row = T.row_of
    for w in Y.vertices:
        for u in Y.ancestors(w):
            if row[u] < row[w] <= Y.height[u]:
                yield u, w


def _j2_pairs(Y, T):
    """(older, younger) pairs forming J2: the older 1 is the lower one."""
    row = T.row_of
    for w in Y.vertices:
        for u in Y.ancestors(w):
            if row[u] > row[w]:
                yield u, w


def _swap(T, u, w):
    row = dict(T.row_of)
    row[u], row[w] = row[w], row[u]
    return Transversal(row)


def _phi_cells(Y, T):
    pairs = list(_i2_pairs(Y, T))
    if not pairs:
        return None
    row = T.row_of
    a2 = min({w for _, w in pairs}, key=lambda w: row[w])
    olders = [u for u, w in pairs if w == a2]
    a1 = max(olders, key=lambda u: len(Y.ancestors(u)))  # youngest on a2's root path
    return a1, a2


def phi(Y, L) -> Transversal:
    """Turn one I2 into a J2: the highest lower-1 a2 and its youngest partner a1 swap rows."""
    cells = _phi_cells(Y, L)
    if cells is None:
        raise NoI2InstanceError("transversal has no I2 instance")
    return _swap(L, *cells)


def _psi_cells(Y, T):
    pairs = list(_j2_pairs(Y, T))
    if not pairs:
        return None
    row = T.row_of
    b1 = max({u for u, _ in pairs}, key=lambda u: row[u])
    b2 = max((w for u, w in pairs if u == b1), key=lambda w: row[w])
    return b1, b2


def psi(Y, T) -> Transversal:
    """Turn one J2 into an I2: the lowest older 1 b1 and its lowest partner b2 swap rows."""
    cells = _psi_cells(Y, T)
    if cells is None:
        raise NoJ2InstanceError("transversal has no J2 instance")
    return _swap(T, *cells)


def has_i2(Y, T):
    return next(_i2_pairs(Y, T), None) is not None


def has_j2(Y, T):
    return next(_j2_pairs(Y, T), None) is not None


def i2j2_f(Y, L) -> Transversal:
    """Bijection from J2-avoiding to I2-avoiding transversals (iterate phi)."""
    if has_j2(Y, L):
        raise PreconditionViolatedError("i2j2_f needs a J2-avoiding transversal")
    prev = None
    cur = L
    while True:
        cells = _phi_cells(Y, cur)
        if cells is None:
            return cur
        a1, a2 = cells
        if prev is not None:
            # the lower 1 moves strictly down, or stays in its row and gets older
            pr, pv = prev
            r = cur.row_of[a2]
            assert r > pr or (r == pr and Y.is_ancestor(a2, pv)), "phi iteration did not progress"
        prev = (cur.row_of[a2], a2)
        cur = _swap(cur, a1, a2)


def i2j2_g(Y, T) -> Transversal:
    """Inverse of :func:`i2j2_f` (iterate psi)."""
    if has_i2(Y, T):
        raise PreconditionViolatedError("i2j2_g needs an I2-avoiding transversal")
    cur = T
    limit = (Y.n + 1) ** 3
    for _ in range(limit):
        cells = _psi_cells(Y, cur)
        if cells is None:
            return cur
        cur = _swap(cur, *cells)
    raise AssertionError("psi iteration did not terminate")


# --------------------------------------------------------------------------
# (A, L)-coloring and the block bijection


@dataclass
class Coloring:
    white: frozenset          # final white cells (r, v) of Y
    step1_white: frozenset    # white cells after the first step
    diagram: ForestYoungDiagram
    transversal: Transversal
    row_map: dict             # sub-diagram row -> row of Y
    vertices: tuple           # vertices of the sub-diagram (same ids as in Y)
    colors: dict = field(repr=False, default_factory=dict)


def _white_bound(Y, L, A):
    """mu(v): cell (r, v) is white after step 1 exactly when r < mu(v)."""
    row = L.row_of
    mu = {}
    for v in Y.vertices:
        best = 0
        for M in A:
            if M.k == 0:
                best = float("inf")
                break
            for chain in matrix_instances(Y, L, M, among=v):
                best = max(best, min(row[u] for u in chain))
        mu[v] = best
    return mu


def coloring(Y, L, A):
    """Color cells white/blue and extract the white sub-diagram and sub-transversal."""
    A = list(A)
    row = L.row_of
    mu = _white_bound(Y, L, A)
    step1 = frozenset((r, v) for v in Y.vertices for r in range(1, Y.height[v] + 1) if r < mu[v])
    keep_v = [v for v in Y.vertices if row[v] < mu[v]]
    keep_rows = sorted(row[v] for v in keep_v)
    kept_row_set = set(keep_rows)
    white = frozenset((r, v) for (r, v) in step1 if v in set(keep_v) and r in kept_row_set)
    new_index = {r: i for i, r in enumerate(keep_rows, 1)}
    kv = set(keep_v)
    parent = {}
    height = {}
    for v in keep_v:
        p = None
        for u in reversed(Y.ancestors(v)):
            if u in kv:
                p = u
                break
        parent[v] = p
        height[v] = sum(1 for r in keep_rows if r < mu[v] and r <= Y.height[v])
    Z = ForestYoungDiagram(parent, height)
    LA = Transversal({v: new_index[row[v]] for v in keep_v})
    colors = {c: ("white" if c in white else "blue") for c in Y.cells()}
    return Coloring(white, step1, Z, LA, {i: r for r, i in new_index.items()}, tuple(keep_v), colors)


def blocks_bijection(Y, L, C, D, A, base) -> Transversal:
    """Map transversals avoiding every [[0,C],[A_i,0]] to ones avoiding every [[0,D],[A_i,0]].

    ``base(Z, T)`` must be a bijection from C-avoiding to D-avoiding
    transversals of any diagram Z; it is applied to the white sub-diagram.
    """
    A = list(A)
    src = [block_matrix(C, Ai) for Ai in A]
    if not transversal_avoids(Y, L, src):
        raise PreconditionViolatedError("input contains one of the source block matrices")
    col = coloring(Y, L, A)
    if col.diagram.n:
        new_sub = base(col.diagram, col.transversal)
    else:
        new_sub = col.transversal
    row = dict(L.row_of)
    for v in col.vertices:
        row[v] = col.row_map[new_sub.row_of[v]]
    return Transversal(row)


@lru_cache(maxsize=100_000)
def _cached_f(Z, T):
    return i2j2_f(Z, T)


@lru_cache(maxsize=100_000)
def _cached_g(Z, T):
    return i2j2_g(Z, T)


def _pair_prefixes(pairs):
    A = []
    for pair in pairs:
        tau, tau_t = (pair if isinstance(pair, (tuple, list)) else (pair, None))
        tau = Pattern.parse(tau)
        k = tau.k
        if k < 2 or tau[k - 2] != k - 1 or tau[k - 1] != k:
            raise PreconditionViolatedError(f"{tau} does not end with (k-1)k")
        if tau_t is not None:
            tt = Pattern.parse(tau_t)
            if tt.entries != tau.entries[:-2] + (k, k - 1):
                raise PreconditionViolatedError(f"{tt} is not {tau} with its last two values swapped")
        A.append(pattern_to_matrix(standardize(tau.entries[:-2])) if k > 2 else EMPTY)
    return A


def pair_matrices(pairs):
    """(matrices of the tau_i, matrices of the tau~_i)."""
    A = _pair_prefixes(pairs)
    return [block_matrix(J2, a) for a in A], [block_matrix(I2, a) for a in A]


def fswe_bijection(Y, L, pairs) -> Transversal:
    """From transversals avoiding all tau_i to ones avoiding all tau~_i."""
    A = _pair_prefixes(pairs)
    return blocks_bijection(Y, L, J2, I2, A, _cached_f)


def fswe_inverse(Y, T, pairs) -> Transversal:
    A = _pair_prefixes(pairs)
    return blocks_bijection(Y, T, I2, J2, A, _cached_g)


# --------------------------------------------------------------------------
# exhaustive diagram generation


def _forest_shapes(n):
    """One parent map (vertices 1..n) per unlabeled forest shape on n vertices."""
    from .core import iterate_forests, forest_shape_key
    seen = {}
    for F in iterate_forests(range(1, n + 1)):
        key = forest_shape_key(F)
        if key not in seen:
            seen[key] = F.parent_map
    return [seen[k] for k in sorted(seen)]


def iterate_diagrams(n, max_height=None):
    """Every forest-Young diagram on n vertices with heights <= max_height, up to isomorphism."""
    max_height = n if max_height is None else max_height
    seen = set()
    for parent in _forest_shapes(n):
        verts = sorted(parent)
        # heights assigned parents-first so the leaf-heavy rule can prune
        order = []
        depth = {}
        for v in verts:
            d, u = 0, parent[v]
            while u is not None:
                d += 1
                u = parent[u]
            depth[v] = d
        order = sorted(verts, key=lambda v: (depth[v], v))
        height = {}

        def rec(i):
            if i == len(order):
                Y = ForestYoungDiagram(parent, dict(height))
                key = Y.canonical_key()
                if key not in seen:
                    seen.add(key)
                    yield Y
                return
            v = order[i]
            lo = 1 if parent[v] is None else height[parent[v]]
            for h in range(lo, max_height + 1):
                height[v] = h
                yield from rec(i + 1)
            height.pop(v, None)

        yield from rec(0)
