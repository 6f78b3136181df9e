"""Verification campaigns: each runs a family of exhaustive checks and reports per property."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from . import bijections, clusters, recurrences, twigs, young
from .core import (
    CLASSICAL,
    FOREST,
    TREE,
    Pattern,
    avoids,
    count_avoiding_many,
    count_by_instances,
    forest_shape_key,
    iterate_forests,
    parse_pattern_set,
)
from .errors import UnknownCampaignError, UnsupportedSetError


@dataclass
class Check:
    name: str
    passed: bool
    witness: object = None

    def line(self):
        s = f"{'PASS' if self.passed else 'FAIL'}  {self.name}"
        if not self.passed and self.witness is not None:
            s += f"  witness: {self.witness}"
        return s


@dataclass
class Report:
    campaign: str
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def add(self, name, passed, witness=None):
        self.checks.append(Check(name, bool(passed), witness))

    def render(self):
        lines = [c.line() for c in self.checks]
        lines.append(f"{self.campaign}: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


# --------------------------------------------------------------------------


def west_bijection_report(tau, max_n: int) -> Report:
    pair = bijections.TauPair(tau)
    t, tt = pair.tau, pair.tau_tilde
    rep = Report(f"westbijection tau={t}")
    for n in range(0, max_n + 1):
        labels = range(1, n + 1)
        src = [F for F in iterate_forests(labels) if avoids(F, [tt])]
        dst = {F for F in iterate_forests(labels) if avoids(F, [t])}
        bad_rt = bad_av = None
        images = set()
        for F in src:
            G = bijections.alpha(F, pair)
            images.add(G)
            if bad_av is None and not avoids(G, [t]):
                bad_av = F.to_json()
            if bad_rt is None and bijections.beta(G, pair) != F:
                bad_rt = F.to_json()
        rep.add(f"n={n} beta(alpha(F)) = F on avoiders of {tt}", bad_rt is None, bad_rt)
        rep.add(f"n={n} alpha images avoid {t}", bad_av is None, bad_av)
        bad_rt = bad_av = None
        for F in dst:
            G = bijections.beta(F, pair)
            if bad_av is None and not avoids(G, [tt]):
                bad_av = F.to_json()
            if bad_rt is None and bijections.alpha(G, pair) != F:
                bad_rt = F.to_json()
        rep.add(f"n={n} alpha(beta(F)) = F on avoiders of {t}", bad_rt is None, bad_rt)
        rep.add(f"n={n} beta images avoid {tt}", bad_av is None, bad_av)
        rep.add(f"n={n} alpha is onto the avoiders of {t}", images == dst)
        a = Counter(forest_shape_key(F) for F in src)
        b = Counter(forest_shape_key(F) for F in dst)
        diff = next((k for k in set(a) | set(b) if a[k] != b[k]), None)
        rep.add(f"n={n} per-shape labeling counts agree", diff is None, diff)
    return rep


def forest_wilf_inequality_report(sigmas, tau, max_n: int) -> Report:
    """alpha restricted to avoiders of {sigma, tau~} lands in avoiders of {sigma, tau}."""
    pair = bijections.TauPair(tau)
    t, tt = pair.tau, pair.tau_tilde
    rep = Report(f"forest-wilf-inequality tau={t}")
    for s in sigmas:
        s = Pattern.parse(s)
        for n in range(0, max_n + 1):
            lo, hi = count_avoiding_many(n, [[s, tt], [s, t]])
            bad = None
            for F in iterate_forests(range(1, n + 1)):
                if avoids(F, [s, tt]) and not avoids(bijections.alpha(F, pair), [s]):
                    bad = F.to_json()
                    break
            rep.add(f"sigma={s} n={n} f({s},{tt})={lo} <= f({s},{t})={hi}", lo <= hi and bad is None, bad)
    return rep


def recurrences_report(max_n: int, sets=None) -> Report:
    if sets is None:
        sets = [",".join(sorted(s)) for s in recurrences.REGISTRY]
        sets += ["321", "4321", "12,321", "12,4321", "123", "1234"]
    rep = Report("recurrences")
    parsed = [parse_pattern_set(s) for s in sets]
    for n in range(0, max_n + 1):
        brute_f = count_avoiding_many(n, parsed, CLASSICAL, FOREST)
        brute_t = count_avoiding_many(n, parsed, CLASSICAL, TREE)
        for s, P, bf, bt in zip(sets, parsed, brute_f, brute_t):
            rf = recurrences.count_by_recurrence(P, n, "forest")
            rep.add(f"{{{s}}} n={n} forests recurrence={rf} brute={bf}", rf == bf)
            try:
                rt = recurrences.count_by_recurrence(P, n, "tree")
            except UnsupportedSetError:
                continue
            rep.add(f"{{{s}}} n={n} trees recurrence={rt} brute={bt}", rt == bt)
    return rep


def shapewilf_report(max_vertices=5, max_height=5, pair_vertices=4) -> Report:
    rep = Report("shapewilf")
    I2, J2 = young.I2, young.J2
    n_diag = 0
    bad_size = bad_rt = None
    for n in range(1, max_vertices + 1):
        for Y in young.iterate_diagrams(n, max_height):
            n_diag += 1
            a = young.count_avoiding_transversals(Y, [I2])
            b = young.count_avoiding_transversals(Y, [J2])
            if a != b and bad_size is None:
                bad_size = (Y.to_json(), a, b)
            for L in young.enumerate_transversals(Y):
                if young.transversal_avoids(Y, L, [J2]):
                    T = young.i2j2_f(Y, L)
                    ok = young.transversal_avoids(Y, T, [I2]) and young.i2j2_g(Y, T) == L
                    if not ok and bad_rt is None:
                        bad_rt = (Y.to_json(), L.to_json())
    rep.add(f"|S_Y(I2)| = |S_Y(J2)| on {n_diag} diagrams", bad_size is None, bad_size)
    rep.add("f/g round trips on every transversal", bad_rt is None, bad_rt)
    for pairs in ([("123", "132")], [("123", "132"), ("1234", "1243")]):
        src, dst = young.pair_matrices(pairs)
        bad = None
        for n in range(1, pair_vertices + 1):
            for Y in young.iterate_diagrams(n, None):
                A = [L for L in young.enumerate_transversals(Y) if young.transversal_avoids(Y, L, src)]
                B = {L for L in young.enumerate_transversals(Y) if young.transversal_avoids(Y, L, dst)}
                imgs = {young.fswe_bijection(Y, L, pairs) for L in A}
                rt = all(young.fswe_inverse(Y, young.fswe_bijection(Y, L, pairs), pairs) == L for L in A)
                if (len(A) != len(B) or imgs != B or not rt) and bad is None:
                    bad = (Y.to_json(), len(A), len(B))
        rep.add(f"class sizes and bijection for {pairs}", bad is None, bad)
    return rep


def clusters_1324_1423_report(max_n=7, counts_n=6) -> Report:
    rep = Report("clusters-1324-1423")
    tabs = clusters.cluster_tables(4, max_n, ["1324", "1423"])
    a, b = tabs[Pattern.parse("1324")], tabs[Pattern.parse("1423")]
    v = clusters.compare_tables(a, b)
    rep.add(f"r(1324) = r(1423) entrywise for n <= {max_n}: {v}", v.equal, v.witness)
    for n in range(0, counts_n + 1):
        x = count_by_instances(n, "1324")
        y = count_by_instances(n, "1423")
        rep.add(f"n={n} forests by number of 1324 vs 1423 instances", x == y, (x, y))
        via = {m: clusters.counts_from_clusters(a, n, m).f for m in x}
        rep.add(f"n={n} cluster method reproduces the exhaustive distribution", via == x, (via, x))
    for s, tab in (("1324", a), ("1423", b)):
        c = twigs.cluster_recurrence_check(s, max_n, table=tab)
        rep.add(f"nice-tree recurrence gives r({s}) for n <= {max_n}", c.passed, c.mismatches[:3])
    return rep


def gamma_report(max_n=7, ab_n=7) -> Report:
    rep = Report("gamma")
    for n in range(2, max_n + 1):
        bad_inv = bad_eq = None
        count = 0
        for W in twigs.iterate_proper_twig_collections(range(1, n + 1)):
            count += 1
            g = twigs.gamma(W)
            if bad_inv is None and (twigs.gamma(g) != W or not g.is_proper() or g.labels != W.labels):
                bad_inv = W.to_json()
            f1 = twigs.count_constructions(W, "1423", "brute")
            f2 = twigs.count_constructions(g, "1324", "brute")
            f3 = twigs.count_constructions(W, "1423")
            f4 = twigs.count_constructions(g, "1324")
            if bad_eq is None and not (f1 == f2 == f3 == f4):
                bad_eq = (W.to_json(), f1, f2, f3, f4)
        rep.add(f"n={n} gamma is an involution on {count} proper collections", bad_inv is None, bad_inv)
        rep.add(f"n={n} F/T(1423; W) = F/T(1324; gamma W) and product formulas", bad_eq is None, bad_eq)
    A1, A2 = twigs.A_table("1423", ab_n), twigs.A_table("1324", ab_n)
    rep.add(f"A(1423) = A(1324) for n <= {ab_n}", A1 == A2)
    B1, B2 = twigs.B_from_A(A1, ab_n), twigs.B_from_A(A2, ab_n)
    rep.add(f"B(1423) = B(1324) for n <= {ab_n}", B1 == B2)
    Bb = twigs.B_table_brute("1423", ab_n)
    rep.add("B from the inversion formula matches direct enumeration", B1 == Bb)
    return rep


def extranice_report(max_n2=8, closed_n2=12, g_n=6, nice_n=7) -> Report:
    from .core import iterate_trees

    rep = Report("extranice")
    closed = [twigs.extranice_count(n2) for n2 in range(2, closed_n2 + 1, 2)]
    tan = twigs.tangent_series_counts(closed_n2)
    rep.add(f"closed form = tangent series through n={closed_n2}: {closed}", closed == tan)
    rec = twigs.extranice_by_recurrence(closed_n2)[2::2]
    rep.add("closed form = tree/forest recurrence", closed == rec)
    for n2 in range(2, max_n2 + 1, 2):
        b = [twigs.count_extranice_brute(n2, s) for s in ("1423", "1324", "1234")]
        rep.add(f"n={n2} brute force {b} = {twigs.extranice_count(n2)}", set(b) == {twigs.extranice_count(n2)})
    for n in range(1, nice_n + 1):
        row = {}
        for s in ("1234", "1423", "1324"):
            row[s] = tuple(twigs.count_nice(n, s, u, e) for u in ("tree", "forest") for e in (False, True))
        rep.add(f"n={n} nice/extranice tree and forest counts agree across 1234, 1423, 1324",
                len(set(row.values())) == 1, row)
    for n in range(1, g_n + 1):
        bad = None
        for T in iterate_trees(range(1, n + 1)):
            G = twigs.G_map(T)
            if twigs.G_map(G) != T or twigs.is_nice(T, "1423") != twigs.is_nice(G, "1234"):
                bad = T.to_json()
                break
        rep.add(f"n={n} G is an involution swapping 1423-nice and 1234-nice trees", bad is None, bad)
    return rep


CAMPAIGNS = ("westbijection", "shapewilf", "clusters-1324-1423", "gamma", "extranice", "recurrences")


def run_campaign(name, **kw) -> Report:
    if name == "westbijection":
        return west_bijection_report(kw.get("tau") or "1234", kw.get("max_n") or 6)
    if name == "shapewilf":
        return shapewilf_report(kw.get("max_n") or 5, kw.get("max_height") or 5)
    if name == "clusters-1324-1423":
        n = kw.get("max_n") or 7
        return clusters_1324_1423_report(n, min(n, 6))
    if name == "gamma":
        n = kw.get("max_n") or 7
        return gamma_report(n, n)
    if name == "extranice":
        return extranice_report(kw.get("max_n") or 8)
    if name == "recurrences":
        return recurrences_report(kw.get("max_n") or 7)
    raise UnknownCampaignError(f"unknown campaign {name!r}; choose from {', '.join(CAMPAIGNS)}")
