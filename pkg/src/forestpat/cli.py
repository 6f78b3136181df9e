"""forestpat command line.

Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 cap or resource problem.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import bijections, campaigns, clusters, recurrences, twigs, young
from .core import (
    CLASSICAL,
    CONSECUTIVE,
    FOREST,
    TREE,
    LabeledForest,
    Pattern,
    avoids,
    count_avoiding,
    format_pattern_set,
    parse_pattern_set,
)
from .errors import CapExceededError, ForestPatError, PreconditionViolatedError, UsageError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
CACHE_ENV = "FORESTPAT_CACHE"


@dataclass
class RunConfig:
    caps: dict = field(default_factory=lambda: {"forest": 8, "cluster": None})
    workers: int = 1
    cache_dir: Path | None = None
    fmt: str = "table"

    def __post_init__(self):
        for k, v in self.caps.items():
            if v is not None and v < 0:
                raise ValueError(f"cap {k} must be >= 0")
        if self.workers < 1:
            raise ValueError("worker count must be >= 1")

    def resolved_cache_dir(self) -> Path:
        if self.cache_dir is not None:
            return Path(self.cache_dir)
        if os.environ.get(CACHE_ENV):
            return Path(os.environ[CACHE_ENV])
        base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
        return Path(base) / "forestpat"


# --------------------------------------------------------------------------
# sequence records and the cache


@dataclass
class SequenceRecord:
    family: str
    params: str
    values: list          # [(n, value)], n strictly increasing
    provenance: str       # oracle | recurrence | closed-form
    timestamp: float = 0.0

    def __post_init__(self):
        self.values = [(int(n), int(v)) for n, v in self.values]
        ns = [n for n, _ in self.values]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("n must be strictly increasing")
        if self.provenance not in ("oracle", "recurrence", "closed-form"):
            raise ValueError(f"bad provenance {self.provenance!r}")

    def to_json(self):
        # values as strings keep big integers exact for any JSON reader
        return {"family": self.family, "params": self.params,
                "values": [[n, str(v)] for n, v in self.values],
                "provenance": self.provenance, "timestamp": self.timestamp}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["family"], obj["params"], [(n, int(v)) for n, v in obj["values"]],
                   obj["provenance"], obj.get("timestamp", 0.0))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["family", "params", "n", "value", "provenance"])
        for n, v in self.values:
            w.writerow([self.family, self.params, n, v, self.provenance])
        return buf.getvalue()

    def to_json_map(self) -> str:
        obj = {"family": self.family, "params": self.params, "provenance": self.provenance,
               "values": {str(n): v for n, v in self.values}}
        return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cache_key(family, params, caps) -> str:
    blob = json.dumps({"family": family, "params": params, "caps": caps}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:24]


def atomic_write(path: Path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=path.suffix)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_reference(name):
    text = resources.files("forestpat").joinpath("data/reference.json").read_text()
    refs = json.loads(text)
    if name not in refs:
        raise KeyError(name)
    return {int(n): v for n, v in refs[name]["values"].items()}


# --------------------------------------------------------------------------
# argument helpers


def parse_range(s: str) -> list:
    try:
        if ".." in s:
            a, b = s.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(s)
    except ValueError:
        raise UsageError(f"bad range {s!r}; use N or A..B")
    if lo < 0 or hi < lo:
        raise UsageError(f"bad range {s!r}")
    return list(range(lo, hi + 1))


def _read_json(path):
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _emit_rows(header, rows, fmt, out):
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    elif fmt == "json":
        json.dump([dict(zip(header, map(_jsonable, r))) for r in rows], out, indent=2)
        out.write("\n")
    else:
        cols = [[str(h)] + [str(r[i]) for r in rows] for i, h in enumerate(header)]
        widths = [max(map(len, c)) for c in cols]
        for i in range(len(rows) + 1):
            out.write("  ".join(c[i].rjust(w) for c, w in zip(cols, widths)).rstrip() + "\n")


def _jsonable(x):
    return x if isinstance(x, (int, str, bool)) or x is None else str(x)


def _brute_one(args):
    n, spec, mode, universe, cap = args
    return count_avoiding(n, parse_pattern_set(spec), mode, universe, cap)


# --------------------------------------------------------------------------
# commands


def cmd_count(a, cfg: RunConfig, out) -> int:
    S = parse_pattern_set(a.set)
    spec = format_pattern_set(S)
    ns = parse_range(a.n)
    mode = CONSECUTIVE if a.mode == "consecutive" else CLASSICAL
    universe = TREE if a.universe == "tree" else FOREST
    brute = rec = None
    if a.method in ("recurrence", "both"):
        if mode is CONSECUTIVE:
            raise UsageError("recurrences cover classical avoidance only")
        rec = [recurrences.count_by_recurrence(S, n, a.universe) for n in ns]
    if a.method in ("brute", "both"):
        cap = cfg.caps["forest"]
        for n in ns:
            if cap is not None and n > cap:
                raise CapExceededError(f"n={n} exceeds the enumeration cap {cap}")
        jobs = [(n, spec, mode, universe, cap) for n in ns]
        if cfg.workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(cfg.workers) as ex:
                brute = list(ex.map(_brute_one, jobs))
        else:
            brute = [_brute_one(j) for j in jobs]
    header = ["n"]
    cols = []
    if brute is not None:
        header.append("brute")
        cols.append(brute)
    if rec is not None:
        header.append("recurrence")
        cols.append(rec)
    status = EXIT_OK
    if brute is not None and rec is not None:
        header.append("status")
        marks = ["AGREE" if x == y else "MISMATCH" for x, y in zip(brute, rec)]
        cols.append(marks)
        if "MISMATCH" in marks:
            status = EXIT_FAIL
    rows = [[n] + [c[i] for c in cols] for i, n in enumerate(ns)]
    _emit_rows(header, rows, cfg.fmt, out)
    if status:
        print("error: brute force and recurrence disagree", file=sys.stderr)
    return status


def cmd_verify(a, cfg, out) -> int:
    if a.campaign not in campaigns.CAMPAIGNS:
        raise campaigns.UnknownCampaignError(
            f"unknown campaign {a.campaign!r}; choose from {', '.join(campaigns.CAMPAIGNS)}")
    rep = campaigns.run_campaign(a.campaign, tau=a.tau, max_n=a.max_n, max_height=a.max_height)
    out.write(rep.render() + "\n")
    return EXIT_OK if rep.passed else EXIT_FAIL


def _compute_sequence(a, cfg) -> SequenceRecord:
    ns = parse_range(a.n)
    if a.family == "avoid":
        if not a.set:
            raise UsageError("family avoid needs --set")
        S = parse_pattern_set(a.set)
        params = f"set={format_pattern_set(S)};universe={a.universe}"
        if a.method == "closed-form":
            raise UsageError("family avoid has no closed form; use recurrence or brute")
        if a.method == "brute":
            vals = [(n, count_avoiding(n, S, CLASSICAL, TREE if a.universe == "tree" else FOREST,
                                       cfg.caps["forest"])) for n in ns]
            prov = "oracle"
        else:
            vals = [(n, recurrences.count_by_recurrence(S, n, a.universe)) for n in ns]
            prov = "recurrence"
    elif a.family == "bell":
        params = f"order={a.order}"
        seq = recurrences.higher_order_bell_sequence(a.order, max(ns) + 1)
        vals = [(n, seq[n]) for n in ns]
        prov = "recurrence"
    elif a.family == "extranice":
        params = "sigma=1234|1423|1324"
        ns = [n for n in ns if n % 2 == 0 and n > 0]
        if a.method == "brute":
            cap = cfg.caps["forest"]
            if cap is not None and max(ns, default=0) > cap:
                raise CapExceededError(f"n={max(ns)} exceeds the enumeration cap {cap}")
            vals = [(n, twigs.count_extranice_brute(n)) for n in ns]
            prov = "oracle"
        else:
            vals = [(n, twigs.extranice_count(n)) for n in ns]
            prov = "closed-form"
    else:
        raise UsageError(f"unknown family {a.family!r}")
    return SequenceRecord(a.family, params, vals, prov, time.time())


def cmd_sequence(a, cfg, out) -> int:
    ns = a.n
    key_params = {"family": a.family, "set": a.set, "order": a.order, "universe": a.universe,
                  "method": a.method, "n": ns}
    key = cache_key(a.family, key_params, cfg.caps)
    cdir = cfg.resolved_cache_dir()
    cpath = cdir / f"{key}.json"
    hit = False
    if cpath.exists():
        rec = SequenceRecord.from_json(json.loads(cpath.read_text()))
        hit = True
    else:
        rec = _compute_sequence(a, cfg)
        atomic_write(cpath, json.dumps(rec.to_json(), indent=2, sort_keys=True) + "\n")
    text = rec.to_json_map() if cfg.fmt == "json" else rec.to_csv()
    if a.out:
        atomic_write(Path(a.out), text)
    else:
        out.write(text)
    if a.json_out:
        atomic_write(Path(a.json_out), rec.to_json_map())
    print(f"cache {'hit' if hit else 'miss'}: {cpath}", file=sys.stderr)
    if a.compare:
        try:
            ref = load_reference(a.compare)
        except KeyError:
            raise UsageError(f"no bundled reference named {a.compare!r}")
        bad = [(n, v, ref[n]) for n, v in rec.values if n in ref and ref[n] != v]
        shared = sum(1 for n, _ in rec.values if n in ref)
        if bad:
            print(f"MISMATCH against {a.compare}: first at n={bad[0][0]} ({bad[0][1]} vs {bad[0][2]})",
                  file=sys.stderr)
            return EXIT_FAIL
        print(f"MATCH against {a.compare} on {shared} terms", file=sys.stderr)
    return EXIT_OK


def cmd_bijection(a, cfg, out) -> int:
    F = LabeledForest.from_json(_read_json(a.input))
    pair = bijections.TauPair(a.pattern)
    need = pair.tau_tilde if a.direction == "alpha" else pair.tau
    if not avoids(F, [need]):
        raise PreconditionViolatedError(f"{a.direction} expects a forest avoiding {need}")
    G = bijections.alpha(F, pair) if a.direction == "alpha" else bijections.beta(F, pair)
    obj = {"forest": G.to_json(),
           "specialInput": sorted(bijections.special_vertices(F, pair)),
           "specialImage": sorted(bijections.special_vertices(G, pair))}
    json.dump(obj, out, indent=2)
    out.write("\n")
    return EXIT_OK


def _matrix_arg(s):
    s = s.strip().upper()
    if s == "I2":
        return young.I2
    if s == "J2":
        return young.J2
    return young.pattern_to_matrix(Pattern.parse(s))


def cmd_shapewilf(a, cfg, out) -> int:
    M, N = _matrix_arg(a.lhs), _matrix_arg(a.rhs)
    rows = []
    fails = 0
    for n in range(1, a.max_vertices + 1):
        for i, Y in enumerate(young.iterate_diagrams(n, a.max_height)):
            x = young.count_avoiding_transversals(Y, [M])
            y = young.count_avoiding_transversals(Y, [N])
            fails += x != y
            rows.append([f"n{n}-{i}", x, y])
    fmt = "csv" if cfg.fmt == "table" else cfg.fmt
    _emit_rows(["diagram_id", "size_lhs", "size_rhs"], rows, fmt, out)
    print(f"{len(rows)} diagrams, {fails} with unequal class sizes", file=sys.stderr)
    return EXIT_FAIL if fails else EXIT_OK


def cmd_clusters(a, cfg, out) -> int:
    cap = cfg.caps["cluster"]
    if a.action == "compare":
        if not (a.lhs and a.rhs):
            raise UsageError("clusters compare needs --lhs and --rhs")
        lhs, rhs = Pattern.parse(a.lhs), Pattern.parse(a.rhs)
        if lhs.k == rhs.k:
            tabs = clusters.cluster_tables(lhs.k, a.max_n, [lhs, rhs], cap)
        else:
            tabs = {lhs: clusters.cluster_table(lhs, a.max_n, cap), rhs: clusters.cluster_table(rhs, a.max_n, cap)}
        v = clusters.compare_tables(tabs[lhs], tabs[rhs])
        out.write(f"{lhs} vs {rhs}: {v}\n")
        if not v.equal:
            n, m, x, y = v.witness
            out.write(f"first divergence: r_{{{n},{m}}}({lhs}) = {x}, r_{{{n},{m}}}({rhs}) = {y}\n")
            return EXIT_FAIL
        return EXIT_OK
    if not a.pattern:
        raise UsageError("clusters needs --pattern")
    tab = clusters.cluster_table(a.pattern, a.max_n, cap)
    rows = [[n, m, tab.entries[(n, m)]] for n, m in sorted(tab.entries) if tab.entries[(n, m)]]
    fmt = "csv" if cfg.fmt == "table" else cfg.fmt
    _emit_rows(["n", "m", "r"], rows, fmt, out)
    return EXIT_OK


def cmd_nice(a, cfg, out) -> int:
    if a.action == "gamma":
        if not a.input:
            raise UsageError("nice gamma needs --input")
        W = twigs.TwigCollection.from_json(_read_json(a.input))
        json.dump(twigs.gamma(W).to_json(), out)
        out.write("\n")
        return EXIT_OK
    if a.n is None:
        raise UsageError("nice count needs --n")
    sigma = Pattern.parse(a.sigma)
    rows = []
    for n in parse_range(a.n):
        if a.extranice and a.method != "brute" and sigma in (twigs.P1234, twigs.P1423, twigs.P1324):
            t = twigs.extranice_count(n) if n % 2 == 0 and n else 0
            f = recurrences.forest_from_tree(
                lambda i: twigs.extranice_count(i) if i % 2 == 0 else 0, n)
            rows.append([n, t, f, "closed-form"])
            continue
        cap = cfg.caps["forest"]
        if cap is not None and n > cap:
            raise CapExceededError(f"n={n} exceeds the enumeration cap {cap}")
        if a.extranice and n % 2 == 0 and n:
            t = twigs.count_extranice_brute(n, sigma)
        else:
            t = twigs.count_nice(n, sigma, "tree", a.extranice)
        f = twigs.count_nice(n, sigma, "forest", a.extranice)
        rows.append([n, t, f, "oracle"])
    _emit_rows(["n", "trees", "forests", "provenance"], rows, cfg.fmt, out)
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="forestpat", description="Pattern avoidance in rooted labeled forests.")
    p.add_argument("--cap", type=int, default=8, help="largest n for exhaustive forest enumeration (default 8)")
    p.add_argument("--cluster-cap", type=int, default=None, help="largest n for cluster enumeration")
    p.add_argument("--workers", type=int, default=1, help="processes for brute-force counting")
    p.add_argument("--cache-dir", default=None, help=f"sequence cache directory (env {CACHE_ENV})")
    p.add_argument("--format", choices=["table", "csv", "json"], default="table", dest="fmt")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", help="count avoiders of a pattern set")
    c.add_argument("--set", required=True, help="patterns, e.g. 213,231")
    c.add_argument("--n", required=True, help="N or A..B")
    c.add_argument("--method", choices=["brute", "recurrence", "both"], default="both")
    c.add_argument("--universe", choices=["forest", "tree"], default="forest")
    c.add_argument("--mode", choices=["classical", "consecutive"], default="classical")
    c.set_defaults(func=cmd_count)

    v = sub.add_parser("verify", help="run a verification campaign")
    v.add_argument("campaign", help=", ".join(campaigns.CAMPAIGNS))
    v.add_argument("--tau", default=None)
    v.add_argument("--max-n", type=int, default=None)
    v.add_argument("--max-height", type=int, default=None)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sequence", help="export a sequence through the cache")
    s.add_argument("family", choices=["avoid", "bell", "extranice"])
    s.add_argument("--set", default=None)
    s.add_argument("--order", type=int, default=1)
    s.add_argument("--universe", choices=["forest", "tree"], default="forest")
    s.add_argument("--method", choices=["recurrence", "brute", "closed-form"], default="recurrence")
    s.add_argument("--n", default="0..10")
    s.add_argument("--out", default=None, help="write CSV (or JSON with --format json) here")
    s.add_argument("--json", dest="json_out", default=None, help="also write the JSON map here")
    s.add_argument("--compare", default=None, help="bundled reference id, e.g. A000142")
    s.set_defaults(func=cmd_sequence)

    b = sub.add_parser("bijection", help="apply alpha or beta to a forest")
    b.add_argument("--input", required=True, help="forest JSON file or -")
    b.add_argument("--pattern", required=True, help="tau, ending with (k-1)k")
    b.add_argument("--direction", choices=["alpha", "beta"], default="alpha")
    b.set_defaults(func=cmd_bijection)

    w = sub.add_parser("shapewilf", help="transversal class sizes over diagram corpora")
    w.add_argument("action", choices=["verify"])
    w.add_argument("--lhs", default="I2")
    w.add_argument("--rhs", default="J2")
    w.add_argument("--max-vertices", type=int, default=4)
    w.add_argument("--max-height", type=int, default=4)
    w.set_defaults(func=cmd_shapewilf)

    k = sub.add_parser("clusters", help="cluster number tables")
    k.add_argument("action", nargs="?", choices=["table", "compare"], default="table")
    k.add_argument("--pattern", default=None)
    k.add_argument("--lhs", default=None)
    k.add_argument("--rhs", default=None)
    k.add_argument("--max-n", type=int, default=7)
    k.set_defaults(func=cmd_clusters)

    nc = sub.add_parser("nice", help="nice trees and twig collections")
    nc.add_argument("action", choices=["count", "gamma"])
    nc.add_argument("--sigma", default="1423")
    nc.add_argument("--n", default=None)
    nc.add_argument("--extranice", action="store_true")
    nc.add_argument("--method", choices=["auto", "brute"], default="auto")
    nc.add_argument("--input", default=None, help="twig collection JSON file or -")
    nc.set_defaults(func=cmd_nice)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        cfg = RunConfig({"forest": a.cap, "cluster": a.cluster_cap}, a.workers, a.cache_dir, a.fmt)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return a.func(a, cfg, out)
    except CapExceededError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ForestPatError, ValueError, KeyError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e.filename or ''}: {e.strerror or e}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
