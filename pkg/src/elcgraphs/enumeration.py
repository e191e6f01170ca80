"""Isomorph-free generation, orbit censuses and the classifier.

Orbit counts at order n come from extending the orbit representatives of
order n-1 by one vertex: the induced subgraph on any n-1 vertices of a
connected graph (dropping a non-cut vertex) is equivalent to some
representative, and the same operation sequence applied to the big graph
yields an extension of that representative in the same orbit.  So the
extensions meet every orbit, and closing each unseen one under the operation
partitions all connected graphs of order n.  Preserved graphs and orbits of
size two are found the same way, but each extension is only expanded until a
third class (or a second, for preserved) shows up.
"""

from __future__ import annotations

import csv
import io
import logging
import os
from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import comb, factorial
from pathlib import Path
from typing import Iterable, Iterator

from .canonical import canon_rows, canonical_labeling
from .constructions import ConstructionSpec, grammar_classes
from .formats import adj_to_graph6, from_graph6
from .graph import Graph, _is_connected, _two_colour
from .orbits import (
    OrbitCapExceeded,
    default_cap,
    elc_preserved_witness,
    orbit_keys,
    small_orbit_keys,
)

log = logging.getLogger(__name__)

CLASSES = ("bipartite", "nonbipartite", "lc")

# largest order at which every orbit is enumerated in full
ENUM_CAP = {"general": 8, "bipartite": 11}
DEEP_ENUM_CAP = {"general": 9, "bipartite": 13}
# largest order for plain isomorph-free generation
GEN_CAP = {"general": 10, "bipartite": 12}


class CapacityError(RuntimeError):
    """The requested order is beyond the configured caps."""


# --- isomorph-free generation -------------------------------------------------


def _side_masks(adj) -> tuple[int, int]:
    left = _two_colour(adj)
    full = (1 << len(adj)) - 1
    return left, full & ~left


def _submasks(mask: int) -> Iterator[int]:
    s = mask
    while s:
        yield s
        s = (s - 1) & mask


def extension_masks(adj, bipartite: bool) -> Iterator[int]:
    """Neighbourhoods for a new vertex: nonempty subsets (of one side if ``bipartite``)."""
    if bipartite:
        left, right = _side_masks(adj)
        yield from _submasks(left)
        yield from _submasks(right)
    else:
        yield from range(1, 1 << len(adj))


def extend(adj, mask: int) -> tuple[int, ...]:
    """Append vertex ``len(adj)`` adjacent to the vertices of ``mask``."""
    bit = 1 << len(adj)
    rows = [r | bit if (mask >> i) & 1 else r for i, r in enumerate(adj)]
    rows.append(mask)
    return tuple(rows)


def _delete(adj, v):
    low = (1 << v) - 1
    out = []
    for i, r in enumerate(adj):
        if i != v:
            out.append((r & low) | ((r >> (v + 1)) << v))
    return tuple(out)


def _canonical_deletion(adj, lab) -> int:
    """The non-cut vertex with the largest canonical position."""
    for v in reversed(lab):
        if _is_connected(_delete(adj, v)):
            return v
    raise AssertionError("connected graph without a non-cut vertex")


def _children(parent, bipartite: bool) -> Iterator[tuple[int, ...]]:
    n = len(parent) + 1
    parent_sig = sorted(r.bit_count() for r in parent)
    seen = set()
    for mask in extension_masks(parent, bipartite):
        child = extend(parent, mask)
        rows, lab = canonical_labeling(child)
        if rows in seen:
            continue
        v = _canonical_deletion(child, lab)
        if v != n - 1:
            rest = _delete(child, v)
            if sorted(r.bit_count() for r in rest) != parent_sig:
                continue
            if canon_rows(rest) != parent:
                continue
        seen.add(rows)
        yield rows


def _generate(n: int, bipartite: bool) -> Iterator[tuple[int, ...]]:
    if n == 1:
        yield (0,)
        return
    for parent in _generate(n - 1, bipartite):
        yield from _children(parent, bipartite)


def connected_graphs(n: int, bipartite_only: bool = False, force: bool = False) -> Iterator[Graph]:
    """One canonical representative per class of connected (bipartite) graphs of order n.

    Orderly: a child is kept only when deleting its canonical non-cut vertex
    gives back the parent it was grown from; within one parent, duplicates
    are removed by a local set.  No global store of graphs is kept.
    """
    cap = GEN_CAP["bipartite" if bipartite_only else "general"]
    if n < 1:
        raise ValueError("n must be positive")
    if n > cap and not force:
        raise CapacityError(f"order {n} exceeds generation cap {cap} (use force=True)")
    for rows in _generate(n, bipartite_only):
        yield Graph(rows, check=False)


def connected_graphs_naive(n: int, bipartite_only: bool = False) -> list[Graph]:
    """Generate-and-dedup oracle: extend every class of order n-1, keep a global set."""
    level = {(0,)}
    for _ in range(1, n):
        nxt = set()
        for parent in level:
            for mask in extension_masks(parent, bipartite_only):
                nxt.add(canon_rows(extend(parent, mask)))
        level = nxt
    return [Graph(r, check=False) for r in sorted(level)]


def brute_force_classes(n: int, bipartite_only: bool = False) -> int:
    """Classes of connected graphs by enumerating all labelled graphs (n <= 6).

    Isomorphism is decided by trying every vertex permutation; independent of
    the canonical labeling code.
    """
    if n > 6:
        raise CapacityError("brute force class counting is limited to n <= 6")
    pairs = list(combinations(range(n), 2))
    perms = list(permutations(range(n)))
    reps: list[frozenset] = []
    for bitsel in range(1 << len(pairs)):
        edges = frozenset(p for i, p in enumerate(pairs) if (bitsel >> i) & 1)
        g = Graph.from_edges(n, edges)
        if not g.is_connected() or (bipartite_only and not g.is_bipartite()):
            continue
        for rep in reps:
            if len(rep) == len(edges) and any(
                frozenset(tuple(sorted((pi[u], pi[v]))) for u, v in edges) == rep
                for pi in perms
            ):
                break
        else:
            reps.append(edges)
    return len(reps)


def unlabelled_graph_counts(nmax: int) -> list[int]:
    """Numbers of all graphs on 0..nmax vertices up to isomorphism (Burnside over cycle types)."""

    def partitions(n, largest=None):
        if largest is None:
            largest = n
        if n == 0:
            yield []
            return
        for k in range(min(n, largest), 0, -1):
            for rest in partitions(n - k, k):
                yield [k] + rest

    from math import gcd

    out = [1]
    for n in range(1, nmax + 1):
        total = 0
        for part in partitions(n):
            # number of permutations with this cycle type
            count = factorial(n)
            mult = {}
            for c in part:
                count //= c
                mult[c] = mult.get(c, 0) + 1
            for m in mult.values():
                count //= factorial(m)
            # cycles induced on unordered pairs
            cyc = 0
            for c in part:
                cyc += c // 2
            for i in range(len(part)):
                for j in range(i + 1, len(part)):
                    cyc += gcd(part[i], part[j])
            total += count * 2**cyc
        out.append(total // factorial(n))
    return out


def connected_counts_from_totals(totals: list[int]) -> list[int]:
    """Inverse Euler transform: connected class counts from all-graph counts."""
    nmax = len(totals) - 1
    conn = [0] * (nmax + 1)
    for n in range(1, nmax + 1):
        # totals[n] = Euler transform of conn evaluated at n; solve for conn[n]
        conn[n] = 0
        b = _euler(conn, n)
        conn[n] = totals[n] - b
    return conn


def _euler(conn, n):
    """Coefficient of x^n in prod_k (1 - x^k)^(-conn[k]) using conn[1..n] (conn[n] may be 0)."""
    poly = [1] + [0] * n
    for k in range(1, n + 1):
        c = conn[k]
        if not c:
            continue
        new = [0] * (n + 1)
        for i in range(n + 1):
            if not poly[i]:
                continue
            j = 0
            while i + j * k <= n:
                new[i + j * k] += poly[i] * comb(c + j - 1, j)
                j += 1
        poly = new
    return poly[n]


# --- orbit representatives ----------------------------------------------------


@dataclass
class OrbitLevel:
    """All ELC (or LC) orbits of connected graphs of one order.

    ``reps[i]`` is the smallest canonical member of orbit i and ``sizes[i]``
    its number of classes.
    """

    n: int
    kind: str
    bipartite_only: bool
    reps: list[tuple[int, ...]] = field(default_factory=list)
    sizes: list[int] = field(default_factory=list)

    def bipartite_flags(self) -> list[bool]:
        return [_two_colour(r) is not None for r in self.reps]


class Census:
    """Memoised orbit data shared by all counting queries.

    ``checkpoint_dir`` stores every finished level as ``<kind>-<scope>-n<N>.g6``
    (one ``graph6 size`` line per orbit) so an interrupted run resumes from
    the last completed order.  ``jobs`` > 1 spreads the candidate filters over
    worker processes; results are sorted, so output does not depend on it.
    """

    def __init__(self, checkpoint_dir: str | os.PathLike | None = None, jobs: int = 1,
                 deep: bool = False):
        self.dir = Path(checkpoint_dir) if checkpoint_dir else None
        if self.dir:
            self.dir.mkdir(parents=True, exist_ok=True)
        self.jobs = max(1, jobs)
        self.deep = deep
        self._levels: dict = {}
        self._filtered: dict = {}

    # orbit levels

    def _enum_cap(self, bipartite_only: bool) -> int:
        caps = DEEP_ENUM_CAP if self.deep else ENUM_CAP
        return caps["bipartite" if bipartite_only else "general"]

    def level(self, n: int, kind: str = "elc", bipartite_only: bool = False) -> OrbitLevel:
        """Every orbit at order ``n``; LC levels always cover all connected graphs."""
        if kind == "lc":
            bipartite_only = False
        key = (n, kind, bipartite_only)
        if key in self._levels:
            return self._levels[key]
        cap = self._enum_cap(bipartite_only)
        if n > cap:
            raise CapacityError(
                f"full {kind.upper()} orbit enumeration at order {n} exceeds cap {cap}"
                + ("" if self.deep else " (try --deep)")
            )
        lvl = self._load(n, kind, bipartite_only)
        if lvl is None:
            lvl = self._build_level(n, kind, bipartite_only)
            self._save(lvl)
        self._levels[key] = lvl
        return lvl

    def _build_level(self, n, kind, bipartite_only) -> OrbitLevel:
        lvl = OrbitLevel(n, kind, bipartite_only)
        if n == 1:
            lvl.reps.append((0,))
            lvl.sizes.append(1)
            return lvl
        parents = self.level(n - 1, kind, bipartite_only)
        log.info("enumerating %s orbits at n=%d from %d parents", kind, n, len(parents.reps))
        seen: set = set()
        found = []
        cap = default_cap()
        for parent in parents.reps:
            for mask in extension_masks(parent, bipartite_only):
                child = extend(parent, mask)
                k = canon_rows(child)
                if k in seen:
                    continue
                members, truncated = orbit_keys(k, kind, cap)
                if truncated:
                    raise OrbitCapExceeded(f"orbit at n={n} exceeded cap {cap}")
                seen |= members
                found.append((min(members), len(members)))
        found.sort()
        lvl.reps = [r for r, _ in found]
        lvl.sizes = [s for _, s in found]
        return lvl

    def _path(self, n, kind, bipartite_only):
        scope = "bip" if bipartite_only else "all"
        return self.dir / f"{kind}-{scope}-n{n}.g6"

    def _load(self, n, kind, bipartite_only):
        if not self.dir:
            return None
        path = self._path(n, kind, bipartite_only)
        if not path.exists():
            return None
        lvl = OrbitLevel(n, kind, bipartite_only)
        for line in path.read_text().splitlines():
            if not line.strip():
                continue
            g6, size = line.split()
            lvl.reps.append(from_graph6(g6).adj)
            lvl.sizes.append(int(size))
        return lvl

    def _save(self, lvl):
        if not self.dir:
            return
        path = self._path(lvl.n, lvl.kind, lvl.bipartite_only)
        tmp = path.with_suffix(".tmp")
        with tmp.open("w") as fh:
            for r, s in zip(lvl.reps, lvl.sizes):
                fh.write(f"{adj_to_graph6(r)} {s}\n")
        tmp.replace(path)

    # filtered searches over extensions

    def _extensions_filter(self, n, kind, cls, mode):
        """Orbits at order n of class ``cls`` that are preserved (mode 1) or of size two (mode 2).

        Returns a sorted list of orbit member tuples.
        """
        key = (n, kind, cls, mode)
        if key in self._filtered:
            return self._filtered[key]
        bipartite_only = cls == "bipartite"
        if n == 1:
            result = [((0,),)] if mode == 1 else []
            self._filtered[key] = result
            return result
        parents = self.level(n - 1, kind, bipartite_only).reps
        tasks = [(p, kind, cls, mode) for p in parents]
        if self.jobs > 1 and len(tasks) > 1:
            import multiprocessing as mp

            with mp.Pool(self.jobs) as pool:
                chunks = pool.map(_filter_parent, tasks, chunksize=max(1, len(tasks) // (4 * self.jobs)))
        else:
            chunks = [_filter_parent(t) for t in tasks]
        orbits = set()
        for chunk in chunks:
            orbits.update(chunk)
        result = sorted(orbits)
        self._filtered[key] = result
        return result

    # public counts

    def orbit_count(self, n: int, cls: str) -> int:
        if cls == "lc":
            return len(self.level(n, "lc").reps)
        if cls == "bipartite":
            return len(self.level(n, "elc", True).reps)
        return sum(1 for f in self.level(n, "elc", False).bipartite_flags() if not f)

    def preserved(self, n: int, cls: str) -> list[tuple[int, ...]]:
        """Canonical rows of the ELC-preserved (LC-preserved for cls='lc') graphs of order n."""
        kind = "lc" if cls == "lc" else "elc"
        return [m[0] for m in self._extensions_filter(n, kind, cls, 1)]

    def size_two(self, n: int, cls: str) -> list[tuple]:
        kind = "lc" if cls == "lc" else "elc"
        return self._extensions_filter(n, kind, cls, 2)

    def census_row(self, n: int) -> dict:
        row = {"n": n}
        for cls in ("bipartite", "nonbipartite"):
            row[f"elc_orbits_{cls}"] = self.orbit_count(n, cls)
            row[f"elc_preserved_{cls}"] = len(self.preserved(n, cls))
            row[f"size_two_{cls}"] = len(self.size_two(n, cls))
        row["size_two_lc"] = len(self.size_two(n, "lc"))
        return row


def _filter_parent(task):
    parent, kind, cls, mode = task
    bipartite_only = cls == "bipartite"
    out = set()
    seen = set()
    for mask in extension_masks(parent, bipartite_only):
        child = extend(parent, mask)
        if cls == "nonbipartite" and _two_colour(child) is not None:
            continue
        if mode == 1:
            if kind == "elc":
                if elc_preserved_witness(child) is None:
                    out.add((canon_rows(child),))
            else:
                members = small_orbit_keys(child, "lc", 1)
                if members is not None:
                    out.add(tuple(members))
        else:
            members = small_orbit_keys(child, kind, 2)
            if members is not None and len(members) == 2:
                k = tuple(sorted(members))
                if k not in seen:
                    seen.add(k)
                    out.add(k)
    return out


CENSUS_FIELDS = (
    "n",
    "elc_orbits_bipartite",
    "elc_orbits_nonbipartite",
    "elc_preserved_bipartite",
    "elc_preserved_nonbipartite",
    "size_two_bipartite",
    "size_two_nonbipartite",
    "size_two_lc",
)

COUNT_FIELDS = {
    ("orbits", "bipartite"): "elc_orbits_bipartite",
    ("orbits", "nonbipartite"): "elc_orbits_nonbipartite",
    ("orbits", "lc"): "lc_orbits",
    ("preserved", "bipartite"): "elc_preserved_bipartite",
    ("preserved", "nonbipartite"): "elc_preserved_nonbipartite",
    ("preserved", "lc"): "lc_preserved",
    ("size-two", "bipartite"): "size_two_bipartite",
    ("size-two", "nonbipartite"): "size_two_nonbipartite",
    ("size-two", "lc"): "size_two_lc",
}


def count_orbits(n: int, cls: str, census: Census | None = None) -> int:
    return (census or _default()).orbit_count(n, cls)


def count_preserved(n: int, cls: str, census: Census | None = None) -> int:
    return len((census or _default()).preserved(n, cls))


def count_size_two(n: int, cls: str, census: Census | None = None) -> int:
    return len((census or _default()).size_two(n, cls))


_DEFAULT: Census | None = None


def _default() -> Census:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = Census()
    return _DEFAULT


def census_csv(census: Census, count: str, cls: str, orders: Iterable[int]) -> str:
    """CSV with header ``n,<field>``; a class with no graphs at an order gives an empty cell."""
    name = COUNT_FIELDS[(count, cls)]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", name])
    for n in orders:
        if count == "orbits":
            value = census.orbit_count(n, cls)
        elif count == "preserved":
            value = len(census.preserved(n, cls))
        else:
            value = len(census.size_two(n, cls))
        w.writerow([n, value])
    return buf.getvalue()


# --- one-vertex extension of bipartite representatives -----------------------


def extend_bipartite(reps: Iterable[Graph]) -> Iterator[Graph]:
    """All one-vertex extensions of bipartite representatives, a new vertex on either side.

    An (a, b)-bipartite representative yields 2^a + 2^b - 2 graphs.
    """
    for g in reps:
        if _two_colour(g.adj) is None:
            raise ValueError("extend_bipartite needs bipartite graphs")
        for mask in extension_masks(g.adj, True):
            yield Graph(extend(g.adj, mask), check=False)


# --- classification -----------------------------------------------------------


@dataclass(frozen=True)
class ClassificationEntry:
    n: int
    graph6: str
    bipartite: bool
    spec: ConstructionSpec | None

    @property
    def spec_text(self) -> str:
        return self.spec.text() if self.spec else "unmatched"


def classify_preserved(
    n_max_bip: int, n_max_nonbip: int, census: Census | None = None, n_min: int = 2
) -> list[ClassificationEntry]:
    """Match every ELC-preserved graph found by the census to a grammar expression.

    Graphs that no expression produces are reported with ``spec=None`` and
    logged at warning level.
    """
    census = census or _default()
    out = []
    for cls, top in (("bipartite", n_max_bip), ("nonbipartite", n_max_nonbip)):
        for n in range(max(n_min, 2 if cls == "bipartite" else 3), top + 1):
            names = grammar_classes(n)
            for rows in census.preserved(n, cls):
                hit = names.get(rows)
                spec = hit[0] if hit else None
                entry = ClassificationEntry(n, adj_to_graph6(rows), cls == "bipartite", spec)
                if spec is None:
                    log.warning("unmatched ELC-preserved graph at n=%d: %s", n, entry.graph6)
                out.append(entry)
    out.sort(key=lambda e: (not e.bipartite, e.n, e.spec_text))
    return out


def classification_csv(entries: Iterable[ClassificationEntry]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "class", "graph6", "spec"])
    for e in entries:
        w.writerow([e.n, "bipartite" if e.bipartite else "nonbipartite", e.graph6, e.spec_text])
    return buf.getvalue()


# --- self-dual survey -----------------------------------------------------------


def self_dual_orbit_survey(codes) -> list[dict]:
    """ELC orbit size class (1, 2 or ">2") for the graphs of the given codes.

    ``codes`` is an iterable of ``(name, LinearCode)`` pairs.
    """
    from .codes import graph_from_code, is_self_dual

    rows = []
    for name, code in codes:
        g, _ = graph_from_code(code)
        members = small_orbit_keys(g.adj, "elc", 2)
        size = ">2" if members is None else len(members)
        rows.append({"name": name, "n": code.n, "k": code.k,
                     "self_dual": is_self_dual(code), "orbit_size": size})
    return rows
