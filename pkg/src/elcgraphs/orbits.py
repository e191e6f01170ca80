"""ELC and LC orbits up to isomorphism.

Orbit members are stored as canonical adjacency rows (tuples of ints), which
hash cheaply.  ELC inside the engine skips the u/v label swap because members
are only ever compared up to isomorphism.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from .canonical import CanonicalForm, canon_rows, canonical_form, canonical_labeling
from .formats import adj_to_graph6
from .graph import Bipartition, Graph, GraphError, _elc, _lc, bits

DEFAULT_ORBIT_CAP = 10**7

Rows = tuple  # canonical adjacency rows


def default_cap() -> int:
    env = os.environ.get("ELC_ORBIT_CAP")
    if env:
        try:
            return int(env)
        except ValueError:
            raise GraphError(f"ELC_ORBIT_CAP must be an integer, got {env!r}") from None
    return DEFAULT_ORBIT_CAP


class OrbitCapExceeded(RuntimeError):
    """Raised when an orbit grows past its size cap and the caller needs it whole."""


def elc_neighbours(adj: Rows) -> Iterator[Rows]:
    """Every graph obtained by one ELC on ``adj`` (unswapped, so iso-equivalent)."""
    for u, row in enumerate(adj):
        w = row >> (u + 1)
        while w:
            low = w & -w
            v = u + low.bit_length()
            yield _elc(adj, u, v)
            w ^= low


def lc_neighbours(adj: Rows) -> Iterator[Rows]:
    for v in range(len(adj)):
        yield _lc(adj, v)


_STEPS: dict[str, Callable[[Rows], Iterable[Rows]]] = {
    "elc": elc_neighbours,
    "lc": lc_neighbours,
}


def _steps(kind: str):
    try:
        return _STEPS[kind]
    except KeyError:
        raise GraphError(f"orbit kind must be 'elc' or 'lc', got {kind!r}") from None


def degree_signature(adj: Rows) -> tuple[int, ...]:
    return tuple(sorted(r.bit_count() for r in adj))


def orbit_keys(adj: Rows, kind: str = "elc", limit: int | None = None) -> tuple[set, bool]:
    """Breadth-first closure of ``adj`` under ``kind``.

    Returns ``(members, truncated)``; ``truncated`` is True when the member set
    grew past ``limit`` and expansion stopped.
    """
    step = _steps(kind)
    if limit is None:
        limit = default_cap()
    start = canon_rows(adj)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for x in frontier:
            for y in step(x):
                if y == x:
                    continue
                k = canon_rows(y)
                if k not in seen:
                    seen.add(k)
                    if len(seen) > limit:
                        return seen, True
                    nxt.append(k)
        frontier = nxt
    return seen, False


def small_orbit_keys(adj: Rows, kind: str, cap: int) -> set | None:
    """Orbit members if the orbit has at most ``cap`` members, else None.

    Cheap degree signatures reject most graphs before any canonical labeling:
    more than ``cap`` distinct signatures already means more than ``cap`` classes.
    """
    step = _steps(kind)
    sigs = {degree_signature(adj)}
    for y in step(adj):
        sigs.add(degree_signature(y))
        if len(sigs) > cap:
            return None
    start = canon_rows(adj)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for x in frontier:
            for y in step(x):
                if y == x:
                    continue
                s = degree_signature(y)
                if s not in sigs:
                    sigs.add(s)
                    if len(sigs) > cap:
                        return None
                k = canon_rows(y)
                if k not in seen:
                    seen.add(k)
                    if len(seen) > cap:
                        return None
                    nxt.append(k)
        frontier = nxt
    return seen


@dataclass(frozen=True)
class Orbit:
    """An ELC or LC orbit; ``members`` are canonical adjacency rows, sorted."""

    kind: str
    members: tuple[Rows, ...] = field(repr=False)
    truncated: bool = False

    @property
    def size(self) -> int:
        return len(self.members)

    def __contains__(self, g: object) -> bool:
        if isinstance(g, Graph):
            return canon_rows(g.adj) in set(self.members)
        return g in set(self.members)

    def graphs(self) -> list[Graph]:
        return [Graph(m, check=False) for m in self.members]

    def forms(self) -> list[CanonicalForm]:
        return sorted(canonical_form(g) for g in self.graphs())

    @property
    def representative(self) -> CanonicalForm:
        return self.forms()[0]

    def graph6_lines(self) -> list[str]:
        return sorted(adj_to_graph6(m) for m in self.members)

    def summary(self) -> dict:
        return {
            "kind": self.kind,
            "size": self.size,
            "representative": self.representative.graph6,
            "truncated": self.truncated,
        }


def _require_connected(g: Graph) -> None:
    if not g.is_connected():
        raise GraphError("orbit operations require a connected graph")


def _orbit(g: Graph, kind: str, limit: int | None) -> Orbit:
    _require_connected(g)
    keys, truncated = orbit_keys(g.adj, kind, limit)
    return Orbit(kind, tuple(sorted(keys)), truncated)


def elc_orbit(g: Graph, limit: int | None = None) -> Orbit:
    return _orbit(g, "elc", limit)


def lc_orbit(g: Graph, limit: int | None = None) -> Orbit:
    return _orbit(g, "lc", limit)


def elc_preserved_witness(adj: Rows) -> tuple[int, int] | None:
    """First edge whose ELC changes the isomorphism class, or None if preserved."""
    sig = degree_signature(adj)
    base = None
    for u, row in enumerate(adj):
        for v in bits(row >> (u + 1)):
            v += u + 1
            h = _elc(adj, u, v)
            if h == adj:
                continue
            if degree_signature(h) != sig:
                return (u, v)
            if base is None:
                base = canon_rows(adj)
            if canon_rows(h) != base:
                return (u, v)
    return None


def is_elc_preserved(g: Graph) -> bool:
    _require_connected(g)
    return elc_preserved_witness(g.adj) is None


def is_lc_preserved(g: Graph) -> bool:
    _require_connected(g)
    sig = degree_signature(g.adj)
    base = None
    for h in lc_neighbours(g.adj):
        if h == g.adj:
            continue
        if degree_signature(h) != sig:
            return False
        if base is None:
            base = canon_rows(g.adj)
        if canon_rows(h) != base:
            return False
    return True


def partition_lc_orbit(g: Graph, limit: int | None = None) -> list[Orbit]:
    """Split the LC orbit of ``g`` into its ELC orbits (sorted by first member)."""
    _require_connected(g)
    lc_keys, truncated = orbit_keys(g.adj, "lc", limit)
    if truncated:
        raise OrbitCapExceeded("LC orbit exceeded the size cap")
    remaining = set(lc_keys)
    parts = []
    while remaining:
        start = min(remaining)
        keys, trunc = orbit_keys(start, "elc", limit)
        if trunc:
            raise OrbitCapExceeded("ELC orbit exceeded the size cap")
        if not keys <= lc_keys:
            raise AssertionError("ELC orbit escaped its LC orbit")
        remaining -= keys
        parts.append(Orbit("elc", tuple(sorted(keys))))
    parts.sort(key=lambda o: o.members[0])
    return parts


# --- orbits of graphs with a fixed, labelled bipartition ---------------------
#
# The three-class toggle without the label swap keeps every vertex on its
# side (the swap would move u and v across), so a member is a graph whose
# first ``a`` vertices are the marked side.


def marked_key(adj: Rows, a: int) -> Rows:
    n = len(adj)
    rows, _ = canonical_labeling(adj, [list(range(a)), list(range(a, n))])
    return rows


def marked_orbit_keys(adj: Rows, a: int, limit: int | None = None) -> tuple[set, bool]:
    """Closure under labelled ELC of a graph whose marked side is vertices ``0..a-1``."""
    if limit is None:
        limit = default_cap()
    start = marked_key(adj, a)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for x in frontier:
            for u in range(a):
                for v in bits(x[u]):
                    y = _elc(x, u, v)
                    k = marked_key(y, a)
                    if k not in seen:
                        seen.add(k)
                        if len(seen) > limit:
                            return seen, True
                        nxt.append(k)
        frontier = nxt
    return seen, False


def to_marked(g: Graph, side_mask: int) -> Rows:
    """Relabel ``g`` so the vertices of ``side_mask`` come first (order kept)."""
    first = [v for v in range(g.n) if (side_mask >> v) & 1]
    rest = [v for v in range(g.n) if not (side_mask >> v) & 1]
    perm = [0] * g.n
    for i, v in enumerate(first + rest):
        perm[v] = i
    return g.relabel(perm).adj


def marked_orbit(g: Graph, p: Bipartition, side: str = "left", limit: int | None = None):
    """Orbit of ``(g, side)`` under labelled ELC; returns ``(members, a, truncated)``."""
    if not p.is_valid_for(g):
        raise GraphError("bipartition is not valid for this graph")
    mask = p.side(side)
    a = mask.bit_count()
    keys, truncated = marked_orbit_keys(to_marked(g, mask), a, limit)
    return keys, a, truncated
