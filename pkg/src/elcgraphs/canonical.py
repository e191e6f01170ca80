"""Canonical labeling and isomorphism testing.

Equitable partition refinement followed by individualization of vertices in
the first smallest non-singleton cell.  The canonical leaf is the one whose
relabeled adjacency rows are lexicographically smallest.  Automorphisms found
when two leaves produce the same rows prune the search in two ways: children
of a node that lie in one orbit of the automorphisms fixing the node's prefix
are explored once, and a leaf equal to the first or best leaf abandons the
whole branch back to the common ancestor.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .formats import adj_to_graph6
from .graph import Bipartition, Graph, GraphError


def _refine(adj, n, lab, ends, active):
    inq = bytearray(n)
    for s in active:
        inq[s] = 1
    q = deque(active)
    ncells = len(_cell_starts(ends, n))
    while q and ncells < n:
        s = q.popleft()
        inq[s] = 0
        e = ends[s]
        smask = 0
        for k in range(s, e):
            smask |= 1 << lab[k]
        i = 0
        while i < n:
            e2 = ends[i]
            if e2 - i > 1:
                seg = lab[i:e2]
                cnt = [(adj[x] & smask).bit_count() for x in seg]
                c0 = cnt[0]
                for c in cnt:
                    if c != c0:
                        break
                else:
                    i = e2
                    continue
                order = sorted(range(e2 - i), key=cnt.__getitem__)
                starts = []
                prev = -1
                pos = i
                for idx in order:
                    lab[pos] = seg[idx]
                    c = cnt[idx]
                    if c != prev:
                        starts.append(pos)
                        prev = c
                    pos += 1
                starts.append(e2)
                big = i
                bigsize = 0
                for a, b in zip(starts, starts[1:]):
                    ends[a] = b
                    if b - a > bigsize:
                        bigsize = b - a
                        big = a
                ncells += len(starts) - 2
                if inq[i]:
                    for a in starts[1:-1]:
                        q.append(a)
                        inq[a] = 1
                else:
                    for a in starts[:-1]:
                        if a != big:
                            q.append(a)
                            inq[a] = 1
            i = e2


def _cell_starts(ends, n):
    # ends[] is only meaningful at cell starts; entries inside cells are stale
    out = []
    i = 0
    while i < n:
        out.append(i)
        i = ends[i]
    return out


class _Search:
    __slots__ = ("adj", "n", "first", "first_lab", "first_path", "best", "best_lab",
                 "best_path", "autos")

    def __init__(self, adj, n):
        self.adj = adj
        self.n = n
        self.first = None
        self.first_lab = None
        self.first_path = None
        self.best = None
        self.best_lab = None
        self.best_path = None
        self.autos = []

    def certificate(self, lab):
        n = self.n
        inv = [0] * n
        for i, v in enumerate(lab):
            inv[v] = i
        adj = self.adj
        rows = []
        for v in lab:
            a = adj[v]
            r = 0
            while a:
                low = a & -a
                r |= 1 << inv[low.bit_length() - 1]
                a ^= low
            rows.append(r)
        return tuple(rows)

    def leaf(self, lab, path):
        cert = self.certificate(lab)
        if self.first is None:
            self.first = self.best = cert
            self.first_lab = self.best_lab = list(lab)
            self.first_path = self.best_path = list(path)
            return None
        if cert == self.first:
            self._record(self.first_lab, lab)
            return _common_prefix(path, self.first_path)
        if cert < self.best:
            self.best = cert
            self.best_lab = list(lab)
            self.best_path = list(path)
            return None
        if cert == self.best:
            self._record(self.best_lab, lab)
            return _common_prefix(path, self.best_path)
        return None

    def _record(self, lab_a, lab_b):
        perm = [0] * self.n
        for x, y in zip(lab_a, lab_b):
            perm[x] = y
        self.autos.append(perm)

    def node(self, lab, ends, path):
        n = self.n
        depth = len(path)
        target = -1
        tsize = n + 1
        i = 0
        while i < n:
            e = ends[i]
            size = e - i
            if 1 < size < tsize:
                target = i
                tsize = size
                if size == 2:
                    break
            i = e
        if target < 0:
            return self.leaf(lab, path)
        t = target
        e = t + tsize
        cell = lab[t:e]
        explored = []
        seen_autos = -1
        parent = None
        for v in cell:
            if explored and self.autos:
                if len(self.autos) != seen_autos:
                    seen_autos = len(self.autos)
                    parent = _orbits(n, [g for g in self.autos if all(g[p] == p for p in path)])
                if parent is not None:
                    rv = _find(parent, v)
                    if any(_find(parent, u) == rv for u in explored):
                        continue
            clab = list(lab)
            cends = list(ends)
            j = clab.index(v, t, e)
            clab[t], clab[j] = clab[j], clab[t]
            cends[t] = t + 1
            cends[t + 1] = e
            _refine(self.adj, n, clab, cends, [t])
            path.append(v)
            jump = self.node(clab, cends, path)
            path.pop()
            if jump is not None and jump < depth:
                return jump
            explored.append(v)
        return None


def _common_prefix(a, b):
    k = 0
    for x, y in zip(a, b):
        if x != y:
            break
        k += 1
    return k


def _orbits(n, gens):
    if not gens:
        return None
    parent = list(range(n))
    for g in gens:
        for x in range(n):
            y = g[x]
            if y != x:
                rx = _find(parent, x)
                ry = _find(parent, y)
                if rx != ry:
                    parent[rx] = ry
    return parent


def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def canonical_labeling(
    adj: Sequence[int], colours: Sequence[Sequence[int]] | None = None
) -> tuple[tuple[int, ...], list[int]]:
    """Canonical adjacency rows and the vertex order that produces them.

    ``colours`` is an optional ordered list of vertex classes; only
    permutations that keep every class fixed are considered.  Returns
    ``(rows, lab)`` with ``lab[i]`` the input vertex at canonical position ``i``.
    """
    adj = tuple(adj)
    n = len(adj)
    if n == 0:
        return (), []
    if colours is None:
        lab = list(range(n))
        ends = [n] * n
        starts = [0]
    else:
        lab = [v for cls in colours for v in cls]
        if sorted(lab) != list(range(n)):
            raise GraphError("colour classes must partition the vertex set")
        ends = [0] * n
        starts = []
        pos = 0
        for cls in colours:
            if cls:
                starts.append(pos)
                ends[pos] = pos + len(cls)
                pos += len(cls)
    _refine(adj, n, lab, ends, starts)
    search = _Search(adj, n)
    search.node(lab, ends, [])
    return search.best, search.best_lab


def canon_rows(adj: Sequence[int]) -> tuple[int, ...]:
    """Canonical adjacency rows only; the hashable key used by the orbit engine."""
    return canonical_labeling(adj)[0]


def invariant_vector(adj: Sequence[int]) -> tuple:
    """(n, edge count, sorted degrees, sorted per-vertex triangle counts)."""
    degs = [r.bit_count() for r in adj]
    tri = []
    for v, row in enumerate(adj):
        t = 0
        a = row
        while a:
            low = a & -a
            t += (adj[low.bit_length() - 1] & row).bit_count()
            a ^= low
        tri.append(t >> 1)
    return (len(adj), sum(degs) >> 1, tuple(sorted(degs)), tuple(sorted(tri)))


@dataclass(frozen=True)
class CanonicalForm:
    """Certificate of an isomorphism class.

    ``canon_bytes`` is the invariant vector followed by the graph6 string of the
    canonically relabeled graph; equality of ``canon_bytes`` is equivalent to
    isomorphism.  ``relabeling[v]`` is the canonical label of input vertex ``v``.
    """

    canon_bytes: bytes = field(repr=False)
    graph6: str
    relabeling: tuple[int, ...] = field(compare=False, hash=False)
    swapped: bool = field(default=False, compare=False, hash=False)

    def graph(self) -> Graph:
        from .formats import from_graph6

        return from_graph6(self.graph6)

    def __lt__(self, other: "CanonicalForm") -> bool:
        return self.canon_bytes < other.canon_bytes


def _pack(prefix: tuple, rows: tuple[int, ...], tag: bytes = b"") -> tuple[bytes, str]:
    g6 = adj_to_graph6(rows)
    head = repr(prefix).encode("ascii")
    return tag + head + b"|" + g6.encode("ascii"), g6


def canonical_form(g: Graph) -> CanonicalForm:
    rows, lab = canonical_labeling(g.adj)
    relab = [0] * g.n
    for i, v in enumerate(lab):
        relab[v] = i
    key, g6 = _pack(invariant_vector(g.adj), rows)
    return CanonicalForm(key, g6, tuple(relab))


def are_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.edge_count != h.edge_count:
        return False
    if sorted(g.degrees()) != sorted(h.degrees()):
        return False
    return canon_rows(g.adj) == canon_rows(h.adj)


def _side_lists(p: Bipartition, n: int) -> tuple[list[int], list[int]]:
    left = [v for v in range(n) if (p.left >> v) & 1]
    right = [v for v in range(n) if (p.right >> v) & 1]
    return left, right


def bipartite_canonical_rows(
    adj: Sequence[int], left: int, allow_swap: bool = True
) -> tuple[tuple[int, tuple[int, ...]], bool]:
    """Canonical key of a graph with a marked side; see ``bipartite_canonical_form``."""
    n = len(adj)
    full = (1 << n) - 1
    right = full & ~left
    lv = [v for v in range(n) if (left >> v) & 1]
    rv = [v for v in range(n) if (right >> v) & 1]
    rows, _ = canonical_labeling(adj, [lv, rv])
    key = (len(lv), rows)
    if allow_swap and len(lv) == len(rv):
        rows2, _ = canonical_labeling(adj, [rv, lv])
        key2 = (len(rv), rows2)
        if key2 < key:
            return key2, True
    return key, False


def bipartite_canonical_form(
    g: Graph, p: Bipartition, allow_swap: bool = True
) -> CanonicalForm:
    """Canonical form under permutations that map the bipartition onto itself.

    With ``allow_swap`` and equal side sizes the two sides may be exchanged;
    ``swapped`` records whether the exchanged labeling gave the minimum.
    """
    if not p.is_valid_for(g):
        raise GraphError("bipartition is not valid for this graph")
    left, right = _side_lists(p, g.n)
    rows, lab = canonical_labeling(g.adj, [left, right])
    swapped = False
    if allow_swap and len(left) == len(right):
        rows2, lab2 = canonical_labeling(g.adj, [right, left])
        if rows2 < rows:
            rows, lab, swapped = rows2, lab2, True
    relab = [0] * g.n
    for i, v in enumerate(lab):
        relab[v] = i
    prefix = (len(left), len(right)) if not swapped else (len(right), len(left))
    key, g6 = _pack(invariant_vector(g.adj) + (prefix,), rows, b"B")
    return CanonicalForm(key, g6, tuple(relab), swapped)
