"""Simple undirected graphs stored as per-vertex bitsets.

A graph of order ``n`` is a tuple of ``n`` ints; bit ``j`` of ``adj[i]`` is set
when ``{i, j}`` is an edge.  The ``Graph`` class is a thin immutable wrapper.
The module-level ``_lc`` / ``_elc`` helpers work on the raw tuples and are what
the orbit engine calls in its inner loop.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

MAX_ORDER = 64


class GraphError(ValueError):
    """Invalid graph data or an operation applied outside its domain."""


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


# --- raw tuple kernels -------------------------------------------------------


def _lc(adj: tuple[int, ...], v: int) -> tuple[int, ...]:
    nv = adj[v]
    if nv & (nv - 1) == 0:  # fewer than two neighbours
        return adj
    rows = list(adj)
    w = nv
    while w:
        low = w & -w
        x = low.bit_length() - 1
        rows[x] ^= nv ^ low
        w ^= low
    return tuple(rows)


def _elc(adj: tuple[int, ...], u: int, v: int) -> tuple[int, ...]:
    """Pivot on edge {u, v} by the three-class toggle rule, without the u/v swap."""
    bu = 1 << u
    bv = 1 << v
    nu = adj[u] & ~bv
    nv = adj[v] & ~bu
    both = nu & nv
    a = nu ^ both
    b = nv ^ both
    if not (a or b):
        return adj
    rows = list(adj)
    for cls, other in ((a, b | both), (b, a | both), (both, a | b)):
        w = cls
        while w:
            low = w & -w
            rows[low.bit_length() - 1] ^= other
            w ^= low
    return tuple(rows)


def _swap_labels(adj: tuple[int, ...], u: int, v: int) -> tuple[int, ...]:
    bu = 1 << u
    bv = 1 << v
    both = bu | bv
    rows = []
    for row in adj:
        hit = row & both
        if hit == bu or hit == bv:
            row ^= both
        rows.append(row)
    rows[u], rows[v] = rows[v], rows[u]
    return tuple(rows)


def _edge_count(adj: Sequence[int]) -> int:
    return sum(r.bit_count() for r in adj) >> 1


def _is_connected(adj: Sequence[int]) -> bool:
    n = len(adj)
    if n <= 1:
        return True
    seen = 1
    frontier = 1
    full = (1 << n) - 1
    while frontier:
        nxt = 0
        for x in bits(frontier):
            nxt |= adj[x]
        frontier = nxt & ~seen
        seen |= frontier
    return seen == full


def _two_colour(adj: Sequence[int]) -> int | None:
    """Return the mask of vertices coloured like their component's least vertex, or None."""
    n = len(adj)
    left = 0
    right = 0
    unseen = (1 << n) - 1
    while unseen:
        start = unseen & -unseen
        side = start
        other = 0
        frontier = start
        parity = 0
        while frontier:
            nxt = 0
            for x in bits(frontier):
                nxt |= adj[x]
            if nxt & (side if parity == 0 else other):
                return None
            if parity == 0:
                nxt &= ~other
                other |= nxt
            else:
                nxt &= ~side
                side |= nxt
            frontier = nxt
            parity ^= 1
        if side & other:
            return None
        left |= side
        right |= other
        unseen &= ~(side | other)
    return left


# --- value types -------------------------------------------------------------


@dataclass(frozen=True)
class Bipartition:
    left: int
    right: int

    @property
    def sizes(self) -> tuple[int, int]:
        return self.left.bit_count(), self.right.bit_count()

    def side(self, which: str) -> int:
        if which == "left":
            return self.left
        if which == "right":
            return self.right
        raise GraphError(f"side must be 'left' or 'right', got {which!r}")

    def swapped(self) -> "Bipartition":
        return Bipartition(self.right, self.left)

    def is_valid_for(self, g: "Graph") -> bool:
        full = (1 << g.n) - 1
        if self.left & self.right or (self.left | self.right) != full:
            return False
        for v in range(g.n):
            own = self.left if (self.left >> v) & 1 else self.right
            if g.adj[v] & own:
                return False
        return True


class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``."""

    __slots__ = ("n", "adj", "_hash")

    def __init__(self, adj: Sequence[int], *, check: bool = True):
        adj = tuple(adj)
        n = len(adj)
        if n < 1 or n > MAX_ORDER:
            raise GraphError(f"order must be in 1..{MAX_ORDER}, got {n}")
        if check:
            full = (1 << n) - 1
            for i, row in enumerate(adj):
                if row < 0 or row & ~full:
                    raise GraphError(f"row {i} has bits outside 0..{n - 1}")
                if (row >> i) & 1:
                    raise GraphError(f"loop at vertex {i}")
                for j in bits(row):
                    if not (adj[j] >> i) & 1:
                        raise GraphError(f"asymmetric pair ({i}, {j})")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "adj", adj)
        object.__setattr__(self, "_hash", hash(adj))

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.adj == other.adj

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()!r})"

    def __reduce__(self):
        return (_unpickle, (self.adj,))

    # construction helpers

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(rows, check=False)

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[int]]) -> "Graph":
        rows = []
        for row in matrix:
            m = 0
            for j, x in enumerate(row):
                if x:
                    m |= 1 << j
            rows.append(m)
        if any(len(r) != len(matrix) for r in matrix):
            raise GraphError("adjacency matrix must be square")
        return cls(rows)

    # basic queries

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u, row in enumerate(self.adj):
            for v in bits(row >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    @property
    def edge_count(self) -> int:
        return _edge_count(self.adj)

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        return bool((self.adj[u] >> v) & 1)

    def degree(self, v: int) -> int:
        return self.neighborhood(v).bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.adj]

    def neighborhood(self, v: int) -> int:
        self._check_vertex(v)
        return self.adj[v]

    def neighbors(self, v: int) -> list[int]:
        return list(bits(self.neighborhood(v)))

    def to_matrix(self) -> list[list[int]]:
        return [[(row >> j) & 1 for j in range(self.n)] for row in self.adj]

    def _check_vertex(self, v: int) -> None:
        if not (0 <= v < self.n):
            raise GraphError(f"vertex {v} out of range for order {self.n}")

    def _check_edge(self, u: int, v: int) -> None:
        self._check_vertex(u)
        self._check_vertex(v)
        if not (self.adj[u] >> v) & 1:
            raise GraphError(f"{{{u}, {v}}} is not an edge")

    # transformations (every one returns a new graph)

    def local_complement(self, v: int) -> "Graph":
        self._check_vertex(v)
        return Graph(_lc(self.adj, v), check=False)

    def elc(self, u: int, v: int) -> "Graph":
        """Edge local complementation with the final u <-> v label swap."""
        self._check_edge(u, v)
        return Graph(_swap_labels(_elc(self.adj, u, v), u, v), check=False)

    def elc_via_lc(self, u: int, v: int, order: str = "uvu") -> "Graph":
        """``G*u*v*u`` (or ``G*v*u*v`` with ``order="vuv"``); no label swap."""
        self._check_edge(u, v)
        if order == "uvu":
            seq = (u, v, u)
        elif order == "vuv":
            seq = (v, u, v)
        else:
            raise GraphError(f"order must be 'uvu' or 'vuv', got {order!r}")
        adj = self.adj
        for x in seq:
            adj = _lc(adj, x)
        return Graph(adj, check=False)

    def elc_bipartite(self, u: int, v: int) -> "Graph":
        """Toggle all pairs between N_u - {v} and N_v - {u}, then swap u and v.

        Only valid on bipartite graphs, where the common-neighbour class is empty.
        """
        self._check_edge(u, v)
        a = self.adj[u] & ~(1 << v)
        b = self.adj[v] & ~(1 << u)
        if a & b:
            raise GraphError("u and v share a neighbour; graph is not bipartite")
        rows = list(self.adj)
        for x in bits(a):
            rows[x] ^= b
        for y in bits(b):
            rows[y] ^= a
        return Graph(_swap_labels(tuple(rows), u, v), check=False)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with vertex ``i`` renamed to ``perm[i]``."""
        if sorted(perm) != list(range(self.n)):
            raise GraphError("relabeling must be a permutation of 0..n-1")
        rows = [0] * self.n
        for i, row in enumerate(self.adj):
            m = 0
            for j in bits(row):
                m |= 1 << perm[j]
            rows[perm[i]] = m
        return Graph(rows, check=False)

    def induced_subgraph(self, w: int | Iterable[int]) -> "Graph":
        """Subgraph on the vertex set ``w`` (bitset or iterable), relabeled in increasing order."""
        if not isinstance(w, int):
            w = mask_of(w)
        if w >> self.n:
            raise GraphError("vertex set is not a subset of V")
        keep = list(bits(w))
        pos = {v: i for i, v in enumerate(keep)}
        rows = []
        for v in keep:
            rows.append(mask_of(pos[x] for x in bits(self.adj[v] & w)))
        return Graph(rows, check=False)

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph(
            [(~row & full) & ~(1 << i) for i, row in enumerate(self.adj)], check=False
        )

    # predicates

    def is_connected(self) -> bool:
        return _is_connected(self.adj)

    def bipartition(self) -> Bipartition | None:
        """Two-colouring with vertex 0 on the left, or None for non-bipartite graphs.

        For disconnected graphs the least vertex of every component goes left.
        """
        left = _two_colour(self.adj)
        if left is None:
            return None
        return Bipartition(left, ((1 << self.n) - 1) & ~left)

    def is_bipartite(self) -> bool:
        return _two_colour(self.adj) is not None

    def is_odd(self) -> bool:
        return all(r.bit_count() & 1 for r in self.adj)

    def is_even(self) -> bool:
        return not any(r.bit_count() & 1 for r in self.adj)


def _unpickle(adj):
    return Graph(adj, check=False)


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])
