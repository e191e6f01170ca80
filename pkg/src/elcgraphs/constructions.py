"""Named graphs, recursive expansions, and the construction-expression grammar.

Labeling conventions (all deterministic):

* ``star_graph(n)``: centre 0, leaves 1..n-1.
* ``hamming_graph(r)``: U = 0..r-1; W vertices follow, ordered by subset
  size and then lexicographically by their U-neighbourhood.
* ``extended_hamming_graph(r)``: as above plus vertex 2^r - 1, joined to every
  even-degree vertex.
* ``hamming_expansion``: vertex v_i becomes w_{7i}..w_{7i+6} with the fixed
  nine-edge block ``HAMMING_BLOCK``.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .canonical import canon_rows
from .graph import Bipartition, Graph, GraphError, _lc, bits

# w_{7i+a} -- w_{7i+b} inside each block of a Hamming expansion
HAMMING_BLOCK = ((0, 3), (0, 4), (1, 3), (1, 5), (2, 4), (2, 5), (3, 6), (4, 6), (5, 6))


class ConstructionError(GraphError):
    """Parameters outside a construction's domain, or a malformed expression."""


def empty_graph(n: int) -> Graph:
    if n < 1:
        raise ConstructionError("e^n needs n >= 1")
    return Graph([0] * n, check=False)


def star_graph(n: int) -> Graph:
    if n < 2:
        raise ConstructionError("s^n needs n >= 2")
    return Graph.from_edges(n, [(0, i) for i in range(1, n)])


def complete_graph(n: int) -> Graph:
    if n < 3:
        raise ConstructionError("c^n needs n >= 3")
    full = (1 << n) - 1
    return Graph([full & ~(1 << i) for i in range(n)], check=False)


def _complete_any(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph([full & ~(1 << i) for i in range(n)], check=False)


def substitute(g: Graph, v: int, h: Graph) -> Graph:
    """Replace vertex ``v`` of ``g`` by ``h``; h's vertices inherit v's neighbours.

    The new vertices take labels v..v+h.n-1; later vertices of ``g`` shift up.
    """
    if not 0 <= v < g.n:
        raise ConstructionError(f"vertex {v} out of range for order {g.n}")
    shift = h.n - 1

    def new(x):
        return x if x < v else x + shift

    block = ((1 << h.n) - 1) << v
    rows = [0] * (g.n + shift)
    for x in range(g.n):
        if x == v:
            continue
        m = 0
        for y in bits(g.adj[x]):
            m |= block if y == v else 1 << new(y)
        rows[new(x)] = m
    outside = 0
    for y in bits(g.adj[v]):
        outside |= 1 << new(y)
    for i in range(h.n):
        rows[v + i] = (h.adj[i] << v) | outside
    return Graph(rows)


def add_pendant(g: Graph, v: int) -> Graph:
    if not 0 <= v < g.n:
        raise ConstructionError(f"vertex {v} out of range for order {g.n}")
    rows = list(g.adj) + [1 << v]
    rows[v] |= 1 << g.n
    return Graph(rows, check=False)


def _require_bipartition(g: Graph, p: Bipartition | None) -> Bipartition:
    if p is None:
        if not g.is_connected():
            raise ConstructionError("star expansion needs a connected graph")
        p = g.bipartition()
        if p is None:
            raise ConstructionError("star expansion needs a bipartite graph")
    elif not p.is_valid_for(g):
        raise ConstructionError("bipartition is not valid for this graph")
    return p


def star_expansion(g: Graph, p: Bipartition | None, side: str, m: int) -> Graph:
    """Substitute every vertex of ``side`` by e^m and hang m-1 pendants on the others.

    Substituted vertex x becomes m consecutive labels in the original order;
    the pendants are appended at the end, grouped by anchor.
    """
    if m <= 1:
        raise ConstructionError("star expansion needs m > 1")
    p = _require_bipartition(g, p)
    sub = p.side(side)
    start = []
    pos = 0
    for x in range(g.n):
        start.append(pos)
        pos += m if (sub >> x) & 1 else 1
    total = pos + (m - 1) * (g.n - sub.bit_count())
    if total > 64:
        raise ConstructionError(f"result would have {total} > 64 vertices")
    edges = []
    for x, y in g.edges():
        xs = range(start[x], start[x] + (m if (sub >> x) & 1 else 1))
        ys = range(start[y], start[y] + (m if (sub >> y) & 1 else 1))
        edges.extend((a, b) for a in xs for b in ys)
    for x in range(g.n):
        if not (sub >> x) & 1:
            for _ in range(m - 1):
                edges.append((start[x], pos))
                pos += 1
    return Graph.from_edges(total, edges)


def star_expansion_signed(g: Graph, m: int, sign: str) -> Graph:
    """S+^m (substitute the larger side), S-^m (the smaller) or S^m (equal sides, left)."""
    p = _require_bipartition(g, None)
    a, b = p.sizes
    if sign == "+":
        side = "left" if a > b else "right"
    elif sign == "-":
        side = "left" if a < b else "right"
    else:
        side = "left"
    if sign in ("+", "-") and a == b:
        raise ConstructionError("S+/S- need unequal partitions; use S^m")
    if sign == "" and a != b:
        raise ConstructionError("S^m without a sign needs equal partitions; use S+ or S-")
    return star_expansion(g, p, side, m)


def clique_expansion(g: Graph, m: int) -> Graph:
    if m <= 1:
        raise ConstructionError("clique expansion needs m > 1")
    if g.n * m > 64:
        raise ConstructionError(f"result would have {g.n * m} > 64 vertices")
    block = (1 << m) - 1
    rows = []
    for x in range(g.n):
        outside = 0
        for y in bits(g.adj[x]):
            outside |= block << (y * m)
        for i in range(m):
            rows.append(outside | ((block << (x * m)) & ~(1 << (x * m + i))))
    return Graph(rows, check=False)


def hamming_graph(r: int) -> Graph:
    if r < 3:
        raise ConstructionError("h^r needs r >= 3")
    if 2**r - 1 > 64:
        raise ConstructionError("h^r exceeds 64 vertices")
    edges = []
    w = r
    for size in range(2, r + 1):
        for subset in combinations(range(r), size):
            edges.extend((u, w) for u in subset)
            w += 1
    return Graph.from_edges(w, edges)


def extended_hamming_graph(r: int) -> Graph:
    h = hamming_graph(r)
    n = h.n
    if n + 1 > 64:
        raise ConstructionError("h^r_e exceeds 64 vertices")
    even = [v for v in range(n) if h.degree(v) % 2 == 0]
    return Graph.from_edges(n + 1, h.edges() + [(v, n) for v in even])


def hamming_u_side(r: int) -> list[int]:
    """The r+1 vertices of the small partition of ``extended_hamming_graph(r)``."""
    return list(range(r)) + [2**r - 1]


def lc_sequence(g: Graph, vs: Sequence[int]) -> Graph:
    adj = g.adj
    for v in vs:
        if not 0 <= v < g.n:
            raise ConstructionError(f"vertex {v} out of range for order {g.n}")
        adj = _lc(adj, v)
    return Graph(adj, check=False)


def h_star(r: int) -> Graph:
    return lc_sequence(extended_hamming_graph(r), hamming_u_side(r))


def hamming_expansion(g: Graph) -> Graph:
    if 7 * g.n > 64:
        raise ConstructionError(f"H(G) would have {7 * g.n} > 64 vertices")
    edges = []
    for i in range(g.n):
        edges.extend((7 * i + a, 7 * i + b) for a, b in HAMMING_BLOCK)
    for i, j in g.edges():
        edges.extend((7 * i + a, 7 * j + b) for a in range(3) for b in range(3))
    return Graph.from_edges(7 * g.n, edges)


def hamming_clique_expansion(k: int, m: int) -> Graph:
    if k < 1 or m < 1:
        raise ConstructionError("H_k^m needs k >= 1 and m >= 1")
    n = 7 * k + m
    if n > 64:
        raise ConstructionError(f"H_k^m would have {n} > 64 vertices")
    base = hamming_expansion(_complete_any(k))
    edges = base.edges()
    clique = range(7 * k, n)
    edges.extend((a, b) for a in clique for b in clique if a < b)
    hubs = [7 * i + a for i in range(k) for a in range(3)]
    edges.extend((x, y) for x in clique for y in hubs)
    return Graph.from_edges(n, edges)


def _circulant(m: int) -> Graph:
    half = 2 * m
    edges = [(i, half + j) for i in range(half) for j in range(half) if i != j]
    return Graph.from_edges(2 * half, edges)


def circulant_size_two(m: int) -> Graph:
    """(2m, 2m)-bipartite graph with v_i ~ w_j for all i != j; v_i = i, w_j = 2m + j."""
    if m < 3:
        raise ConstructionError("the circulant family needs m >= 3")
    if 4 * m > 64:
        raise ConstructionError("circulant graph exceeds 64 vertices")
    return _circulant(m)


# --- construction expressions ------------------------------------------------

_ATOM_RANK = {"e": 0, "s": 0, "c": 0, "h": 1, "he": 2, "hstar": 3, "Hkm": 4, "circ": 5}


@dataclass(frozen=True)
class ConstructionSpec:
    """Expression tree node.

    Atoms: ``op`` in e/s/c/h/he/hstar/Hkm/circ with integer ``params``.
    Operators: ``S+``, ``S-``, ``S`` and ``C`` (params = (m,)) and ``H``
    (no params), each with one ``child``.
    """

    op: str
    params: tuple[int, ...] = ()
    child: "ConstructionSpec | None" = None

    def __str__(self) -> str:
        return self.text()

    def text(self) -> str:
        op, p = self.op, self.params
        if op == "Hkm":
            return f"Hkm({p[0]},{p[1]})"
        if op == "circ":
            return f"circ({p[0]})"
        if self.child is None:
            return f"{op}{p[0]}"
        if op == "H":
            return f"H({self.child.text()})"
        return f"{op}{p[0]}({self.child.text()})"

    def latex(self) -> str:
        op, p = self.op, self.params
        if op in ("e", "s", "c", "h"):
            return f"{op}^{p[0]}"
        if op == "he":
            return f"h^{p[0]}_e"
        if op == "hstar":
            return f"h^{p[0]}_*"
        if op == "Hkm":
            return f"H_{p[0]}^{p[1]}"
        if op == "circ":
            return f"circ({p[0]})"
        inner = self.child.latex()
        if op == "H":
            return f"H({inner})"
        if op in ("S+", "S-"):
            return f"S_{op[1]}^{p[0]}({inner})"
        return f"{op}^{p[0]}({inner})"

    @property
    def operator_count(self) -> int:
        return 0 if self.child is None else 1 + self.child.operator_count

    def atom(self) -> "ConstructionSpec":
        return self if self.child is None else self.child.atom()

    def cost(self) -> tuple:
        """Naming preference: fewer operators, then simpler atoms, then text."""
        t = self.text()
        return (self.operator_count, _ATOM_RANK[self.atom().op], len(t), t)

    def order(self) -> int:
        op, p = self.op, self.params
        if op in ("e", "s", "c"):
            return p[0]
        if op == "h":
            return 2 ** p[0] - 1
        if op in ("he", "hstar"):
            return 2 ** p[0]
        if op == "Hkm":
            return 7 * p[0] + p[1]
        if op == "circ":
            return 4 * p[0]
        if op == "H":
            return 7 * self.child.order()
        return p[0] * self.child.order()


_NORMALISE = [
    (re.compile(r"H_(\d+)\^(\d+)"), r"Hkm(\1,\2)"),
    (re.compile(r"h\^?(\d+)_e"), r"he\1"),
    (re.compile(r"h\^?(\d+)_\*"), r"hstar\1"),
    (re.compile(r"S_?([+-])\^?(\d+)"), r"S\1\2"),
    (re.compile(r"S_([+-])"), r"S\1"),
]


def _normalise(text: str) -> str:
    s = text.replace("−", "-").replace("–", "-")
    s = re.sub(r"[\s{}$]", "", s)
    for pat, rep in _NORMALISE:
        s = pat.sub(rep, s)
    return s.replace("^", "")


class _Parser:
    def __init__(self, text: str):
        self.s = text
        self.i = 0

    def fail(self, msg: str):
        raise ConstructionError(f"{msg} at position {self.i} in {self.s!r}")

    def take(self, lit: str) -> bool:
        if self.s.startswith(lit, self.i):
            self.i += len(lit)
            return True
        return False

    def expect(self, lit: str):
        if not self.take(lit):
            self.fail(f"expected {lit!r}")

    def int(self) -> int:
        m = re.compile(r"\d+").match(self.s, self.i)
        if not m:
            self.fail("expected an integer")
        self.i = m.end()
        return int(m.group())

    def expr(self) -> ConstructionSpec:
        if self.take("Hkm("):
            k = self.int()
            self.expect(",")
            m = self.int()
            self.expect(")")
            return ConstructionSpec("Hkm", (k, m))
        if self.take("circ("):
            m = self.int()
            self.expect(")")
            return ConstructionSpec("circ", (m,))
        if self.take("H("):
            child = self.expr()
            self.expect(")")
            return ConstructionSpec("H", (), child)
        for op in ("S+", "S-", "S", "C"):
            if self.take(op):
                m = self.int()
                self.expect("(")
                child = self.expr()
                self.expect(")")
                return ConstructionSpec(op, (m,), child)
        for atom in ("hstar", "he", "h", "e", "s", "c"):
            if self.take(atom):
                return ConstructionSpec(atom, (self.int(),))
        self.fail("unknown construction")


def parse_spec(text: str) -> ConstructionSpec:
    """Parse ``S-2(s3)``-style text; LaTeX-like notation such as ``S_-^2(s^3)`` is accepted too."""
    p = _Parser(_normalise(text))
    spec = p.expr()
    if p.i != len(p.s):
        p.fail("trailing characters")
    return spec


def build(spec: ConstructionSpec | str, strict: bool = False) -> Graph:
    """Evaluate a construction expression.

    In strict mode the inputs of S, C and H must be ELC-preserved; otherwise a
    warning is issued and the graph is built anyway.
    """
    if isinstance(spec, str):
        spec = parse_spec(spec)
    op, p = spec.op, spec.params
    if op == "e":
        return empty_graph(p[0])
    if op == "s":
        return star_graph(p[0])
    if op == "c":
        return complete_graph(p[0])
    if op == "h":
        return hamming_graph(p[0])
    if op == "he":
        return extended_hamming_graph(p[0])
    if op == "hstar":
        return h_star(p[0])
    if op == "Hkm":
        return hamming_clique_expansion(*p)
    if op == "circ":
        return circulant_size_two(p[0])
    inner = build(spec.child, strict)
    _check_input(spec, inner, strict)
    if op == "H":
        return hamming_expansion(inner)
    if op == "C":
        return clique_expansion(inner, p[0])
    return star_expansion_signed(inner, p[0], op[1:])


def _check_input(spec: ConstructionSpec, g: Graph, strict: bool) -> None:
    from .orbits import elc_preserved_witness

    if g.n == 1 or (g.is_connected() and elc_preserved_witness(g.adj) is None):
        return
    msg = f"input {spec.child.text()} of {spec.op} is not a connected ELC-preserved graph"
    if strict:
        raise ConstructionError(msg)
    warnings.warn(msg, stacklevel=3)


# --- candidate names for the classifier --------------------------------------


def _atoms(n: int) -> list[ConstructionSpec]:
    out = []
    if n >= 2:
        out.append(ConstructionSpec("s", (n,)))
    if n >= 3:
        out.append(ConstructionSpec("c", (n,)))
    for r in range(3, 7):
        if n == 2**r - 1:
            out.append(ConstructionSpec("h", (r,)))
        if n == 2**r:
            out.append(ConstructionSpec("he", (r,)))
            out.append(ConstructionSpec("hstar", (r,)))
    for k in range(1, n // 7 + 1):
        if n - 7 * k >= 1:
            out.append(ConstructionSpec("Hkm", (k, n - 7 * k)))
    return out


@lru_cache(maxsize=None)
def grammar_classes(n: int) -> dict:
    """Isomorphism classes reachable by the construction grammar at order ``n``.

    Returns ``{canonical rows: (preferred spec, bipartite)}``.  Order 1 holds
    only e^1, which feeds C^m(e^1) and H(e^1).
    """
    if n == 1:
        e1 = ConstructionSpec("e", (1,))
        return {canon_rows(empty_graph(1).adj): (e1, False)}
    specs = list(_atoms(n))
    for m in range(2, n + 1):
        if n % m:
            continue
        for sub, (child, bip) in grammar_classes(n // m).items():
            specs.append(ConstructionSpec("C", (m,), child))
            if bip and n // m >= 2:
                g = Graph(sub, check=False)
                a, b = g.bipartition().sizes
                if a == b:
                    specs.append(ConstructionSpec("S", (m,), child))
                else:
                    specs.append(ConstructionSpec("S+", (m,), child))
                    specs.append(ConstructionSpec("S-", (m,), child))
    if n % 7 == 0:
        for child, _ in grammar_classes(n // 7).values():
            specs.append(ConstructionSpec("H", (), child))
    out: dict = {}
    for spec in specs:
        g = build(spec)
        key = canon_rows(g.adj)
        prev = out.get(key)
        if prev is None or spec.cost() < prev[0].cost():
            out[key] = (spec, g.is_bipartite())
    return out
