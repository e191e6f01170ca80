"""Binary linear codes and their bipartite graphs.

Matrices are lists of row bitsets: bit ``j`` of a row is column ``j``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .constructions import HAMMING_BLOCK
from .graph import Bipartition, Graph, GraphError, bits
from .orbits import OrbitCapExceeded, marked_key, marked_orbit, marked_orbit_keys, to_marked

BRUTE_FORCE_MAX_K = 24


class CodeError(ValueError):
    pass


class CapacityError(CodeError):
    """Brute-force enumeration would exceed the configured dimension limit."""


def gf2_rank(rows: Iterable[int]) -> int:
    basis: list[int] = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis.append(r)
    return len(basis)


def standard_form(generator: Sequence[int], n: int) -> tuple[list[int], list[int]]:
    """Reduce a k x n generator to (I | P) by row operations and column swaps.

    Pivots are taken from the leftmost column that still has a one among the
    unreduced rows and moved to the next identity position.  Returns ``(P,
    perm)`` where ``P`` has k rows of width n-k and column ``i`` of the reduced
    matrix is column ``perm[i]`` of the input.
    """
    rows = list(generator)
    k = len(rows)
    perm = list(range(n))
    r = 0
    for pos in range(n):
        if r == k:
            break
        col = None
        for c in range(pos, n):
            src = perm[c]
            if any((rows[i] >> src) & 1 for i in range(r, k)):
                col = c
                break
        if col is None:
            break
        perm[pos], perm[col] = perm[col], perm[pos]
        src = perm[pos]
        piv = next(i for i in range(r, k) if (rows[i] >> src) & 1)
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(k):
            if i != r and (rows[i] >> src) & 1:
                rows[i] ^= rows[r]
        r += 1
    if r < k:
        raise CodeError(f"generator has rank {r} < {k} rows")
    P = []
    for row in rows:
        p = 0
        for j in range(k, n):
            if (row >> perm[j]) & 1:
                p |= 1 << (j - k)
        P.append(p)
    return P, perm


@dataclass(frozen=True)
class LinearCode:
    """An [n, k] binary code with its standard-form data.

    ``generator`` is as supplied; ``P`` and ``perm`` come from
    ``standard_form`` so that ``(I | P)`` generates the column-permuted code.
    """

    n: int
    generator: tuple[int, ...]
    P: tuple[int, ...] = field(init=False)
    perm: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        if any(r >> self.n for r in self.generator):
            raise CodeError("generator row wider than n")
        P, perm = standard_form(self.generator, self.n)
        object.__setattr__(self, "P", tuple(P))
        object.__setattr__(self, "perm", tuple(perm))

    @property
    def k(self) -> int:
        return len(self.generator)

    @classmethod
    def from_standard(cls, P: Sequence[int], n: int) -> "LinearCode":
        k = len(P)
        return cls(n, tuple((1 << i) | (p << k) for i, p in enumerate(P)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "LinearCode":
        if not rows:
            raise CodeError("generator matrix has no rows")
        n = len(rows[0])
        if any(len(r) != n for r in rows):
            raise CodeError("generator rows differ in length")
        gen = []
        for r in rows:
            m = 0
            for j, x in enumerate(r):
                if x:
                    m |= 1 << j
            gen.append(m)
        return cls(n, tuple(gen))

    def standard_generator(self) -> tuple[int, ...]:
        """Rows of (I | P) in the permuted coordinates."""
        k = self.k
        return tuple((1 << i) | (p << k) for i, p in enumerate(self.P))

    def codewords(self) -> list[int]:
        words = [0]
        for g in self.generator:
            words += [w ^ g for w in words]
        return words

    def to_text(self) -> str:
        return "\n".join(
            "".join(str((r >> j) & 1) for j in range(self.n)) for r in self.generator
        ) + "\n"


def parse_matrix_text(text: str) -> LinearCode:
    rows = []
    for line in text.splitlines():
        line = line.replace(" ", "").strip()
        if not line or line.startswith("#"):
            continue
        if set(line) - {"0", "1"}:
            raise CodeError(f"matrix row has characters other than 0/1: {line!r}")
        rows.append([int(c) for c in line])
    return LinearCode.from_rows(rows)


def transpose(P: Sequence[int], rows: int, cols: int) -> list[int]:
    out = [0] * cols
    for i in range(rows):
        for j in bits(P[i]):
            out[j] |= 1 << i
    return out


def dual(code: LinearCode) -> LinearCode:
    """Dual code generated by (P^T | I) in the standard-form coordinates.

    The result is expressed in the permuted coordinates of ``code``'s standard
    form; it is the dual of the code generated by (I | P).
    """
    k, n = code.k, code.n
    PT = transpose(code.P, k, n - k)
    return LinearCode(n, tuple(pt | (1 << (k + i)) for i, pt in enumerate(PT)))


def is_orthogonal(a: LinearCode, b: LinearCode) -> bool:
    return all((x & y).bit_count() % 2 == 0 for x in a.generator for y in b.generator)


def is_self_dual(code: LinearCode) -> bool:
    """True iff n = 2k and P P^T = I over GF(2)."""
    k, n = code.k, code.n
    if n != 2 * k:
        return False
    for i in range(k):
        for j in range(k):
            dot = (code.P[i] & code.P[j]).bit_count() & 1
            if dot != (i == j):
                return False
    return True


def min_distance_bruteforce(code: LinearCode, max_k: int = BRUTE_FORCE_MAX_K) -> int:
    """Smallest nonzero codeword weight by Gray-code enumeration of all 2^k messages."""
    k = code.k
    if k > max_k:
        raise CapacityError(f"k = {k} exceeds the brute-force limit {max_k}")
    gen = code.generator
    word = 0
    best = code.n + 1
    for i in range(1, 1 << k):
        word ^= gen[(i & -i).bit_length() - 1]
        w = word.bit_count()
        if w < best:
            best = w
            if best == 1:
                break
    return best


def weight_distribution(code: LinearCode, max_k: int = BRUTE_FORCE_MAX_K) -> list[int]:
    k = code.k
    if k > max_k:
        raise CapacityError(f"k = {k} exceeds the brute-force limit {max_k}")
    dist = [0] * (code.n + 1)
    gen = code.generator
    word = 0
    dist[0] = 1
    for i in range(1, 1 << k):
        word ^= gen[(i & -i).bit_length() - 1]
        dist[word.bit_count()] += 1
    return dist


# --- graph <-> code ----------------------------------------------------------


def graph_from_code(code: LinearCode) -> tuple[Graph, Bipartition]:
    """Bipartite graph with adjacency [[0, P], [P^T, 0]]; the first k vertices form the left side."""
    k, n = code.k, code.n
    rows = [p << k for p in code.P]
    rows += transpose(code.P, k, n - k)
    g = Graph(rows, check=False)
    left = (1 << k) - 1
    return g, Bipartition(left, ((1 << n) - 1) & ~left)


def code_from_graph(g: Graph, p: Bipartition, side: str = "left") -> LinearCode:
    """Code generated by (I | P) with identity columns on ``side``.

    Columns are the vertices of ``side`` in increasing order followed by the
    other side; P[i][j] = 1 iff the i-th vertex of ``side`` is adjacent to the
    j-th vertex of the other side.  The other side gives the dual code.
    """
    if not p.is_valid_for(g):
        raise CodeError("not a valid bipartition of the graph (is the graph bipartite?)")
    info = list(bits(p.side(side)))
    rest = [v for v in range(g.n) if not (p.side(side) >> v) & 1]
    col = {v: j for j, v in enumerate(rest)}
    k = len(info)
    P = []
    for v in info:
        m = 0
        for w in bits(g.adj[v]):
            m |= 1 << col[w]
        P.append(m)
    if not k:
        raise CodeError("chosen side is empty; the code would have dimension 0")
    return LinearCode.from_standard(P, g.n)


def min_distance_via_orbit(
    g: Graph, p: Bipartition, side: str = "left", limit: int | None = None
) -> int:
    """d = 1 + smallest degree of a ``side`` vertex over the labelled ELC orbit.

    Raises ``OrbitCapExceeded`` when the orbit outgrows ``limit``.
    """
    if not g.is_connected():
        raise GraphError("min_distance_via_orbit needs a connected graph")
    members, a, truncated = marked_orbit(g, p, side, limit)
    if truncated:
        raise OrbitCapExceeded("orbit too large; minimum distance unknown")
    return 1 + min(min(r.bit_count() for r in m[:a]) for m in members)


def orbit_distances(g: Graph, p: Bipartition, limit: int | None = None) -> tuple[int, int]:
    """(d of the left-side code, d of the right-side code) from one orbit traversal."""
    members, a, truncated = marked_orbit(g, p, "left", limit)
    if truncated:
        raise OrbitCapExceeded("orbit too large; minimum distance unknown")
    dl = 1 + min(min(r.bit_count() for r in m[:a]) for m in members)
    dr = 1 + min(min(r.bit_count() for r in m[a:]) for m in members)
    return dl, dr


class OrbitDistanceCache:
    """Memoised ``orbit_distances`` keyed by marked class.

    Every marked class in one labelled orbit has the same pair of distances,
    so a sweep over many graphs traverses each orbit once.
    """

    def __init__(self, limit: int | None = None):
        self.limit = limit
        self._known: dict = {}
        self.traversals = 0

    def distances(self, g: Graph, p: Bipartition) -> tuple[int, int]:
        start = to_marked(g, p.left)
        a = p.left.bit_count()
        key = (a, marked_key(start, a))
        hit = self._known.get(key)
        if hit is not None:
            return hit
        members, truncated = marked_orbit_keys(start, a, self.limit)
        if truncated:
            raise OrbitCapExceeded("orbit too large; minimum distance unknown")
        self.traversals += 1
        dl = 1 + min(min(r.bit_count() for r in m[:a]) for m in members)
        dr = 1 + min(min(r.bit_count() for r in m[a:]) for m in members)
        for m in members:
            self._known[(a, m)] = (dl, dr)
        return dl, dr


def is_isodual_via_orbit(g: Graph, p: Bipartition, limit: int | None = None):
    """True/False, or "unknown" when the orbit cap is hit before an answer is found.

    The code is isodual iff the side-swapped graph lies in the labelled orbit.
    """
    a, b = p.sizes
    if a != b:
        return False
    members, _, truncated = marked_orbit(g, p, "left", limit)
    swapped, _, _ = marked_orbit(g, p.swapped(), "left", 1)
    target = next(iter(swapped))
    if target in members:
        return True
    return "unknown" if truncated else False


# --- equivalence -------------------------------------------------------------


def _columns(code: LinearCode) -> list[int]:
    """Column j as a bitset over the codewords (index = message)."""
    words = code.codewords()
    cols = []
    for j in range(code.n):
        c = 0
        for i, w in enumerate(words):
            if (w >> j) & 1:
                c |= 1 << i
        cols.append(c)
    return cols


def are_equivalent(a: LinearCode, b: LinearCode, max_n: int = 12) -> bool:
    """Exact test for a coordinate permutation mapping ``a`` onto ``b``.

    Backtracking assigns columns of ``a`` to columns of ``b`` one at a time and
    keeps only assignments where the projected codeword sets agree.
    """
    if a.n != b.n or a.k != b.k:
        return False
    if a.n > max_n:
        raise CapacityError(f"exact equivalence search limited to n <= {max_n}")
    if 2 * a.k > a.n:
        return are_equivalent(dual(a), dual(b), max_n)
    if weight_distribution(a) != weight_distribution(b):
        return False
    n = a.n
    wa = a.codewords()
    wb = b.codewords()
    used = [False] * n

    def project(words, cols):
        return frozenset(sum(((w >> c) & 1) << i for i, c in enumerate(cols)) for w in words)

    def extend(pa, pb):
        if len(pa) == n:
            return True
        j = len(pa)
        for t in range(n):
            if used[t]:
                continue
            na, nb = pa + [j], pb + [t]
            if project(wa, na) != project(wb, nb):
                continue
            used[t] = True
            if extend(na, nb):
                return True
            used[t] = False
        return False

    return extend([], [])


# --- reports -----------------------------------------------------------------


@dataclass
class CodeReport:
    n: int
    k: int
    d: int | None
    dual_k: int
    dual_d: int | None
    self_dual: bool
    isodual: bool | str
    weights: list[int] | None = None

    @property
    def parameters(self) -> str:
        return f"[{self.n},{self.k},{self.d if self.d is not None else '?'}]"

    @property
    def dual_parameters(self) -> str:
        return f"[{self.n},{self.dual_k},{self.dual_d if self.dual_d is not None else '?'}]"

    def to_json(self) -> str:
        return json.dumps(
            {
                "parameters": [self.n, self.k, self.d],
                "dual_parameters": [self.n, self.dual_k, self.dual_d],
                "self_dual": self.self_dual,
                "isodual": self.isodual,
                "weight_distribution": self.weights,
            }
        )


def code_report(code: LinearCode, max_k: int = BRUTE_FORCE_MAX_K, isodual=None) -> CodeReport:
    """Parameters by brute force (each side uses whichever of code/dual is smaller)."""
    d = _distance(code, max_k)
    dd = _distance(dual(code), max_k)
    weights = weight_distribution(code, max_k) if code.k <= max_k else None
    sd = is_self_dual(code)
    if isodual is None:
        isodual = True if sd else ("unknown" if code.n == 2 * code.k else False)
    return CodeReport(code.n, code.k, d, code.n - code.k, dd, sd, isodual, weights)


def _distance(code, max_k):
    try:
        return min_distance_bruteforce(code, max_k)
    except CapacityError:
        return None


# --- iterated Hamming expansion at the matrix level --------------------------
#
# The bases s^2 and h^3_e have a side-swapping automorphism ("mirror") that is
# an involution.  Hamming expansion maps w_{7i+a} to w_{7 mirror(i)+a}, which
# is again a side-swapping automorphism, so with the columns ordered as the
# mirrors of the rows, P stays symmetric.  Everything here works on edge lists,
# so no 64-vertex limit applies.

_MIRROR = {
    "s2": {0: 1, 1: 0},
    # U = {0, 1, 2, 7} of extended_hamming_graph(3) against W = {3, 4, 5, 6}
    "h3e": {0: 5, 1: 4, 2: 3, 7: 6, 5: 0, 4: 1, 3: 2, 6: 7},
}


def _base_graph(base: str):
    from .constructions import extended_hamming_graph, star_graph

    if base == "h3e":
        return extended_hamming_graph(3)
    if base == "s2":
        return star_graph(2)
    raise CodeError("base must be 'h3e' or 's2'")


def _expand(n, left, edges, mirror):
    """One Hamming expansion of an edge-list graph with explicit left side."""
    new_left = set()
    for i in range(n):
        hub = [7 * i + a for a in (0, 1, 2, 6)]
        opp = [7 * i + a for a in (3, 4, 5)]
        new_left.update(hub if i in left else opp)
    new_edges = [(7 * i + a, 7 * i + b) for i in range(n) for a, b in HAMMING_BLOCK]
    for x, y in edges:
        new_edges += [(7 * x + a, 7 * y + b) for a in range(3) for b in range(3)]
    new_mirror = {7 * i + a: 7 * mirror[i] + a for i in range(n) for a in range(7)}
    return 7 * n, new_left, new_edges, new_mirror


def iterated_hamming_P(base: str, r: int) -> tuple[list[int], int, int]:
    """(P, k, n) for the code of the r-fold Hamming expansion of ``base``.

    Rows are the left vertices in increasing order; column j is the mirror
    of row j.
    """
    g = _base_graph(base)
    n = g.n
    left = set(bits(g.bipartition().left))
    edges = g.edges()
    mirror = dict(_MIRROR[base])
    for _ in range(r):
        n, left, edges, mirror = _expand(n, left, edges, mirror)
    rows = sorted(left)
    cols = [mirror[v] for v in rows]
    if set(cols) & left or len(set(cols)) != len(cols):
        raise AssertionError("mirror map does not swap the two sides")
    row_of = {v: i for i, v in enumerate(rows)}
    col_of = {v: j for j, v in enumerate(cols)}
    P = [0] * len(rows)
    for x, y in edges:
        if x in row_of:
            P[row_of[x]] |= 1 << col_of[y]
        else:
            P[row_of[y]] |= 1 << col_of[x]
    return P, len(rows), n


def iterated_hamming_report(base: str, r: int, max_k: int = 16) -> dict:
    """Code parameters of the r-fold Hamming expansion of ``base``.

    Self-duality is checked as P P^T = I.  ``d`` is brute-forced when
    k <= ``max_k``; otherwise the predicted 4 is reported with
    ``d_measured`` false.
    """
    P, k, n = iterated_hamming_P(base, r)
    code = LinearCode.from_standard(P, n)
    out = {
        "base": base,
        "r": r,
        "n": n,
        "k": k,
        "P_symmetric": transpose(P, k, n - k) == P,
        "self_dual": is_self_dual(code),
    }
    if k <= max_k:
        out["d"] = min_distance_bruteforce(code, max_k)
        out["d_measured"] = True
    else:
        out["d"] = 4
        out["d_measured"] = False
    return out
