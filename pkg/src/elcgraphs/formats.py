"""graph6 and plain adjacency-matrix text encodings."""

from __future__ import annotations

from typing import Iterable, Iterator

from .graph import Graph, GraphError

_HEADER = ">>graph6<<"


def _encode_order(n: int) -> bytes:
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126, (n >> 12 & 63) + 63, (n >> 6 & 63) + 63, (n & 63) + 63])
    raise GraphError(f"order {n} too large for graph6")


def adj_to_graph6(adj: tuple[int, ...]) -> str:
    n = len(adj)
    out = bytearray(_encode_order(n))
    acc = 0
    nbits = 0
    for j in range(1, n):
        row = adj[j]
        for i in range(j):
            acc = (acc << 1) | ((row >> i) & 1)
            nbits += 1
            if nbits == 6:
                out.append(acc + 63)
                acc = 0
                nbits = 0
    if nbits:
        out.append((acc << (6 - nbits)) + 63)
    return out.decode("ascii")


def to_graph6(g: Graph) -> str:
    return adj_to_graph6(g.adj)


def from_graph6(text: str | bytes) -> Graph:
    if isinstance(text, bytes):
        text = text.decode("ascii")
    s = text.strip()
    if s.startswith(_HEADER):
        s = s[len(_HEADER):]
    data = s.encode("ascii")
    if not data:
        raise GraphError("empty graph6 string")
    if any(c < 63 or c > 126 for c in data):
        raise GraphError(f"invalid graph6 character in {s!r}")
    if data[0] == 126:
        if len(data) < 4 or data[1] == 126:
            raise GraphError("graph6 orders above 258047 are not supported")
        n = ((data[1] - 63) << 12) | ((data[2] - 63) << 6) | (data[3] - 63)
        body = data[4:]
    else:
        n = data[0] - 63
        body = data[1:]
    need = (n * (n - 1) // 2 + 5) // 6
    if len(body) != need:
        raise GraphError(f"graph6 body has {len(body)} bytes, expected {need} for n={n}")
    rows = [0] * n
    k = 0
    total = n * (n - 1) // 2
    for j in range(1, n):
        for i in range(j):
            chunk = body[k // 6] - 63
            if (chunk >> (5 - k % 6)) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
    # padding bits must be zero
    if total % 6 and (body[-1] - 63) & ((1 << (6 - total % 6)) - 1):
        raise GraphError("nonzero padding in graph6 string")
    return Graph(rows, check=False)


def read_graph6_lines(lines: Iterable[str]) -> Iterator[Graph]:
    for line in lines:
        line = line.strip()
        if line and not line.startswith("#"):
            yield from_graph6(line)


def to_adjacency_text(g: Graph) -> str:
    return "\n".join("".join(str(x) for x in row) for row in g.to_matrix()) + "\n"


def from_adjacency_text(text: str) -> Graph:
    """Parse ``n`` lines of 0/1 characters (spaces allowed between entries)."""
    rows = []
    for line in text.splitlines():
        line = line.replace(" ", "").replace(",", "").strip()
        if not line or line.startswith("#"):
            continue
        if set(line) - {"0", "1"}:
            raise GraphError(f"adjacency row has characters other than 0/1: {line!r}")
        rows.append([int(c) for c in line])
    if not rows:
        raise GraphError("empty adjacency matrix")
    return Graph.from_matrix(rows)
