"""graph6 reading and writing (1-byte and 4-byte length forms)."""

from __future__ import annotations

from typing import Iterable, Iterator, TextIO

from .graph import Graph

HEADER = ">>graph6<<"
MAX_ORDER = 258048


class Graph6Error(ValueError):
    """Malformed graph6 input; ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


def _values(text: str, start: int) -> list[int]:
    out = []
    for i, ch in enumerate(text[start:], start):
        code = ord(ch)
        if not 63 <= code <= 126:
            raise Graph6Error(f"character {ch!r} outside the graph6 range", i)
        out.append(code - 63)
    return out


def parse_graph6(text: str) -> Graph:
    """Decode one graph6 line (header and surrounding whitespace allowed)."""
    line = text.strip()
    base = 0
    if line.startswith(HEADER):
        line = line[len(HEADER):]
        base = len(HEADER)
    if not line:
        raise Graph6Error("empty graph6 string", base)
    data = _values(line, 0)
    if data[0] < 63:
        n, pos = data[0], 1
    elif len(data) >= 4 and data[1] < 63:
        n = (data[1] << 12) | (data[2] << 6) | data[3]
        pos = 4
        if n < 63:
            raise Graph6Error("4-byte length form used for n < 63", base)
    elif len(data) >= 2 and data[1] == 63:
        raise Graph6Error("8-byte length form is not supported", base)
    else:
        raise Graph6Error("truncated length field", base)

    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = data[pos:]
    if len(body) != nbytes:
        raise Graph6Error(f"expected {nbytes} data bytes for n={n}, found {len(body)}", base + pos)
    edges = []
    k = 0
    for v in range(1, n):
        for u in range(v):
            if (body[k // 6] >> (5 - k % 6)) & 1:
                edges.append((u, v))
            k += 1
    if nbits % 6:
        pad = body[-1] & ((1 << (6 - nbits % 6)) - 1)
        if pad:
            raise Graph6Error("nonzero padding bits", base + pos + nbytes - 1)
    return Graph(n, edges)


def write_graph6(g: Graph) -> str:
    """Encode ``g`` under its current labeling (no header, no newline)."""
    n = g.n
    if n >= MAX_ORDER:
        raise ValueError(f"graph6 writer supports n < {MAX_ORDER}")
    if n < 63:
        out = [n]
    else:
        out = [63, (n >> 12) & 63, (n >> 6) & 63, n & 63]
    bits = []
    for v in range(1, n):
        mask = g.neighbor_mask(v)
        for u in range(v):
            bits.append((mask >> u) & 1)
    bits.extend([0] * (-len(bits) % 6))
    for i in range(0, len(bits), 6):
        chunk = 0
        for b in bits[i:i + 6]:
            chunk = (chunk << 1) | b
        out.append(chunk)
    return "".join(chr(c + 63) for c in out)


def read_graph6_lines(lines: Iterable[str]) -> Iterator[tuple[int, str, Graph | Graph6Error]]:
    """Yield ``(line_number, text, graph_or_error)`` for each non-blank line.

    Lines starting with ``#`` are comments.  Parsing errors are yielded rather
    than raised so batch callers can keep going.
    """
    for number, raw in enumerate(lines, 1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        try:
            yield number, text, parse_graph6(text)
        except Graph6Error as exc:
            yield number, text, exc


def load_graph6_file(stream: TextIO) -> list[Graph]:
    graphs = []
    for number, _, item in read_graph6_lines(stream):
        if isinstance(item, Graph6Error):
            raise Graph6Error(f"line {number}: {item}", item.offset)
        graphs.append(item)
    return graphs
