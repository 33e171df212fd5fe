"""graph6 encoding (bit-exact with the nauty format description)."""
from __future__ import annotations

from .graph import Graph, InvalidGraph

HEADER = ">>graph6<<"


def _encode_n(n: int) -> str:
    if n < 63:
        return chr(n + 63)
    if n < 258048:
        return chr(126) + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    if n < 68719476736:
        return chr(126) * 2 + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))
    raise InvalidGraph("graph too large for graph6")


def encode(g: Graph, header: bool = False) -> str:
    bits = []
    for j in range(1, g.n):
        rj = g.rows[j]
        for i in range(j):
            bits.append((rj >> i) & 1)
    bits.extend([0] * (-len(bits) % 6))
    body = "".join(
        chr(63 + int("".join(map(str, bits[k:k + 6])), 2)) for k in range(0, len(bits), 6)
    )
    return (HEADER if header else "") + _encode_n(g.n) + body


def decode(s: str) -> Graph:
    s = s.strip()
    if s.startswith(HEADER):
        s = s[len(HEADER):]
    data = [ord(c) - 63 for c in s]
    if not data or any(not 0 <= d <= 63 for d in data):
        raise InvalidGraph(f"not a graph6 string: {s!r}")
    if data[0] < 63:
        n, pos = data[0], 1
    elif len(data) > 1 and data[1] < 63:
        if len(data) < 4:
            raise InvalidGraph("truncated graph6 size field")
        n, pos = (data[1] << 12) | (data[2] << 6) | data[3], 4
    else:
        if len(data) < 8:
            raise InvalidGraph("truncated graph6 size field")
        n = 0
        for d in data[2:8]:
            n = (n << 6) | d
        pos = 8
    need = (n * (n - 1) // 2 + 5) // 6
    if len(data) - pos != need:
        raise InvalidGraph(f"graph6 body has {len(data) - pos} bytes, expected {need}")
    rows = [0] * n
    k = 0
    body = data[pos:]
    for j in range(1, n):
        for i in range(j):
            if (body[k // 6] >> (5 - k % 6)) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
    return Graph(n, tuple(rows))
