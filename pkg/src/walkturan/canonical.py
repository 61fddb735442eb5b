"""Exact canonical forms: lexicographically least adjacency bit-string.

The row-major bit-string of an order-``n`` digraph is read as an ``n*n``-bit
integer (first bit most significant), so the least string is the least
integer.  All ``n!`` relabellings are scored at once with numpy; orders above
:data:`MAX_CANONICAL_ORDER` are refused rather than approximated.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

import numpy as np

from .digraph import Digraph

__all__ = [
    "MAX_CANONICAL_ORDER",
    "CanonicalKey",
    "canonical_form",
    "canonical_codes",
    "key_from_code",
    "digraph_from_key",
]

MAX_CANONICAL_ORDER = 8
# caps the (batch x permutations x n^2) gather for batched calls
_CHUNK_ELEMENTS = 1 << 22


@dataclass(frozen=True, order=True)
class CanonicalKey:
    n: int
    data: bytes

    def hex(self) -> str:
        return self.data.hex()

    @classmethod
    def from_hex(cls, n: int, text: str) -> "CanonicalKey":
        data = bytes.fromhex(text)
        if len(data) != _key_length(n):
            raise ValueError(f"key {text!r} has wrong length for n={n}")
        return cls(n, data)

    def __str__(self) -> str:
        return self.hex()


def _key_length(n: int) -> int:
    return (n * n + 7) // 8


def _check_order(n: int) -> None:
    if n > MAX_CANONICAL_ORDER:
        raise ValueError(
            f"canonical forms are exact only up to order {MAX_CANONICAL_ORDER}, got {n}"
        )


@lru_cache(maxsize=None)
def _relabel_tables(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    perms = np.array(list(permutations(range(n))), dtype=np.intp)
    # relabelled bit (i, j) is original bit (p[i], p[j])
    src = (perms[:, :, None] * n + perms[:, None, :]).reshape(len(perms), n * n)
    weights = np.array([1 << (n * n - 1 - b) for b in range(n * n)], dtype=np.uint64)
    return perms, src, weights


def canonical_codes(adj: np.ndarray) -> np.ndarray:
    """Canonical integer codes for a batch of adjacency matrices ``(B, n, n)``."""
    adj = np.asarray(adj)
    if adj.ndim == 2:
        adj = adj[None]
    batch, n, _ = adj.shape
    _check_order(n)
    _, src, weights = _relabel_tables(n)
    flat = (adj.reshape(batch, n * n) != 0).astype(np.uint64)
    out = np.empty(batch, dtype=np.uint64)
    step = max(1, _CHUNK_ELEMENTS // (len(src) * n * n))
    for lo in range(0, batch, step):
        block = flat[lo : lo + step]
        scores = (block[:, src] * weights).sum(axis=2, dtype=np.uint64)
        out[lo : lo + step] = scores.min(axis=1)
    return out


def key_from_code(n: int, code: int) -> CanonicalKey:
    length = _key_length(n)
    pad = length * 8 - n * n
    return CanonicalKey(n, (int(code) << pad).to_bytes(length, "big"))


def canonical_form(D: Digraph) -> CanonicalKey:
    code = canonical_codes(D.to_matrix(np.uint8))[0]
    return key_from_code(D.n, int(code))


def digraph_from_key(key: CanonicalKey) -> Digraph:
    """The canonical representative whose bit-string is ``key``."""
    n = key.n
    code = int.from_bytes(key.data, "big") >> (len(key.data) * 8 - n * n)
    rows = []
    for i in range(n):
        row = 0
        for j in range(n):
            if code >> (n * n - 1 - (i * n + j)) & 1:
                row |= 1 << j
        rows.append(row)
    return Digraph(n, tuple(rows))
