"""Exact walk counting, freeness decisions and walk extraction.

Counts are exact Python integers.  Freeness only asks whether some entry
exceeds ``t``, so :func:`is_free` runs on machine words with every entry
clamped at ``t + 1`` after each product; clamping commutes with products of
nonnegative matrices, so the verdict is exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .digraph import Digraph

__all__ = [
    "Walk",
    "WalkCountMatrix",
    "walk_count_matrix",
    "max_pair_walks",
    "is_free",
    "extract_walks",
    "saturated_power",
]

Walk = tuple[int, ...]

_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class WalkCountMatrix:
    n: int
    k: int
    entries: tuple[tuple[int, ...], ...]

    def __getitem__(self, uv: tuple[int, int]) -> int:
        u, v = uv
        return self.entries[u][v]

    def is_zero(self) -> bool:
        return not any(any(row) for row in self.entries)


def _matmul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    n = len(a)
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(a[i], bt[j]) if x) for j in range(n)] for i in range(n)]


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def walk_count_matrix(D: Digraph, k: int) -> WalkCountMatrix:
    """``A**k`` by repeated squaring; entry ``(u, v)`` counts ``k``-walks u -> v."""
    if k < 0:
        raise ValueError("walk length must be nonnegative")
    n = D.n
    base = [[D.rows[u] >> v & 1 for v in range(n)] for u in range(n)]
    result = _identity(n)
    e = k
    while e:
        if e & 1:
            result = _matmul(result, base)
        e >>= 1
        if e:
            base = _matmul(base, base)
    return WalkCountMatrix(n, k, tuple(tuple(row) for row in result))


def max_pair_walks(D: Digraph, k: int) -> tuple[int, int, int]:
    """Largest entry of the ``k``-walk matrix with its row-major-first position."""
    entries = walk_count_matrix(D, k).entries
    best = (-1, 0, 0)
    for u, row in enumerate(entries):
        for v, c in enumerate(row):
            if c > best[0]:
                best = (c, u, v)
    return best


def saturated_power(A: np.ndarray, k: int, cap: int) -> np.ndarray:
    """``min(A**k, cap)`` entrywise for a ``(..., n, n)`` stack of 0/1 matrices."""
    result = None
    base = np.minimum(A, cap)
    while k:
        if k & 1:
            result = base if result is None else np.minimum(result @ base, cap)
        k >>= 1
        if k:
            base = np.minimum(base @ base, cap)
    if result is None:
        eye = np.broadcast_to(np.eye(A.shape[-1], dtype=A.dtype), A.shape)
        result = np.minimum(eye, cap)
    return result


def is_free(D: Digraph, k: int, t: int) -> bool:
    """True iff no ordered pair (loops included) has more than ``t`` ``k``-walks."""
    if k < 1 or t < 1:
        raise ValueError("is_free needs k >= 1 and t >= 1")
    cap = t + 1
    if D.n * cap * cap >= _INT64_SAFE:
        return max_pair_walks(D, k)[0] <= t
    return int(saturated_power(D.to_matrix(np.int64), k, cap).max()) <= t


def _suffix_counts(D: Digraph, k: int, v: int) -> list[list[int]]:
    # counts[j][x] = number of j-walks x -> v
    counts = [[int(x == v) for x in range(D.n)]]
    succ = [D.out_neighbors(x) for x in range(D.n)]
    for _ in range(k):
        prev = counts[-1]
        counts.append([sum(prev[y] for y in succ[x]) for x in range(D.n)])
    return counts


def extract_walks(D: Digraph, k: int, u: int, v: int, limit: int | None = None) -> list[Walk]:
    """First ``limit`` ``k``-walks ``u -> v`` in lexicographic order (all if None)."""
    if limit is not None and limit < 1:
        raise ValueError("limit must be positive")
    counts = _suffix_counts(D, k, v)
    if counts[k][u] == 0:
        return []
    succ = [D.out_neighbors(x) for x in range(D.n)]
    out: list[Walk] = []
    path = [u]

    def extend(x: int, remaining: int) -> bool:
        if remaining == 0:
            out.append(tuple(path))
            return limit is not None and len(out) >= limit
        for y in succ[x]:
            if counts[remaining - 1][y]:
                path.append(y)
                done = extend(y, remaining - 1)
                path.pop()
                if done:
                    return True
        return False

    extend(u, k)
    return out
