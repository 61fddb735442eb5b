"""Digraph value type, degree arithmetic, girth and the bit-exact text format.

Vertices are labelled ``0..n-1``.  Row ``u`` of the adjacency matrix is kept
as an integer bitmask (bit ``v`` set iff ``u -> v``); diagonal bits are loops.
"""

from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Digraph",
    "DegreeReport",
    "DigraphFormatError",
    "parse_digraph",
    "render_digraph",
    "degrees",
    "girth",
    "is_transitive_tournament",
    "induced_subgraph",
]

_HEADER = re.compile(r"[1-9][0-9]*")


class DigraphFormatError(ValueError):
    """Malformed digraph text; carries the 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Digraph:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("digraph order must be positive")
        if len(self.rows) != self.n:
            raise ValueError(f"expected {self.n} rows, got {len(self.rows)}")
        full = (1 << self.n) - 1
        for u, row in enumerate(self.rows):
            if row < 0 or row & ~full:
                raise ValueError(f"row {u} has bits outside 0..{self.n - 1}")

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "Digraph":
        rows = [0] * n
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc ({u}, {v}) out of range for n={n}")
            rows[u] |= 1 << v
        return cls(n, tuple(rows))

    @classmethod
    def from_matrix(cls, matrix) -> "Digraph":
        mat = np.asarray(matrix)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("adjacency matrix must be square")
        n = mat.shape[0]
        rows = []
        for u in range(n):
            row = 0
            for v in np.flatnonzero(mat[u]):
                row |= 1 << int(v)
            rows.append(row)
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n: int) -> "Digraph":
        return cls(n, (0,) * n)

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in range(self.n) if self.rows[u] >> v & 1]

    def out_neighbors(self, u: int) -> list[int]:
        return [v for v in range(self.n) if self.rows[u] >> v & 1]

    def in_neighbors(self, u: int) -> list[int]:
        return [x for x in range(self.n) if self.rows[x] >> u & 1]

    @property
    def arc_count(self) -> int:
        return sum(row.bit_count() for row in self.rows)

    @property
    def loop_count(self) -> int:
        return sum(self.rows[u] >> u & 1 for u in range(self.n))

    def to_matrix(self, dtype=np.int64) -> np.ndarray:
        mat = np.zeros((self.n, self.n), dtype=dtype)
        for u, v in self.arcs():
            mat[u, v] = 1
        return mat

    def relabel(self, perm: Sequence[int]) -> "Digraph":
        """Return the digraph with vertex ``u`` renamed ``perm[u]``."""
        if sorted(perm) != list(range(self.n)):
            raise ValueError("perm must be a permutation of 0..n-1")
        return Digraph.from_arcs(self.n, ((perm[u], perm[v]) for u, v in self.arcs()))

    def with_arc(self, u: int, v: int) -> "Digraph":
        rows = list(self.rows)
        rows[u] |= 1 << v
        return Digraph(self.n, tuple(rows))

    def without_arc(self, u: int, v: int) -> "Digraph":
        rows = list(self.rows)
        rows[u] &= ~(1 << v)
        return Digraph(self.n, tuple(rows))

    def __str__(self) -> str:
        return render_digraph(self)


@dataclass(frozen=True)
class DegreeReport:
    vertex: int
    outdeg: int
    indeg: int
    incident: int


def parse_digraph(text: str) -> Digraph:
    """Parse the line-oriented ``n`` + ``n`` bit-rows format.

    >>> parse_digraph("2\\n01\\n10\\n").arcs()
    [(0, 1), (1, 0)]
    """
    if not text.endswith("\n"):
        lines = text.split("\n")
        raise DigraphFormatError("missing final newline", len(lines), len(lines[-1]) + 1)
    lines = text[:-1].split("\n")
    header = lines[0]
    if not _HEADER.fullmatch(header):
        col = next((i + 1 for i, ch in enumerate(header) if not ch.isdigit()), 1)
        raise DigraphFormatError(f"header must be a positive decimal integer, got {header!r}", 1, col)
    n = int(header)
    if len(lines) - 1 < n:
        raise DigraphFormatError(f"expected {n} rows, found {len(lines) - 1}", len(lines) + 1, 1)
    if len(lines) - 1 > n:
        raise DigraphFormatError("unexpected content after the last row", n + 2, 1)
    rows = []
    for i, line in enumerate(lines[1:]):
        lineno = i + 2
        for j, ch in enumerate(line):
            if ch not in "01":
                raise DigraphFormatError(f"character {ch!r} not in {{0,1}}", lineno, j + 1)
        if len(line) != n:
            raise DigraphFormatError(f"row has length {len(line)}, expected {n}", lineno, len(line) + 1)
        rows.append(sum(1 << j for j, ch in enumerate(line) if ch == "1"))
    return Digraph(n, tuple(rows))


def render_digraph(D: Digraph) -> str:
    lines = [str(D.n)]
    for row in D.rows:
        lines.append("".join("1" if row >> v & 1 else "0" for v in range(D.n)))
    return "\n".join(lines) + "\n"


def degrees(D: Digraph, u: int) -> DegreeReport:
    """Out-, in- and incident degree of ``u``; a loop is one incident arc."""
    if not 0 <= u < D.n:
        raise IndexError(f"vertex {u} out of range for n={D.n}")
    outdeg = D.rows[u].bit_count()
    indeg = sum(row >> u & 1 for row in D.rows)
    incident = outdeg + indeg - (D.rows[u] >> u & 1)
    return DegreeReport(u, outdeg, indeg, incident)


def girth(D: Digraph) -> float:
    """Length of a shortest directed cycle, ``math.inf`` if acyclic.

    One BFS per root; the shortest cycle through ``r`` closes with an arc
    ``x -> r`` where ``x`` is nearest to ``r``.
    """
    if D.loop_count:
        return 1
    best = math.inf
    for root in range(D.n):
        dist = {root: 0}
        queue = deque([root])
        while queue:
            x = queue.popleft()
            if dist[x] + 1 >= best:
                break
            if D.rows[x] >> root & 1:
                best = dist[x] + 1
                break
            for y in D.out_neighbors(x):
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
    return best


def is_transitive_tournament(D: Digraph) -> bool:
    if D.loop_count:
        return False
    for u in range(D.n):
        for v in range(u + 1, D.n):
            if D.has_arc(u, v) == D.has_arc(v, u):
                return False
    # an acyclic tournament is transitive
    return girth(D) == math.inf


def induced_subgraph(D: Digraph, X: Iterable[int]) -> Digraph:
    """``D[X]``, relabelled ``0..|X|-1`` in increasing order of ``X``."""
    keep = sorted(set(X))
    if not keep:
        raise ValueError("vertex set must be nonempty")
    if keep[0] < 0 or keep[-1] >= D.n:
        raise IndexError(f"vertex set {keep} out of range for n={D.n}")
    index = {v: i for i, v in enumerate(keep)}
    return Digraph.from_arcs(
        len(keep), ((index[u], index[v]) for u, v in D.arcs() if u in index and v in index)
    )
