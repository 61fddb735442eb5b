"""Deterministic generators for the digraph families used by the lab."""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

import numpy as np

from .digraph import Digraph

__all__ = [
    "BlowupSpec",
    "JoinConfig",
    "JOINT",
    "LINKED",
    "ALL_TO_TOURNAMENT",
    "RANDOM",
    "transitive_tournament",
    "directed_cycle",
    "balanced_blowup",
    "build_join",
    "cycle_join_tournament",
]

JOINT = "joint-at-vertex"
LINKED = "linked-by-arc"
ALL_TO_TOURNAMENT = "all-to-tournament"
RANDOM = "random"


@dataclass(frozen=True)
class BlowupSpec:
    k: int
    n: int
    sizes: tuple[int, ...]

    @property
    def arc_count(self) -> int:
        return (self.n * self.n - sum(s * s for s in self.sizes)) // 2


@dataclass(frozen=True)
class JoinConfig:
    m1: int
    m2: int
    mode: str = JOINT

    def __post_init__(self):
        if self.m1 < 1 or self.m2 < 1:
            raise ValueError("cycle lengths must be positive")
        if self.mode not in (JOINT, LINKED):
            raise ValueError(f"unknown join mode {self.mode!r}")
        if self.mode == JOINT and self.m1 == 1 and self.m2 == 1:
            raise ValueError("two loops joint at one vertex collapse into a single arc")

    @property
    def L(self) -> int:
        return lcm(self.m1, self.m2)

    @property
    def a1(self) -> int:
        return self.L // self.m1

    @property
    def a2(self) -> int:
        return self.L // self.m2


def transitive_tournament(n: int) -> Digraph:
    if n < 1:
        raise ValueError("n must be positive")
    return Digraph.from_arcs(n, ((i, j) for i in range(n) for j in range(i + 1, n)))


def directed_cycle(m: int) -> Digraph:
    """``0 -> 1 -> ... -> m-1 -> 0``; ``m = 1`` is a single loop."""
    return Digraph.from_arcs(m, ((i, (i + 1) % m) for i in range(m)))


def _cycle_arcs(vertices: list[int]) -> list[tuple[int, int]]:
    return [(vertices[i], vertices[(i + 1) % len(vertices)]) for i in range(len(vertices))]


def balanced_blowup(k: int, n: int) -> tuple[Digraph, BlowupSpec]:
    """Blow up TT_k into ``n`` vertices; larger parts take the smaller indices."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    q, r = divmod(n, k)
    sizes = tuple(q + 1 if i < r else q for i in range(k))
    part = [i for i, s in enumerate(sizes) for _ in range(s)]
    D = Digraph.from_arcs(n, ((x, y) for x in range(n) for y in range(n) if part[x] < part[y]))
    return D, BlowupSpec(k, n, sizes)


def build_join(cfg: JoinConfig) -> tuple[Digraph, dict]:
    """Minimal digraph realising two cycles joint at vertex 0 or linked by an arc.

    Joint: cycle 1 is on ``0..m1-1``, cycle 2 on ``0, m1, ..., m1+m2-2``.
    Linked: cycle 1 on ``0..m1-1``, cycle 2 on ``m1..m1+m2-1``, plus ``0 -> m1``.
    The returned dict names both cycles (as vertex lists) and the shared
    vertex or linking arc.
    """
    m1, m2 = cfg.m1, cfg.m2
    c1 = list(range(m1))
    if cfg.mode == JOINT:
        c2 = [0] + list(range(m1, m1 + m2 - 1))
        n = m1 + m2 - 1
        extra: dict = {"shared_vertex": 0}
        arcs = _cycle_arcs(c1) + _cycle_arcs(c2)
    else:
        c2 = list(range(m1, m1 + m2))
        n = m1 + m2
        extra = {"linking_arc": (0, m1)}
        arcs = _cycle_arcs(c1) + _cycle_arcs(c2) + [(0, m1)]
    return Digraph.from_arcs(n, arcs), {"cycle1": c1, "cycle2": c2, **extra}


def cycle_join_tournament(
    l: int, s: int, orientation: str = ALL_TO_TOURNAMENT, seed: int | None = None
) -> Digraph:
    """Cycle ``0..l-1`` disjoint from TT_s on ``l..l+s-1``, every cross pair joined once.

    ``all-to-tournament`` orients each cross arc cycle -> tournament;
    ``random`` flips a fair seeded coin per pair.
    """
    if l < 1 or s < 1:
        raise ValueError("l and s must be positive")
    arcs = _cycle_arcs(list(range(l)))
    arcs += [(l + i, l + j) for i in range(s) for j in range(i + 1, s)]
    if orientation == ALL_TO_TOURNAMENT:
        arcs += [(w, l + i) for w in range(l) for i in range(s)]
    elif orientation == RANDOM:
        if seed is None:
            raise ValueError("random orientation needs an explicit seed")
        forward = np.random.default_rng(seed).random((l, s)) < 0.5
        for w in range(l):
            for i in range(s):
                arcs.append((w, l + i) if forward[w, i] else (l + i, w))
    else:
        raise ValueError(f"unknown orientation {orientation!r}")
    return Digraph.from_arcs(l + s, arcs)
