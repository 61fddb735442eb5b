"""Executable checks of the structural lemmas behind the extremal result.

Each verifier builds the lemma's configuration, decides it by exact walk
counting and returns a :class:`LemmaReport`.  "holds" means the instance
agrees with the lemma; a "violated" report always carries a witness.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Any

import numpy as np

from .canonical import canonical_codes
from .certificates import WalkCertificate, certificate_for_pair, certificate_problem
from .constructions import (
    ALL_TO_TOURNAMENT,
    JOINT,
    LINKED,
    JoinConfig,
    build_join,
    cycle_join_tournament,
)
from .digraph import Digraph, degrees, girth, is_transitive_tournament, render_digraph
from .thresholds import ceil_log2, lemma1_k, lemma5_k, lemma12_k, lemma13_k, lemma13_size
from .walks import Walk, is_free, max_pair_walks

__all__ = [
    "HOLDS",
    "VIOLATED",
    "LemmaReport",
    "verify_handshake",
    "joint_cycles_certificate",
    "joint_cycles_check",
    "linked_cycles_check",
    "half_arcs_check",
    "degree_bound_check",
    "cycle_tournament_check",
]

HOLDS = "holds"
VIOLATED = "violated"


@dataclass
class LemmaReport:
    lemma: str
    params: dict[str, Any]
    verdict: str
    witness: dict[str, Any] | None = None
    millis: float = 0.0
    stats: dict[str, Any] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"lemma": self.lemma, "params": self.params, "verdict": self.verdict}
        if self.witness is not None:
            out["witness"] = self.witness
        out["millis"] = round(self.millis, 3)
        if self.stats:
            out["stats"] = self.stats
        return out


class _Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.millis = (time.perf_counter() - self.start) * 1000.0


def verify_handshake(D: Digraph) -> LemmaReport:
    """``2 a(D) = sum_u d(u) + loops``."""
    with _Timer() as clock:
        lhs = 2 * D.arc_count
        rhs = sum(degrees(D, u).incident for u in range(D.n)) + D.loop_count
    verdict = HOLDS if lhs == rhs else VIOLATED
    witness = None if verdict == HOLDS else {"digraph": render_digraph(D)}
    return LemmaReport("handshake", {"n": D.n}, verdict, witness, clock.millis,
                       {"twice_arcs": lhs, "degree_sum_plus_loops": rhs})


def _cycle_walk(cycle: list[int], start_index: int, length: int) -> list[int]:
    m = len(cycle)
    return [cycle[(start_index + i) % m] for i in range(length + 1)]


def joint_cycles_certificate(m1: int, m2: int, t: int, k: int) -> WalkCertificate:
    """Replace-or-keep construction for two cycles sharing vertex 0.

    A closed walk of ``s = ceil(log2(t+1))`` segments of length ``L`` runs
    around cycle 1; each segment may instead go ``L / m2`` times round cycle 2.
    The first ``t + 1`` replacement masks (lexicographic) give distinct
    closed walks; all are then extended by the same ``k - sL`` steps along
    cycle 2.
    """
    cfg = JoinConfig(m1, m2, JOINT)
    D, info = build_join(cfg)
    L = cfg.L
    need = lemma12_k(L, t)
    if k < need:
        raise ValueError(f"k={k} below the joint-cycles threshold {need} for L={L}, t={t}")
    s = ceil_log2(t + 1)
    keep = _cycle_walk(info["cycle1"], 0, L)[1:]
    swap = _cycle_walk(info["cycle2"], 0, L)[1:]
    suffix = _cycle_walk(info["cycle2"], 0, k - L * s)[1:]
    walks: list[Walk] = []
    for mask in product((0, 1), repeat=s):
        seq = [0]
        for bit in mask:
            seq.extend(swap if bit else keep)
        seq.extend(suffix)
        walks.append(tuple(seq))
        if len(walks) == t + 1:
            break
    target = walks[0][-1]
    return WalkCertificate(D, k, 0, target, tuple(walks))


def joint_cycles_check(m1: int, m2: int, t: int, k: int | None = None) -> LemmaReport:
    """Two cycles joint at a vertex: count and certificate at ``k`` (default the threshold)."""
    L = JoinConfig(m1, m2, JOINT).L
    k = lemma12_k(L, t) if k is None else k
    params = {"m1": m1, "m2": m2, "t": t, "k": k, "L": L}
    with _Timer() as clock:
        cert = joint_cycles_certificate(m1, m2, t, k)
        count, u, v = max_pair_walks(cert.host, k)
        problem = certificate_problem(cert, t)
    ok = count >= t + 1 and problem is None
    witness = cert.to_dict()
    if problem is not None:
        witness["problem"] = problem
    return LemmaReport("le12", params, HOLDS if ok else VIOLATED, witness, clock.millis,
                       {"max_pair_walks": count, "pair": [u, v]})


def _not_free_report(name: str, params: dict, D: Digraph, k: int, t: int, millis_start: float) -> LemmaReport:
    count, u, v = max_pair_walks(D, k)
    cert = certificate_for_pair(D, k, u, v, t)
    millis = (time.perf_counter() - millis_start) * 1000.0
    if count >= t + 1:
        return LemmaReport(name, params, HOLDS, cert.to_dict(), millis,
                           {"max_pair_walks": count, "pair": [u, v]})
    # the configuration is free: that digraph is the counterexample
    return LemmaReport(name, params, VIOLATED, {"digraph": render_digraph(D), "max_pair_walks": count},
                       millis, {"max_pair_walks": count, "pair": [u, v]})


def linked_cycles_check(m1: int, m2: int, t: int) -> LemmaReport:
    """Disjoint cycles plus one arc are not free at ``k = tL + 1``."""
    cfg = JoinConfig(m1, m2, LINKED)
    k = lemma1_k(cfg.L, t)
    start = time.perf_counter()
    D, _ = build_join(cfg)
    return _not_free_report("le1", {"m1": m1, "m2": m2, "t": t, "k": k, "L": cfg.L}, D, k, t, start)


def cycle_tournament_check(
    l: int, s: int, t: int, orientation: str = ALL_TO_TOURNAMENT, seed: int | None = None
) -> LemmaReport:
    """A cycle fully joined to a large tournament is not free at ``lemma13_k(t)``."""
    need = lemma13_size(t)
    if s < need:
        raise ValueError(f"tournament order {s} below the lemma's size threshold {need}")
    k = lemma13_k(t)
    start = time.perf_counter()
    D = cycle_join_tournament(l, s, orientation, seed)
    params = {"l": l, "s": s, "t": t, "k": k, "orientation": orientation}
    if seed is not None:
        params["seed"] = seed
    return _not_free_report("le13", params, D, k, t, start)


def degree_bound_check(D: Digraph, k: int, t: int) -> LemmaReport:
    """If ``D`` is free then every incident degree is at most ``n``."""
    need = lemma5_k(t)
    if k < need:
        raise ValueError(f"k={k} below the degree-bound threshold {need} for t={t}")
    with _Timer() as clock:
        free = is_free(D, k, t)
        incident = [degrees(D, u).incident for u in range(D.n)]
    worst = max(range(D.n), key=lambda u: (incident[u], -u))
    stats = {"free": free, "max_incident": incident[worst], "vertex": worst}
    params = {"n": D.n, "k": k, "t": t}
    if free and incident[worst] > D.n:
        count, u, v = max_pair_walks(D, k)
        witness = {"digraph": render_digraph(D), "vertex": worst, "incident": incident[worst],
                   "max_pair_walks": count, "pair": [u, v]}
        return LemmaReport("le5", params, VIOLATED, witness, clock.millis, stats)
    return LemmaReport("le5", params, HOLDS, None, clock.millis, stats)


def _half_arc_classes(n: int) -> tuple[int, list[Digraph]]:
    arcs = [(u, v) for u in range(n) for v in range(n) if u != v]
    idx = np.array(list(combinations(range(len(arcs)), n * (n - 1) // 2)), dtype=np.intp)
    us = np.array([a[0] for a in arcs])
    vs = np.array([a[1] for a in arcs])
    adj = np.zeros((len(idx), n, n), dtype=np.uint8)
    rows = np.repeat(np.arange(len(idx)), idx.shape[1])
    adj[rows, us[idx].ravel(), vs[idx].ravel()] = 1
    codes = canonical_codes(adj)
    _, first = np.unique(codes, return_index=True)
    return len(idx), [Digraph.from_matrix(adj[i]) for i in sorted(first)]


def half_arcs_check(n: int) -> LemmaReport:
    """Loopless, ``n(n-1)/2`` arcs: transitive tournament or girth at most 3."""
    if not 2 <= n <= 5:
        raise ValueError("half_arcs_check is exhaustive only for 2 <= n <= 5")
    with _Timer() as clock:
        labelled, classes = _half_arc_classes(n)
        bad = next((D for D in classes if not is_transitive_tournament(D) and girth(D) > 3), None)
    stats = {"labelled": labelled, "classes": len(classes)}
    if bad is not None:
        return LemmaReport("le3", {"n": n}, VIOLATED, {"digraph": render_digraph(bad)}, clock.millis, stats)
    return LemmaReport("le3", {"n": n}, HOLDS, None, clock.millis, stats)
