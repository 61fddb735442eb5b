"""Exact ex(n, F_{k,t+1}) and EX(n, F_{k,t+1}) for small orders.

Two strategies share one contract:

``full-enumeration``
    every labelled digraph in the universe, checked in numpy batches; the
    brute-force oracle (n <= 5).

``descend-bnb``
    decision problems "is there a free digraph with m arcs?" for m
    descending from an upper bound; the first satisfiable m is ex.  Each
    decision is a depth-first include/exclude search over arcs in row-major
    order.  Because freeness is inherited by subgraphs, an arc that makes
    the current digraph non-free is dropped for the whole subtree
    (monotone-freeness), and so is one pushing an incident degree past n
    when k >= 2*ceil(log2(t+1)) (degree-bound).  Vertex relabelling is
    broken by requiring non-increasing out-degrees along 0..n-1, which every
    isomorphism class admits; exact canonical keys then merge relabellings.

The decision tree is cut at a fixed depth into subtrees that run serially or
on a process pool; results are merged in subtree order, so records do not
depend on the worker count.
"""

from __future__ import annotations

import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Iterator

import numpy as np

from .canonical import CanonicalKey, canonical_codes, digraph_from_key, key_from_code
from .digraph import Digraph, render_digraph
from .thresholds import lemma5_k
from .walks import saturated_power

__all__ = [
    "FULL_ENUMERATION",
    "DESCEND_BNB",
    "DEGREE_BOUND",
    "MONOTONE_FREENESS",
    "ALL_PRUNE_RULES",
    "MAX_FULL_ORDER",
    "MAX_BNB_ORDER",
    "SearchConfig",
    "ExtremalRecord",
    "SearchError",
    "search_ex",
    "exists_free",
    "enumerate_free",
]

log = logging.getLogger(__name__)

FULL_ENUMERATION = "full-enumeration"
DESCEND_BNB = "descend-bnb"
DEGREE_BOUND = "degree-bound"
MONOTONE_FREENESS = "monotone-freeness"
ALL_PRUNE_RULES = frozenset({DEGREE_BOUND, MONOTONE_FREENESS})

MAX_FULL_ORDER = 5
MAX_BNB_ORDER = 8
SPLIT_DEPTH = 6
_CHUNK = 1 << 18
_CLOCK_EVERY = 256


class SearchError(ValueError):
    pass


class _BudgetExhausted(Exception):
    pass


@dataclass(frozen=True)
class SearchConfig:
    n: int
    k: int
    t: int
    allow_loops: bool = True
    strategy: str = DESCEND_BNB
    prune_rules: frozenset[str] = ALL_PRUNE_RULES
    workers: int = 1
    budget_secs: float | None = None
    resume: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "prune_rules", frozenset(self.prune_rules))
        if self.n < 1 or self.k < 1 or self.t < 1:
            raise SearchError("n, k and t must be positive")
        if self.strategy not in (FULL_ENUMERATION, DESCEND_BNB):
            raise SearchError(f"unknown strategy {self.strategy!r}")
        unknown = self.prune_rules - ALL_PRUNE_RULES
        if unknown:
            raise SearchError(f"unknown prune rules {sorted(unknown)}")
        if self.strategy == FULL_ENUMERATION and self.n > MAX_FULL_ORDER:
            raise SearchError(f"full enumeration is limited to n <= {MAX_FULL_ORDER}; use {DESCEND_BNB}")
        if self.n > MAX_BNB_ORDER:
            raise SearchError(f"exact search is limited to n <= {MAX_BNB_ORDER}")
        if self.workers < 1:
            raise SearchError("workers must be positive")

    @property
    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in range(self.n) if self.allow_loops or u != v]

    @property
    def degree_rule_active(self) -> bool:
        return DEGREE_BOUND in self.prune_rules and self.k >= lemma5_k(self.t)

    def header(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "k": self.k,
            "t": self.t,
            "allow_loops": self.allow_loops,
            "strategy": self.strategy,
            "prune_rules": sorted(self.prune_rules),
        }


@dataclass
class ExtremalRecord:
    n: int
    k: int
    t: int
    allow_loops: bool
    ex_value: int | None
    extremal_keys: list[CanonicalKey]
    strategy: str
    authoritative: bool = True
    undecided_m: int | None = None
    stats: dict[str, Any] = field(default_factory=dict)

    @property
    def witnesses(self) -> list[Digraph]:
        return [digraph_from_key(key) for key in self.extremal_keys]

    def to_dict(self, timing: bool = True) -> dict[str, Any]:
        stats = dict(self.stats)
        if not timing:
            stats.pop("seconds", None)
        return {
            "n": self.n,
            "k": self.k,
            "t": self.t,
            "allow_loops": self.allow_loops,
            "strategy": self.strategy,
            "authoritative": self.authoritative,
            "ex_value": self.ex_value,
            "undecided_m": self.undecided_m,
            "extremal_keys": [key.hex() for key in self.extremal_keys],
            "witnesses": [render_digraph(D) for D in self.witnesses],
            "stats": stats,
        }

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExtremalRecord":
        n = data["n"]
        return cls(
            n=n,
            k=data["k"],
            t=data["t"],
            allow_loops=data["allow_loops"],
            ex_value=data["ex_value"],
            extremal_keys=[CanonicalKey.from_hex(n, h) for h in data["extremal_keys"]],
            strategy=data["strategy"],
            authoritative=data["authoritative"],
            undecided_m=data.get("undecided_m"),
            stats=dict(data.get("stats", {})),
        )

    def csv_row(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "k": self.k,
            "t": self.t,
            "loops": "on" if self.allow_loops else "off",
            "ex": "" if self.ex_value is None else self.ex_value,
            "num_extremal": len(self.extremal_keys),
            "seconds": f"{self.stats.get('seconds', 0.0):.3f}",
        }


CSV_COLUMNS = ["n", "k", "t", "loops", "ex", "num_extremal", "seconds"]


def _keys_from_adjacency(adj: np.ndarray) -> list[CanonicalKey]:
    if len(adj) == 0:
        return []
    n = adj.shape[1]
    codes = np.unique(canonical_codes(adj))
    return [key_from_code(n, int(c)) for c in codes]


def _work_dtype(n: int, t: int):
    cap = t + 1
    return np.int32 if n * cap * cap < 2**31 else np.int64


# --------------------------------------------------------------------------
# branch and bound


class _Engine:
    """Depth-first include/exclude search for free digraphs with exactly m arcs."""

    def __init__(self, cfg: SearchConfig, deadline: float | None):
        self.n, self.k, self.t = cfg.n, cfg.k, cfg.t
        self.cap = cfg.t + 1
        self.arcs = cfg.arcs
        self.monotone = MONOTONE_FREENESS in cfg.prune_rules
        self.degree_rule = cfg.degree_rule_active
        self.deadline = deadline
        self.dtype = _work_dtype(cfg.n, cfg.t)
        self.us = np.array([a[0] for a in self.arcs], dtype=np.intp)
        self.vs = np.array([a[1] for a in self.arcs], dtype=np.intp)
        # arcs are row-major, so each row owns a contiguous index range
        self.row_start = [0] * (self.n + 1)
        for u, _ in self.arcs:
            self.row_start[u + 1] += 1
        for u in range(self.n):
            self.row_start[u + 1] += self.row_start[u]
        self.nodes = 0

    # state: adjacency matrix A, incident degrees, out-degrees, included count
    def load(self, rows: tuple[int, ...]):
        self.A = np.zeros((self.n, self.n), dtype=self.dtype)
        for u, row in enumerate(rows):
            for v in range(self.n):
                if row >> v & 1:
                    self.A[u, v] = 1
        self.outdeg = [row.bit_count() for row in rows]
        self.incident = [
            int(self.A[u].sum() + self.A[:, u].sum() - self.A[u, u]) for u in range(self.n)
        ]
        self.inc = sum(self.outdeg)

    def rows(self) -> tuple[int, ...]:
        return tuple(sum(1 << int(v) for v in np.flatnonzero(self.A[u])) for u in range(self.n))

    def is_free_now(self) -> bool:
        return int(saturated_power(self.A, self.k, self.cap).max()) <= self.t

    def filter(self, cand: int) -> int:
        idx = []
        c = cand
        while c:
            low = c & -c
            i = low.bit_length() - 1
            c ^= low
            if self.degree_rule:
                u, v = self.arcs[i]
                if self.incident[u] + 1 > self.n or self.incident[v] + 1 > self.n:
                    continue
            idx.append(i)
        if not idx or not self.monotone:
            return sum(1 << i for i in idx)
        sel = np.array(idx, dtype=np.intp)
        batch = np.repeat(self.A[None], len(idx), axis=0)
        batch[np.arange(len(idx)), self.us[sel], self.vs[sel]] = 1
        worst = saturated_power(batch, self.k, self.cap).reshape(len(idx), -1).max(axis=1)
        return sum(1 << i for i, w in zip(idx, worst) if w <= self.t)

    def _bound(self, cand: int, u: int) -> int:
        """Largest arc count reachable under the out-degree order."""
        above = self.outdeg[u - 1] if u else self.n
        row_room = (cand >> self.row_start[u]) & ((1 << (self.row_start[u + 1] - self.row_start[u])) - 1)
        here = min(row_room.bit_count(), above - self.outdeg[u])
        later_cap = self.outdeg[u] + here
        total = self.inc + here
        for r in range(u + 1, self.n):
            room = (cand >> self.row_start[r]) & ((1 << (self.row_start[r + 1] - self.row_start[r])) - 1)
            total += min(room.bit_count(), later_cap)
        return total

    def _tick(self):
        self.nodes += 1
        if self.deadline is not None and self.nodes % _CLOCK_EVERY == 0:
            if time.monotonic() > self.deadline:
                raise _BudgetExhausted

    def dfs(self, cand: int, m: int, depth: int, split: int | None, found: list, frontier: list):
        self._tick()
        if self.inc == m:
            if self.monotone or self.is_free_now():
                found.append(self.rows())
            return
        if cand == 0:
            return
        i = (cand & -cand).bit_length() - 1
        u, v = self.arcs[i]
        if self._bound(cand, u) < m:
            return
        if split is not None and depth == split:
            frontier.append((self.rows(), cand))
            return
        rest = cand & ~(1 << i)
        if u == 0 or self.outdeg[u] + 1 <= self.outdeg[u - 1]:
            self.A[u, v] = 1
            self.outdeg[u] += 1
            self.incident[u] += 1
            if u != v:
                self.incident[v] += 1
            self.inc += 1
            self.dfs(self.filter(rest), m, depth + 1, split, found, frontier)
            self.inc -= 1
            if u != v:
                self.incident[v] -= 1
            self.incident[u] -= 1
            self.outdeg[u] -= 1
            self.A[u, v] = 0
        self.dfs(rest, m, depth + 1, split, found, frontier)

    def solve(self, rows: tuple[int, ...], cand: int, m: int) -> list[tuple[int, ...]]:
        self.load(rows)
        found: list = []
        self.dfs(cand, m, 0, None, found, [])
        return found


def _subtree_task(args) -> tuple[list, int, bool]:
    cfg, deadline, rows, cand, m = args
    engine = _Engine(cfg, deadline)
    try:
        found = engine.solve(rows, cand, m)
    except _BudgetExhausted:
        return [], engine.nodes, True
    return found, engine.nodes, False


class _ResumeLog:
    """Append-only JSON-lines log of finished subtrees and decided targets."""

    def __init__(self, path: str | None, cfg: SearchConfig):
        self.path = path
        self.subtrees: dict[tuple[int, int], tuple[list, int]] = {}
        self.decisions: dict[int, tuple[bool, int]] = {}
        if path is None:
            return
        header = {"type": "header", **cfg.header()}
        if os.path.exists(path) and os.path.getsize(path) > 0:
            entries = []
            with open(path) as fh:
                lines = [line for line in fh if line.strip()]
            for i, line in enumerate(lines):
                try:
                    entries.append(json.loads(line))
                except json.JSONDecodeError:
                    if i < len(lines) - 1:
                        raise SearchError(f"resume log {path} is corrupt at line {i + 1}") from None
                    # torn final write from an interrupted run: drop it before appending
                    with open(path, "w") as fh:
                        fh.writelines(lines[:-1])
            if not entries or {k: v for k, v in entries[0].items()} != header:
                raise SearchError(f"resume log {path} was written for a different search")
            for e in entries[1:]:
                if e["type"] == "subtree":
                    self.subtrees[(e["m"], e["index"])] = ([tuple(r) for r in e["found"]], e["nodes"])
                elif e["type"] == "decision":
                    self.decisions[e["m"]] = (e["sat"], e["nodes"])
        else:
            self._append(header)

    def _append(self, entry: dict):
        if self.path is None:
            return
        with open(self.path, "a") as fh:
            fh.write(json.dumps(entry, sort_keys=True) + "\n")
            fh.flush()

    def subtree_done(self, m: int, index: int, found: list, nodes: int):
        self.subtrees[(m, index)] = (found, nodes)
        self._append({"type": "subtree", "m": m, "index": index,
                      "found": [list(r) for r in found], "nodes": nodes})

    def decided(self, m: int, sat: bool, nodes: int):
        self.decisions[m] = (sat, nodes)
        self._append({"type": "decision", "m": m, "sat": sat, "nodes": nodes})


def _decide(cfg: SearchConfig, m: int, deadline: float | None, journal: _ResumeLog):
    """All labelled (degree-ordered) free digraphs with exactly ``m`` arcs.

    Returns ``(found_rows, nodes)``; raises _BudgetExhausted with partial
    progress already journalled.
    """
    if m in journal.decisions and not journal.decisions[m][0]:
        return [], journal.decisions[m][1]
    root = _Engine(cfg, deadline)
    root.load((0,) * cfg.n)
    found: list = []
    frontier: list = []
    root.dfs(root.filter((1 << len(cfg.arcs)) - 1), m, 0, SPLIT_DEPTH, found, frontier)
    nodes = root.nodes
    pending = [(i, st) for i, st in enumerate(frontier) if (m, i) not in journal.subtrees]
    results: dict[int, tuple[list, int]] = {
        i: journal.subtrees[(m, i)] for i in range(len(frontier)) if (m, i) in journal.subtrees
    }
    exhausted = False
    tasks = [(cfg, deadline, rows, cand, m) for _, (rows, cand) in pending]
    if cfg.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes = list(pool.map(_subtree_task, tasks, chunksize=max(1, len(tasks) // (4 * cfg.workers))))
    else:
        outcomes = []
        for task in tasks:
            outcome = _subtree_task(task)
            outcomes.append(outcome)
            if outcome[2]:
                break
    for (i, _), (sub_found, sub_nodes, hit_budget) in zip(pending, outcomes):
        if hit_budget:
            exhausted = True
            continue
        results[i] = (sub_found, sub_nodes)
        journal.subtree_done(m, i, sub_found, sub_nodes)
    if exhausted:
        raise _BudgetExhausted
    for i in range(len(frontier)):
        found.extend(results[i][0])
        nodes += results[i][1]
    journal.decided(m, bool(found), nodes)
    return found, nodes


def _upper_bound(cfg: SearchConfig) -> int:
    total = len(cfg.arcs)
    if cfg.degree_rule_active:
        # 2a = sum of incident degrees + loops <= n*n + loops
        loops = cfg.n if cfg.allow_loops else 0
        total = min(total, (cfg.n * cfg.n + loops) // 2)
    return total


def _deadline(cfg: SearchConfig, start: float) -> float | None:
    return None if cfg.budget_secs is None else start + cfg.budget_secs


def _bnb(cfg: SearchConfig) -> ExtremalRecord:
    start = time.monotonic()
    deadline = _deadline(cfg, start)
    journal = _ResumeLog(cfg.resume, cfg)
    total_nodes = 0
    m = _upper_bound(cfg)
    try:
        while True:
            found, nodes = _decide(cfg, m, deadline, journal)
            total_nodes += nodes
            log.debug("n=%d k=%d t=%d m=%d: %d found, %d nodes", cfg.n, cfg.k, cfg.t, m, len(found), nodes)
            if found:
                break
            m -= 1
    except _BudgetExhausted:
        return ExtremalRecord(cfg.n, cfg.k, cfg.t, cfg.allow_loops, None, [], cfg.strategy,
                              authoritative=False, undecided_m=m,
                              stats={"nodes": total_nodes, "seconds": time.monotonic() - start})
    adj = np.zeros((len(found), cfg.n, cfg.n), dtype=np.uint8)
    for b, rows in enumerate(found):
        for u, row in enumerate(rows):
            for v in range(cfg.n):
                adj[b, u, v] = row >> v & 1
    keys = _keys_from_adjacency(adj)
    return ExtremalRecord(cfg.n, cfg.k, cfg.t, cfg.allow_loops, m, keys, cfg.strategy,
                          stats={"nodes": total_nodes, "seconds": time.monotonic() - start})


def exists_free(cfg: SearchConfig, m: int) -> bool | None:
    """Is there a free digraph with at least ``m`` arcs?  None if over budget."""
    if m <= 0:
        return True
    if m > len(cfg.arcs):
        return False
    start = time.monotonic()
    try:
        found, _ = _decide(cfg, m, _deadline(cfg, start), _ResumeLog(None, cfg))
    except _BudgetExhausted:
        return None
    return bool(found)


# --------------------------------------------------------------------------
# brute force


def _labelled_batches(n: int, allow_loops: bool, t: int) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    arcs = [(u, v) for u in range(n) for v in range(n) if allow_loops or u != v]
    N = len(arcs)
    flat_pos = np.array([u * n + v for u, v in arcs], dtype=np.intp)
    shifts = np.arange(N, dtype=np.int64)
    dtype = _work_dtype(n, t)
    for lo in range(0, 1 << N, _CHUNK):
        codes = np.arange(lo, min(lo + _CHUNK, 1 << N), dtype=np.int64)
        bits = ((codes[:, None] >> shifts) & 1).astype(dtype)
        adj = np.zeros((len(codes), n * n), dtype=dtype)
        adj[:, flat_pos] = bits
        yield adj.reshape(-1, n, n), bits.sum(axis=1)


def _free_mask(adj: np.ndarray, k: int, t: int) -> np.ndarray:
    powered = saturated_power(adj, k, t + 1)
    return powered.reshape(len(adj), -1).max(axis=1) <= t


def _full(cfg: SearchConfig) -> ExtremalRecord:
    start = time.monotonic()
    deadline = _deadline(cfg, start)
    best = -1
    keep: list[np.ndarray] = []
    seen = 0
    for adj, counts in _labelled_batches(cfg.n, cfg.allow_loops, cfg.t):
        if deadline is not None and time.monotonic() > deadline:
            return ExtremalRecord(cfg.n, cfg.k, cfg.t, cfg.allow_loops, None, [], cfg.strategy,
                                  authoritative=False, stats={"nodes": seen, "seconds": time.monotonic() - start})
        seen += len(adj)
        free = _free_mask(adj, cfg.k, cfg.t)
        if not free.any():
            continue
        top = int(counts[free].max())
        if top > best:
            best, keep = top, []
        if top == best:
            keep.append(adj[free & (counts == best)].astype(np.uint8))
    keys = _keys_from_adjacency(np.concatenate(keep))
    return ExtremalRecord(cfg.n, cfg.k, cfg.t, cfg.allow_loops, best, keys, cfg.strategy,
                          stats={"nodes": seen, "seconds": time.monotonic() - start})


def enumerate_free(n: int, k: int, t: int, arc_count: int, allow_loops: bool = True) -> list[CanonicalKey]:
    """Isomorphism classes of free digraphs with exactly ``arc_count`` arcs (n <= 5)."""
    if n > MAX_FULL_ORDER:
        raise SearchError(f"enumerate_free is brute force and limited to n <= {MAX_FULL_ORDER}")
    if n < 1 or k < 1 or t < 1 or arc_count < 0:
        raise SearchError("n, k, t must be positive and arc_count nonnegative")
    keep = []
    for adj, counts in _labelled_batches(n, allow_loops, t):
        sel = counts == arc_count
        if not sel.any():
            continue
        sub = adj[sel]
        keep.append(sub[_free_mask(sub, k, t)].astype(np.uint8))
    if not keep:
        return []
    return _keys_from_adjacency(np.concatenate(keep))


def search_ex(cfg: SearchConfig) -> ExtremalRecord:
    if cfg.strategy == FULL_ENUMERATION:
        return _full(cfg)
    return _bnb(cfg)
