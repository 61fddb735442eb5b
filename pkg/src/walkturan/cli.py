"""Command-line entry point.

Exit codes: 0 success / holds / free, 1 violated / not free / invalid,
2 usage or input error, 3 budget exhausted / undecided.
"""

from __future__ import annotations

import argparse
import csv
import datetime as dt
import json
import logging
import os
import sys
import time
from typing import Any, Sequence

from . import __version__
from .certificates import CertificateFormatError, WalkCertificate, certificate_for_pair, certificate_problem
from .constructions import (
    ALL_TO_TOURNAMENT,
    JOINT,
    LINKED,
    RANDOM,
    JoinConfig,
    balanced_blowup,
    build_join,
    cycle_join_tournament,
    directed_cycle,
    transitive_tournament,
)
from .digraph import Digraph, DigraphFormatError, parse_digraph, render_digraph
from .lemmas import (
    cycle_tournament_check,
    degree_bound_check,
    half_arcs_check,
    joint_cycles_check,
    linked_cycles_check,
    verify_handshake,
)
from .probes import DEFAULT_K_OFFSETS, probe_conjecture, probe_z
from .search import ALL_PRUNE_RULES, CSV_COLUMNS, DESCEND_BNB, FULL_ENUMERATION, SearchConfig, SearchError, search_ex
from .walks import extract_walks, max_pair_walks, walk_count_matrix

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

LEMMA_IDS = ("handshake", "le12", "le1", "le3", "le5", "le13")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # no prefix matching: --v must not resolve to --version
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _now() -> str:
    return dt.datetime.now(dt.timezone.utc).isoformat(timespec="milliseconds")


class Manifest:
    def __init__(self, args: argparse.Namespace):
        params = {k: v for k, v in vars(args).items() if k not in ("func", "command", "verbose")}
        self.data: dict[str, Any] = {
            "subcommand": args.command,
            "params": params,
            "inputs": [p for p in (getattr(args, "digraph", None), getattr(args, "path", None)) if p],
            "outputs": [p for p in (getattr(args, "out", None), getattr(args, "csv", None)) if p],
            "seed": getattr(args, "seed", None),
            "version": __version__,
            "started": _now(),
        }
        self._t0 = time.perf_counter()

    def finish(self) -> dict[str, Any]:
        self.data["finished"] = _now()
        self.data["seconds"] = round(time.perf_counter() - self._t0, 6)
        return self.data


def _read_digraph(source: str) -> Digraph:
    try:
        text = sys.stdin.read() if source == "-" else open(source).read()
    except OSError as exc:
        raise UsageError(f"cannot read digraph {source!r}: {exc}") from exc
    try:
        return parse_digraph(text)
    except DigraphFormatError as exc:
        raise UsageError(f"{source}: {exc}") from exc


def _emit(payload: dict[str, Any], manifest: Manifest, out: str | None = None) -> None:
    payload = {**payload, "manifest": manifest.finish()}
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _append_csv(path: str, rows: list[dict[str, Any]]) -> None:
    new = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        if new:
            writer.writeheader()
        writer.writerows(rows)


def _loops_flag(value: str) -> bool:
    return value == "on"


# --------------------------------------------------------------------------
# subcommands


def cmd_construct(args) -> int:
    family = args.family
    if family == "tt":
        D = transitive_tournament(args.n)
    elif family == "cycle":
        D = directed_cycle(args.m)
    elif family == "blowup":
        D, _ = balanced_blowup(args.k, args.n)
    elif family == "join":
        D, _ = build_join(JoinConfig(args.m1, args.m2, JOINT if args.mode == "joint" else LINKED))
    else:
        if args.orientation == RANDOM and args.seed is None:
            raise UsageError("random orientation requires --seed")
        D = cycle_join_tournament(args.l, args.s, args.orientation, args.seed)
    sys.stdout.write(render_digraph(D))
    return EXIT_OK


def cmd_count_walks(args, manifest) -> int:
    D = _read_digraph(args.digraph)
    W = walk_count_matrix(D, args.k)
    count, u, v = max_pair_walks(D, args.k)
    _emit({"n": D.n, "k": args.k, "matrix": [list(r) for r in W.entries],
           "max_pair_walks": {"count": count, "source": u, "target": v}}, manifest, args.out)
    return EXIT_OK


def cmd_check_free(args, manifest) -> int:
    D = _read_digraph(args.digraph)
    count, u, v = max_pair_walks(D, args.k)
    if count <= args.t:
        _emit({"verdict": "free", "n": D.n, "k": args.k, "t": args.t,
               "max_pair_walks": {"count": count, "source": u, "target": v}}, manifest, args.out)
        return EXIT_OK
    cert = certificate_for_pair(D, args.k, u, v, args.t)
    _emit({**cert.to_dict(), "verdict": "not-free", "t": args.t, "pair_walk_count": count},
          manifest, args.out)
    return EXIT_VIOLATED


def cmd_extract_walks(args, manifest) -> int:
    D = _read_digraph(args.digraph)
    for label, x in (("u", args.u), ("v", args.v)):
        if not 0 <= x < D.n:
            raise UsageError(f"--{label} {x} out of range for n={D.n}")
    walks = extract_walks(D, args.k, args.u, args.v, args.limit)
    cert = WalkCertificate(D, args.k, args.u, args.v, tuple(walks))
    _emit({**cert.to_dict(), "count": len(walks)}, manifest, args.out)
    return EXIT_OK


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"verify-lemma {args.lemma} requires {' '.join(missing)}")


def cmd_verify_lemma(args, manifest) -> int:
    lemma = args.lemma
    if lemma == "handshake":
        _need(args, "digraph")
        report = verify_handshake(_read_digraph(args.digraph))
    elif lemma == "le12":
        _need(args, "m1", "m2", "t")
        report = joint_cycles_check(args.m1, args.m2, args.t, args.k)
    elif lemma == "le1":
        _need(args, "m1", "m2", "t")
        report = linked_cycles_check(args.m1, args.m2, args.t)
    elif lemma == "le3":
        _need(args, "n")
        report = half_arcs_check(args.n)
    elif lemma == "le5":
        _need(args, "digraph", "k", "t")
        report = degree_bound_check(_read_digraph(args.digraph), args.k, args.t)
    else:
        _need(args, "l", "s", "t")
        if args.orientation == RANDOM and args.seed is None:
            raise UsageError("random orientation requires --seed")
        report = cycle_tournament_check(args.l, args.s, args.t, args.orientation, args.seed)
    _emit(report.to_dict(), manifest, args.out)
    return EXIT_OK if report.holds else EXIT_VIOLATED


def _search_config(args, loops: bool) -> SearchConfig:
    prune = ALL_PRUNE_RULES if args.prune is None else frozenset(p for p in args.prune if p != "none")
    return SearchConfig(args.n, args.k, args.t, allow_loops=loops, strategy=args.strategy,
                        prune_rules=prune, workers=args.workers, budget_secs=args.budget_secs,
                        resume=args.resume)


def cmd_search_ex(args, manifest) -> int:
    rec = search_ex(_search_config(args, _loops_flag(args.loops)))
    _emit(rec.to_dict(), manifest, args.out)
    if args.csv:
        _append_csv(args.csv, [rec.csv_row()])
    return EXIT_OK if rec.authoritative else EXIT_BUDGET


def _universes(value: str) -> tuple[bool, ...]:
    return {"on": (True,), "off": (False,), "both": (True, False)}[value]


def cmd_probe_z(args, manifest) -> int:
    if args.n:
        ns = args.n
    elif args.n_min is not None and args.n_max is not None:
        ns = list(range(args.n_min, args.n_max + 1))
    else:
        raise UsageError("probe-z requires --n or both --n-min and --n-max")
    report = probe_z(args.t, ns, args.k_offsets, _universes(args.loops), args.strategy,
                     args.workers, args.budget_secs)
    _emit(report, manifest, args.out)
    if args.csv:
        from .search import ExtremalRecord

        _append_csv(args.csv, [ExtremalRecord.from_dict(r).csv_row() for r in report["records"]])
    unknown = any(c["verdict"] == "unknown" for c in report["cells"])
    return EXIT_BUDGET if unknown else EXIT_OK


def cmd_probe_conjecture(args, manifest) -> int:
    report = probe_conjecture(args.k, args.t, args.n, _loops_flag(args.loops), args.workers, args.budget_secs)
    _emit(report, manifest, args.out)
    verdict = report["verdict"]
    if verdict.startswith("undecided"):
        return EXIT_BUDGET
    return EXIT_VIOLATED if verdict == "disagree" else EXIT_OK


def cmd_validate_cert(args, manifest) -> int:
    try:
        text = sys.stdin.read() if args.path == "-" else open(args.path).read()
    except OSError as exc:
        raise UsageError(f"cannot read certificate {args.path!r}: {exc}") from exc
    try:
        cert = WalkCertificate.from_json(text)
    except CertificateFormatError as exc:
        raise UsageError(f"{args.path}: {exc}") from exc
    problem = certificate_problem(cert, args.t)
    payload: dict[str, Any] = {"valid": problem is None, "walks": len(cert.walks)}
    if problem is not None:
        payload["problem"] = problem
    _emit(payload, manifest, args.out)
    return EXIT_OK if problem is None else EXIT_VIOLATED


# --------------------------------------------------------------------------
# parser


def _search_flags(p: argparse.ArgumentParser, single_n: bool = True) -> None:
    if single_n:
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--k", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--strategy", choices=(DESCEND_BNB, FULL_ENUMERATION), default=DESCEND_BNB)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--budget-secs", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="walkturan", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("construct", help="emit a named digraph in text format")
    fam = p.add_subparsers(dest="family", required=True, parser_class=_Parser)
    q = fam.add_parser("tt", help="transitive tournament")
    q.add_argument("--n", type=int, required=True)
    q = fam.add_parser("cycle", help="directed cycle (m=1 is a loop)")
    q.add_argument("--m", type=int, required=True)
    q = fam.add_parser("blowup", help="balanced blow-up of TT_k on n vertices")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--n", type=int, required=True)
    q = fam.add_parser("join", help="two cycles joint at a vertex or linked by an arc")
    q.add_argument("--m1", type=int, required=True)
    q.add_argument("--m2", type=int, required=True)
    q.add_argument("--mode", choices=("joint", "linked"), required=True)
    q = fam.add_parser("cycle-tournament", help="cycle fully joined to a transitive tournament")
    q.add_argument("--l", type=int, required=True)
    q.add_argument("--s", type=int, required=True)
    q.add_argument("--orientation", choices=(ALL_TO_TOURNAMENT, RANDOM), default=ALL_TO_TOURNAMENT)
    q.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("count-walks", help="exact k-walk count matrix")
    p.add_argument("digraph", help="digraph text file, or - for stdin")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_count_walks)

    p = sub.add_parser("check-free", help="decide F_{k,t+1}-freeness; certificate on failure")
    p.add_argument("digraph")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_check_free)

    p = sub.add_parser("extract-walks", help="lexicographically first k-walks u -> v")
    p.add_argument("digraph")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--limit", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_extract_walks)

    p = sub.add_parser("verify-lemma", help="run one lemma verifier")
    p.add_argument("lemma", choices=LEMMA_IDS)
    p.add_argument("--digraph")
    for name in ("n", "k", "t", "m1", "m2", "l", "s", "seed"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--orientation", choices=(ALL_TO_TOURNAMENT, RANDOM), default=ALL_TO_TOURNAMENT)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify_lemma)

    p = sub.add_parser("search-ex", help="exact ex and EX up to isomorphism")
    _search_flags(p)
    p.add_argument("--loops", choices=("on", "off"), default="on")
    p.add_argument("--prune", action="append", choices=sorted(ALL_PRUNE_RULES) + ["none"])
    p.add_argument("--resume")
    p.add_argument("--out")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_search_ex)

    p = sub.add_parser("probe-z", help="TT-extremality over an (n, k) window")
    _search_flags(p, single_n=False)
    p.add_argument("--n", type=int, nargs="+")
    p.add_argument("--n-min", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--k-offsets", type=int, nargs="+", default=list(DEFAULT_K_OFFSETS))
    p.add_argument("--loops", choices=("on", "off", "both"), default="both")
    p.add_argument("--out")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_probe_z)

    p = sub.add_parser("probe-conjecture", help="blow-up of TT_k versus the exact optimum")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--loops", choices=("on", "off"), default="on")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--budget-secs", type=float)
    p.add_argument("--out")
    p.set_defaults(func=cmd_probe_conjecture)

    p = sub.add_parser("validate-cert", help="check a walk certificate from scratch")
    p.add_argument("path", help="certificate JSON file, or - for stdin")
    p.add_argument("--t", type=int, help="also require at least t+1 walks")
    p.add_argument("--out")
    p.set_defaults(func=cmd_validate_cert)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "construct":
            return args.func(args)
        return args.func(args, Manifest(args))
    except UsageError as exc:
        print(f"walkturan {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, SearchError, IndexError) as exc:
        print(f"walkturan {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
