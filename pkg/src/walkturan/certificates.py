"""Walk certificates: explicit families of equal-length walks sharing endpoints.

JSON layout::

    {"n": 3, "k": 2, "source": 1, "target": 1,
     "walks": [[1, 0, 1], [1, 2, 1]], "digraph": "3\\n010\\n101\\n010\\n"}

Extra top-level keys (e.g. an embedded run manifest) are ignored.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .digraph import Digraph, DigraphFormatError, parse_digraph, render_digraph
from .walks import Walk, extract_walks

__all__ = [
    "WalkCertificate",
    "CertificateFormatError",
    "certificate_problem",
    "certificate_for_pair",
]


class CertificateFormatError(ValueError):
    pass


@dataclass(frozen=True)
class WalkCertificate:
    host: Digraph
    k: int
    source: int
    target: int
    walks: tuple[Walk, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.host.n,
            "k": self.k,
            "source": self.source,
            "target": self.target,
            "walks": [list(w) for w in self.walks],
            "digraph": render_digraph(self.host),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: Any) -> "WalkCertificate":
        if not isinstance(data, dict):
            raise CertificateFormatError("certificate must be a JSON object")
        for field in ("n", "k", "source", "target", "walks", "digraph"):
            if field not in data:
                raise CertificateFormatError(f"missing field {field!r}")
        for field in ("n", "k", "source", "target"):
            if not isinstance(data[field], int) or isinstance(data[field], bool):
                raise CertificateFormatError(f"field {field!r} must be an integer")
        if not isinstance(data["digraph"], str):
            raise CertificateFormatError("field 'digraph' must be a string")
        walks = data["walks"]
        if not isinstance(walks, list) or not all(
            isinstance(w, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in w)
            for w in walks
        ):
            raise CertificateFormatError("field 'walks' must be a list of integer lists")
        try:
            host = parse_digraph(data["digraph"])
        except DigraphFormatError as exc:
            raise CertificateFormatError(f"embedded digraph: {exc}") from exc
        if host.n != data["n"]:
            raise CertificateFormatError(f"n={data['n']} but embedded digraph has order {host.n}")
        return cls(host, data["k"], data["source"], data["target"], tuple(tuple(w) for w in walks))

    @classmethod
    def from_json(cls, text: str) -> "WalkCertificate":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CertificateFormatError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)


def certificate_problem(cert: WalkCertificate, t: int | None = None) -> str | None:
    """First violated certificate invariant as a message, or None if valid.

    Checked from scratch against the host digraph; nothing produced by the
    walk engine is trusted.
    """
    D, k = cert.host, cert.k
    if k < 0:
        return f"k={k} is negative"
    for label, x in (("source", cert.source), ("target", cert.target)):
        if not 0 <= x < D.n:
            return f"{label} {x} out of range for n={D.n}"
    if not cert.walks:
        return "no walks"
    for i, w in enumerate(cert.walks):
        if len(w) - 1 != k:
            return f"walk {i} has length {len(w) - 1} (expected {k})"
        for x in w:
            if not 0 <= x < D.n:
                return f"walk {i} visits vertex {x} out of range"
        if w[0] != cert.source:
            return f"walk {i} starts at {w[0]}, not source {cert.source}"
        if w[-1] != cert.target:
            return f"walk {i} ends at {w[-1]}, not target {cert.target}"
        for step, (a, b) in enumerate(zip(w, w[1:])):
            if not D.has_arc(a, b):
                return f"walk {i} step {step}: {a}->{b} is not an arc"
    seen: dict[Walk, int] = {}
    for i, w in enumerate(cert.walks):
        if w in seen:
            return f"walks {seen[w]} and {i} identical"
        seen[w] = i
    if t is not None and len(cert.walks) < t + 1:
        return f"{len(cert.walks)} walks do not exceed t={t}"
    return None


def certificate_for_pair(D: Digraph, k: int, u: int, v: int, t: int) -> WalkCertificate:
    """Up to ``t + 1`` lexicographically first ``k``-walks ``u -> v``."""
    walks = extract_walks(D, k, u, v, limit=t + 1)
    return WalkCertificate(D, k, u, v, tuple(walks))
