"""Every numeric bound the lab checks against, in exact integer arithmetic."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from math import isqrt

__all__ = [
    "KNOWN_Z",
    "Thresholds",
    "ceil_log2",
    "sqrt_term",
    "lemma12_k",
    "lemma1_k",
    "lemma5_k",
    "lemma13_size",
    "lemma13_k",
    "z_new",
    "z_old",
    "eval_thresholds",
]

# exact values of z(t) established in the literature
KNOWN_Z = {1: 4}


def ceil_log2(x: int) -> int:
    if x < 1:
        raise ValueError("ceil_log2 needs x >= 1")
    return (x - 1).bit_length()


def sqrt_term(t: int) -> int:
    """ceil(sqrt(2t + 9/4) + 1/2): the least ``a`` with ``(2a - 1)**2 >= 8t + 9``."""
    if t < 1:
        raise ValueError("t must be positive")
    target = 8 * t + 9
    r = isqrt(target)
    if r * r < target:
        r += 1
    # r = ceil(sqrt(target)); need 2a - 1 >= r
    return (r + 2) // 2


def lemma12_k(L: int, t: int) -> int:
    """Walk length from which two cycles joint at a vertex force t+1 walks."""
    return L * ceil_log2(t + 1)


def lemma1_k(L: int, t: int) -> int:
    """Walk length from which two cycles linked by an arc force t+1 walks."""
    return t * L + 1


def lemma5_k(t: int) -> int:
    return 2 * ceil_log2(t + 1)


def lemma13_size(t: int) -> int:
    return 2 * sqrt_term(t) + 1


def lemma13_k(t: int) -> int:
    return max(t + 1, 3 * ceil_log2(t + 1))


def z_new(t: int) -> int:
    return max(2 * t + 1, 2 * sqrt_term(t) + 3)


def z_old(t: int) -> int:
    return 6 * t + 1


@dataclass(frozen=True)
class Thresholds:
    t: int
    z_new: int
    z_old: int
    a: int
    lemma13_size: int
    lemma13_k: int
    lemma5_k: int
    known_z: int | None

    def lemma12_k(self, L: int) -> int:
        return lemma12_k(L, self.t)

    def lemma1_k(self, L: int) -> int:
        return lemma1_k(L, self.t)

    def to_dict(self) -> dict:
        return asdict(self)


def eval_thresholds(t: int) -> Thresholds:
    if t < 1:
        raise ValueError("t must be positive")
    return Thresholds(
        t=t,
        z_new=z_new(t),
        z_old=z_old(t),
        a=sqrt_term(t),
        lemma13_size=lemma13_size(t),
        lemma13_k=lemma13_k(t),
        lemma5_k=lemma5_k(t),
        known_z=KNOWN_Z.get(t),
    )
