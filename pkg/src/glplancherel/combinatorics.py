"""Partitions, cycle-type centralizers, Zelevinsky segments and the overlap
function a(k) counting pairs (i, j) with i + j - b = k."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InputError

__all__ = [
    "Partition",
    "Segment",
    "partitions_of",
    "centralizer_data",
    "overlap_function",
    "overlap_doubled",
    "gamma_length",
    "segment_gs",
]


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if not parts:
            raise InputError("a partition needs at least one part")
        if any(p < 1 for p in parts):
            raise InputError(f"non-positive part in {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise InputError(f"parts must be non-increasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, parts) -> "Partition":
        """Build from parts in any order."""
        return cls(tuple(sorted((int(p) for p in parts), reverse=True)))

    @property
    def total(self) -> int:
        return sum(self.parts)

    @property
    def k(self) -> int:
        return len(self.parts)

    def multiplicities(self) -> dict[int, int]:
        return dict(Counter(self.parts))

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __str__(self):
        return "+".join(map(str, self.parts))


@dataclass(frozen=True)
class Segment:
    """Zelevinsky segment of length l, centred: 2g + 1 = l."""

    l: int

    def __post_init__(self):
        if self.l < 1:
            raise InputError(f"segment length must be >= 1, got {self.l}")

    @property
    def g(self) -> Fraction:
        return Fraction(self.l - 1, 2)


@lru_cache(maxsize=None)
def _partitions(e: int, cap: int) -> tuple[tuple[int, ...], ...]:
    if e == 0:
        return ((),)
    out = []
    for first in range(min(e, cap), 0, -1):
        for rest in _partitions(e - first, first):
            out.append((first,) + rest)
    return tuple(out)


def partitions_of(e: int) -> list[Partition]:
    """All partitions of e in reverse-lexicographic order, e.g. 3 -> [3], [2,1], [1,1,1]."""
    if not isinstance(e, int) or e < 1:
        raise InputError(f"partitions_of needs e >= 1, got {e!r}")
    return [Partition(p) for p in _partitions(e, e)]


def centralizer_data(p: Partition) -> tuple[int, int, int]:
    """(|Z(gamma)|, prod a_d!, k) for gamma of cycle type p in S_e.

    Only the permutations of equal-length cycles act nontrivially on the
    fixed torus X^gamma = T^k; cycle-internal rotations fix it pointwise.
    """
    order = 1
    effective = 1
    for d, a in p.multiplicities().items():
        order *= d ** a * math.factorial(a)
        effective *= math.factorial(a)
    return order, effective, p.k


def overlap_doubled(l1: int, l2: int) -> dict[int, int]:
    """a(k) keyed by 2k (exact integers)."""
    if l1 < 1 or l2 < 1:
        raise InputError("segment lengths must be >= 1")
    b2 = (l1 - 1) + (l2 - 1)  # 2b = 2(g1 + g2)
    out: dict[int, int] = {}
    for i in range(l1):
        for j in range(l2):
            k2 = 2 * (i + j) - b2
            out[k2] = out.get(k2, 0) + 1
    return dict(sorted(out.items()))


def overlap_function(l1: int, l2: int) -> dict[Fraction, int]:
    return {Fraction(k2, 2): a for k2, a in overlap_doubled(l1, l2).items()}


def segment_gs(l1: int, l2: int) -> list[Fraction]:
    """The g with |g1 - g2| <= g <= g1 + g2 in integer steps."""
    g1, g2 = Fraction(l1 - 1, 2), Fraction(l2 - 1, 2)
    lo, hi = abs(g1 - g2), g1 + g2
    out = []
    g = lo
    while g <= hi:
        out.append(g)
        g += 1
    return out


def gamma_length(p: Partition) -> int:
    """sum_{i<j} l_i l_j."""
    ls = p.parts
    return sum(ls[i] * ls[j] for i in range(len(ls)) for j in range(i + 1, len(ls)))
