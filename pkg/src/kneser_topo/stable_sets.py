"""Stability vectors, k-subsets of [n] and enumeration of stable k-subsets.

A k-subset ``A = {A(1) < ... < A(k)}`` of ``[n] = {1, ..., n}`` is stable for
the vector ``s = (s_1, ..., s_k)`` when consecutive gaps satisfy
``A(j+1) - A(j) >= s_j`` and the spread satisfies ``A(k) - A(1) <= n - s_k``.

Subsets are 1-based throughout.  Internally many routines use bitmasks where
element ``i`` of ``[n]`` is bit ``i - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .errors import ParameterError

__all__ = [
    "StabilityVector",
    "KSubset",
    "is_stable",
    "enumerate_stable",
    "in_theorem_regime",
    "theorem_sum",
    "mask_of",
    "elements_of",
    "smallest_stable_subset",
    "contains_stable",
]


@dataclass(frozen=True)
class StabilityVector:
    entries: tuple[int, ...]
    theorem_regime: bool = field(init=False, compare=False)

    def __init__(self, entries: Iterable[int]):
        entries = tuple(int(x) for x in entries)
        if not entries:
            raise ParameterError("stability vector must have at least one entry")
        if any(x < 1 for x in entries):
            raise ParameterError(f"stability entries must be >= 1, got {entries}")
        object.__setattr__(self, "entries", entries)
        regime = all(x >= 2 for x in entries[:-1]) and entries[-1] in (1, 2)
        object.__setattr__(self, "theorem_regime", regime)

    @classmethod
    def parse(cls, text: str) -> "StabilityVector":
        """Parse a comma separated list such as ``"2,2,1"``."""
        try:
            return cls(int(tok) for tok in text.split(",") if tok.strip())
        except ValueError:
            raise ParameterError(f"cannot parse stability vector {text!r}") from None

    @classmethod
    def uniform(cls, s: int, k: int, last: int | None = None) -> "StabilityVector":
        """``(s, ..., s)`` or ``(s, ..., s, last)`` of length k."""
        entries = [s] * k
        if last is not None:
            entries[-1] = last
        return cls(entries)

    @property
    def k(self) -> int:
        return len(self.entries)

    def with_last(self, value: int) -> "StabilityVector":
        return StabilityVector(self.entries[:-1] + (value,))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, j):
        return self.entries[j]

    def to_json(self) -> list[int]:
        return list(self.entries)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.entries)) + ")"


@dataclass(frozen=True, order=True)
class KSubset:
    elements: tuple[int, ...]
    ambient_n: int

    def __post_init__(self):
        els = tuple(int(x) for x in self.elements)
        object.__setattr__(self, "elements", els)
        if any(b <= a for a, b in zip(els, els[1:])):
            raise ParameterError(f"elements must be strictly increasing: {els}")
        if els and (els[0] < 1 or els[-1] > self.ambient_n):
            raise ParameterError(f"elements {els} not within [1, {self.ambient_n}]")

    @classmethod
    def of(cls, elements: Iterable[int], n: int) -> "KSubset":
        return cls(tuple(sorted(elements)), n)

    def __call__(self, j: int) -> int:
        """``A(j)``: the j-th smallest element, 1-indexed."""
        return self.elements[j - 1]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def mask(self) -> int:
        return mask_of(self.elements)

    def to_json(self) -> list[int]:
        return list(self.elements)

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.elements)) + "}"


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for x in elements:
        m |= 1 << (x - 1)
    return m


def elements_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _as_vector(s) -> StabilityVector:
    return s if isinstance(s, StabilityVector) else StabilityVector(s)


def _stable_tuple(a: Sequence[int], n: int, s: Sequence[int]) -> bool:
    k = len(s)
    for j in range(k - 1):
        if a[j + 1] - a[j] < s[j]:
            return False
    return a[-1] - a[0] <= n - s[-1]


def is_stable(A: KSubset, s) -> bool:
    """Stability test using the ambient ``n`` carried by ``A``."""
    s = _as_vector(s)
    if len(A) != len(s):
        raise ParameterError(f"|A| = {len(A)} but stability vector has length {len(s)}")
    return _stable_tuple(A.elements, A.ambient_n, s.entries)


def enumerate_stable(n: int, k: int, s) -> list[KSubset]:
    """All s-stable k-subsets of [n] in lexicographic order."""
    s = _as_vector(s)
    if k < 1 or n < k:
        raise ParameterError(f"need n >= k >= 1, got n={n}, k={k}")
    if len(s) != k:
        raise ParameterError(f"stability vector {s} has length {len(s)}, expected k={k}")
    return [KSubset(t, n) for t in _stable_tuples(n, s.entries)]


@lru_cache(maxsize=None)
def _stable_tuples(n: int, s: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    k = len(s)
    out: list[tuple[int, ...]] = []

    def extend(prefix: list[int]):
        j = len(prefix)
        if j == k:
            if prefix[-1] - prefix[0] <= n - s[-1]:
                out.append(tuple(prefix))
            return
        lo = prefix[-1] + s[j - 1] if prefix else 1
        hi = n - sum(s[j:-1]) if j < k - 1 else n
        if prefix:
            hi = min(hi, prefix[0] + n - s[-1])
        for x in range(lo, hi + 1):
            prefix.append(x)
            extend(prefix)
            prefix.pop()

    extend([])
    return tuple(out)


@lru_cache(maxsize=None)
def stable_masks(n: int, s: tuple[int, ...]) -> tuple[int, ...]:
    """Bitmasks of the s-stable k-subsets of [n], in lexicographic order."""
    return tuple(mask_of(t) for t in _stable_tuples(n, s))


def smallest_stable_subset(mask: int, n: int, s) -> int | None:
    """Lexicographically smallest s-stable k-subset contained in ``mask``."""
    s = tuple(_as_vector(s).entries)
    return _smallest_in(mask, n, s)


@lru_cache(maxsize=1 << 16)
def _smallest_in(mask: int, n: int, s: tuple[int, ...]) -> int | None:
    # combinations of a sorted list come out in lexicographic order
    for t in combinations(elements_of(mask), len(s)):
        if _stable_tuple(t, n, s):
            return mask_of(t)
    return None


def contains_stable(mask: int, n: int, s) -> bool:
    return smallest_stable_subset(mask, n, s) is not None


def stable_subsets_of(mask: int, n: int, s) -> list[int]:
    """Masks of all s-stable k-subsets of [n] contained in ``mask``."""
    s = tuple(_as_vector(s).entries)
    return [m for m in stable_masks(n, s) if m & mask == m]


def theorem_sum(s) -> int:
    """``s_1 + ... + s_{k-1}``."""
    return sum(_as_vector(s).entries[:-1])


def in_theorem_regime(n: int, s) -> bool:
    """Whether (n, s) satisfies the hypotheses of the sphere/chromatic theorems."""
    s = _as_vector(s)
    return s.k >= 2 and s.theorem_regime and n >= theorem_sum(s) + 2
