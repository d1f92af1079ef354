"""Multiindices: finitely supported sequences of nonnegative integers.

Positions are 1-based.  Zero exponents are never stored, so ``MultiIndex()``
is the zero index and equality is equality of the sparse maps.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

#: magnitude above which exact integers are replaced by log values
DEFAULT_CAP = 10**300


@dataclass(frozen=True)
class LogValue:
    """A positive number too large to keep exactly; stores its natural log."""

    log: float

    def __float__(self) -> float:
        return math.exp(self.log) if self.log < 709.0 else math.inf


class MultiIndex:
    __slots__ = ("_items", "_hash")

    def __init__(self, entries: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        if isinstance(entries, Mapping):
            entries = entries.items()
        items = {}
        for pos, exp in entries:
            pos, exp = int(pos), int(exp)
            if pos < 1:
                raise ValueError(f"positions are 1-based, got {pos}")
            if exp < 0:
                raise ValueError(f"negative exponent {exp} at position {pos}")
            if exp:
                items[pos] = items.get(pos, 0) + exp
        self._items = tuple(sorted(items.items()))
        self._hash = hash(self._items)

    @classmethod
    def from_dense(cls, exps: Sequence[int]) -> "MultiIndex":
        """Build from a dense tuple ``(k_1, k_2, ...)``."""
        return cls((i + 1, e) for i, e in enumerate(exps))

    def items(self) -> tuple[tuple[int, int], ...]:
        return self._items

    def support(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self._items)

    def __getitem__(self, pos: int) -> int:
        for p, e in self._items:
            if p == pos:
                return e
        return 0

    def dense(self, length: int | None = None) -> tuple[int, ...]:
        top = self._items[-1][0] if self._items else 0
        length = top if length is None else length
        if length < top:
            raise ValueError(f"index has support beyond position {length}")
        out = [0] * length
        for p, e in self._items:
            out[p - 1] = e
        return tuple(out)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MultiIndex) and self._items == other._items

    def __hash__(self) -> int:
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._items)

    def __repr__(self) -> str:
        if not self._items:
            return "MultiIndex(0)"
        return "MultiIndex(" + ", ".join(f"{p}:{e}" for p, e in self._items) + ")"

    def to_json(self) -> list[list[int]]:
        return [[p, e] for p, e in self._items]

    @classmethod
    def from_json(cls, data: Iterable[Sequence[int]]) -> "MultiIndex":
        return cls((int(p), int(e)) for p, e in data)


def total_degree(k: MultiIndex) -> int:
    return sum(e for _, e in k.items())


def support_size(k: MultiIndex) -> int:
    return len(k.items())


def log_self_power(k: MultiIndex) -> float:
    """Natural log of ``k^k``."""
    return sum(e * math.log(e) for _, e in k.items())


def self_power(k: MultiIndex, cap: int = DEFAULT_CAP) -> int | LogValue:
    """``k^k = prod k_n^{k_n}`` with ``0^0 = 1``.

    Returns an exact ``int`` while the value stays below ``cap``, otherwise
    a :class:`LogValue`.
    """
    if log_self_power(k) > math.log(cap) + 1.0:
        return LogValue(log_self_power(k))
    out = 1
    for _, e in k.items():
        out *= e**e
        if out > cap:
            return LogValue(log_self_power(k))
    return out


def degree_weight(k: MultiIndex) -> Fraction:
    """Exact ``||k||^||k|| / k^k`` (the reciprocal of the monomial norm on l1)."""
    d = total_degree(k)
    num = d**d if d else 1
    den = 1
    for _, e in k.items():
        den *= e**e
    return Fraction(num, den)


def log_degree_weight(k: MultiIndex) -> float:
    d = total_degree(k)
    return (d * math.log(d) if d else 0.0) - log_self_power(k)


def power(lam: Sequence[complex] | Mapping[int, complex], k: MultiIndex) -> complex:
    """``lam^k`` for a 1-based mapping or a 0-based sequence of scalars."""
    out: complex = 1
    for pos, e in k.items():
        try:
            value = lam[pos] if isinstance(lam, Mapping) else lam[pos - 1]
        except (IndexError, KeyError):
            raise ValueError(f"no coordinate {pos} for multiindex {k!r}") from None
        out = out * value**e
    return out


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    # reverse-lexicographic: (total, 0, ...) first
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_indices(max_block: int, max_degree: int) -> list[MultiIndex]:
    """All k with support in ``1..max_block`` and ``||k|| <= max_degree``.

    Graded order: by total degree, then lexicographically (descending) on the
    dense prefix, so (2, 2) gives 0, (1,0), (0,1), (2,0), (1,1), (0,2).
    """
    if max_block < 0 or max_degree < 0:
        raise ValueError("max_block and max_degree must be nonnegative")
    if max_block == 0:
        return [MultiIndex()]
    out = []
    for d in range(max_degree + 1):
        out.extend(MultiIndex.from_dense(c) for c in _compositions(d, max_block))
    return out


def graded_key(k: MultiIndex, length: int) -> tuple:
    """Sort key reproducing :func:`enumerate_indices` order."""
    return (total_degree(k), tuple(-e for e in k.dense(length)))


def sort_graded(indices: Iterable[MultiIndex]) -> list[MultiIndex]:
    indices = list(indices)
    length = max((k.items()[-1][0] for k in indices if k), default=0)
    return sorted(indices, key=lambda k: graded_key(k, length))
