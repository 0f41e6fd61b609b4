"""Bitmask-backed sets of node ids.

Knowledge sets are unioned thousands of times per round at n=4096, and
structure repair needs nearest-clockwise-member queries. A single int
bitmask keeps all of that at C speed (word-parallel |, &, subset tests)
where hash sets would dominate the run time.
"""

from __future__ import annotations

from typing import Iterable, Iterator


class IdSet:
    """Mutable set of non-negative ints stored as one bitmask."""

    __slots__ = ("bits",)

    def __init__(self, ids: Iterable[int] = (), bits: int = 0):
        self.bits = bits
        for i in ids:
            self.bits |= 1 << i

    @classmethod
    def from_bits(cls, bits: int) -> "IdSet":
        s = cls.__new__(cls)
        s.bits = bits
        return s

    def copy(self) -> "IdSet":
        return IdSet.from_bits(self.bits)

    def add(self, i: int) -> None:
        self.bits |= 1 << i

    def discard(self, i: int) -> None:
        self.bits &= ~(1 << i)

    def update(self, other: "IdSet | Iterable[int]") -> None:
        if isinstance(other, IdSet):
            self.bits |= other.bits
        else:
            for i in other:
                self.bits |= 1 << i

    def intersection_bits(self, mask: int) -> int:
        return self.bits & mask

    def issubset_bits(self, mask: int) -> bool:
        return self.bits & ~mask == 0

    def covers_bits(self, mask: int) -> bool:
        """True iff every bit of mask is present in this set."""
        return mask & ~self.bits == 0

    def next_clockwise(self, start: int) -> int | None:
        """First member at or after start, wrapping past the top to 0."""
        if self.bits == 0:
            return None
        upper = self.bits >> start
        if upper:
            return start + ((upper & -upper).bit_length() - 1)
        low = self.bits & ((1 << start) - 1)
        return (low & -low).bit_length() - 1

    def prev_clockwise(self, start: int) -> int | None:
        """Last member at or before start, wrapping past 0 to the top."""
        if self.bits == 0:
            return None
        low = self.bits & ((1 << (start + 1)) - 1)
        if low:
            return low.bit_length() - 1
        return self.bits.bit_length() - 1

    def __contains__(self, i: int) -> bool:
        return i >= 0 and (self.bits >> i) & 1 == 1

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __iter__(self) -> Iterator[int]:
        bits = self.bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def __or__(self, other: "IdSet") -> "IdSet":
        return IdSet.from_bits(self.bits | other.bits)

    def __and__(self, other: "IdSet") -> "IdSet":
        return IdSet.from_bits(self.bits & other.bits)

    def __sub__(self, other: "IdSet") -> "IdSet":
        return IdSet.from_bits(self.bits & ~other.bits)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, IdSet):
            return self.bits == other.bits
        if isinstance(other, (set, frozenset)):
            return self.bits == IdSet(other).bits
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.bits)

    def __bool__(self) -> bool:
        return self.bits != 0

    def __repr__(self) -> str:
        return f"IdSet({sorted(self)})"

    def to_sorted_list(self) -> list[int]:
        return list(self)


def mask_of(ids: Iterable[int]) -> int:
    bits = 0
    for i in ids:
        bits |= 1 << i
    return bits
