"""Sumsets, difference sets and sum/difference classification.

Sets are stored as Python integers used as bitmasks: bit ``i`` is set when
``i`` is a member. The sumset is the OR of the member mask shifted by every
member, and the difference set is the same convolution against the reflected
mask, stored with an offset so that negative differences get nonnegative bit
positions.

>>> s = IntSet.from_iterable([0, 1, 3], 4)
>>> render(sumset(s))
'{0,1,2,3,4,6}'
>>> render(diffset(s))
'{-3,-2,-1,0,1,2,3}'
>>> classify(s)
<Classification.DIFFERENCE_DOMINANT: 'DifferenceDominant'>
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import DomainError


def _bits(mask: int) -> Iterator[int]:
    pos = 0
    while mask:
        low = mask & -mask
        pos = low.bit_length() - 1
        yield pos
        mask ^= low


@dataclass(frozen=True)
class IntSet:
    """A subset of ``{0, ..., universe_size - 1}``."""

    universe_size: int
    mask: int = 0

    def __post_init__(self):
        if self.universe_size < 1:
            raise DomainError(f"universe_size must be positive, got {self.universe_size}")
        if self.mask < 0 or self.mask >> self.universe_size:
            raise DomainError(
                f"mask has members outside {{0..{self.universe_size - 1}}}"
            )

    @classmethod
    def from_iterable(cls, members: Iterable[int], universe_size: int | None = None) -> "IntSet":
        members = list(members)
        if universe_size is None:
            universe_size = max(members) + 1 if members else 1
        mask = 0
        for m in members:
            if not 0 <= m < universe_size:
                raise DomainError(f"member {m} outside {{0..{universe_size - 1}}}")
            mask |= 1 << m
        return cls(universe_size, mask)

    @classmethod
    def full(cls, universe_size: int) -> "IntSet":
        return cls(universe_size, (1 << universe_size) - 1)

    def __contains__(self, item: int) -> bool:
        return 0 <= item < self.universe_size and bool(self.mask >> item & 1)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        return _bits(self.mask)

    def __bool__(self) -> bool:
        return self.mask != 0

    def min(self) -> int:
        if not self.mask:
            raise DomainError("empty set has no minimum")
        return (self.mask & -self.mask).bit_length() - 1

    def max(self) -> int:
        if not self.mask:
            raise DomainError("empty set has no maximum")
        return self.mask.bit_length() - 1

    def reflect(self) -> "IntSet":
        """Return ``(n - 1) - S`` inside the same universe."""
        n = self.universe_size
        return IntSet.from_iterable((n - 1 - m for m in self), n)

    def shifted(self, offset: int, universe_size: int | None = None) -> "IntSet":
        if universe_size is None:
            universe_size = self.universe_size + offset
        return IntSet(universe_size, self.mask << offset)

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class SignedSet:
    """A subset of ``{-half_width, ..., half_width}``; bit ``d + half_width`` holds ``d``."""

    half_width: int
    mask: int = 0

    def __contains__(self, item: int) -> bool:
        return -self.half_width <= item <= self.half_width and bool(
            self.mask >> (item + self.half_width) & 1
        )

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        return (b - self.half_width for b in _bits(self.mask))

    def is_symmetric(self) -> bool:
        width = 2 * self.half_width + 1
        reversed_mask = int(format(self.mask, f"0{width}b")[::-1], 2)
        return reversed_mask == self.mask

    def __str__(self) -> str:
        return render(self)


class Classification(enum.Enum):
    SUM_DOMINANT = "SumDominant"
    DIFFERENCE_DOMINANT = "DifferenceDominant"
    BALANCED = "Balanced"


def sumset_mask(mask: int) -> int:
    acc = 0
    for s in _bits(mask):
        acc |= mask << s
    return acc


def diffset_mask(mask: int, half_width: int) -> int:
    acc = 0
    for s in _bits(mask):
        acc |= mask << (half_width - s)
    return acc


def sumset(s: IntSet) -> IntSet:
    return IntSet(2 * s.universe_size - 1, sumset_mask(s.mask))


def diffset(s: IntSet) -> SignedSet:
    h = s.universe_size - 1
    return SignedSet(h, diffset_mask(s.mask, h))


def sizes(s: IntSet) -> tuple[int, int]:
    """Return ``(|S+S|, |S-S|)``."""
    return len(sumset(s)), len(diffset(s))


def imbalance(s: IntSet) -> int:
    plus, minus = sizes(s)
    return plus - minus


def classify(s: IntSet) -> Classification:
    plus, minus = sizes(s)
    if plus > minus:
        return Classification.SUM_DOMINANT
    if minus > plus:
        return Classification.DIFFERENCE_DOMINANT
    return Classification.BALANCED


def missing_counts(s: IntSet) -> tuple[int, int]:
    """Numbers of missing sums and missing differences relative to the universe.

    ``j = 2n-1-|S+S|`` and ``k = 2n-1-|S-S|``; ``k`` is even unless ``S`` is empty.
    """
    full = 2 * s.universe_size - 1
    plus, minus = sizes(s)
    return full - plus, full - minus


def is_symmetric(s: IntSet) -> bool:
    if not s:
        return True
    centre = s.min() + s.max()
    return all((centre - m) in s for m in s)


def render(s: IntSet | SignedSet | Iterable[int]) -> str:
    return "{" + ",".join(str(m) for m in sorted(s)) + "}"


def parse(text: str, universe_size: int | None = None) -> IntSet:
    """Inverse of :func:`render` for nonnegative sets."""
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise DomainError(f"not a braced set: {text!r}")
    body = body[1:-1].strip()
    members = [int(tok) for tok in body.split(",")] if body else []
    return IntSet.from_iterable(members, universe_size)
