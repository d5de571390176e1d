"""Sets with a prescribed imbalance ``|S+S| - |S-S|``, and a catalog of known examples.

Every integer ``x`` is realised by a set inside ``{0..17|x|}``:

* ``x < 0``: an interval with one element set apart, ``{0..|x|+1} | {2|x|+2}``;
* ``x in {0, 1, 2, 4}``: tabulated diameter-minimal sets;
* odd ``x = 2k+1 >= 3``: ``k+1`` translates of the 8-element sum-dominant set by
  multiples of 29;
* even ``x = 2k >= 6``: the odd set for ``2k+1`` with 29 removed, which loses the
  sum 29 and no difference.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import DomainError
from .setcore import IntSet, diffset, imbalance, sizes

S1 = (0, 2, 3, 4, 7, 11, 12, 14)
S1_PRIME = (0, 1, 2, 4, 5, 9, 12, 13, 14)
S2 = (0, 1, 2, 4, 5, 9, 12, 13, 14, 16, 17)
S4 = (0, 1, 2, 4, 5, 9, 12, 13, 17, 20, 21, 22, 24, 25)
S4_PRIME = (0, 1, 2, 4, 5, 9, 12, 13, 14, 16, 17, 21, 24, 25, 26, 28, 29)
DISPUTED_U = (0, 1, 3, 4, 5, 6, 7, 10)
PERIOD = 29

_TABULATED = {1: S1, 2: S2, 4: S4}


def _intset(members) -> IntSet:
    members = sorted(members)
    return IntSet.from_iterable(members, (members[-1] + 1) if members else 1)


def odd_family(k: int) -> IntSet:
    """``S1 + {0, 29, ..., 29k}``, imbalance ``2k+1``."""
    if k < 0:
        raise DomainError(f"k must be nonnegative, got {k}")
    return _intset(s + PERIOD * j for s in S1 for j in range(k + 1))


def build_prescribed(x: int, *, nonempty_zero: bool = False) -> IntSet:
    """A set with ``min = 0``, ``max <= 17|x|`` and imbalance exactly ``x``.

    ``x = 0`` gives the empty set, or ``{0}`` when ``nonempty_zero`` is set.
    """
    if x < 0:
        a = -x
        return _intset([*range(a + 2), 2 * a + 2])
    if x == 0:
        return _intset([0]) if nonempty_zero else IntSet(1, 0)
    if x in _TABULATED:
        return _intset(_TABULATED[x])
    if x % 2:
        return odd_family((x - 1) // 2)
    parent = odd_family(x // 2)
    return _intset(m for m in parent if m != PERIOD)


def build_negative_general(x: int, n: int) -> IntSet:
    """``{0..n-1} | {n+|x|}``, imbalance ``x`` for any ``n >= |x|+2``."""
    if x >= 0:
        raise DomainError(f"x must be negative, got {x}")
    if n < -x + 2:
        raise DomainError(f"need n >= |x|+2 = {-x + 2}, got n={n}")
    return _intset([*range(n), n - x])


@dataclass(frozen=True)
class NamedExample:
    name: str
    set: IntSet
    expected_sum_size: int
    expected_diff_size: int
    source_note: str

    @property
    def expected_imbalance(self) -> int:
        return self.expected_sum_size - self.expected_diff_size

    def check(self) -> bool:
        return sizes(self.set) == (self.expected_sum_size, self.expected_diff_size)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "elements": list(self.set),
            "expected_sum_size": self.expected_sum_size,
            "expected_diff_size": self.expected_diff_size,
            "source_note": self.source_note,
        }


def named_examples() -> list[NamedExample]:
    two_copy = sorted(set(S4) | {s + 20 for s in S4})
    return [
        NamedExample("S1", _intset(S1), 26, 25,
                     "smallest sum-dominant set; sums miss 1, 20, 27 and differences miss +-6, +-13"),
        NamedExample("S1prime", _intset(S1_PRIME), 28, 27,
                     "the other diameter-14 set with imbalance 1 (with its reflection)"),
        NamedExample("S2", _intset(S2), 35, 33, "diameter-minimal set with imbalance 2"),
        NamedExample("S4", _intset(S4), 51, 47,
                     "unique up to reflection among diameter <= 25 sets with imbalance 4"),
        NamedExample("S4prime", _intset(S4_PRIME), 59, 55, "earlier published example, imbalance 4"),
        NamedExample("disputed_U", _intset(DISPUTED_U), 19, 19,
                     "claimed sum-dominant in the literature; actually balanced"),
        NamedExample("two_copy_S4", _intset(two_copy), 91, 83,
                     "S4 | (S4 + 20); log 91 / log 83 = 1.0208..."),
    ]


def catalog_json() -> str:
    return json.dumps([e.to_json() for e in named_examples()], indent=2)


@dataclass
class PrescribedCheck:
    x: int
    imbalance: int
    max_element: int
    ok: bool
    detail: str = ""


def verify_prescribed(lo: int, hi: int) -> list[PrescribedCheck]:
    """Build and check every ``x`` in ``[lo, hi]``; failures are reported, not raised."""
    results = []
    for x in range(lo, hi + 1):
        s = build_prescribed(x)
        got = imbalance(s)
        top = s.max() if s else 0
        problems = []
        if got != x:
            problems.append(f"imbalance {got} != {x}")
        if top > 17 * abs(x):
            problems.append(f"max {top} > {17 * abs(x)}")
        if x > 0 and s.min() != 0:
            problems.append("min != 0")
        if x >= 6 and x % 2 == 0:
            parent = odd_family(x // 2)
            if set(diffset(s)) != set(diffset(parent)):
                problems.append("difference set differs from the odd parent")
        results.append(PrescribedCheck(x, got, top, not problems, "; ".join(problems)))
    return results
