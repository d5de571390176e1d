"""Exact probabilities and bounds for sums and differences of random sets.

The random model fixes a lower fringe ``L`` inside ``{0..ell-1}`` and an
upper fringe ``U`` inside ``{n-u..n-1}``, and draws the middle part ``R``
uniformly from the subsets of ``{ell..n-u-1}``; the random set is
``A = L | R | U``.

Exact probabilities are returned as :class:`fractions.Fraction`. Bounds whose
exponents are not integers are returned as :class:`BoundValue` floats tagged
with the direction of the inequality.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import DomainError
from .setcore import IntSet

HALF = Fraction(1, 2)
THREE_QUARTERS = Fraction(3, 4)


@dataclass(frozen=True)
class FringeSpec:
    n: int
    ell: int
    u: int
    L: IntSet
    U: IntSet

    def __post_init__(self):
        n, ell, u = self.n, self.ell, self.u
        if ell < 0 or u < 0 or n < ell + u or n < 1:
            raise DomainError(f"need n >= ell + u with ell, u >= 0 (n={n}, ell={ell}, u={u})")
        if any(not 0 <= m < ell for m in self.L):
            raise DomainError(f"L must lie in {{0..{ell - 1}}}")
        if any(not n - u <= m < n for m in self.U):
            raise DomainError(f"U must lie in {{{n - u}..{n - 1}}}")

    @classmethod
    def build(cls, n: int, ell: int, u: int, L: Iterable[int] = (), U: Iterable[int] = ()) -> "FringeSpec":
        return cls(n, ell, u, IntSet.from_iterable(L, n), IntSet.from_iterable(U, n))

    @property
    def free(self) -> int:
        """Number of positions in the random middle block."""
        return self.n - self.ell - self.u

    @property
    def fixed_mask(self) -> int:
        return self.L.mask | self.U.mask

    def reflected(self) -> "FringeSpec":
        """Spec for ``n-1-A``: fringes swap ends and are mirrored."""
        n = self.n
        return FringeSpec.build(
            n, self.u, self.ell, (n - 1 - m for m in self.U), (n - 1 - m for m in self.L)
        )

    def to_json(self) -> dict:
        return {"n": self.n, "ell": self.ell, "u": self.u, "L": list(self.L), "U": list(self.U)}

    @classmethod
    def from_json(cls, data: dict) -> "FringeSpec":
        return cls.build(data["n"], data["ell"], data["u"], data.get("L", []), data.get("U", []))


class BoundKind(enum.Enum):
    EXACT = "Exact"
    UPPER = "UpperBound"
    LOWER = "LowerBound"


@dataclass(frozen=True)
class BoundValue:
    """A real number labelled as an exact probability or a one-sided bound.

    ``rational`` carries the exact value when the expression is rational.
    """

    value: float
    kind: BoundKind
    rational: Fraction | None = None

    def __str__(self) -> str:
        return f"{self.kind.value}:{self.value:.12g}"


def render_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _check_range(name: str, k: int, lo, hi):
    if not lo <= k <= hi:
        raise DomainError(f"{name}: k={k} outside valid range [{lo}, {hi}]")


def p_sum_missing_fringed_low(spec: FringeSpec, k: int) -> Fraction:
    """Probability that a small sum ``k`` is absent from ``A+A``; needs ``2ell-1 <= k <= n-u-1``."""
    _check_range("p_sum_missing_fringed_low", k, 2 * spec.ell - 1, spec.n - spec.u - 1)
    nl = len(spec.L)
    if k % 2:
        return HALF**nl * THREE_QUARTERS ** ((k + 1) // 2 - spec.ell)
    return HALF ** (nl + 1) * THREE_QUARTERS ** (k // 2 - spec.ell)


def p_sum_missing_fringed_high(spec: FringeSpec, k: int) -> Fraction:
    """Probability that a large sum ``k`` is absent from ``A+A``; needs ``n+ell-1 <= k <= 2n-2u-1``."""
    n, u = spec.n, spec.u
    _check_range("p_sum_missing_fringed_high", k, n + spec.ell - 1, 2 * n - 2 * u - 1)
    nu = len(spec.U)
    if k % 2:
        return HALF**nu * THREE_QUARTERS ** (n - (k + 1) // 2 - u)
    return HALF ** (nu + 1) * THREE_QUARTERS ** (n - 1 - k // 2 - u)


def p_sum_missing_uniform(n: int, k: int) -> Fraction:
    """Probability that ``k`` is absent from ``A+A`` for ``A`` uniform over subsets of ``{0..n-1}``."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    _check_range("p_sum_missing_uniform", k, 0, 2 * n - 2)
    if k > n - 1:
        k = 2 * n - 2 - k
    if k % 2:
        return THREE_QUARTERS ** ((k + 1) // 2)
    return HALF * THREE_QUARTERS ** (k // 2)


def p_diff_missing_fringed(spec: FringeSpec, k: int) -> Fraction:
    """Probability that a large difference ``k`` is absent from ``A-A``; needs ``n/2 <= k <= n-u-ell``."""
    n = spec.n
    if not (2 * k >= n and k <= n - spec.u - spec.ell):
        raise DomainError(
            f"p_diff_missing_fringed: k={k} outside valid range [{n / 2}, {n - spec.u - spec.ell}]"
        )
    return HALF ** (len(spec.L) + len(spec.U)) * THREE_QUARTERS ** (n - spec.ell - spec.u - k)


def p_diff_missing_small_bound(a: int, b: int, k: int) -> BoundValue:
    """Upper bound on the chance that ``k`` is absent from ``R-R``, ``R`` uniform in ``{a..b-1}``."""
    if a >= b:
        raise DomainError(f"need a < b, got a={a}, b={b}")
    if not (1 <= k and 3 * k <= 2 * (b - a)):
        raise DomainError(f"k={k} outside valid range [1, {2 * (b - a) / 3:.6g}]")
    return BoundValue(min(1.0, 0.75 ** ((b - a) / 3)), BoundKind.UPPER)


def p_diff_missing_uniform(n: int, k: int) -> BoundValue:
    """Chance that ``k`` is absent from ``A-A`` for uniform ``A``: exact for ``k >= n/2``, a bound below."""
    _check_range("p_diff_missing_uniform", k, 1, n - 1)
    if 2 * k >= n:
        q = THREE_QUARTERS ** (n - k)
        return BoundValue(float(q), BoundKind.EXACT, q)
    return BoundValue(min(1.0, 0.75 ** (n / 3)), BoundKind.UPPER)


def sums_coverage_bound(spec: FringeSpec) -> BoundValue:
    """Lower bound on the chance that ``A+A`` covers both middle sum ranges."""
    q = 1 - 6 * (HALF ** len(spec.L) + HALF ** len(spec.U))
    return BoundValue(float(q), BoundKind.LOWER, q)


def diffs_coverage_bound(spec: FringeSpec) -> BoundValue:
    """Lower bound on the chance that ``A-A`` contains ``{-(n-ell-u)..n-ell-u}``; needs ``n >= 4(ell+u)``."""
    n, ell, u = spec.n, spec.ell, spec.u
    if n < 4 * (ell + u):
        raise DomainError(f"diffs_coverage_bound needs n >= 4(ell+u) = {4 * (ell + u)}, got n={n}")
    head = 1 - 4 * HALF ** (len(spec.L) + len(spec.U))
    value = float(head) - (n / 2) * 0.75 ** ((n - ell - u) / 3)
    return BoundValue(value, BoundKind.LOWER)


def combined_coverage_bound(spec: FringeSpec) -> BoundValue:
    """Union bound for ``A+A`` and ``A-A`` both being full, from the two coverage bounds.

    With the fringes fully occupied this is the chance that ``|A+A| = |A-A| = 2n-1``.
    """
    s = sums_coverage_bound(spec).value
    d = diffs_coverage_bound(spec).value
    return BoundValue(s + d - 1.0, BoundKind.LOWER)


def printed_bound(which: str, n: int) -> BoundValue:
    """The closed-form lower bounds used in the counting arguments.

    ``SD`` is the constant 119/128; ``DD`` and ``BAL`` are
    ``7/8 - (8n/9)(3/4)^(n/3)`` and ``3/4 - (8n/9)(3/4)^(n/3)``.
    """
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    tail = (8 * n / 9) * 0.75 ** (n / 3)
    if which == "SD":
        q = Fraction(119, 128)
        return BoundValue(float(q), BoundKind.LOWER, q)
    if which == "DD":
        return BoundValue(7 / 8 - tail, BoundKind.LOWER)
    if which == "BAL":
        return BoundValue(3 / 4 - tail, BoundKind.LOWER)
    raise DomainError(f"unknown bound id {which!r}; expected SD, DD or BAL")


def total_sumset_size_formula(n: int) -> int:
    """Closed form for the sum of ``|S+S|`` over all subsets of ``{0..n-1}``."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    main = 2**n * (2 * n - 11)
    if n % 2:
        return main + 19 * 3 ** ((n - 1) // 2)
    return main + 11 * 3 ** (n // 2)


def total_diffset_size_reference(n: int) -> int:
    """Main term ``2^n (2n-7)`` of the total of ``|S-S|``; the true total differs by ``O(n 6^(n/3))``."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    return 2**n * (2 * n - 7)


def diffset_total_error_scale(n: int) -> float:
    return n * 6 ** (n / 3)


def fibonacci(i: int) -> int:
    """``F_i`` with ``F_1 = F_2 = 1`` (and ``F_0 = 0``)."""
    a, b = 0, 1
    for _ in range(i):
        a, b = b, a + b
    return a


def fib_missing_one_count(m: int) -> int:
    """Number of subsets of ``{0..m-1}`` with no two consecutive elements, ``F_{m+2}``."""
    if m < 0:
        raise DomainError(f"m must be nonnegative, got {m}")
    return fibonacci(m + 2)

