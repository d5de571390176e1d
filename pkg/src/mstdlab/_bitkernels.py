"""Numba kernels for exhaustive censuses over 64-bit subset masks.

A subset ``A`` of ``{0..n-1}`` with ``n <= 32`` is a ``uint64``; its sumset
fits in ``2n-1 <= 63`` bits. The positive half of ``A-A`` is the OR of ``A``
shifted right by every member, so ``|A-A| = 2*popcount(pos) - 1``.

Admitted sets are ``base | (r << shift)`` for ``r`` in a rank range, which
covers the plain census (``base=0, shift=0``), the endpoint-restricted census
and fringe-conditioned censuses with one kernel.
"""

import numpy as np
from numba import njit

MAX_KERNEL_N = 32

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)
_ONE = np.uint64(1)
_ZERO = np.uint64(0)


@njit(cache=True, inline="always")
def popcount(x):
    x = x - ((x >> _ONE) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return np.int64((x * _H01) >> np.uint64(56))


@njit(cache=True, inline="always")
def sum_and_diff_masks(a, n):
    s = _ZERO
    d = _ZERO
    for i in range(n):
        ui = np.uint64(i)
        if (a >> ui) & _ONE:
            s |= a << ui
            d |= a >> ui
    return s, d


@njit(cache=True, nogil=True)
def census_chunk(n, base, shift, start, stop, table):
    """Add ``(|A+A|, |A-A|)`` counts for ranks ``start..stop-1`` into ``table``."""
    ushift = np.uint64(shift)
    for r in range(start, stop):
        a = base | (np.uint64(r) << ushift)
        s, d = sum_and_diff_masks(a, n)
        ns = popcount(s)
        nd = 2 * popcount(d) - 1 if a else 0
        table[ns, nd] += 1


@njit(cache=True, nogil=True)
def detailed_chunk(n, base, shift, start, stop, target, table, sum_missing, diff_missing, counters):
    """Census plus per-position missing counts and target-coverage tallies.

    ``sum_missing[k]`` counts sets with ``k`` absent from ``A+A``; ``diff_missing[k]``
    counts sets with ``k >= 0`` absent from ``A-A``. ``counters[0]`` counts sets whose
    sumset contains every bit of ``target``; ``counters[1]`` counts sets with a full
    difference set.
    """
    ushift = np.uint64(shift)
    full_pos = (_ONE << np.uint64(n)) - _ONE
    for r in range(start, stop):
        a = base | (np.uint64(r) << ushift)
        s, d = sum_and_diff_masks(a, n)
        ns = popcount(s)
        nd = 2 * popcount(d) - 1 if a else 0
        table[ns, nd] += 1
        for k in range(2 * n - 1):
            if not (s >> np.uint64(k)) & _ONE:
                sum_missing[k] += 1
        for k in range(n):
            if not (d >> np.uint64(k)) & _ONE:
                diff_missing[k] += 1
        if (s & target) == target:
            counters[0] += 1
        if d == full_pos:
            counters[1] += 1


@njit(cache=True, nogil=True)
def imbalance_scan(d, x, out, collect):
    """Scan every set with ``min = 0`` and ``max = d`` for imbalance ``x``.

    Returns the number of matches; when ``collect`` is true the masks are also
    written to ``out`` (which must be large enough).
    """
    n = d + 1
    if d == 0:
        if x == 0:
            if collect:
                out[0] = _ONE
            return 1
        return 0
    ends = _ONE | (_ONE << np.uint64(d))
    count = 0
    for r in range(1 << (d - 1)):
        a = ends | (np.uint64(r) << _ONE)
        s, dm = sum_and_diff_masks(a, n)
        if popcount(s) - (2 * popcount(dm) - 1) == x:
            if collect:
                out[count] = a
            count += 1
    return count


@njit(cache=True, nogil=True)
def count_missing_difference(m, k, start, stop):
    """Count masks ``r`` in ``[start, stop)`` (subsets of ``{0..m-1}``) with ``k`` absent from ``R-R``."""
    uk = np.uint64(k)
    c = 0
    for r in range(start, stop):
        ur = np.uint64(r)
        if k == 0:
            if ur == _ZERO:
                c += 1
        elif (ur & (ur >> uk)) == _ZERO:
            c += 1
    return c
