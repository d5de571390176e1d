"""Numba kernels for the Monte Carlo samplers.

Each kernel processes trials ``start..stop-1`` and adds into caller-owned
accumulators. Trial ``t`` draws its set from the counter-based generator
keyed by ``(seed, t)``, so a trial's outcome does not depend on the chunk it
lands in.

With ``half`` set, membership bits come 64 at a time from one draw per word;
otherwise element ``i`` is included when its uniform variate is below ``p``.
"""

import numpy as np
from numba import njit

from .rng import draw, trial_key, uniform

_ONE = np.uint64(1)


@njit(cache=True, inline="always")
def fill_set(a, n, tkey, offset, half, p):
    if half:
        words = (n + 63) // 64
        for w in range(words):
            bits = draw(tkey, offset + w)
            base = 64 * w
            top = min(64, n - base)
            for j in range(top):
                a[base + j] = (bits >> np.uint64(j)) & _ONE
    else:
        for i in range(n):
            a[i] = 1 if uniform(tkey, offset + i) < p else 0


@njit(cache=True)
def missing_positions(a, n, elems, sum_missing, diff_missing):
    """Mark absent sums ``0..2n-2`` and absent differences ``0..n-1``.

    Sparse sets are handled by marking all pairs; dense sets by scanning each
    candidate until a witness pair is found.
    """
    c = 0
    for i in range(n):
        if a[i]:
            elems[c] = i
            c += 1
    if c == 0:
        sum_missing[:] = 1
        diff_missing[:] = 1
        return c
    density = c / n
    scan_cost = 3.0 * n / max(density * density, 1.0 / n)
    if c * c < scan_cost:
        sum_missing[:] = 1
        diff_missing[:] = 1
        for x in range(c):
            ex = elems[x]
            for y in range(x, c):
                ey = elems[y]
                sum_missing[ex + ey] = 0
                diff_missing[ey - ex] = 0
        return c
    for k in range(2 * n - 1):
        lo = k - n + 1 if k > n - 1 else 0
        hit = 0
        for i in range(lo, k // 2 + 1):
            if a[i] and a[k - i]:
                hit = 1
                break
        sum_missing[k] = 1 - hit
    diff_missing[0] = 0
    for k in range(1, n):
        hit = 0
        for i in range(n - k):
            if a[i] and a[i + k]:
                hit = 1
                break
        diff_missing[k] = 1 - hit
    return c


@njit(cache=True, nogil=True)
def two_sided_chunk(n, half, p, skey, force_zero, start, stop,
                    hist_x, hist_k, classes, pos_missing):
    """Accumulate missing-sum counts ``X``, missing-difference counts ``K`` and classes.

    ``classes`` is ``[sum-dominant, difference-dominant, balanced]``;
    ``pos_missing[k]`` counts trials with sum ``k`` absent.
    """
    a = np.zeros(n, dtype=np.uint8)
    elems = np.zeros(n, dtype=np.int64)
    sm = np.zeros(2 * n - 1, dtype=np.uint8)
    dm = np.zeros(n, dtype=np.uint8)
    for t in range(start, stop):
        tkey = trial_key(skey, t)
        fill_set(a, n, tkey, 0, half, p)
        if force_zero:
            a[0] = 1
        missing_positions(a, n, elems, sm, dm)
        x = 0
        for k in range(2 * n - 1):
            if sm[k]:
                x += 1
                pos_missing[k] += 1
        kk = np.int64(dm[0])
        for k in range(1, n):
            kk += 2 * np.int64(dm[k])
        hist_x[x] += 1
        hist_k[kk] += 1
        if x < kk:
            classes[0] += 1
        elif kk < x:
            classes[1] += 1
        else:
            classes[2] += 1


@njit(cache=True, nogil=True)
def one_sided_chunk(m, half, p, skey, force_zero, start, stop, hist_y):
    """Histogram of missing sums below ``m`` for random subsets of ``{0..m-1}``."""
    a = np.zeros(m, dtype=np.uint8)
    for t in range(start, stop):
        tkey = trial_key(skey, t)
        fill_set(a, m, tkey, 0, half, p)
        if force_zero:
            a[0] = 1
        y = 0
        for k in range(m):
            hit = 0
            for i in range(k // 2 + 1):
                if a[i] and a[k - i]:
                    hit = 1
                    break
            y += 1 - hit
        hist_y[y] += 1


@njit(cache=True, nogil=True)
def two_set_chunk(n, half, p, skey, same, start, stop, totals):
    """Add ``|S+T|`` and ``|S-T|`` into ``totals[0]`` and ``totals[1]``.

    ``T`` uses counters past those of ``S``; with ``same`` set, ``T = S``.
    """
    s = np.zeros(n, dtype=np.uint8)
    tt = np.zeros(n, dtype=np.uint8)
    words = (n + 63) // 64 if half else n
    for t in range(start, stop):
        tkey = trial_key(skey, t)
        fill_set(s, n, tkey, 0, half, p)
        if same:
            tt[:] = s
        else:
            fill_set(tt, n, tkey, words, half, p)
        plus = 0
        for k in range(2 * n - 1):
            lo = k - n + 1 if k > n - 1 else 0
            hi = k if k < n - 1 else n - 1
            for i in range(lo, hi + 1):
                if s[i] and tt[k - i]:
                    plus += 1
                    break
        minus = 0
        for d in range(-(n - 1), n):
            lo = d if d > 0 else 0
            hi = n - 1 + d if d < 0 else n - 1
            for i in range(lo, hi + 1):
                if s[i] and tt[i - d]:
                    minus += 1
                    break
        totals[0] += plus
        totals[1] += minus
