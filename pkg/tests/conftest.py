"""Independent brute-force oracles shared by the test modules.

None of these helpers use the shift-OR convolution or the census kernels:
sums and differences are found by testing pairs of elements directly.
"""

import numpy as np
import pytest

from mstdlab import montecarlo as mc


def naive_sums(members):
    members = list(members)
    return {a + b for a in members for b in members}


def naive_diffs(members):
    members = list(members)
    return {a - b for a in members for b in members}


def outer_sums(members):
    arr = np.fromiter(members, dtype=np.int64)
    return set(np.unique(np.add.outer(arr, arr)).tolist())


def outer_diffs(members):
    arr = np.fromiter(members, dtype=np.int64)
    return set(np.unique(np.subtract.outer(arr, arr)).tolist())


def completions(spec):
    """Masks of every ``A = L | R | U`` for a fringe spec, as an int64 array."""
    r = np.arange(1 << spec.free, dtype=np.int64)
    return (r << spec.ell) | spec.fixed_mask


def all_subsets(n):
    return np.arange(1 << n, dtype=np.int64)


def _bit(masks, i):
    return (masks >> i) & 1


def count_sum_missing(masks, k, n):
    """Number of masks with no pair ``i + j = k`` inside ``{0..n-1}``."""
    present = np.zeros(len(masks), dtype=bool)
    for i in range(max(0, k - n + 1), k // 2 + 1):
        present |= (_bit(masks, i) & _bit(masks, k - i)).astype(bool)
    return int((~present).sum())


def count_diff_missing(masks, k, n):
    """Number of masks with no pair ``j, j + k`` (``k >= 1``) inside ``{0..n-1}``."""
    present = np.zeros(len(masks), dtype=bool)
    for j in range(0, n - k):
        present |= (_bit(masks, j) & _bit(masks, j + k)).astype(bool)
    return int((~present).sum())


def covers_sums(masks, ks, n):
    ok = np.ones(len(masks), dtype=bool)
    for k in ks:
        present = np.zeros(len(masks), dtype=bool)
        for i in range(max(0, k - n + 1), k // 2 + 1):
            present |= (_bit(masks, i) & _bit(masks, k - i)).astype(bool)
        ok &= present
    return int(ok.sum())


def covers_diffs(masks, ks, n):
    ok = np.ones(len(masks), dtype=bool)
    for k in ks:
        present = np.zeros(len(masks), dtype=bool)
        for j in range(0, n - k):
            present |= (_bit(masks, j) & _bit(masks, j + k)).astype(bool)
        ok &= present
    return int(ok.sum())


SHARED_SEED = 7
SHARED_TRIALS = 1_000_000


@pytest.fixture(scope="session")
def big_two_sided_run():
    """One 10^6-trial run at n = 1000, reused by the statistical checks."""
    return mc.run_two_sided(mc.SampleConfig(1000, SHARED_TRIALS, SHARED_SEED))


@pytest.fixture(scope="session")
def conditioned_one_sided():
    cfg = mc.SampleConfig(1, 200_000, SHARED_SEED, condition_zero=True)
    return mc.sample_one_sided(cfg, 64)
