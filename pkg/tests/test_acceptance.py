"""The twelve acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line (visible even under output
capture) and then asserts the same condition.
"""

import random
import time
from fractions import Fraction
from itertools import product

import pytest

from mstdlab import construct as co
from mstdlab import enumeration as en
from mstdlab import probmodel as pm
from mstdlab.probmodel import FringeSpec
from mstdlab.setcore import IntSet, diffset, imbalance, sumset

from conftest import (
    all_subsets,
    completions,
    count_diff_missing,
    count_sum_missing,
    naive_diffs,
    naive_sums,
    outer_diffs,
    outer_sums,
)


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail, elapsed=None, limit=None):
        within = limit is None or elapsed <= limit
        status = "PASS" if ok and within else "FAIL"
        timing = "" if elapsed is None else f" [{elapsed:.1f}s"
        timing += "" if limit is None else f" / limit {limit:g}s"
        timing += "]" if elapsed is not None else ""
        with capsys.disabled():
            print(f"\nACCEPTANCE {number:2d} {status}: {title}: {detail}{timing}")
        assert ok, detail
        assert within, f"took {elapsed:.1f}s, limit {limit}s"
    return emit


def test_01_oracle_equivalence(report):
    start = time.perf_counter()
    bad = 0
    for mask in range(1 << 12):
        s = IntSet(12, mask)
        members = list(s)
        bad += set(sumset(s)) != naive_sums(members) or set(diffset(s)) != naive_diffs(members)
    rnd = random.Random(20240501)
    for _ in range(10_000):
        members = [i for i in range(201) if rnd.random() < 0.5]
        s = IntSet.from_iterable(members, 201)
        bad += set(sumset(s)) != outer_sums(members) or set(diffset(s)) != outer_diffs(members)
    report(1, "bit-parallel sumset/diffset equal naive loops",
           bad == 0, f"{bad} mismatches over 4096 + 10000 sets", time.perf_counter() - start, 10)


def test_02_uniform_probability_exactness(report):
    start = time.perf_counter()
    n, total = 12, 1 << 12
    masks = all_subsets(n)
    bad = []
    for k in range(2 * n - 1):
        if pm.p_sum_missing_uniform(n, k) * total != count_sum_missing(masks, k, n):
            bad.append(f"sum k={k}")
    for k in range((n + 1) // 2, n):
        if pm.p_diff_missing_uniform(n, k).rational * total != count_diff_missing(masks, k, n):
            bad.append(f"diff k={k}")
    report(2, "uniform sum/difference probabilities exact at n=12",
           not bad, f"mismatches: {bad or 'none'}", time.perf_counter() - start, 30)


def test_03_fringed_probability_exactness(report):
    start = time.perf_counter()
    n = 14
    specs = checked = 0
    bad = []
    for ell, u in product(range(4), repeat=2):
        for lmask, umask in product(range(1 << ell), range(1 << u)):
            spec = FringeSpec.build(n, ell, u, [i for i in range(ell) if lmask >> i & 1],
                                    [n - u + i for i in range(u) if umask >> i & 1])
            masks = completions(spec)
            specs += 1
            for k in range(max(0, 2 * ell - 1), n - u):
                checked += 1
                if pm.p_sum_missing_fringed_low(spec, k) * len(masks) != count_sum_missing(masks, k, n):
                    bad.append((spec, "low", k))
            for k in range(n + ell - 1, 2 * n - 2 * u):
                checked += 1
                if pm.p_sum_missing_fringed_high(spec, k) * len(masks) != count_sum_missing(masks, k, n):
                    bad.append((spec, "high", k))
            for k in range((n + 1) // 2, n - u - ell + 1):
                checked += 1
                if pm.p_diff_missing_fringed(spec, k) * len(masks) != count_diff_missing(masks, k, n):
                    bad.append((spec, "diff", k))
    report(3, "fringed probabilities exact at n=14, ell,u <= 3",
           not bad and specs >= 20, f"{specs} (L,U) choices, {checked} cases, {len(bad)} mismatches",
           time.perf_counter() - start, 120)


def test_04_sum_total_identity(report):
    start = time.perf_counter()
    bad = [n for n in range(1, 23) if not en.verify_sum_total(n).ok]
    report(4, "enumerated total of |S+S| equals the closed form for 1 <= n <= 22",
           not bad, f"failing n: {bad or 'none'}", time.perf_counter() - start, 300)


def test_05_mean_difference_size(report):
    start = time.perf_counter()
    mean = en.tally(en.enumerate_joint(24)).mean_diff_size
    report(5, "mean |S-S| at n=24 within 0.3 of 41",
           abs(mean - 41) <= 0.3, f"mean {mean:.6f}", time.perf_counter() - start, 1200)


def test_06_counting_bounds(report):
    start = time.perf_counter()
    thresholds = {"SD": (Fraction(2, 10**7), 15), "DD": (Fraction(15, 10**4), 4),
                  "BAL": (Fraction(2, 10**5), 1)}
    bad = []
    for n in range(1, 25):
        counts = en.enumerate_joint(n).class_counts()
        for cls, (c, n0) in thresholds.items():
            if n >= n0 and counts[cls] < c * 2**n:
                bad.append((n, cls, counts[cls]))
    report(6, "class counts meet the constant-fraction lower bounds for n <= 24",
           not bad, f"violations: {bad or 'none'}", time.perf_counter() - start, 1800)


def test_07_fringe_forcing(report):
    start = time.perf_counter()
    bad = []
    total = 0
    for n in range(23, 29):
        s = en.fringe_survey(en.sum_dominant_fringe(n))
        total += s.completions
        ok = (s.class_counts["SD"] == s.completions
              and s.sum_sizes == {2 * n - 2: s.completions}
              and s.all_missing_sum(1)
              and max(s.diff_sizes) <= 2 * n - 3)
        if not ok:
            bad.append(n)
    report(7, "every completion of the prescribed fringes is sum-dominant, 23 <= n <= 28",
           not bad, f"{total} completions, failing n: {bad or 'none'}", time.perf_counter() - start, 60)


def test_08_constructions(report):
    start = time.perf_counter()
    bad = []
    for x in range(-200, 201):
        s = co.build_prescribed(x)
        if imbalance(s) != x or (s and s.max() > 17 * abs(x)):
            bad.append(x)
    top6 = co.build_prescribed(6).max()
    report(8, "prescribed imbalance for |x| <= 200 within 17|x|; x=6 has max 101",
           not bad and top6 == 101, f"failing x: {bad or 'none'}, max for x=6: {top6}",
           time.perf_counter() - start, 60)


def test_09_class_fractions(report, big_two_sided_run):
    rho = big_two_sided_run.rho()
    ok = (0.91 <= rho.rho_minus <= 0.95 and 0.05 <= rho.rho_equal <= 0.09
          and 2e-4 <= rho.rho_plus <= 8e-4)
    report(9, "class fractions at n=1000 over 10^6 trials",
           ok, f"rho- {rho.rho_minus:.6f}, rho= {rho.rho_equal:.6f}, rho+ {rho.rho_plus:.6f}")


def test_10_missing_sum_histograms(report, big_two_sided_run, conditioned_one_sided):
    f = big_two_sided_run.sums_histogram().frequencies(8)
    y0 = conditioned_one_sided.frequency(0)
    ok = (0.011 <= f[0] <= 0.017 and 0.018 <= f[1] <= 0.024
          and f[7] < min(f[6], f[8]) and 0.226 <= y0 <= 0.246
          and conditioned_one_sided.total >= 10**5)
    report(10, "missing-sum histogram shape and conditioned one-sided Y=0",
           ok, f"X0 {f[0]:.5f}, X1 {f[1]:.5f}, X6/X7/X8 {f[6]:.5f}/{f[7]:.5f}/{f[8]:.5f}, "
           f"Y0 {y0:.5f} over {conditioned_one_sided.total} trials")


def test_11_fibonacci(report):
    start = time.perf_counter()
    fib = [0, 1]
    while len(fib) < 30:
        fib.append(fib[-1] + fib[-2])
    bad = [m for m in range(0, 25) if en.count_missing_difference(m, 1) != fib[m + 2]]
    report(11, "subsets of {0..m-1} avoiding difference 1 number F(m+2), m <= 24",
           not bad, f"failing m: {bad or 'none'}", time.perf_counter() - start, 300)


def test_12_minimal_diameter(report):
    start = time.perf_counter()
    reflect = lambda t, d: tuple(sorted(d - m for m in t))
    four = {tuple(s) for s in en.minimal_diameter_search(25, 4)}
    one = {tuple(s) for s in en.minimal_diameter_search(14, 1)}
    ok = (four == {co.S4, reflect(co.S4, 25)}
          and one == {co.S1, reflect(co.S1, 14), co.S1_PRIME, reflect(co.S1_PRIME, 14)})
    report(12, "diameter-minimal sets for imbalance 4 and 1",
           ok, f"{len(four)} sets for x=4, {len(one)} sets for x=1", time.perf_counter() - start, 600)
