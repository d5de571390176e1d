import json

import numpy as np
import pytest

from mstdlab import enumeration as en
from mstdlab import probmodel as pm
from mstdlab.construct import S1, S1_PRIME, S4
from mstdlab.errors import DomainError, ResourceError
from mstdlab.probmodel import FringeSpec
from mstdlab.setcore import IntSet, sizes

from conftest import (
    all_subsets,
    completions,
    count_diff_missing,
    count_sum_missing,
    covers_sums,
    naive_diffs,
    naive_sums,
)


def brute_histogram(n, masks=None):
    masks = range(1 << n) if masks is None else masks
    out = {}
    for m in masks:
        members = [i for i in range(n) if m >> i & 1]
        key = (len(naive_sums(members)), len(naive_diffs(members)))
        out[key] = out.get(key, 0) + 1
    return out


def test_histogram_n2():
    hist = en.enumerate_joint(2)
    assert hist.counts == {(0, 0): 1, (1, 1): 2, (3, 3): 1}
    assert hist.rows() == [(0, 0, 1), (1, 1, 2), (3, 3, 1)]


def test_tally_n2():
    report = en.tally(en.enumerate_joint(2))
    assert report.count == 4
    assert report.sum_total == 5
    assert report.class_counts == {"SD": 0, "DD": 0, "BAL": 4}
    assert report.missing_pairs[(3, 3)] == 1


@pytest.mark.parametrize("n", range(1, 13))
def test_matches_brute_force(n):
    assert en.enumerate_joint(n).counts == brute_histogram(n)


def test_endpoints_filter():
    n = 10
    masks = [m for m in range(1 << n) if m & 1 and m >> (n - 1) & 1]
    hist = en.enumerate_joint(n, en.Filter.endpoints())
    assert hist.total == 2 ** (n - 2)
    assert hist.counts == brute_histogram(n, masks)
    assert en.enumerate_joint(1, en.Filter.endpoints()).counts == {(1, 1): 1}


def test_fringed_filter():
    spec = FringeSpec.build(12, 3, 2, [0, 2], [11])
    masks = [int(m) for m in (np.arange(1 << spec.free) << spec.ell) | spec.fixed_mask]
    hist = en.enumerate_joint(12, en.Filter.fringed(spec))
    assert hist.counts == brute_histogram(12, masks)


def test_thread_and_chunk_independence():
    ref = en.enumerate_joint(16, threads=1)
    for threads, chunk in [(4, 1000), (3, 1 << 12), (1, 7)]:
        other = en.enumerate_joint(16, threads=threads, chunk_size=chunk)
        assert np.array_equal(ref.table, other.table)


def test_sum_total_small():
    assert [en.tally(en.enumerate_joint(n)).sum_total for n in (1, 2, 3)] == [1, 5, 17]
    for n in range(1, 17):
        assert en.verify_sum_total(n).ok


def test_class_counts_n24_frozen():
    # regression values from the full n = 24 census
    hist = en.enumerate_joint(24)
    assert hist.class_counts() == {"SD": 6388, "DD": 15284798, "BAL": 1486030}
    assert abs(en.tally(hist).mean_diff_size - 41) < 0.3


def test_position_census_against_oracle():
    n = 12
    masks = all_subsets(n)
    census = en.position_census(n)
    for k in range(2 * n - 1):
        assert census.sum_missing[k] == count_sum_missing(masks, k, n)
    for k in range(1, n):
        assert census.diff_missing[k] == count_diff_missing(masks, k, n)
    assert census.diffs_full == en.enumerate_joint(n).table[:, 2 * n - 1].sum()


def test_probabilities_cross_validation_n12():
    n, total = 12, 1 << 12
    census = en.position_census(n)
    for k in range(2 * n - 1):
        assert census.sum_missing[k] == pm.p_sum_missing_uniform(n, k) * total
    for k in range(n // 2, n):
        assert census.diff_missing[k] == pm.p_diff_missing_uniform(n, k).rational * total


def test_sum_coverage_target():
    spec = FringeSpec.build(10, 1, 1, [0], [9])
    target = en.sum_coverage_target(spec)
    assert [k for k in range(20) if target >> k & 1] == list(range(1, 9)) + list(range(10, 18))


def test_difference_dominant_fringe_misses_one():
    survey = en.fringe_survey(en.difference_dominant_fringe(12))
    assert survey.completions == 2**6
    assert survey.all_missing_sum(1)


def test_sum_dominant_fringe_n26():
    survey = en.fringe_survey(en.sum_dominant_fringe(26))
    assert survey.completions == 16
    assert survey.class_counts["SD"] == 16
    assert survey.sum_sizes == {50: 16}
    assert survey.all_missing_sum(1)
    assert survey.diff_bound_ok


def test_fringe_survey_coverage_counts():
    spec = FringeSpec.build(14, 2, 2, [0, 1], [12, 13])
    survey = en.fringe_survey(spec)
    masks = completions(spec)
    ks = [k for k in range(27) if en.sum_coverage_target(spec) >> k & 1]
    assert survey.sums_target_covered == covers_sums(masks, ks, 14)


def test_minimal_diameter_negative():
    found = en.minimal_diameter_search(6, -1)
    assert found
    d = found[0].max()
    assert all(s.min() == 0 and s.max() == d for s in found)
    assert all(sizes(s)[0] - sizes(s)[1] == -1 for s in found)
    # nothing of smaller diameter has imbalance -1
    for dd in range(d):
        for mask in range(1 << (dd + 1)):
            s = IntSet(dd + 1, mask)
            if s and s.min() == 0 and s.max() == dd:
                assert sizes(s)[0] - sizes(s)[1] != -1


def test_minimal_diameter_s1():
    found = {tuple(s) for s in en.minimal_diameter_search(14, 1)}
    reflect = lambda t: tuple(sorted(14 - m for m in t))
    assert found == {S1, reflect(S1), S1_PRIME, reflect(S1_PRIME)}


def test_minimal_diameter_guard():
    with pytest.raises(ResourceError):
        en.minimal_diameter_search(27, 4)
    with pytest.raises(DomainError):
        en.minimal_diameter_search(-1, 4)


def test_minimal_diameter_none_found():
    assert en.minimal_diameter_search(10, 1) == []


def test_count_missing_difference():
    assert en.count_missing_difference(12, 1) == 377
    assert en.count_missing_difference(8, 4) == 81
    assert en.count_missing_difference(10, 3) == count_diff_missing(all_subsets(10), 3, 10)


def test_guard(monkeypatch):
    with pytest.raises(ResourceError):
        en.enumerate_joint(64)
    monkeypatch.setenv(en.GUARD_ENV, "10")
    with pytest.raises(ResourceError):
        en.enumerate_joint(11)
    assert en.enumerate_joint(12, en.Filter.endpoints()).total == 1 << 10


def test_filter_validation():
    with pytest.raises(DomainError):
        en.Filter("nope")
    with pytest.raises(DomainError):
        en.Filter("fringed")
    with pytest.raises(DomainError):
        en.enumerate_joint(12, en.Filter.fringed(FringeSpec.build(10, 1, 1)))
    with pytest.raises(DomainError):
        en.enumerate_joint(0)


def test_census_round_trip(tmp_path):
    spec = FringeSpec.build(14, 2, 1, [1], [13])
    hist = en.enumerate_joint(14, en.Filter.fringed(spec))
    csv_path, sidecar = en.write_census(hist, tmp_path / "c14.csv", 0.5)
    back = en.read_census(csv_path)
    assert np.array_equal(back.table, hist.table)
    assert back.filter == hist.filter
    meta = json.loads(sidecar.read_text())
    report = en.tally(back)
    assert meta["totals"] == {"sum_size": report.sum_total, "diff_size": report.diff_total,
                              "subsets": report.count}
    assert meta["class_counts"] == report.class_counts


def test_class_proportion_table_and_monotonicity():
    rows = en.class_proportion_table(range(1, 15))
    assert [r["total"] for r in rows] == [2**n for n in range(1, 15)]
    for r in rows:
        assert r["SD"] + r["DD"] + r["BAL"] == r["total"]
    assert rows[0]["BAL_fraction"] == 1.0
    report = en.monotonicity_report(rows)
    assert set(report) == {"SD", "DD", "BAL"}
    assert all(isinstance(v, list) for v in report.values())


def test_minimal_diameter_s4():
    found = {tuple(s) for s in en.minimal_diameter_search(25, 4)}
    assert found == {S4, tuple(sorted(25 - m for m in S4))}
