"""Exhaustive censuses of subsets of ``{0..n-1}``.

Every admitted subset is visited once; the results are exact joint
histograms ``c_n(x, y)`` of ``(|S+S|, |S-S|)`` together with the tallies
derived from them. Work is cut into contiguous rank ranges, and partial
histograms are merged in chunk order, so results do not depend on the
number of worker threads.
"""

from __future__ import annotations

import csv
import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _bitkernels as bk
from ._parallel import chunks, run_chunks
from .errors import DomainError, ResourceError
from .probmodel import FringeSpec, total_sumset_size_formula
from .setcore import IntSet

GUARD_ENV = "MSTDLAB_MAX_N"
DEFAULT_GUARD = 30
DIAMETER_GUARD = 26
_CHUNK = 1 << 20


def resource_guard() -> int:
    """Largest number of free positions an exhaustive census may enumerate."""
    value = os.environ.get(GUARD_ENV)
    return int(value) if value else DEFAULT_GUARD


@dataclass(frozen=True)
class Filter:
    mode: str = "all"
    spec: FringeSpec | None = None

    def __post_init__(self):
        if self.mode not in ("all", "endpoints", "fringed"):
            raise DomainError(f"unknown filter mode {self.mode!r}")
        if (self.mode == "fringed") != (self.spec is not None):
            raise DomainError("a FringeSpec is required exactly for the fringed mode")

    @classmethod
    def all(cls) -> "Filter":
        return cls("all")

    @classmethod
    def endpoints(cls) -> "Filter":
        return cls("endpoints")

    @classmethod
    def fringed(cls, spec: FringeSpec) -> "Filter":
        return cls("fringed", spec)

    def layout(self, n: int) -> tuple[int, int, int]:
        """Return ``(base_mask, shift, free_bits)`` describing the admitted sets."""
        if self.mode == "all":
            return 0, 0, n
        if self.mode == "endpoints":
            if n == 1:
                return 1, 0, 0
            return 1 | (1 << (n - 1)), 1, n - 2
        spec = self.spec
        if spec.n != n:
            raise DomainError(f"filter spec has n={spec.n}, census asked for n={n}")
        return spec.fixed_mask, spec.ell, spec.free

    def to_json(self):
        if self.mode == "fringed":
            return {"mode": "fringed", "spec": self.spec.to_json()}
        return {"mode": self.mode}

    @classmethod
    def from_json(cls, data) -> "Filter":
        if data["mode"] == "fringed":
            return cls.fringed(FringeSpec.from_json(data["spec"]))
        return cls(data["mode"])


@dataclass
class JointHistogram:
    """Counts ``table[x, y]`` of admitted subsets with ``|S+S| = x`` and ``|S-S| = y``."""

    n: int
    table: np.ndarray
    filter: Filter = field(default_factory=Filter.all)

    @property
    def total(self) -> int:
        return int(self.table.sum(dtype=object))

    @property
    def counts(self) -> dict[tuple[int, int], int]:
        xs, ys = np.nonzero(self.table)
        return {(int(x), int(y)): int(self.table[x, y]) for x, y in zip(xs, ys)}

    def rows(self):
        """Nonzero cells as ``(sum_size, diff_size, count)`` in lexicographic order."""
        return [(x, y, c) for (x, y), c in sorted(self.counts.items())]

    def class_counts(self) -> dict[str, int]:
        x, y = np.indices(self.table.shape)
        t = self.table.astype(object)
        return {
            "SD": int(t[x > y].sum()),
            "DD": int(t[y > x].sum()),
            "BAL": int(t[x == y].sum()),
        }


@dataclass
class TallyReport:
    n: int
    sum_total: int
    diff_total: int
    class_counts: dict[str, int]
    missing_pairs: dict[tuple[int, int], int]
    count: int

    @property
    def mean_sum_size(self) -> float:
        return self.sum_total / self.count

    @property
    def mean_diff_size(self) -> float:
        return self.diff_total / self.count

    def proportions(self) -> dict[str, float]:
        return {k: v / self.count for k, v in self.class_counts.items()}


def _check_n(n: int, free: int):
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    guard = resource_guard()
    if free > guard:
        raise ResourceError(
            f"exhaustive census over {free} free positions exceeds the guard of {guard} "
            f"(set {GUARD_ENV} to override, or use the montecarlo module)"
        )
    if n > bk.MAX_KERNEL_N:
        raise ResourceError(f"census kernels support n <= {bk.MAX_KERNEL_N}, got n={n}")


def enumerate_joint(n: int, filter: Filter | None = None, *, threads: int | None = None,
                    chunk_size: int = _CHUNK) -> JointHistogram:
    """Exact joint histogram of ``(|S+S|, |S-S|)`` over all admitted subsets."""
    filter = filter or Filter.all()
    base, shift, free = filter.layout(n)
    _check_n(n, free)
    ub = np.uint64(base)

    def work(lo, hi):
        part = np.zeros((2 * n, 2 * n), dtype=np.int64)
        bk.census_chunk(n, ub, shift, lo, hi, part)
        return part

    table = np.zeros((2 * n, 2 * n), dtype=np.int64)
    for part in run_chunks(work, chunks(1 << free, chunk_size), threads):
        table += part
    return JointHistogram(n, table, filter)


def tally(hist: JointHistogram) -> TallyReport:
    n = hist.n
    t = hist.table.astype(object)
    x, y = np.indices(t.shape)
    full = 2 * n - 1
    return TallyReport(
        n=n,
        sum_total=int((t * x).sum()),
        diff_total=int((t * y).sum()),
        class_counts=hist.class_counts(),
        missing_pairs={(full - a, full - b): c for (a, b), c in hist.counts.items()},
        count=hist.total,
    )


@dataclass
class SumTotalReport:
    n: int
    enumerated: int
    formula: int

    @property
    def ok(self) -> bool:
        return self.enumerated == self.formula


def verify_sum_total(n: int, *, threads: int | None = None) -> SumTotalReport:
    report = tally(enumerate_joint(n, threads=threads))
    return SumTotalReport(n, report.sum_total, total_sumset_size_formula(n))


@dataclass
class PositionCensus:
    """Census with per-position missing counts for an admitted family of sets."""

    hist: JointHistogram
    sum_missing: np.ndarray
    diff_missing: np.ndarray
    target_covered: int
    diffs_full: int


def position_census(n: int, filter: Filter | None = None, *, sum_target: int = 0,
                    threads: int | None = None) -> PositionCensus:
    """Like :func:`enumerate_joint` but also counts, for every ``k``, the sets missing ``k``.

    ``sum_target`` is a bitmask of sums; the census counts how many admitted sets
    have all of them in ``A+A``.
    """
    filter = filter or Filter.all()
    base, shift, free = filter.layout(n)
    _check_n(n, free)
    ub = np.uint64(base)
    target = np.uint64(sum_target)

    def work(lo, hi):
        table = np.zeros((2 * n, 2 * n), dtype=np.int64)
        sm = np.zeros(2 * n - 1, dtype=np.int64)
        dm = np.zeros(n, dtype=np.int64)
        counters = np.zeros(2, dtype=np.int64)
        bk.detailed_chunk(n, ub, shift, lo, hi, target, table, sm, dm, counters)
        return table, sm, dm, counters

    table = np.zeros((2 * n, 2 * n), dtype=np.int64)
    sm = np.zeros(2 * n - 1, dtype=np.int64)
    dm = np.zeros(n, dtype=np.int64)
    counters = np.zeros(2, dtype=np.int64)
    for t, s, d, c in run_chunks(work, chunks(1 << free, _CHUNK), threads):
        table += t
        sm += s
        dm += d
        counters += c
    return PositionCensus(JointHistogram(n, table, filter), sm, dm, int(counters[0]), int(counters[1]))


def sum_coverage_target(spec: FringeSpec) -> int:
    """Bitmask of the sums ``{2ell-1..n-u-1} | {n+ell-1..2n-2u-1}`` a completion should hit."""
    n, ell, u = spec.n, spec.ell, spec.u
    mask = 0
    for k in list(range(max(2 * ell - 1, 0), n - u)) + list(range(n + ell - 1, 2 * n - 2 * u)):
        mask |= 1 << k
    return mask


SD_FRINGE_L = (0, 2, 3, 7, 8, 9, 10)
SD_FRINGE_U_OFFSETS = (11, 10, 9, 8, 6, 3, 2, 1)


def sum_dominant_fringe(n: int) -> FringeSpec:
    """Fringes forcing ``n-7`` out of ``A-A`` while filling ``A+A`` except for 1."""
    return FringeSpec.build(n, 11, 11, SD_FRINGE_L, (n - o for o in SD_FRINGE_U_OFFSETS))


def difference_dominant_fringe(n: int) -> FringeSpec:
    """Fringes keeping 1 out of ``A+A``."""
    return FringeSpec.build(n, 4, 2, (0, 2, 3), (n - 2, n - 1))


def balanced_fringe(n: int) -> FringeSpec:
    return FringeSpec.build(n, 6, 6, range(6), range(n - 6, n))


@dataclass
class FringeSurvey:
    spec: FringeSpec
    completions: int
    class_counts: dict[str, int]
    sums_target_covered: int
    diffs_full: int
    sum_missing: list[int]
    sum_sizes: dict[int, int]
    diff_sizes: dict[int, int]
    diff_bound_ok: bool | None = None

    def all_missing_sum(self, k: int) -> bool:
        return self.sum_missing[k] == self.completions


def fringe_survey(spec: FringeSpec, *, threads: int | None = None) -> FringeSurvey:
    """Enumerate every completion ``A = L | R | U`` of a fringe specification."""
    census = position_census(spec.n, Filter.fringed(spec), sum_target=sum_coverage_target(spec),
                             threads=threads)
    hist = census.hist
    sum_sizes: dict[int, int] = {}
    diff_sizes: dict[int, int] = {}
    for (x, y), c in hist.counts.items():
        sum_sizes[x] = sum_sizes.get(x, 0) + c
        diff_sizes[y] = diff_sizes.get(y, 0) + c
    survey = FringeSurvey(
        spec=spec,
        completions=hist.total,
        class_counts=hist.class_counts(),
        sums_target_covered=census.target_covered,
        diffs_full=census.diffs_full,
        sum_missing=[int(v) for v in census.sum_missing],
        sum_sizes=dict(sorted(sum_sizes.items())),
        diff_sizes=dict(sorted(diff_sizes.items())),
    )
    if spec.n >= 22 and spec == sum_dominant_fringe(spec.n):
        survey.diff_bound_ok = max(diff_sizes) <= 2 * spec.n - 3
    return survey


def minimal_diameter_search(max_diameter: int, x: int) -> list[IntSet]:
    """All sets with ``min = 0`` and imbalance ``x`` whose diameter is the least possible.

    Diameters ``0, 1, ..., max_diameter`` are scanned in order and the search stops
    at the first diameter with a match. Reflections are kept; an empty list means
    no set of diameter at most ``max_diameter`` has imbalance ``x``.
    """
    if max_diameter > DIAMETER_GUARD:
        raise ResourceError(f"diameter search is limited to {DIAMETER_GUARD}, got {max_diameter}")
    if max_diameter < 0:
        raise DomainError("max_diameter must be nonnegative")
    empty = np.zeros(0, dtype=np.uint64)
    for d in range(max_diameter + 1):
        count = bk.imbalance_scan(d, x, empty, False)
        if count:
            out = np.zeros(count, dtype=np.uint64)
            bk.imbalance_scan(d, x, out, True)
            return [IntSet(d + 1, int(a)) for a in out]
    return []


def count_missing_difference(m: int, k: int) -> int:
    """Exhaustively count subsets ``R`` of ``{0..m-1}`` with ``k`` not in ``R-R``."""
    if m > resource_guard():
        raise ResourceError(f"m={m} exceeds the guard of {resource_guard()}")
    return sum(bk.count_missing_difference(m, k, lo, hi) for lo, hi in chunks(1 << m, _CHUNK))


def class_proportion_table(ns, *, filter_mode: str = "all", threads: int | None = None) -> list[dict]:
    rows = []
    for n in ns:
        flt = Filter(filter_mode)
        hist = enumerate_joint(n, flt, threads=threads)
        counts = hist.class_counts()
        total = hist.total
        rows.append({"n": n, "total": total, **counts,
                     **{f"{k}_fraction": v / total for k, v in counts.items()}})
    return rows


def monotonicity_report(rows: list[dict]) -> dict[str, list[int]]:
    """List the ``n`` at which the observed proportions break the expected trend.

    SD and DD fractions are expected to be nondecreasing in ``n`` and the BAL
    fraction nonincreasing. Returns, per class, the values of ``n`` where the
    trend fails (empty lists mean the data are monotone).
    """
    breaks = {"SD": [], "DD": [], "BAL": []}
    for prev, cur in zip(rows, rows[1:]):
        if cur["SD_fraction"] < prev["SD_fraction"]:
            breaks["SD"].append(cur["n"])
        if cur["DD_fraction"] < prev["DD_fraction"]:
            breaks["DD"].append(cur["n"])
        if cur["BAL_fraction"] > prev["BAL_fraction"]:
            breaks["BAL"].append(cur["n"])
    return breaks


def write_census(hist: JointHistogram, path: str | Path, elapsed_seconds: float = 0.0) -> tuple[Path, Path]:
    """Write ``sum_size,diff_size,count`` rows and a JSON sidecar next to them."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["sum_size", "diff_size", "count"])
        writer.writerows(hist.rows())
    report = tally(hist)
    sidecar = path.with_suffix(".json")
    sidecar.write_text(json.dumps({
        "n": hist.n,
        "filter": hist.filter.to_json(),
        "totals": {"sum_size": report.sum_total, "diff_size": report.diff_total,
                   "subsets": report.count},
        "class_counts": report.class_counts,
        "elapsed_seconds": elapsed_seconds,
    }, indent=2) + "\n")
    return path, sidecar


def read_census(path: str | Path) -> JointHistogram:
    path = Path(path)
    meta = json.loads(path.with_suffix(".json").read_text())
    n = meta["n"]
    table = np.zeros((2 * n, 2 * n), dtype=np.int64)
    with path.open(newline="") as fh:
        for row in csv.DictReader(fh):
            table[int(row["sum_size"]), int(row["diff_size"])] = int(row["count"])
    return JointHistogram(n, table, Filter.from_json(meta["filter"]))


def timed_census(n: int, filter: Filter | None = None, **kwargs) -> tuple[JointHistogram, float]:
    start = time.perf_counter()
    hist = enumerate_joint(n, filter, **kwargs)
    return hist, time.perf_counter() - start
