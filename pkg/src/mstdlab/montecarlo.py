"""Seeded Monte Carlo experiments on random subsets.

All samplers are pure functions of their configuration: trial ``t`` draws
its random set from a generator keyed by ``(seed, t)``, workers process
disjoint trial ranges, and partial results are merged in range order.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import _mckernels as mk
from ._parallel import chunks, run_chunks
from .errors import DomainError
from .rng import seed_key

MIN_TRUNCATION = 32
DEFAULT_TRUNCATION = 64
_TRIAL_CHUNK = 1 << 15


@dataclass(frozen=True)
class SampleConfig:
    n: int
    trials: int
    seed: int
    inclusion_prob: Fraction = Fraction(1, 2)
    condition_zero: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise DomainError(f"trials must be at least 1, got {self.trials}")
        if self.n < 1:
            raise DomainError(f"n must be positive, got {self.n}")
        p = Fraction(self.inclusion_prob)
        if not 0 <= p <= 1:
            raise DomainError(f"inclusion_prob must lie in [0, 1], got {p}")
        object.__setattr__(self, "inclusion_prob", p)

    def to_json(self) -> dict:
        d = asdict(self)
        d["inclusion_prob"] = f"{self.inclusion_prob.numerator}/{self.inclusion_prob.denominator}"
        return d

    def _draw_mode(self) -> tuple[bool, float]:
        return self.inclusion_prob == Fraction(1, 2), float(self.inclusion_prob)


@dataclass
class Histogram:
    bins: dict[int, int]
    total: int
    config: dict = field(default_factory=dict)

    @classmethod
    def from_array(cls, arr, config: dict | None = None) -> "Histogram":
        bins = {i: int(c) for i, c in enumerate(arr) if c}
        return cls(bins, int(sum(bins.values())), config or {})

    def frequency(self, b: int) -> float:
        return self.bins.get(b, 0) / self.total

    def frequencies(self, upto: int | None = None) -> np.ndarray:
        top = max(self.bins, default=0) if upto is None else upto
        out = np.zeros(top + 1)
        for b, c in self.bins.items():
            if b <= top:
                out[b] = c / self.total
        return out

    def mean(self) -> float:
        return sum(b * c for b, c in self.bins.items()) / self.total

    def write(self, path: str | Path) -> list[Path]:
        """Write ``bin,count`` CSV plus a JSON sidecar, or a single JSON file."""
        path = Path(path)
        payload = {"config": self.config, "total": self.total,
                   "bins": {str(b): c for b, c in sorted(self.bins.items())}}
        if path.suffix == ".json":
            path.write_text(json.dumps(payload, indent=2) + "\n")
            return [path]
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["bin", "count"])
            writer.writerows(sorted(self.bins.items()))
        sidecar = path.with_suffix(".json")
        sidecar.write_text(json.dumps({"config": self.config, "total": self.total}, indent=2) + "\n")
        return [path, sidecar]


@dataclass
class RhoEstimate:
    rho_minus: float
    rho_plus: float
    rho_equal: float
    se_minus: float
    se_plus: float
    se_equal: float
    trials: int
    seed: int
    counts: dict[str, int] = field(default_factory=dict)

    @classmethod
    def from_counts(cls, sd: int, dd: int, bal: int, seed: int) -> "RhoEstimate":
        trials = sd + dd + bal
        fr = [c / trials for c in (dd, sd, bal)]
        se = [math.sqrt(f * (1 - f) / trials) for f in fr]
        return cls(*fr, *se, trials=trials, seed=seed, counts={"SD": sd, "DD": dd, "BAL": bal})

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class TwoSidedRun:
    """Raw tallies of one two-sided run, shared by the class and histogram views."""

    config: SampleConfig
    missing_sums: np.ndarray
    missing_diffs: np.ndarray
    classes: np.ndarray
    sum_missing_positions: np.ndarray

    def rho(self) -> RhoEstimate:
        sd, dd, bal = (int(c) for c in self.classes)
        return RhoEstimate.from_counts(sd, dd, bal, self.config.seed)

    def sums_histogram(self) -> Histogram:
        return Histogram.from_array(self.missing_sums, self.config.to_json())

    def diffs_histogram(self) -> Histogram:
        return Histogram.from_array(self.missing_diffs, self.config.to_json())

    def position_frequencies(self) -> np.ndarray:
        return self.sum_missing_positions / self.config.trials


def run_two_sided(cfg: SampleConfig, *, threads: int | None = None) -> TwoSidedRun:
    n = cfg.n
    half, p = cfg._draw_mode()
    skey = seed_key(cfg.seed)

    def work(lo, hi):
        hx = np.zeros(2 * n, dtype=np.int64)
        hk = np.zeros(2 * n, dtype=np.int64)
        cl = np.zeros(3, dtype=np.int64)
        pos = np.zeros(2 * n - 1, dtype=np.int64)
        mk.two_sided_chunk(n, half, p, skey, cfg.condition_zero, lo, hi, hx, hk, cl, pos)
        return hx, hk, cl, pos

    hx = np.zeros(2 * n, dtype=np.int64)
    hk = np.zeros(2 * n, dtype=np.int64)
    cl = np.zeros(3, dtype=np.int64)
    pos = np.zeros(2 * n - 1, dtype=np.int64)
    for a, b, c, d in run_chunks(work, chunks(cfg.trials, _TRIAL_CHUNK), threads):
        hx += a
        hk += b
        cl += c
        pos += d
    return TwoSidedRun(cfg, hx, hk, cl, pos)


def sample_classes(cfg: SampleConfig, *, threads: int | None = None) -> RhoEstimate:
    """Estimate the difference-dominant, sum-dominant and balanced fractions."""
    return run_two_sided(cfg, threads=threads).rho()


def sample_missing_sums(cfg: SampleConfig, *, threads: int | None = None) -> Histogram:
    """Histogram of ``X = 2n - 1 - |S+S|``."""
    return run_two_sided(cfg, threads=threads).sums_histogram()


def sample_one_sided(cfg: SampleConfig, m: int = DEFAULT_TRUNCATION, *,
                     threads: int | None = None) -> Histogram:
    """Histogram of missing sums ``Y`` near 0, from subsets of ``{0..m-1}``.

    Only sums below ``m`` are counted, which approximates subsets of the
    nonnegative integers. ``cfg.n`` is ignored; ``cfg.condition_zero`` forces 0
    into every set.
    """
    if m < MIN_TRUNCATION:
        raise DomainError(f"truncation m must be at least {MIN_TRUNCATION}, got {m}")
    half, p = cfg._draw_mode()
    skey = seed_key(cfg.seed)

    def work(lo, hi):
        h = np.zeros(m + 1, dtype=np.int64)
        mk.one_sided_chunk(m, half, p, skey, cfg.condition_zero, lo, hi, h)
        return h

    hist = np.zeros(m + 1, dtype=np.int64)
    for part in run_chunks(work, chunks(cfg.trials, _TRIAL_CHUNK), threads):
        hist += part
    config = {**cfg.to_json(), "m": m}
    return Histogram.from_array(hist, config)


def mix_from_conditioned(conditioned: np.ndarray, upto: int) -> np.ndarray:
    """Unconditioned one-sided law from the law given ``0`` in the set.

    Without 0 the sums 0 and 1 are missing and the rest shifts down by one,
    so ``P(Y = k) = sum_i P(Y = k - 2i | 0 in A) 2^-(i+1)``.
    """
    out = np.zeros(upto + 1)
    for k in range(upto + 1):
        for i in range(k // 2 + 1):
            if k - 2 * i < len(conditioned):
                out[k] += conditioned[k - 2 * i] * 0.5 ** (i + 1)
    return out


@dataclass
class ConvolutionReport:
    bins: int
    two_sided: list[float]
    convolved: list[float]
    deviation: list[float]
    total_variation: float

    def to_json(self) -> dict:
        return asdict(self)


def convolution_check(cfg: SampleConfig, m: int = DEFAULT_TRUNCATION, *,
                      threads: int | None = None) -> ConvolutionReport:
    """Compare the missing-sum law at size ``cfg.n`` with the self-convolution of the one-sided law.

    The one-sided sampler uses ``cfg.seed + 1`` so the two samples are independent.
    """
    x = sample_missing_sums(cfg, threads=threads)
    y = sample_one_sided(replace(cfg, seed=cfg.seed + 1, condition_zero=False), m, threads=threads)
    fy = y.frequencies()
    conv = np.convolve(fy, fy)
    fx = x.frequencies()
    size = max(len(conv), len(fx))
    fx = np.pad(fx, (0, size - len(fx)))
    conv = np.pad(conv, (0, size - len(conv)))
    dev = np.abs(fx - conv)
    return ConvolutionReport(size, fx.tolist(), conv.tolist(), dev.tolist(), float(dev.sum() / 2))


def sample_two_set_average(cfg: SampleConfig, *, same_set: bool = False,
                           threads: int | None = None) -> tuple[float, float]:
    """Mean ``|S+T|`` and mean ``|S-T|`` over independent pairs (or ``T = S``)."""
    n = cfg.n
    half, p = cfg._draw_mode()
    skey = seed_key(cfg.seed)

    def work(lo, hi):
        totals = np.zeros(2, dtype=np.int64)
        mk.two_set_chunk(n, half, p, skey, same_set, lo, hi, totals)
        return totals

    totals = np.zeros(2, dtype=np.int64)
    for part in run_chunks(work, chunks(cfg.trials, _TRIAL_CHUNK), threads):
        totals += part
    return float(totals[0]) / cfg.trials, float(totals[1]) / cfg.trials


def density_probability(n: int, alpha: Fraction | float, literal: bool = False) -> Fraction:
    """Inclusion probability ``n^-alpha`` clamped to ``[0, 1]``.

    ``alpha = 0`` means the fair-coin model (p = 1/2) unless ``literal`` is set.
    """
    if alpha < 0:
        raise DomainError(f"alpha must be nonnegative, got {alpha}")
    if alpha == 0 and not literal:
        return Fraction(1, 2)
    p = Fraction(n ** -float(alpha)).limit_denominator(1 << 40)
    return min(max(p, Fraction(0)), Fraction(1))


def density_sweep(n_values, alpha, trials: int, seed: int, *, literal: bool = False,
                  threads: int | None = None) -> list[dict]:
    """Class fractions under inclusion probability ``n^-alpha`` for each ``n``.

    Exploratory output only; no trend is asserted.
    """
    rows = []
    for n in n_values:
        p = density_probability(n, alpha, literal)
        est = sample_classes(SampleConfig(n, trials, seed, p), threads=threads)
        rows.append({
            "n": n, "alpha": float(alpha), "p": float(p), "trials": trials, "seed": seed,
            "DD": est.rho_minus, "SD": est.rho_plus, "BAL": est.rho_equal,
            "se_DD": est.se_minus, "se_SD": est.se_plus, "se_BAL": est.se_equal,
        })
    return rows
