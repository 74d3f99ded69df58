"""Sampling campaigns, histograms and goodness-of-fit scoring."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, TextIO

import numpy as np

from .analytic import GammaParams, gamma_from_moments
from .core import Problem, RngStream, random_keyrings
from .pmf import Pmf
from .special import gamma_cdf, normal_cdf
from .strategies import (
    StrategyKind,
    batch_key_first,
    batch_lock_first,
    batch_totally_random,
)

CHUNK = 20_000
MIN_EXPECTED = 5.0


class DegenerateDataError(ValueError):
    """Data with zero variance, or too little spread to score."""


@dataclass(frozen=True)
class Campaign:
    problem: Problem
    strategy: StrategyKind
    samples: int
    seed: int
    workers: int = 1

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")

    def worker_samples(self) -> list[int]:
        base, extra = divmod(self.samples, self.workers)
        return [base + (1 if w < extra else 0) for w in range(self.workers)]


@dataclass(frozen=True)
class Histogram:
    offset: int
    counts: np.ndarray
    total: int

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64, copy=True).reshape(-1)
        if counts.size == 0 or np.any(counts < 0):
            raise ValueError("counts must be a nonempty vector of nonnegative integers")
        if int(counts.sum()) != self.total:
            raise ValueError(f"counts sum to {counts.sum()}, total says {self.total}")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "offset", int(self.offset))
        object.__setattr__(self, "total", int(self.total))

    @classmethod
    def from_samples(cls, samples) -> "Histogram":
        samples = np.asarray(samples, dtype=np.int64)
        lo = int(samples.min())
        return cls(lo, np.bincount(samples - lo), int(samples.size))

    @property
    def support(self) -> np.ndarray:
        return np.arange(self.offset, self.offset + self.counts.size)

    @property
    def last(self) -> int:
        return self.offset + self.counts.size - 1

    def moments(self) -> tuple[float, float]:
        """Plug-in mean and variance (divisor = number of samples)."""
        k = self.support.astype(np.float64)
        w = self.counts / self.total
        mean = float(np.dot(k, w))
        c = k - mean
        return mean, float(np.dot(c * c, w))

    def merge(self, other: "Histogram") -> "Histogram":
        lo = min(self.offset, other.offset)
        hi = max(self.last, other.last)
        counts = np.zeros(hi - lo + 1, dtype=np.int64)
        counts[self.offset - lo : self.last - lo + 1] += self.counts
        counts[other.offset - lo : other.last - lo + 1] += other.counts
        return Histogram(lo, counts, self.total + other.total)

    def ecdf(self) -> np.ndarray:
        return np.cumsum(self.counts) / self.total


def _worker_totals(c: Campaign, index: int, samples: int) -> np.ndarray:
    rng = RngStream(c.seed).split(index)
    parts = []
    for start in range(0, samples, CHUNK):
        m = min(CHUNK, samples - start)
        if c.strategy is StrategyKind.TOTALLY_RANDOM:
            parts.append(batch_totally_random(c.problem, m, rng))
        else:
            rings = random_keyrings(c.problem.keys, m, rng)
            player = batch_lock_first if c.strategy is StrategyKind.LOCK_FIRST else batch_key_first
            parts.append(player(c.problem, rings))
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def run_campaign(c: Campaign) -> Histogram:
    """Play ``c.samples`` games; worker ``w`` draws from ``split(seed, w)``."""
    sizes = c.worker_samples()
    if c.workers == 1:
        results = [_worker_totals(c, 0, sizes[0])]
    else:
        with ThreadPoolExecutor(max_workers=c.workers) as pool:
            results = list(pool.map(lambda w: _worker_totals(c, w, sizes[w]), range(c.workers)))
    hist = None
    for totals in results:
        if totals.size == 0:
            continue
        h = Histogram.from_samples(totals)
        hist = h if hist is None else hist.merge(h)
    return hist


# -- goodness of fit -----------------------------------------------------------


def _aligned(h: Histogram, p: Pmf):
    lo = min(h.offset, p.offset)
    hi = max(h.last, p.last)
    obs = np.zeros(hi - lo + 1)
    exp = np.zeros(hi - lo + 1)
    obs[h.offset - lo : h.last - lo + 1] = h.counts
    exp[p.offset - lo : p.last - lo + 1] = p.mass
    return lo, obs, exp


def merge_bins(observed, expected, min_expected: float = MIN_EXPECTED):
    """Greedy left-to-right merge so every bin expects at least ``min_expected``.

    A short final run is folded into the preceding bin.
    """
    obs_out: list[float] = []
    exp_out: list[float] = []
    acc_o = acc_e = 0.0
    for o, e in zip(observed, expected):
        acc_o += o
        acc_e += e
        if acc_e >= min_expected:
            obs_out.append(acc_o)
            exp_out.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_o or acc_e:
        if obs_out:
            obs_out[-1] += acc_o
            exp_out[-1] += acc_e
        else:
            obs_out.append(acc_o)
            exp_out.append(acc_e)
    return np.array(obs_out), np.array(exp_out)


def chi_square_gof(h: Histogram, p: Pmf, fitted_params: int = 0) -> tuple[float, int]:
    """Pearson statistic of ``h`` against ``p`` and its degrees of freedom.

    Any truncation deficit of ``p`` is expected in the upper tail bin.
    """
    _, obs, prob = _aligned(h, p)
    exp = prob * h.total
    exp[-1] += p.deficit * h.total
    obs, exp = merge_bins(obs, exp)
    if obs.size < 2:
        raise DegenerateDataError("fewer than 2 bins survive merging")
    dof = obs.size - 1 - fitted_params
    if dof < 1:
        raise DegenerateDataError(f"no degrees of freedom left ({obs.size} bins)")
    stat = float(np.sum((obs - exp) ** 2 / exp))
    return stat, dof


def ks_distance_discrete(h: Histogram, p: Pmf) -> float:
    """Sup-distance between the empirical CDF and the CDF of ``p``."""
    _, obs, prob = _aligned(h, p)
    return float(np.max(np.abs(np.cumsum(obs) / h.total - np.cumsum(prob))))


def ks_distance_continuous(dist: Histogram | Pmf, cdf: Callable[[float], float]) -> float:
    """Sup-distance between an integer-valued CDF and a continuous one.

    The integer CDF is compared at each support point ``t`` against
    ``cdf(t + 1/2)`` (continuity correction).
    """
    if isinstance(dist, Histogram):
        support, step = dist.support, dist.ecdf()
    else:
        support, step = dist.support, dist.cdf()
    model = np.array([cdf(t + 0.5) for t in support])
    return float(np.max(np.abs(step - model)))


def binned_pmf(lo: int, hi: int, cdf: Callable[[float], float]) -> Pmf:
    """Integer bins ``lo..hi`` of a continuous law, tails folded into the end bins."""
    edges = np.array([cdf(t + 0.5) for t in range(lo, hi)])
    cum = np.concatenate([edges, [1.0]])
    mass = np.diff(np.concatenate([[0.0], cum]))
    return Pmf(lo, np.clip(mass, 0.0, None))


@dataclass(frozen=True)
class FitReport:
    family: str
    params: dict
    chi_square: float
    dof: int
    ks_distance: float

    def __post_init__(self):
        if not 0.0 <= self.ks_distance <= 1.0:
            raise ValueError("ks_distance must lie in [0, 1]")
        if self.chi_square < 0:
            raise ValueError("chi_square must be nonnegative")

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "params": dict(self.params),
            "chi_square": self.chi_square,
            "dof": self.dof,
            "ks_distance": self.ks_distance,
        }


def _fit(h: Histogram, family: str, params: dict, cdf) -> FitReport:
    model = binned_pmf(h.offset, h.last, cdf)
    stat, dof = chi_square_gof(h, model, fitted_params=2)
    return FitReport(family, params, stat, dof, ks_distance_continuous(h, cdf))


def fit_gamma_moments(h: Histogram) -> FitReport:
    mean, var = h.moments()
    if var <= 0:
        raise DegenerateDataError("histogram has zero variance")
    g = gamma_from_moments(mean, var)
    return _fit(h, "gamma", {"k": g.shape_k, "theta": g.scale_theta},
                lambda x: gamma_cdf(x, g))


def fit_normal_moments(h: Histogram) -> FitReport:
    mean, var = h.moments()
    if var <= 0:
        raise DegenerateDataError("histogram has zero variance")
    sigma = math.sqrt(var)
    return _fit(h, "normal", {"mu": mean, "sigma": sigma},
                lambda x: normal_cdf(x, mean, sigma))


def gamma_ks(p: Pmf, g: GammaParams) -> float:
    return ks_distance_continuous(p, lambda x: gamma_cdf(x, g))


def normal_ks(p: Pmf, mu: float, sigma: float) -> float:
    return ks_distance_continuous(p, lambda x: normal_cdf(x, mu, sigma))


# -- serialisation -------------------------------------------------------------


def write_histogram_csv(h: Histogram, out: TextIO, comments: Iterable[str] = ()) -> None:
    for line in comments:
        out.write(f"# {line}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["value", "count"])
    for v, c in zip(h.support, h.counts):
        writer.writerow([int(v), int(c)])


def read_histogram_csv(src: TextIO | str) -> Histogram:
    if isinstance(src, str):
        src = io.StringIO(src)
    rows: dict[int, int] = {}
    for line in src:
        line = line.strip()
        if not line or line.startswith("#") or line.lower().startswith("value"):
            continue
        value, count = line.split(",")
        rows[int(value)] = rows.get(int(value), 0) + int(count)
    if not rows:
        raise ValueError("no histogram rows found")
    lo, hi = min(rows), max(rows)
    counts = np.zeros(hi - lo + 1, dtype=np.int64)
    for v, c in rows.items():
        counts[v - lo] = c
    return Histogram(lo, counts, int(counts.sum()))
