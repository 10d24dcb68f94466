"""Coarse-grained recurrence statistics of a scalar time series.

Return-time histograms use half-open value cells [lower, upper) so a
partition of the range is exact.  The default event convention is
entry-triggered: a recurrence is counted when the series enters the
cell, not on every sample spent inside it; every-visit counting is
retained for sensitivity checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np

from .embed import EmbeddingSpec, delay_embed
from .series import TimeSeries

Mode = Literal["entry", "visit"]


class NoEventsError(RuntimeError):
    """The cell is not visited often enough to define return times."""


class InsufficientEventsError(RuntimeError):
    """Too few recurrence events for the requested fit."""


class DegenerateSupportError(RuntimeError):
    """Histogram support too narrow for a log-linear fit."""


@dataclass(frozen=True)
class Cell:
    lower: float
    upper: float

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError(f"empty cell [{self.lower}, {self.upper})")

    def shifted(self, offset: float) -> "Cell":
        return Cell(self.lower + offset, self.upper + offset)


@dataclass(frozen=True)
class ReturnTimeHistogram:
    """Counts of integer return times (units of the sampling step)."""

    counts: dict[int, int]
    total_events: int
    dt: float
    mode: Mode

    def taus(self) -> np.ndarray:
        return np.array(sorted(self.counts), dtype=np.int64)

    def count_array(self) -> np.ndarray:
        return np.array([self.counts[t] for t in sorted(self.counts)], dtype=np.int64)

    def mean_tau(self) -> float:
        taus = self.taus()
        cnts = self.count_array()
        return float(np.dot(taus, cnts) / cnts.sum())


@dataclass(frozen=True)
class DensityHistogram:
    bin_width: float
    origin: float
    counts: np.ndarray
    normalization: float

    def centers(self) -> np.ndarray:
        return self.origin + (np.arange(self.counts.size) + 0.5) * self.bin_width

    def density(self) -> np.ndarray:
        return self.counts * self.normalization


@dataclass(frozen=True)
class RecurrencePlotData:
    window_start: int
    window_len: int
    epsilon: float
    pairs: np.ndarray  # (n_pairs, 2) int64, i < j, sorted by (i, j)
    embedding: Optional[EmbeddingSpec] = None


def _event_indices(series: TimeSeries, cell: Cell, mode: Mode) -> np.ndarray:
    v = series.values
    inside = (v >= cell.lower) & (v < cell.upper)
    if mode == "visit":
        return np.flatnonzero(inside)
    if mode != "entry":
        raise ValueError(f"unknown mode {mode!r}")
    prev = np.empty_like(inside)
    prev[0] = False
    prev[1:] = inside[:-1]
    return np.flatnonzero(inside & ~prev)


def _histogram(gaps: np.ndarray, dt: float, mode: Mode) -> ReturnTimeHistogram:
    taus, cnts = np.unique(gaps, return_counts=True)
    counts = {int(t): int(c) for t, c in zip(taus, cnts)}
    return ReturnTimeHistogram(counts, int(gaps.size), dt, mode)


def first_return_times(
    series: TimeSeries, cell: Cell, mode: Mode = "entry"
) -> ReturnTimeHistogram:
    """Histogram of gaps between successive recurrence events."""
    if len(series) < 2:
        raise ValueError("series must have at least 2 samples")
    events = _event_indices(series, cell, mode)
    if events.size < 2:
        raise NoEventsError(
            f"cell [{cell.lower}, {cell.upper}) visited {events.size} time(s); "
            "need at least 2 events"
        )
    return _histogram(np.diff(events), series.dt, mode)


def second_return_times(
    series: TimeSeries, cell: Cell, mode: Mode = "entry"
) -> ReturnTimeHistogram:
    """Histogram of gaps between events two apart (event k to k+2)."""
    if len(series) < 2:
        raise ValueError("series must have at least 2 samples")
    events = _event_indices(series, cell, mode)
    if events.size < 3:
        raise NoEventsError(
            f"cell [{cell.lower}, {cell.upper}) visited {events.size} time(s); "
            "need at least 3 events"
        )
    return _histogram(events[2:] - events[:-2], series.dt, mode)


@dataclass(frozen=True)
class ExponentialFit:
    rate: float
    ks_stat: float
    loglin_r2: float


def fit_exponential(h: ReturnTimeHistogram, min_bin_count: int = 10) -> ExponentialFit:
    """Maximum-likelihood exponential fit with two goodness diagnostics.

    ks_stat is the Kolmogorov-Smirnov distance between the empirical
    return-time distribution and Exp(rate); loglin_r2 is the R^2 of a
    least-squares line through (tau, log count) over bins holding at
    least ``min_bin_count`` events.
    """
    if h.total_events < 100:
        raise InsufficientEventsError(
            f"{h.total_events} events < 100 required for a stable fit"
        )
    taus = h.taus().astype(np.float64)
    cnts = h.count_array().astype(np.float64)
    total = cnts.sum()
    times = taus * h.dt
    mean_t = float(np.dot(times, cnts) / total)
    rate = 1.0 / mean_t

    # exact KS distance on the weighted sample
    cum = np.cumsum(cnts) / total
    model = 1.0 - np.exp(-rate * times)
    lower_cdf = np.concatenate(([0.0], cum[:-1]))
    ks = float(np.max(np.maximum(np.abs(cum - model), np.abs(lower_cdf - model))))

    good = cnts >= min_bin_count
    if np.count_nonzero(good) < 2:
        raise DegenerateSupportError(
            "fewer than 2 histogram bins with enough counts for a log-linear fit"
        )
    x = taus[good]
    y = np.log(cnts[good])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        raise DegenerateSupportError("log counts are constant across bins")
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot
    return ExponentialFit(rate=rate, ks_stat=ks, loglin_r2=r2)


def support_sparsity(h: ReturnTimeHistogram, mass: float) -> int:
    """Minimal number of distinct return times holding >= mass of events."""
    if not 0.0 < mass < 1.0:
        raise ValueError("mass must be in (0, 1)")
    cnts = np.sort(h.count_array())[::-1]
    cum = np.cumsum(cnts)
    return int(np.searchsorted(cum, mass * h.total_events) + 1)


def invariant_density(series: TimeSeries, bin_width: float) -> DensityHistogram:
    """Normalized histogram of the series values on [min, max]."""
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    v = series.values
    lo = float(v.min())
    hi = float(v.max())
    nbins = max(1, int(math.ceil((hi - lo) / bin_width))) if hi > lo else 1
    edges = lo + np.arange(nbins + 1) * bin_width
    counts, _ = np.histogram(v, bins=edges)
    norm = 1.0 / (v.size * bin_width)
    return DensityHistogram(bin_width, lo, counts.astype(np.int64), norm)


def return_map(series: TimeSeries, use_maxima: bool = True) -> np.ndarray:
    """Pairs of consecutive strict local maxima (M_k, M_{k+1}).

    With ``use_maxima=False`` the detection step is bypassed and the raw
    successive-value pairs (x_k, x_{k+1}) are returned, for series that
    are already discrete-time maps.
    """
    v = series.values
    if v.size < 3:
        raise ValueError("series must have at least 3 samples")
    if use_maxima:
        peaks = np.flatnonzero((v[1:-1] > v[:-2]) & (v[1:-1] >= v[2:])) + 1
        heights = v[peaks]
        if heights.size < 2:
            raise ValueError("fewer than 2 local maxima in the series")
    else:
        heights = v
    return np.column_stack((heights[:-1], heights[1:]))


def recurrence_matrix(
    series: TimeSeries,
    window_start: int,
    window_len: int,
    epsilon_frac: float,
    embed: Optional[EmbeddingSpec] = None,
) -> RecurrencePlotData:
    """Index pairs (i, j), i < j, closer than eps inside a window.

    eps = epsilon_frac * std of the windowed values.  Distances are
    |x_i - x_j| for scalar states and the max-norm over delay vectors
    when an embedding is given.  Indices refer to the full series.
    """
    if epsilon_frac <= 0:
        raise ValueError("epsilon_frac must be positive")
    n = len(series)
    if window_start < 0 or window_len < 2 or window_start + window_len > n:
        raise ValueError(
            f"window [{window_start}, {window_start + window_len}) does not fit "
            f"a series of length {n} (need length >= 2)"
        )
    w = series.values[window_start : window_start + window_len]
    eps = float(epsilon_frac * np.std(w))
    if embed is None:
        pts = w[:, None]
    else:
        pts = delay_embed(TimeSeries(series.dt, w), embed)
        if pts.shape[0] < 2:
            raise ValueError("window too small for the requested embedding")

    count = pts.shape[0]
    rows = []
    cols = []
    chunk = max(1, 4_000_000 // max(1, count * pts.shape[1]))
    for i0 in range(0, count - 1, chunk):
        i1 = min(i0 + chunk, count - 1)
        # max-norm distances from rows i0..i1-1 to all later rows
        d = np.abs(pts[i0:i1, None, :] - pts[None, :, :]).max(axis=2)
        ii, jj = np.nonzero(d <= eps)
        keep = jj > ii + i0
        rows.append(ii[keep] + i0)
        cols.append(jj[keep])
    i_idx = np.concatenate(rows) if rows else np.empty(0, dtype=np.int64)
    j_idx = np.concatenate(cols) if cols else np.empty(0, dtype=np.int64)
    pairs = np.column_stack((i_idx + window_start, j_idx + window_start)).astype(
        np.int64
    )
    return RecurrencePlotData(window_start, window_len, eps, pairs, embed)
