"""Diagnostics: participation function, survival probability, averages,
power-law fits, and peak tracking.

All functions act on plain probability arrays or on ObservableSeries
records; none of them touch amplitudes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._util import ensure_parent, fmt_float
from .errors import DegenerateDistributionError, InsufficientDataError

# survival values at or below this are treated as numerically zero in fits
SP_FLOOR = 1e-15


@dataclass
class ObservableSeries:
    """Per-step records of xi(t) and sp(t), plus optional density snapshots.

    snapshots holds (t, p) pairs where p is the site-probability array at
    step t; it stays empty unless a recorder was asked for snapshots.
    """

    times: np.ndarray
    xi: np.ndarray
    sp: np.ndarray
    snapshots: list = field(default_factory=list)

    def __len__(self) -> int:
        return int(self.times.shape[0])


@dataclass(frozen=True)
class LongTimeAverages:
    xi_bar: float
    sp_bar: float
    window: int


def participation(p) -> float:
    """Inverse participation ratio 1 / sum_n p[n]^2.

    Equals 1 for a delta distribution and M for a uniform spread over M
    sites: the effective number of occupied positions.
    """
    arr = np.asarray(p, dtype=float)
    # cumsum accumulates left to right, matching the compiled series
    # kernel's running total bit for bit; np.sum's pairwise order does not.
    s2 = float(np.cumsum(arr * arr)[-1]) if arr.size else 0.0
    if s2 < 1e-300:
        raise DegenerateDistributionError(
            "sum of squared probabilities vanishes; cannot form 1/sum(p^2)"
        )
    return 1.0 / s2


def survival(p, n0: int) -> float:
    """Probability of finding the walker at its launch site."""
    return float(p[n0])


class SeriesRecorder:
    """Collects xi(t) and sp(t) during an evolution, with optional snapshots.

    record_stride thins the time series (a record is kept whenever
    t % record_stride == 0); snapshots are taken at exactly the listed
    steps regardless of the stride.
    """

    def __init__(self, n0: int, record_stride: int = 1, snapshot_steps=()):
        if record_stride < 1:
            raise ValueError(f"record_stride must be >= 1, got {record_stride}")
        self.n0 = int(n0)
        self.record_stride = int(record_stride)
        self.snapshot_steps = frozenset(int(s) for s in snapshot_steps)
        self._times: list[int] = []
        self._xi: list[float] = []
        self._sp: list[float] = []
        self._snapshots: list[tuple[int, np.ndarray]] = []

    def record(self, t: int, p) -> None:
        if t % self.record_stride == 0:
            self._times.append(int(t))
            self._xi.append(participation(p))
            self._sp.append(float(p[self.n0]))
        if t in self.snapshot_steps:
            self._snapshots.append((int(t), np.array(p, dtype=float)))

    def series(self) -> ObservableSeries:
        return ObservableSeries(
            np.asarray(self._times, dtype=np.int64),
            np.asarray(self._xi, dtype=float),
            np.asarray(self._sp, dtype=float),
            list(self._snapshots),
        )


def long_time_averages(series: ObservableSeries, window: int = 200) -> LongTimeAverages:
    """Arithmetic mean of the trailing ``window`` recorded samples."""
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    if len(series) < window:
        raise InsufficientDataError(
            f"series holds {len(series)} records, window needs {window}"
        )
    return LongTimeAverages(
        float(np.mean(series.xi[-window:])),
        float(np.mean(series.sp[-window:])),
        int(window),
    )


def fit_power_law(series: ObservableSeries, t_min: int = 50) -> float:
    """Least-squares exponent of sp ~ t**a over records with t >= t_min.

    Fits log sp against log t; records with sp <= SP_FLOOR (parity zeros,
    round-off dust) are excluded.  The default t_min skips the early
    transient.
    """
    t = np.asarray(series.times, dtype=float)
    v = np.asarray(series.sp, dtype=float)
    keep = (t >= t_min) & (t > 0) & (v > SP_FLOOR)
    if int(np.count_nonzero(keep)) < 10:
        raise InsufficientDataError(
            "fewer than 10 usable records (t >= t_min and sp > 0) for the fit"
        )
    slope, _ = np.polyfit(np.log(t[keep]), np.log(v[keep]), 1)
    return float(slope)


def peak_positions(p, n0: int) -> tuple[int, int]:
    """Site indices of the probability maxima left and right of n0.

    The halves exclude n0 itself.  A side holding no probability at all
    reports n0 for that side, so a delta state returns (n0, n0).
    """
    arr = np.asarray(p, dtype=float)
    left_half = arr[:n0]
    right_half = arr[n0 + 1:]
    if left_half.size == 0 or float(np.max(left_half, initial=0.0)) == 0.0:
        left = n0
    else:
        left = int(np.argmax(left_half))
    if right_half.size == 0 or float(np.max(right_half, initial=0.0)) == 0.0:
        right = n0
    else:
        right = n0 + 1 + int(np.argmax(right_half))
    return left, right


def relative_std(values) -> float:
    """Standard deviation over mean; the fluctuation measure for xi tails."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise InsufficientDataError("empty sample for relative_std")
    mean = float(np.mean(arr))
    if mean <= 0.0:
        raise DegenerateDistributionError("relative_std needs a positive mean")
    return float(np.std(arr) / mean)


def write_series_csv(path: str, series: ObservableSeries) -> None:
    """Write the time series as rows of t,xi,sp."""
    ensure_parent(path)
    with open(path, "w") as fh:
        fh.write("t,xi,sp\n")
        for k in range(len(series)):
            fh.write(
                f"{int(series.times[k])},{fmt_float(series.xi[k])},{fmt_float(series.sp[k])}\n"
            )
