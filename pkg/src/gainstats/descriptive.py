"""Sample summaries, z-scores, histograms, KDE and normal quantile-plot data."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .distributions import norm_ppf
from .errors import DegenerateSample, EmptySample

__all__ = [
    "DistributionSummary",
    "Histogram",
    "DensityCurve",
    "QQData",
    "summarize",
    "z_scores",
    "iqr",
    "freedman_diaconis_bins",
    "histogram",
    "silverman_bandwidth",
    "kde",
    "qq_normal",
]

KDE_GRID_POINTS = 512
MAX_GRID_POINTS = 1 << 20
_KDE_CHUNK = 2048


@dataclass(frozen=True)
class DistributionSummary:
    """Moments of a sample.

    ``kurtosis`` follows the Pearson convention (normal = 3); skewness and
    kurtosis use the biased central-moment estimators (divide by n). Fields
    that need more observations than were supplied are ``None``.
    """

    n: int
    mean: float
    sd: Optional[float]
    skewness: Optional[float]
    kurtosis: Optional[float]

    @property
    def excess_kurtosis(self) -> Optional[float]:
        return None if self.kurtosis is None else self.kurtosis - 3.0


@dataclass(frozen=True)
class Histogram:
    bin_edges: np.ndarray
    counts: np.ndarray

    @property
    def density(self) -> np.ndarray:
        """Counts rescaled so the bars integrate to 1."""
        widths = np.diff(self.bin_edges)
        return self.counts / (self.counts.sum() * widths)


@dataclass(frozen=True)
class DensityCurve:
    grid: np.ndarray
    density: np.ndarray
    bandwidth: float

    def integral(self) -> float:
        return float(np.trapezoid(self.density, self.grid))


@dataclass(frozen=True)
class QQData:
    theoretical_quantiles: np.ndarray
    sample_quantiles: np.ndarray


def _is_constant(v: np.ndarray) -> bool:
    # Values equal up to rounding (e.g. 0.4/0.8 vs 0.2/0.4) count as constant.
    return float(np.ptp(v)) <= 8 * np.finfo(float).eps * float(np.max(np.abs(v)))


def _as_array(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size == 0:
        raise EmptySample("no observations")
    return arr


def summarize(values: Sequence[float], moments: int = 4) -> DistributionSummary:
    """Mean, sample sd, skewness and Pearson kurtosis of ``values``.

    Parameters
    ----------
    values : sequence of float
    moments : int, default 4
        Highest moment requested. With ``moments=2`` skewness and kurtosis
        are skipped, which lets constant samples be summarized.

    Raises
    ------
    EmptySample
        If ``values`` is empty.
    DegenerateSample
        If skewness or kurtosis is requested (and computable from n) but
        every value is equal.
    """
    v = _as_array(values)
    n = v.size
    mean = float(v.mean())
    dev = v - mean
    sd = float(np.sqrt(np.dot(dev, dev) / (n - 1))) if n >= 2 else None
    skew = kurt = None
    if moments >= 3 and n >= 3:
        m2 = float(np.mean(dev**2))
        if m2 == 0.0 or _is_constant(v):
            raise DegenerateSample("skewness and kurtosis need a non-constant sample")
        skew = float(np.mean(dev**3)) / m2**1.5
        if moments >= 4 and n >= 4:
            kurt = float(np.mean(dev**4)) / m2**2
    return DistributionSummary(n=n, mean=mean, sd=sd, skewness=skew, kurtosis=kurt)


def z_scores(values: Sequence[float]) -> np.ndarray:
    """Standardize with the sample mean and the n-1 standard deviation."""
    v = _as_array(values)
    if v.size < 2:
        raise DegenerateSample("z-scores need at least two observations")
    sd = v.std(ddof=1)
    if sd == 0.0 or _is_constant(v):
        raise DegenerateSample("z-scores are undefined for a constant sample")
    return (v - v.mean()) / sd


def iqr(values: Sequence[float]) -> float:
    """Interquartile range, linear interpolation between order statistics."""
    q25, q75 = np.percentile(_as_array(values), [25, 75])
    return float(q75 - q25)


def freedman_diaconis_bins(values: Sequence[float]) -> int:
    """Bin count from the Freedman-Diaconis width ``2 * IQR * n**(-1/3)``.

    Falls back to Sturges' rule when the IQR is zero.
    """
    v = _as_array(values)
    span = float(v.max() - v.min())
    width = 2.0 * iqr(v) * v.size ** (-1.0 / 3.0)
    if span == 0.0:
        return 1
    if width == 0.0:
        return int(np.ceil(np.log2(v.size))) + 1
    return max(1, int(np.ceil(span / width)))


def histogram(values: Sequence[float], bin_count: Optional[int] = None) -> Histogram:
    """Equal-width histogram over ``[min, max]``.

    Bins are half-open ``[left, right)`` except the last, which also takes
    the maximum. A zero-range sample is widened to ``[v - 0.5, v + 0.5]``.
    ``bin_count`` defaults to :func:`freedman_diaconis_bins`.
    """
    v = _as_array(values)
    if bin_count is None:
        bin_count = freedman_diaconis_bins(v)
    if int(bin_count) != bin_count or bin_count < 1:
        raise ValueError(f"bin_count must be a positive integer, got {bin_count!r}")
    bin_count = int(bin_count)
    lo, hi = float(v.min()), float(v.max())
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    edges = np.linspace(lo, hi, bin_count + 1)
    idx = np.searchsorted(edges, v, side="right") - 1
    idx = np.clip(idx, 0, bin_count - 1)
    counts = np.bincount(idx, minlength=bin_count)
    return Histogram(bin_edges=edges, counts=counts)


def silverman_bandwidth(values: Sequence[float]) -> float:
    """Silverman's rule of thumb ``0.9 * min(sd, IQR/1.34) * n**(-1/5)``.

    A zero IQR (or zero sd) is ignored in favour of the other spread
    measure; if both vanish the sample is degenerate.
    """
    v = _as_array(values)
    if v.size < 2:
        raise DegenerateSample("bandwidth selection needs at least two observations")
    if _is_constant(v):
        raise DegenerateSample("bandwidth is undefined for a constant sample")
    sd = float(v.std(ddof=1))
    spread = [s for s in (sd, iqr(v) / 1.34) if s > 0.0]
    if not spread:
        raise DegenerateSample("bandwidth is undefined for a constant sample")
    return 0.9 * min(spread) * v.size ** (-0.2)


def kde(
    values: Sequence[float],
    bandwidth: Optional[float] = None,
    grid_points: int = KDE_GRID_POINTS,
    grid: Optional[np.ndarray] = None,
) -> DensityCurve:
    """Gaussian kernel density estimate.

    The default grid holds ``grid_points`` equally spaced points on
    ``[min - 3h, max + 3h]``. When that spacing would exceed ``h / 2`` (a
    narrow kernel over a wide range) the grid is refined until it does not,
    so the curve still integrates to 1; past ``MAX_GRID_POINTS`` the sample
    is rejected as degenerate. Pass
    ``grid`` to evaluate elsewhere, e.g. several cohorts on a common axis.
    """
    v = _as_array(values)
    if v.size < 2:
        raise DegenerateSample("KDE needs at least two observations")
    h = silverman_bandwidth(v) if bandwidth is None else float(bandwidth)
    if not h > 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth!r}")
    if grid is None:
        lo, hi = v.min() - 3.0 * h, v.max() + 3.0 * h
        needed = int(np.ceil(2.0 * (hi - lo) / h)) + 1
        if needed > MAX_GRID_POINTS:
            raise DegenerateSample(
                f"bandwidth {h:.3g} is too narrow to resolve over a range of {hi - lo:.3g}"
            )
        grid = np.linspace(lo, hi, max(grid_points, needed))
    else:
        grid = np.asarray(grid, dtype=float)
    density = np.empty(grid.size)
    norm = v.size * h * np.sqrt(2.0 * np.pi)
    for start in range(0, grid.size, _KDE_CHUNK):
        u = (grid[start:start + _KDE_CHUNK, None] - v[None, :]) / h
        density[start:start + _KDE_CHUNK] = np.exp(-0.5 * u * u).sum(axis=1) / norm
    return DensityCurve(grid=grid, density=density, bandwidth=h)


def qq_normal(values: Sequence[float]) -> QQData:
    """Normal quantile-plot coordinates with Hazen positions ``(i - 0.5)/n``."""
    v = _as_array(values)
    n = v.size
    if n < 2:
        raise DegenerateSample("a quantile plot needs at least two observations")
    probs = (np.arange(1, n + 1) - 0.5) / n
    theo = np.array([norm_ppf(p) for p in probs])
    # Enforce exact antisymmetry; the ppf is accurate to ~1e-15 anyway.
    theo = 0.5 * (theo - theo[::-1])
    return QQData(theoretical_quantiles=theo, sample_quantiles=np.sort(v))
