"""Inter-unit dispersion estimates per period.

Two estimates frame the spread of the unit points in indicator space:
``d_max``, the largest pairwise Euclidean distance (superior estimate), and
``d_min``, the diameter of the n-ball whose volume equals the axis-aligned
bounding box of the points (inferior estimate, since the ball is the solid
of minimal linear size at fixed volume).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .panel import IndicatorPanel, PeriodSlice, exclude_indicators, slice_period


@dataclass(frozen=True)
class DispersionSummary:
    period: str
    units: tuple[str, ...]
    distance_matrix: np.ndarray  # (m, m), symmetric, zero diagonal
    d_max: float
    volume: float  # may be inf when the product overflows double range
    log_volume: float  # -inf when the volume is zero
    d_min: float
    n_indicators: int


def euclidean_distance(u: Sequence[float], v: Sequence[float]) -> float:
    """Euclidean metric between two coordinate vectors."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape or u.ndim != 1:
        raise ValueError(f"length mismatch: {u.shape} vs {v.shape}")
    if u.size < 1:
        raise ValueError("need at least 1 coordinate")
    return float(np.linalg.norm(u - v))


def distance_matrix(slice_: PeriodSlice) -> np.ndarray:
    """All pairwise unit distances over the slice's indicators."""
    m = slice_.n_units
    if m < 2:
        raise ValueError("need at least 2 units")
    pts = slice_.matrix
    diff = pts[:, None, :] - pts[None, :, :]
    return np.sqrt((diff * diff).sum(axis=2))


def max_distance(slice_: PeriodSlice) -> float:
    """Largest pairwise distance between units."""
    return float(distance_matrix(slice_).max())


def bounding_volume(slice_: PeriodSlice) -> float:
    """Volume of the axis-aligned bounding box: product of per-indicator ranges.

    Overflows to inf for large indicator counts with wide ranges; use
    log_bounding_volume where that matters.
    """
    amplitudes = slice_.matrix.max(axis=0) - slice_.matrix.min(axis=0)
    return float(np.prod(amplitudes))


def log_bounding_volume(slice_: PeriodSlice) -> float:
    """Natural log of the bounding-box volume; -inf when any range is zero."""
    amplitudes = slice_.matrix.max(axis=0) - slice_.matrix.min(axis=0)
    if (amplitudes == 0.0).any():
        return -math.inf
    return float(np.log(amplitudes).sum())


def log_gamma_half_integer(twice_x: int) -> float:
    """ln Gamma(x) for positive integer or half-integer x, given as 2x.

    Exact recursion Gamma(k+1) = k Gamma(k) down to Gamma(1) = 1 or
    Gamma(1/2) = sqrt(pi), accumulated in log domain.
    """
    if not isinstance(twice_x, (int, np.integer)) or twice_x <= 0:
        raise ValueError(f"2x must be a positive integer, got {twice_x!r}")
    if twice_x % 2 == 0:
        x = twice_x // 2
        return float(sum(math.log(k) for k in range(1, x)))
    total = 0.5 * math.log(math.pi)
    k = twice_x - 2
    while k >= 1:
        total += math.log(k / 2.0)
        k -= 2
    return total


def ball_diameter(volume: float, n: int) -> float:
    """Diameter of the n-ball whose volume equals ``volume``.

    d = 2 * Gamma(n/2 + 1)^(1/n) / sqrt(pi) * volume^(1/n), evaluated in
    log domain so extreme volumes neither overflow nor underflow.
    """
    if volume < 0:
        raise ValueError(f"negative volume {volume}")
    if volume == 0.0:
        return 0.0
    return ball_diameter_from_log(math.log(volume), n)


def ball_diameter_from_log(log_volume: float, n: int) -> float:
    """Same as ball_diameter but consuming ln(volume); -inf maps to 0."""
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    if log_volume == -math.inf:
        return 0.0
    log_d = (
        math.log(2.0)
        + (log_gamma_half_integer(n + 2) + log_volume) / n
        - 0.5 * math.log(math.pi)
    )
    return math.exp(log_d)


def dispersion_summary(slice_: PeriodSlice) -> DispersionSummary:
    """All dispersion figures for one period."""
    dm = distance_matrix(slice_)
    log_v = log_bounding_volume(slice_)
    return DispersionSummary(
        period=slice_.period,
        units=slice_.units,
        distance_matrix=dm,
        d_max=float(dm.max()),
        volume=math.exp(log_v) if log_v < 709 else math.inf,
        log_volume=log_v,
        d_min=ball_diameter_from_log(log_v, slice_.n_indicators),
        n_indicators=slice_.n_indicators,
    )


def dispersion_series(
    panel: IndicatorPanel, exclude: Iterable[int] = ()
) -> list[DispersionSummary]:
    """One DispersionSummary per period, after excluding the given indicators."""
    reduced = exclude_indicators(panel, exclude)
    return [dispersion_summary(slice_period(reduced, p)) for p in reduced.periods]


def distances_to_csv(summary: DispersionSummary, decimals: int = 2) -> str:
    """Render the symmetric distance matrix as CSV with unit labels."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["unit"] + list(summary.units))
    for a, unit in enumerate(summary.units):
        writer.writerow(
            [unit] + [f"{summary.distance_matrix[a, b]:.{decimals}f}"
                      for b in range(len(summary.units))]
        )
    return buf.getvalue()
