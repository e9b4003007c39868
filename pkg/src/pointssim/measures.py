"""The four scalar measures summarising a marked point process.

v1  anchor count
v2  area coverage, sum of squared radii over the frame area (no pi factor)
v3  anchors per object
v4  spatial variance irregularity from quadrat counts; 0 for a perfectly
    regular pattern, about 0.5 for complete spatial randomness, towards 1
    for clustering
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .image import BaseFrame, BinaryImage
from .point_process import MarkedPointProcess, extract

DEFAULT_DIVISIONS = 10


@dataclass(frozen=True)
class SummaryVector:
    v1: int
    v2: float
    v3: float
    v4: float

    def as_tuple(self) -> tuple[int, float, float, float]:
        return (self.v1, self.v2, self.v3, self.v4)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_sequence(cls, values) -> "SummaryVector":
        v1, v2, v3, v4 = values
        return cls(int(v1), float(v2), float(v3), float(v4))


@dataclass(frozen=True, eq=False)
class QuadratGrid:
    divisions: int
    counts: np.ndarray  # shape (divisions, divisions), indexed [y_bin, x_bin]


def anchor_count(mpp: MarkedPointProcess) -> int:
    return mpp.n_points


def area_coverage(mpp: MarkedPointProcess) -> float:
    if mpp.n_points == 0:
        return 0.0
    # fsum is exactly rounded, so the result does not depend on point order
    total = math.fsum((mpp.radii * mpp.radii).tolist())
    return total / (mpp.frame.extent_x * mpp.frame.extent_y)


def anchors_per_object(mpp: MarkedPointProcess) -> float:
    if mpp.n_points == 0:
        return 0.0
    return mpp.n_points / mpp.n_objects


def quadrat_counts(mpp: MarkedPointProcess, divisions: int = DEFAULT_DIVISIONS) -> QuadratGrid:
    """Count anchors in a ``divisions`` x ``divisions`` partition of the frame.

    Quadrats are half-open except the last row and column, which also take
    points lying exactly on the right/top edge of the frame.
    """
    if divisions < 1:
        raise ValueError("divisions must be >= 1")
    counts = np.zeros((divisions, divisions), dtype=np.int64)
    if mpp.n_points:
        fr = mpp.frame
        ix = np.floor(mpp.points[:, 0] * divisions / fr.extent_x).astype(np.int64)
        iy = np.floor(mpp.points[:, 1] * divisions / fr.extent_y).astype(np.int64)
        ix = np.clip(ix, 0, divisions - 1)
        iy = np.clip(iy, 0, divisions - 1)
        np.add.at(counts, (iy, ix), 1)
    return QuadratGrid(divisions, counts)


def spatial_variance_irregularity(mpp: MarkedPointProcess, divisions: int = DEFAULT_DIVISIONS) -> float:
    """1 / (1 + lambda|B| / s^2) over the quadrat counts.

    s^2 is the population variance of the m = divisions**2 counts and
    lambda|B| = n / m. Both are rationals in the integer counts, so the ratio
    is formed exactly as N / (N + n * m) with N = m * sum(c_i^2) - n^2.
    """
    n = mpp.n_points
    if n == 0:
        return 0.0
    counts = quadrat_counts(mpp, divisions).counts
    m = divisions * divisions
    sum_sq = int((counts * counts).sum())
    spread = m * sum_sq - n * n
    if spread <= 0:
        return 0.0
    return spread / (spread + n * m)


def summarize_process(mpp: MarkedPointProcess, divisions: int = DEFAULT_DIVISIONS) -> SummaryVector:
    return SummaryVector(
        anchor_count(mpp),
        area_coverage(mpp),
        anchors_per_object(mpp),
        spatial_variance_irregularity(mpp, divisions),
    )


def summarize(img: BinaryImage, frame: BaseFrame | None = None,
              divisions: int = DEFAULT_DIVISIONS) -> SummaryVector:
    """Extract anchors from ``img`` and reduce them to a :class:`SummaryVector`."""
    return summarize_process(extract(img, frame), divisions)
