"""PointSSIM and the pixel-based baselines it is benchmarked against."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, TooSmall
from .image import BinaryImage, align_frames
from .measures import DEFAULT_DIVISIONS, SummaryVector, summarize

# binary images: dynamic range L = 1
C1 = (0.01 * 1.0) ** 2
C2 = (0.03 * 1.0) ** 2

# Per-scale exponents from the original multi-scale SSIM calibration
# (Wang, Simoncelli & Bovik 2003), finest scale first.
MSSSIM_WEIGHTS = (0.0448, 0.2856, 0.3001, 0.2363, 0.1333)
MSSSIM_UNIFORM = (0.2,) * 5
MSSSIM_MIN_SIDE = 16

METRICS = ("pointssim", "mse", "ssim", "msssim")


@dataclass(frozen=True)
class ComparisonScore:
    value: float
    metric_name: str


def point_ssim(a: SummaryVector, b: SummaryVector) -> ComparisonScore:
    """1 - mean of the max-normalised squared gaps of v1..v3 and the raw v4 gap.

    A v1..v3 term whose two values are both zero contributes nothing.
    """
    total = 0.0
    for x, y in ((a.v1, b.v1), (a.v2, b.v2), (a.v3, b.v3)):
        top = max(x, y)
        if top != 0:
            # divide first: top**2 can underflow for tiny measures
            total += ((x - y) / top) ** 2
    total += (a.v4 - b.v4) ** 2
    return ComparisonScore(1.0 - total / 4.0, "pointssim")


def _same_shape(img1: BinaryImage, img2: BinaryImage):
    if img1.shape != img2.shape:
        raise DimensionMismatch(
            f"pixel dimensions differ: {img1.rows}x{img1.cols} vs {img2.rows}x{img2.cols}")


def mse(img1: BinaryImage, img2: BinaryImage) -> ComparisonScore:
    _same_shape(img1, img2)
    diff = img1.cells.astype(np.float64) - img2.cells.astype(np.float64)
    return ComparisonScore(float(np.mean(diff * diff)), "mse")


def _stats(x: np.ndarray, y: np.ndarray):
    x = x.astype(np.float64).ravel()
    y = y.astype(np.float64).ravel()
    n = x.size
    mx, my = x.mean(), y.mean()
    dx, dy = x - mx, y - my
    denom = max(n - 1, 1)
    return mx, my, np.dot(dx, dx) / denom, np.dot(dy, dy) / denom, np.dot(dx, dy) / denom


def _luminance(mx, my):
    return (2 * mx * my + C1) / (mx * mx + my * my + C1)


def _contrast_structure(vx, vy, cxy):
    return (2 * cxy + C2) / (vx + vy + C2)


def ssim_arrays(x: np.ndarray, y: np.ndarray) -> float:
    mx, my, vx, vy, cxy = _stats(x, y)
    return float(_luminance(mx, my) * _contrast_structure(vx, vy, cxy))


def ssim(img1: BinaryImage, img2: BinaryImage) -> ComparisonScore:
    """Global SSIM: one window spanning the whole image, unbiased variances.

    Can be negative for anti-correlated images.
    """
    _same_shape(img1, img2)
    return ComparisonScore(ssim_arrays(img1.cells, img2.cells), "ssim")


def _halve(x: np.ndarray) -> np.ndarray:
    r, c = (x.shape[0] // 2) * 2, (x.shape[1] // 2) * 2
    x = x[:r, :c]
    return 0.25 * (x[0::2, 0::2] + x[1::2, 0::2] + x[0::2, 1::2] + x[1::2, 1::2])


def ms_ssim_arrays(x: np.ndarray, y: np.ndarray, weights=MSSSIM_WEIGHTS) -> float:
    x = x.astype(np.float64)
    y = y.astype(np.float64)
    value = 1.0
    last = len(weights) - 1
    for level, w in enumerate(weights):
        mx, my, vx, vy, cxy = _stats(x, y)
        # negative structure terms would give complex powers; floor at 0
        cs = max(float(_contrast_structure(vx, vy, cxy)), 0.0)
        value *= cs ** w
        if level == last:
            value *= float(_luminance(mx, my)) ** w
        else:
            x, y = _halve(x), _halve(y)
    return value


def ms_ssim(img1: BinaryImage, img2: BinaryImage, weights=MSSSIM_WEIGHTS) -> ComparisonScore:
    """Five-scale SSIM with 2x mean-pool downsampling between scales.

    Contrast-structure factors at every scale, luminance at the coarsest,
    each raised to its scale weight.
    """
    _same_shape(img1, img2)
    if min(img1.shape) < MSSSIM_MIN_SIDE:
        raise TooSmall(f"ms-ssim needs at least {MSSSIM_MIN_SIDE}x{MSSSIM_MIN_SIDE} pixels")
    return ComparisonScore(ms_ssim_arrays(img1.cells, img2.cells, weights), "msssim")


def compare_images(img1: BinaryImage, img2: BinaryImage, metric: str = "pointssim",
                   divisions: int = DEFAULT_DIVISIONS) -> ComparisonScore:
    if metric == "pointssim":
        f1, f2 = align_frames(img1, img2)
        return point_ssim(summarize(img1, f1, divisions), summarize(img2, f2, divisions))
    if metric == "mse":
        return mse(img1, img2)
    if metric == "ssim":
        return ssim(img1, img2)
    if metric == "msssim":
        return ms_ssim(img1, img2)
    raise ValueError(f"unknown metric {metric!r}; expected one of {', '.join(METRICS)}")
