"""Distance transform, local maxima, adaptive thinning and component labels.

All comparisons run on integer squared distances; square roots are taken
only when a caller asks for :attr:`DistanceField.values`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import AllForeground
from .image import BinaryImage


@dataclass(frozen=True, eq=False)
class DistanceField:
    """Per-cell squared Euclidean distance (pixel units) to the nearest 0 cell."""

    squared: np.ndarray

    @property
    def values(self) -> np.ndarray:
        return np.sqrt(self.squared.astype(np.float64))

    @property
    def shape(self) -> tuple[int, int]:
        return self.squared.shape


def distance_transform(img: BinaryImage) -> DistanceField:
    """Exact Euclidean distance from every cell to the nearest background cell.

    Only cells inside the grid count as background; the region outside the
    image is not. Uses a column pass followed by a lower-envelope row pass,
    so the cost is linear in the number of cells.
    """
    if img.foreground_count == img.rows * img.cols:
        raise AllForeground("image has no background cell; distance is undefined")
    d2 = _kernels.edt_sq(np.ascontiguousarray(img.cells))
    d2.setflags(write=False)
    return DistanceField(d2)


def local_maxima(field: DistanceField) -> np.ndarray:
    """Foreground cells that are >= every in-grid 8-neighbour (ties allowed)."""
    return _kernels.local_maxima(np.ascontiguousarray(field.squared))


def adaptive_thin(field: DistanceField, maxima: np.ndarray) -> np.ndarray:
    """Thin local maxima so no two anchors are closer than their radii.

    Candidates are visited from the largest distance down, ties broken by
    :func:`pointssim._kernels.candidate_order`. A candidate is kept when its distance to every anchor kept
    so far is at least its own distance value.
    """
    d2 = np.ascontiguousarray(field.squared)
    order = _kernels.candidate_order(d2, maxima)
    keep = _kernels.thin(d2, order)
    mask = np.zeros(d2.shape, dtype=bool)
    mask.ravel()[order[keep]] = True
    return mask


def connected_components(img: BinaryImage) -> tuple[np.ndarray, int]:
    """8-connected labels numbered by first cell in row-major scan order.

    Returns ``(labels, count)`` with 0 marking background.
    """
    return _kernels.label8(np.ascontiguousarray(img.cells))


def anchor_mask(img: BinaryImage) -> tuple[DistanceField, np.ndarray]:
    field = distance_transform(img)
    return field, adaptive_thin(field, local_maxima(field))
