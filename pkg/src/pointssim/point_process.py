"""Marked point process built from the anchor cells of a binary image."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .image import BaseFrame, BinaryImage
from .morphology import anchor_mask, connected_components


@dataclass(frozen=True, eq=False)
class MarkedPointProcess:
    """Anchor points with a radius mark and an object-label mark.

    ``points`` holds (x, y) base coordinates, x along columns and y along
    rows. ``pixels`` and ``radius_sq`` keep the integer pixel position
    (row, col) and squared pixel radius when the process was extracted from
    an image; they are empty for hand-built processes.
    """

    points: np.ndarray
    radii: np.ndarray
    labels: np.ndarray
    frame: BaseFrame
    pixels: np.ndarray = field(default_factory=lambda: np.empty((0, 2), dtype=np.int64))
    radius_sq: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64).reshape(-1, 2)
        radii = np.asarray(self.radii, dtype=np.float64).reshape(-1)
        labels = np.asarray(self.labels, dtype=np.int64).reshape(-1)
        if not (len(pts) == len(radii) == len(labels)):
            raise ValueError("points, radii and labels must have equal length")
        if len(radii) and (radii <= 0).any():
            raise ValueError("radii must be positive")
        if len(labels) and (labels < 1).any():
            raise ValueError("labels must be positive integers")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "labels", labels)

    @property
    def n_points(self) -> int:
        return len(self.radii)

    @property
    def n_objects(self) -> int:
        return int(self.labels.max()) if self.n_points else 0

    def as_array(self) -> np.ndarray:
        """The n_p x 4 table [x, y, radius, label]."""
        return np.column_stack([self.points, self.radii, self.labels.astype(np.float64)])

    def write_csv(self, fh) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "y", "radius", "label"])
        for (x, y), r, lab in zip(self.points.tolist(), self.radii.tolist(), self.labels.tolist()):
            writer.writerow([repr(x), repr(y), repr(r), lab])


def extract(img: BinaryImage, frame: BaseFrame | None = None) -> MarkedPointProcess:
    """Anchor points of ``img`` expressed in ``frame`` (unit frame by default).

    Anchors are listed in row-major order of their cells. Cell (row, col)
    maps to the base coordinate ((col + 0.5) * cell_x, (row + 0.5) * cell_y).
    """
    if frame is None:
        frame = BaseFrame.unit(img)
    if not frame.matches(img):
        raise ValueError(f"frame {frame} does not match a {img.rows}x{img.cols} image")
    dist, mask = anchor_mask(img)
    labels, _ = connected_components(img)
    rows, cols = np.nonzero(mask)
    d2 = dist.squared[rows, cols]
    points = np.column_stack([(cols + 0.5) * frame.cell_x, (rows + 0.5) * frame.cell_y])
    return MarkedPointProcess(
        points=points,
        radii=np.sqrt(d2.astype(np.float64)) * frame.cell_x,
        labels=labels[rows, cols],
        frame=frame,
        pixels=np.column_stack([rows, cols]).astype(np.int64),
        radius_sq=d2.astype(np.int64),
    )
