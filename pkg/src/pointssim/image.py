"""Binary images, raster I/O and the shared base coordinate frame."""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import (
    AspectMismatch,
    EmptyImage,
    UnreadableFile,
    UnsupportedFormat,
    WriteFailure,
)

ASPECT_RTOL = 1e-9


class BinaryImage:
    """Immutable rectangular grid of 0/1 cells (1 = object, 0 = background).

    ``cells`` is stored as a read-only ``uint8`` array of shape (rows, cols).
    Use :func:`binarize` to build one from arbitrary grey values.
    """

    __slots__ = ("_cells",)

    def __init__(self, cells):
        arr = np.asarray(cells)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-D grid, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise EmptyImage("image must have at least one row and one column")
        if arr.dtype == bool:
            arr = arr.astype(np.uint8)
        elif not np.isin(arr, (0, 1)).all():
            raise ValueError("cell values must be exactly 0 or 1")
        arr = np.array(arr, dtype=np.uint8, copy=True)
        arr.setflags(write=False)
        self._cells = arr

    @property
    def cells(self) -> np.ndarray:
        return self._cells

    @property
    def rows(self) -> int:
        return self._cells.shape[0]

    @property
    def cols(self) -> int:
        return self._cells.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._cells.shape

    @property
    def foreground_count(self) -> int:
        return int(self._cells.sum(dtype=np.int64))

    def __eq__(self, other):
        if not isinstance(other, BinaryImage):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self._cells, other._cells)

    __hash__ = None

    def __repr__(self):
        return f"BinaryImage({self.rows}x{self.cols}, foreground={self.foreground_count})"


def binarize(values) -> BinaryImage:
    """Nonzero values become 1, zeros stay 0."""
    return BinaryImage(np.asarray(values) != 0)


@dataclass(frozen=True)
class BaseFrame:
    """Physical extent and cell size placing one grid in the base coordinates."""

    extent_x: float
    extent_y: float
    cell_x: float
    cell_y: float

    def __post_init__(self):
        for name in ("extent_x", "extent_y", "cell_x", "cell_y"):
            val = getattr(self, name)
            if not (val > 0 and math.isfinite(val)):
                raise ValueError(f"{name} must be positive and finite, got {val!r}")

    @classmethod
    def unit(cls, img: BinaryImage) -> "BaseFrame":
        """Frame with one base unit per pixel."""
        return cls(float(img.cols), float(img.rows), 1.0, 1.0)

    @classmethod
    def for_extent(cls, img: BinaryImage, extent_x: float, extent_y: float | None = None) -> "BaseFrame":
        if extent_y is None:
            extent_y = extent_x * img.rows / img.cols
        return cls(float(extent_x), float(extent_y), extent_x / img.cols, extent_y / img.rows)

    def matches(self, img: BinaryImage, rtol: float = 1e-9) -> bool:
        return (math.isclose(self.extent_x, img.cols * self.cell_x, rel_tol=rtol)
                and math.isclose(self.extent_y, img.rows * self.cell_y, rel_tol=rtol))


def align_frames(img1: BinaryImage, img2: BinaryImage) -> tuple[BaseFrame, BaseFrame]:
    """Place two images of possibly different resolution on one base frame.

    The shared extent is the element-wise minimum of the two pixel sizes and
    each image gets its own cell size. Images must have the same aspect
    ratio so that every cell stays square.
    """
    r1, c1 = img1.shape
    r2, c2 = img2.shape
    a1, a2 = c1 / r1, c2 / r2
    if not math.isclose(a1, a2, rel_tol=ASPECT_RTOL):
        raise AspectMismatch(
            f"aspect ratios differ: {c1}x{r1} (cols x rows) vs {c2}x{r2}")
    lx = float(min(c1, c2))
    ly = float(min(r1, r2))
    return (BaseFrame(lx, ly, lx / c1, ly / r1),
            BaseFrame(lx, ly, lx / c2, ly / r2))


def rotate90(img: BinaryImage, quarter_turns: int) -> BinaryImage:
    """Rotate counterclockwise by ``quarter_turns`` * 90 degrees.

    Counterclockwise as displayed with row 0 at the top, i.e. ``np.rot90``.
    A 2x1 column [1, 0] becomes the 1x2 row [1, 0].
    """
    if quarter_turns not in (0, 1, 2, 3):
        raise ValueError("quarter_turns must be one of 0, 1, 2, 3")
    return BinaryImage(np.rot90(img.cells, quarter_turns))


# ---------------------------------------------------------------------------
# file I/O
# ---------------------------------------------------------------------------

_PGM_EXT = {".pgm", ".pnm"}
_PNG_EXT = {".png"}


def _pgm_tokens(data: bytes, count: int):
    """First ``count`` whitespace-separated header tokens and the body offset."""
    tokens = []
    pos = 0
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos:pos + 1].isspace():
            pos += 1
        if pos >= n:
            raise UnsupportedFormat("truncated graymap header")
        if data[pos:pos + 1] == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos:pos + 1].isspace():
            pos += 1
        tokens.append(data[start:pos])
    return tokens, pos


def _read_pgm(data: bytes) -> np.ndarray:
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise UnsupportedFormat(f"not a portable graymap (magic {magic!r})")
    (_, w, h, maxval), pos = _pgm_tokens(data, 4)
    try:
        width, height, maxval = int(w), int(h), int(maxval)
    except ValueError as exc:
        raise UnsupportedFormat("malformed graymap header") from exc
    if width == 0 or height == 0:
        raise EmptyImage("graymap has zero width or height")
    if not 0 < maxval < 65536:
        raise UnsupportedFormat(f"invalid graymap maxval {maxval}")
    if magic == b"P2":
        body = data[pos:].split()
        if len(body) < width * height:
            raise UnsupportedFormat("graymap body is truncated")
        vals = np.array([int(t) for t in body[:width * height]], dtype=np.int64)
    else:
        pos += 1  # single whitespace byte after maxval
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        need = width * height * dtype.itemsize
        raw = data[pos:pos + need]
        if len(raw) < need:
            raise UnsupportedFormat("graymap body is truncated")
        vals = np.frombuffer(raw, dtype=dtype)
    return vals.reshape(height, width)


def _read_png(path: Path) -> np.ndarray:
    try:
        with Image.open(path) as im:
            if im.format != "PNG":
                raise UnsupportedFormat(f"{path}: not a PNG file")
            if im.mode not in ("1", "L", "I", "I;16", "I;16B"):
                raise UnsupportedFormat(f"{path}: PNG mode {im.mode} is not grayscale")
            arr = np.array(im)
    except UnidentifiedImageError as exc:
        raise UnsupportedFormat(f"{path}: unrecognised image data") from exc
    if arr.size == 0:
        raise EmptyImage(f"{path}: empty image")
    return arr


def load_image(path) -> BinaryImage:
    """Read a graymap (P2/P5) or grayscale PNG; any nonzero pixel becomes 1."""
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise UnreadableFile(f"{path}: {exc.strerror or exc}") from exc
    if data[:2] in (b"P2", b"P5"):
        arr = _read_pgm(data)
    elif data[:8] == b"\x89PNG\r\n\x1a\n":
        arr = _read_png(path)
    else:
        raise UnsupportedFormat(f"{path}: unsupported raster format")
    return binarize(arr)


def save_image(img: BinaryImage, path, *, ascii: bool = False) -> None:
    """Write ``img`` as PNG (0/255) or graymap (maxval 1), chosen by suffix."""
    path = Path(path)
    ext = path.suffix.lower()
    try:
        if ext in _PNG_EXT:
            Image.fromarray(img.cells * np.uint8(255)).save(path, format="PNG")
        elif ext in _PGM_EXT:
            if ascii:
                lines = [f"P2\n{img.cols} {img.rows}\n1\n"]
                lines += [" ".join(map(str, row)) + "\n" for row in img.cells.tolist()]
                payload = "".join(lines).encode("ascii")
            else:
                payload = f"P5\n{img.cols} {img.rows}\n1\n".encode("ascii") + img.cells.tobytes()
            with open(path, "wb") as fh:
                fh.write(payload)
        else:
            raise UnsupportedFormat(f"{path}: cannot write format {ext or '(none)'}")
    except OSError as exc:
        raise WriteFailure(f"{path}: {exc.strerror or exc}") from exc


def list_images(directory) -> list[Path]:
    """Supported image files in ``directory``, sorted lexicographically by name."""
    directory = Path(directory)
    if not directory.is_dir():
        raise UnreadableFile(f"{directory}: not a directory")
    exts = _PNG_EXT | _PGM_EXT
    return sorted((p for p in directory.iterdir() if p.suffix.lower() in exts and p.is_file()),
                  key=lambda p: p.name)

