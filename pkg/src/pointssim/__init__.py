"""Resolution- and rotation-invariant structural comparison of binary images.

Images are reduced to anchor points (thinned maxima of the Euclidean distance
transform) carrying a radius and an object label, summarised by four
measures and compared with :func:`point_ssim`.
"""
from ._accel import backend_name
from .errors import (
    AllForeground,
    AspectMismatch,
    ConfigError,
    DimensionMismatch,
    DoesNotFit,
    EmptyImage,
    PointSSIMError,
    TooSmall,
    UnreadableFile,
    UnsupportedFormat,
    WriteFailure,
)
from .image import BaseFrame, BinaryImage, align_frames, binarize, load_image, rotate90, save_image
from .measures import SummaryVector, summarize, summarize_process
from .metrics import ComparisonScore, compare_images, ms_ssim, mse, point_ssim, ssim
from .morphology import DistanceField, adaptive_thin, connected_components, distance_transform, local_maxima
from .point_process import MarkedPointProcess, extract

__version__ = "0.1.0"

__all__ = [
    "AllForeground", "AspectMismatch", "BaseFrame", "BinaryImage", "ComparisonScore", "ConfigError",
    "DimensionMismatch", "DistanceField", "DoesNotFit", "EmptyImage", "MarkedPointProcess",
    "PointSSIMError", "SummaryVector", "TooSmall", "UnreadableFile", "UnsupportedFormat", "WriteFailure",
    "adaptive_thin", "align_frames", "backend_name", "binarize", "compare_images", "connected_components",
    "distance_transform", "extract", "load_image", "local_maxima", "ms_ssim", "mse", "point_ssim",
    "rotate90", "save_image", "ssim", "summarize", "summarize_process",
]
