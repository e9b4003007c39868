"""Batch experiments: pairwise comparison matrices and the resolution study.

Both return plain dictionaries (JSON-ready, ``schema_version`` 1) and have
companion writers for the CSV and SVG artefacts.
"""
from __future__ import annotations

import csv
import itertools
import json
import statistics
from pathlib import Path

import numpy as np

from . import svg
from .errors import ConfigError, PointSSIMError
from .generators import ScenarioConfig, generate_one
from .image import BaseFrame, BinaryImage, align_frames, list_images, load_image
from .measures import DEFAULT_DIVISIONS, SummaryVector, summarize
from .metrics import METRICS, compare_images, point_ssim
from .morphology import connected_components

SCHEMA_VERSION = 1
MEASURES = ("v1", "v2", "v3", "v4")


def load_dataset(directory) -> tuple[str, list[tuple[str, BinaryImage]]]:
    """All images of one directory, ordered by filename; name = directory name."""
    directory = Path(directory)
    items = [(p.name, load_image(p)) for p in list_images(directory)]
    return directory.name, items


def _cell_stats(values: list[float]) -> dict:
    if not values:
        return {"mean": None, "variance": None, "median": None, "min": None, "max": None}
    arr = np.asarray(values, dtype=float)
    return {"mean": float(arr.mean()), "variance": float(arr.var()),
            "median": float(np.median(arr)), "min": float(arr.min()), "max": float(arr.max())}


class _SummaryCache:
    def __init__(self, divisions):
        self.divisions = divisions
        self._store: dict = {}

    def get(self, key, img: BinaryImage, frame: BaseFrame) -> SummaryVector:
        full = (key, frame.cell_x, frame.cell_y)
        if full not in self._store:
            self._store[full] = summarize(img, frame, self.divisions)
        return self._store[full]


def _score(cache, ka, a, kb, b, metric):
    if metric == "pointssim":
        fa, fb = align_frames(a, b)
        return point_ssim(cache.get(ka, a, fa), cache.get(kb, b, fb)).value
    return compare_images(a, b, metric).value


def comparison_matrix(datasets, metrics=("pointssim",), divisions: int = DEFAULT_DIVISIONS) -> dict:
    """Pairwise scores for every dataset pair (upper triangle incl. diagonal).

    ``datasets`` is a sequence of ``(name, [(filename, image), ...])``.
    Diagonal cells use the n(n-1)/2 distinct pairs, off-diagonal cells all
    n_a * n_b cross pairs. A cell whose metric cannot be evaluated on some
    pair is reported with status ``"n/a"`` and no values.
    """
    for m in metrics:
        if m not in METRICS:
            raise ConfigError(f"unknown metric {m!r}")
    names = [name for name, _ in datasets]
    if len(set(names)) != len(names):
        raise ConfigError("dataset names must be unique")
    for name, items in datasets:
        if len(items) < 2:
            raise ConfigError(f"dataset {name!r} needs at least 2 images")
    cache = _SummaryCache(divisions)
    cells = []
    for (ia, (name_a, items_a)), (ib, (name_b, items_b)) in itertools.combinations_with_replacement(
            enumerate(datasets), 2):
        if ia == ib:
            pairs = list(itertools.combinations(range(len(items_a)), 2))
        else:
            pairs = list(itertools.product(range(len(items_a)), range(len(items_b))))
        for metric in metrics:
            cell = {"dataset_a": name_a, "dataset_b": name_b, "metric": metric,
                    "n_pairs": len(pairs), "status": "ok", "reason": None, "pairs": []}
            try:
                for i, j in pairs:
                    fa, a = items_a[i]
                    fb, b = items_b[j]
                    value = _score(cache, (ia, i), a, (ib, j), b, metric)
                    cell["pairs"].append({"file_a": fa, "file_b": fb, "value": value})
            except PointSSIMError as exc:
                cell.update(status="n/a", reason=exc.code, pairs=[])
            cell.update(_cell_stats([p["value"] for p in cell["pairs"]]))
            cells.append(cell)
    return {
        "schema_version": SCHEMA_VERSION,
        "config": {"metrics": list(metrics), "divisions": divisions},
        "datasets": names,
        "files": {name: [f for f, _ in items] for name, items in datasets},
        "cells": cells,
    }


def write_matrix(report: dict, prefix) -> list[Path]:
    prefix = Path(prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    json_path = prefix.with_name(prefix.name + ".json")
    pairs_path = prefix.with_name(prefix.name + "_pairs.csv")
    cells_path = prefix.with_name(prefix.name + "_cells.csv")
    svg_path = prefix.with_name(prefix.name + "_hist.svg")
    json_path.write_text(json.dumps(report, indent=1) + "\n")
    with open(pairs_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["dataset_a", "dataset_b", "file_a", "file_b", "metric", "value"])
        for cell in report["cells"]:
            if cell["status"] != "ok":
                w.writerow([cell["dataset_a"], cell["dataset_b"], "", "", cell["metric"], "n/a"])
                continue
            for p in cell["pairs"]:
                w.writerow([cell["dataset_a"], cell["dataset_b"], p["file_a"], p["file_b"],
                            cell["metric"], repr(p["value"])])
    with open(cells_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["dataset_a", "dataset_b", "metric", "n_pairs", "status", "mean", "variance", "median"])
        for cell in report["cells"]:
            w.writerow([cell["dataset_a"], cell["dataset_b"], cell["metric"], cell["n_pairs"],
                        cell["status"], cell["mean"], cell["variance"], cell["median"]])
    metrics = report["config"]["metrics"]
    panels = []
    for cell in report["cells"]:
        title = f"{cell['dataset_a']} vs {cell['dataset_b']}"
        color = svg.COLORS[metrics.index(cell["metric"]) % len(svg.COLORS)]
        if cell["status"] != "ok":
            panels.append(lambda x, y, t=title, c=cell: svg.text_panel(x, y, t, f"{c['metric']}: n/a"))
            continue
        vals = [p["value"] for p in cell["pairs"]]
        note = f"mean {cell['mean']:.3g}  var {cell['variance']:.2g}"
        panels.append(lambda x, y, v=vals, t=title, c=cell, col=color, n=note:
                      svg.histogram_panel(x, y, v, title=t, xlabel=c["metric"], color=col, note=n))
    svg_path.write_text(svg.document(panels, ncols=max(len(metrics), 1) * 2))
    return [json_path, pairs_path, cells_path, svg_path]


def relative_deviation(low: float, high: float) -> float:
    """|high - low| / max(|low|, |high|), 0 when both are zero."""
    top = max(abs(low), abs(high))
    return abs(high - low) / top if top else 0.0


def resolution_experiment(cfg: ScenarioConfig, sizes, divisions: int = DEFAULT_DIVISIONS) -> dict:
    """Render the same scenes at several resolutions and pair their measures.

    Realization ``k`` uses the same seed-derived scene at every size; each
    image is placed on the base frame of the smallest size. Rows where the
    lower resolution has fewer objects than the higher one are flagged as
    object-merge events.
    """
    sizes = [int(s) for s in sizes]
    if len(sizes) < 2:
        raise ConfigError("need at least two sizes")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ConfigError("sizes must be strictly increasing")
    if any(s % sizes[0] for s in sizes):
        raise ConfigError("every size must be a multiple of the smallest")
    base = sizes[0]
    summaries: dict[int, list[SummaryVector]] = {}
    objects: dict[int, list[int]] = {}
    for size in sizes:
        sized = cfg.with_size(size)
        summaries[size], objects[size] = [], []
        for k in range(cfg.count):
            img = generate_one(sized, k)
            summaries[size].append(summarize(img, BaseFrame.for_extent(img, base, base), divisions))
            objects[size].append(connected_components(img)[1])
    rows = []
    deviation = {}
    merges = []
    for lo, hi in itertools.combinations(sizes, 2):
        key = f"{lo}-{hi}"
        devs = {m: [] for m in MEASURES}
        for k in range(cfg.count):
            merged = objects[lo][k] < objects[hi][k]
            if merged:
                merges.append({"size_low": lo, "size_high": hi, "realization": k,
                               "objects_low": objects[lo][k], "objects_high": objects[hi][k]})
            a, b = summaries[lo][k].to_dict(), summaries[hi][k].to_dict()
            for m in MEASURES:
                d = relative_deviation(a[m], b[m])
                devs[m].append(d)
                rows.append({"size_low": lo, "size_high": hi, "realization": k, "measure": m,
                             "low": a[m], "high": b[m], "rel_dev": d, "merge_flag": merged})
        deviation[key] = {m: {"median": statistics.median(v), "mean": statistics.fmean(v),
                              "max": max(v)} for m, v in devs.items()}
    return {
        "schema_version": SCHEMA_VERSION,
        "config": {**cfg.to_dict(), "sizes": sizes, "divisions": divisions},
        "sizes": sizes,
        "summaries": {str(s): [v.to_dict() for v in summaries[s]] for s in sizes},
        "objects": {str(s): objects[s] for s in sizes},
        "pairs": rows,
        "deviation": deviation,
        "merge_flags": merges,
    }


def write_resolution(report: dict, prefix) -> list[Path]:
    prefix = Path(prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    json_path = prefix.with_name(prefix.name + ".json")
    csv_path = prefix.with_name(prefix.name + "_pairs.csv")
    scatter_path = prefix.with_name(prefix.name + "_scatter.svg")
    hist_path = prefix.with_name(prefix.name + "_hist.svg")
    json_path.write_text(json.dumps(report, indent=1) + "\n")
    fields = ["size_low", "size_high", "realization", "measure", "low", "high", "rel_dev", "merge_flag"]
    with open(csv_path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        w.writerows(report["pairs"])
    sizes = report["sizes"]
    panels = []
    for lo, hi in itertools.combinations(sizes, 2):
        for m in MEASURES:
            xs = [r["low"] for r in report["pairs"]
                  if r["size_low"] == lo and r["size_high"] == hi and r["measure"] == m]
            ys = [r["high"] for r in report["pairs"]
                  if r["size_low"] == lo and r["size_high"] == hi and r["measure"] == m]
            panels.append(lambda x, y, xs=xs, ys=ys, m=m, lo=lo, hi=hi: svg.scatter_panel(
                x, y, xs, ys, title=f"{m}: {lo} vs {hi}", xlabel=f"{lo}px", ylabel=f"{hi}px",
                identity=True))
    scatter_path.write_text(svg.document(panels, ncols=len(MEASURES)))
    panels = []
    for si, size in enumerate(sizes):
        vals = report["summaries"][str(size)]
        for m in MEASURES:
            panels.append(lambda x, y, v=[d[m] for d in vals], m=m, s=size, c=svg.COLORS[si % 6]:
                          svg.histogram_panel(x, y, v, title=f"{m} at {s}px", xlabel=m, color=c))
    hist_path.write_text(svg.document(panels, ncols=len(MEASURES)))
    return [json_path, csv_path, scatter_path, hist_path]
