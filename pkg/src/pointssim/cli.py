"""``pointssim`` command line.

Exit status: 0 on success, 2 for input or contract errors (reported as a
JSON object on stdout), 3 for anything unexpected.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import traceback
from pathlib import Path

from . import __version__
from .errors import ConfigError, PointSSIMError
from .generators import SCENARIOS, ScenarioConfig, write_batch
from .harness import comparison_matrix, load_dataset, resolution_experiment, write_matrix, write_resolution
from .image import BaseFrame, align_frames, load_image
from .measures import DEFAULT_DIVISIONS, summarize
from .metrics import METRICS, compare_images, point_ssim
from .point_process import extract


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def _parse_params(items) -> dict:
    params = {}
    for item in items or ():
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"--param expects key=value, got {item!r}")
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        params[key] = tuple(value) if isinstance(value, list) else value
    return params


def cmd_compare(args) -> int:
    a, b = load_image(args.image_a), load_image(args.image_b)
    if args.metric == "pointssim":
        fa, fb = align_frames(a, b)
        va, vb = summarize(a, fa, args.quadrats), summarize(b, fb, args.quadrats)
        _emit({"metric": "pointssim", "value": point_ssim(va, vb).value,
               "v_x1": list(va.as_tuple()), "v_x2": list(vb.as_tuple())})
    else:
        _emit({"metric": args.metric, "value": compare_images(a, b, args.metric).value})
    return 0


def cmd_measures(args) -> int:
    results = []
    for path in args.images:
        img = load_image(path)
        frame = BaseFrame.for_extent(img, args.frame_extent) if args.frame_extent else BaseFrame.unit(img)
        results.append((path, summarize(img, frame, args.quadrats)))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["file", "v1", "v2", "v3", "v4"])
            for path, v in results:
                w.writerow([path, v.v1, repr(v.v2), repr(v.v3), repr(v.v4)])
    if len(results) == 1:
        _emit(results[0][1].to_dict())
    else:
        _emit([{"file": str(p), **v.to_dict()} for p, v in results])
    return 0


def cmd_anchors(args) -> int:
    img = load_image(args.image)
    mpp = extract(img)
    with open(args.out, "w", newline="") as fh:
        mpp.write_csv(fh)
    _emit({"anchors": mpp.n_points, "objects": mpp.n_objects, "out": str(args.out)})
    return 0


def cmd_generate(args) -> int:
    cfg = ScenarioConfig(args.scenario, args.size, args.seed, args.count, _parse_params(args.param))
    paths = write_batch(cfg, args.out)
    _emit({"scenario": cfg.scenario, "count": len(paths), "out": str(args.out)})
    return 0


def cmd_matrix(args) -> int:
    datasets = [load_dataset(d) for d in args.dir]
    report = comparison_matrix(datasets, args.metric or ["pointssim"], args.quadrats)
    written = write_matrix(report, args.out)
    _emit({"cells": len(report["cells"]), "written": [str(p) for p in written]})
    return 0


def _sizes(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid size list {text!r}") from exc


def cmd_resolution(args) -> int:
    cfg = ScenarioConfig(args.scenario, min(args.sizes), args.seed, args.count, _parse_params(args.param))
    report = resolution_experiment(cfg, args.sizes, args.quadrats)
    written = write_resolution(report, args.out)
    _emit({"deviation": report["deviation"], "merge_flags": len(report["merge_flags"]),
           "written": [str(p) for p in written]})
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pointssim", description="Resolution-invariant binary image comparison.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def quadrats(p):
        p.add_argument("--quadrats", type=int, default=DEFAULT_DIVISIONS,
                       help="quadrat divisions per axis (default %(default)s)")

    p = sub.add_parser("compare", help="compare two images")
    p.add_argument("image_a")
    p.add_argument("image_b")
    p.add_argument("--metric", choices=METRICS, default="pointssim")
    quadrats(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("measures", help="print the four-measure summary vector")
    p.add_argument("images", nargs="+")
    p.add_argument("--frame-extent", type=float, default=None,
                   help="base-unit width of the image (default: one unit per pixel)")
    p.add_argument("--csv", default=None, help="also write file,v1,v2,v3,v4 rows here")
    quadrats(p)
    p.set_defaults(func=cmd_measures)

    p = sub.add_parser("anchors", help="export anchor points as CSV")
    p.add_argument("image")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_anchors)

    p = sub.add_parser("generate", help="write a synthetic scenario batch")
    p.add_argument("scenario", choices=SCENARIOS)
    p.add_argument("--size", type=int, default=256)
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--param", action="append", metavar="KEY=VALUE",
                   help="override a scenario parameter (JSON value)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("matrix", help="pairwise comparison matrix over image directories")
    p.add_argument("--dir", nargs="+", action="extend", required=True)
    p.add_argument("--metric", nargs="+", action="extend", choices=METRICS)
    p.add_argument("--out", required=True, help="output path prefix")
    quadrats(p)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("resolution", help="same scenes at several resolutions")
    p.add_argument("--scenario", default="corner_mixture",
                   choices=("structured_ellipses", "distorted_ellipses", "corner_mixture"))
    p.add_argument("--sizes", type=_sizes, default=[128, 256, 512])
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--param", action="append", metavar="KEY=VALUE")
    p.add_argument("--out", required=True, help="output path prefix")
    quadrats(p)
    p.set_defaults(func=cmd_resolution)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PointSSIMError as exc:
        _emit({"error": exc.code, "message": str(exc)})
        return 2
    except Exception as exc:  # noqa: BLE001 - reported as exit 3
        traceback.print_exc(file=sys.stderr)
        _emit({"error": "InternalError", "message": f"{type(exc).__name__}: {exc}"})
        return 3


if __name__ == "__main__":
    sys.exit(main())
