"""Time the numba and numpy kernels side by side.

    python3 benchmarks/bench_kernels.py [--sizes 256,512,1024] [--repeat 3]

Each kernel runs on the same smoothed-noise image per size; the table shows
the best of ``--repeat`` runs in milliseconds and the numpy/numba ratio.
"""
import argparse
import time

import numpy as np

from pointssim import _kernels
from pointssim._accel import HAVE_NUMBA
from pointssim.generators import ScenarioConfig, generate_one

KERNELS = {
    "edt_sq": (_kernels.edt_sq_nb, _kernels.edt_sq_np),
    "local_maxima": (_kernels.local_maxima_nb, _kernels.local_maxima_np),
    "thin": (_kernels.thin_nb, _kernels.thin_np),
    "label8": (_kernels.label8_nb, _kernels.label8_np),
}


def best_ms(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t)
    return 1000 * min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="256,512,1024")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if not HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"{'size':>6} {'kernel':<14} {'numba ms':>10} {'numpy ms':>10} {'ratio':>7}")
    for size in (int(s) for s in args.sizes.split(",")):
        fg = np.ascontiguousarray(generate_one(ScenarioConfig("smoothed_noise", size, seed=1), 0).cells)
        d2 = _kernels.edt_sq_nb(fg)
        maxima = _kernels.local_maxima_nb(d2)
        order = _kernels.candidate_order(d2, maxima)
        inputs = {"edt_sq": (fg,), "local_maxima": (d2,), "thin": (d2, order), "label8": (fg,)}
        for name, (nb, np_) in KERNELS.items():
            nb(*inputs[name])  # compile / load from cache
            t_nb = best_ms(nb, inputs[name], args.repeat)
            t_np = best_ms(np_, inputs[name], args.repeat)
            print(f"{size:>6} {name:<14} {t_nb:>10.2f} {t_np:>10.2f} {t_np / t_nb:>7.1f}")


if __name__ == "__main__":
    main()
