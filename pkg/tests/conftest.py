from collections import deque

import numpy as np
import pytest

from pointssim import _kernels

ACCEPTANCE_LINES = []


def brute_edt_sq(cells):
    """Squared distance to the nearest 0 cell by exhaustive search."""
    cells = np.asarray(cells)
    bg_r, bg_c = np.nonzero(cells == 0)
    out = np.empty(cells.shape, dtype=np.int64)
    rr, cc = np.indices(cells.shape)
    rr, cc = rr.ravel(), cc.ravel()
    flat = out.ravel()
    step = max(1, 2_000_000 // max(1, bg_r.size))
    for s in range(0, rr.size, step):
        dr = rr[s:s + step, None] - bg_r[None, :]
        dc = cc[s:s + step, None] - bg_c[None, :]
        flat[s:s + step] = (dr * dr + dc * dc).min(axis=1)
    return out


def flood_labels(cells):
    """8-connected labels by BFS, numbered in row-major order of first cell."""
    cells = np.asarray(cells)
    rows, cols = cells.shape
    labels = np.zeros((rows, cols), dtype=np.int64)
    count = 0
    for r in range(rows):
        for c in range(cols):
            if cells[r, c] and not labels[r, c]:
                count += 1
                labels[r, c] = count
                queue = deque([(r, c)])
                while queue:
                    y, x = queue.popleft()
                    for dy in (-1, 0, 1):
                        for dx in (-1, 0, 1):
                            ny, nx = y + dy, x + dx
                            if 0 <= ny < rows and 0 <= nx < cols and cells[ny, nx] and not labels[ny, nx]:
                                labels[ny, nx] = count
                                queue.append((ny, nx))
    return labels, count


def brute_local_maxima(d2):
    rows, cols = d2.shape
    out = np.zeros(d2.shape, dtype=bool)
    for r in range(rows):
        for c in range(cols):
            if d2[r, c] <= 0:
                continue
            out[r, c] = all(d2[r, c] >= d2[r + a, c + b]
                            for a in (-1, 0, 1) for b in (-1, 0, 1)
                            if (a, b) != (0, 0) and 0 <= r + a < rows and 0 <= c + b < cols)
    return out


def random_binary(rng, max_side=40, ensure_background=True):
    h, w = (int(v) for v in rng.integers(1, max_side + 1, size=2))
    cells = (rng.random((h, w)) < rng.uniform(0.2, 0.95)).astype(np.uint8)
    if ensure_background and cells.all():
        cells[rng.integers(h), rng.integers(w)] = 0
    return cells


_BACKENDS = {
    "numba": dict(edt_sq=_kernels.edt_sq_nb, local_maxima=_kernels.local_maxima_nb,
                  thin=_kernels.thin_nb,
                  label8=lambda fg: (lambda o: (o[0], int(o[1])))(_kernels.label8_nb(fg))),
    "numpy": dict(edt_sq=_kernels.edt_sq_np, local_maxima=_kernels.local_maxima_np,
                  thin=_kernels.thin_np, label8=_kernels.label8_np),
}


@pytest.fixture(params=sorted(_BACKENDS))
def backend(request, monkeypatch):
    """Run the test once per kernel backend."""
    for name, fn in _BACKENDS[request.param].items():
        monkeypatch.setattr(_kernels, name, fn)
    return request.param


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
