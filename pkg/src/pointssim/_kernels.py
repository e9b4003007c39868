"""Inner loops of the anchor pipeline, in two interchangeable flavours.

Each kernel exists as a numba-compiled loop (``*_nb``) and a numpy or scipy
version (``*_np``). Both produce bitwise-identical results; the module-level
names without suffix point at whichever backend :mod:`pointssim._accel`
selected. All distances here are squared and integer valued.
"""
import numpy as np
from scipy import ndimage

from ._accel import USE_NUMBA, njit

# Squared-distance stand-in for "no background cell in this column".
# Large enough to dominate any real squared distance, small enough that
# adding (cols - 1)**2 never overflows int64.
INF = np.int64(1) << np.int64(40)


# --------------------------------------------------------------------------
# squared Euclidean distance transform
# --------------------------------------------------------------------------

@njit
def edt_sq_nb(fg):
    rows, cols = fg.shape
    g = np.empty((rows, cols), dtype=np.int64)
    # vertical pass: distance to nearest background cell in the same column
    for c in range(cols):
        last = -1
        for r in range(rows):
            if fg[r, c] == 0:
                last = r
                g[r, c] = 0
            elif last < 0:
                g[r, c] = -1
            else:
                g[r, c] = r - last
        last = -1
        for r in range(rows - 1, -1, -1):
            if fg[r, c] == 0:
                last = r
            elif last >= 0:
                d = last - r
                if g[r, c] < 0 or d < g[r, c]:
                    g[r, c] = d
    out = np.empty((rows, cols), dtype=np.int64)
    f = np.empty(cols, dtype=np.int64)
    v = np.empty(cols, dtype=np.int64)
    z = np.empty(cols + 1, dtype=np.float64)
    for r in range(rows):
        # lower envelope of parabolas rooted at columns with finite values
        k = -1
        for q in range(cols):
            if g[r, q] < 0:
                f[q] = INF
                continue
            f[q] = g[r, q] * g[r, q]
            if k < 0:
                k = 0
                v[0] = q
                z[0] = -np.inf
                z[1] = np.inf
                continue
            p = v[k]
            s = ((f[q] + q * q) - (f[p] + p * p)) / (2.0 * (q - p))
            while s <= z[k]:
                k -= 1
                p = v[k]
                s = ((f[q] + q * q) - (f[p] + p * p)) / (2.0 * (q - p))
            k += 1
            v[k] = q
            z[k] = s
            z[k + 1] = np.inf
        if k < 0:
            for q in range(cols):
                out[r, q] = INF
            continue
        j = 0
        for q in range(cols):
            while z[j + 1] < q:
                j += 1
            p = v[j]
            out[r, q] = (q - p) * (q - p) + f[p]
    return out


def edt_sq_np(fg):
    # scipy's exact EDT reports the nearest background cell of every cell;
    # squaring the integer offsets keeps the result exact
    if not (fg == 0).any():
        return np.full(fg.shape, INF, dtype=np.int64)
    near = ndimage.distance_transform_edt(fg, return_distances=False, return_indices=True)
    r, c = np.indices(fg.shape)
    dr = near[0].astype(np.int64) - r
    dc = near[1].astype(np.int64) - c
    return dr * dr + dc * dc


# --------------------------------------------------------------------------
# 8-neighbour local maxima with ties
# --------------------------------------------------------------------------

@njit
def local_maxima_nb(d2):
    rows, cols = d2.shape
    out = np.zeros((rows, cols), dtype=np.bool_)
    for r in range(rows):
        for c in range(cols):
            val = d2[r, c]
            if val <= 0:
                continue
            ok = True
            for dr in range(-1, 2):
                rr = r + dr
                if rr < 0 or rr >= rows:
                    continue
                for dc in range(-1, 2):
                    cc = c + dc
                    if cc < 0 or cc >= cols or (dr == 0 and dc == 0):
                        continue
                    if d2[rr, cc] > val:
                        ok = False
                        break
                if not ok:
                    break
            out[r, c] = ok
    return out


def local_maxima_np(d2):
    rows, cols = d2.shape
    padded = np.pad(d2, 1, mode="constant", constant_values=-1)
    out = d2 > 0
    for dr in (-1, 0, 1):
        for dc in (-1, 0, 1):
            if dr == 0 and dc == 0:
                continue
            nb = padded[1 + dr:1 + dr + rows, 1 + dc:1 + dc + cols]
            out &= d2 >= nb
    return out


# --------------------------------------------------------------------------
# greedy locally adaptive thinning
# --------------------------------------------------------------------------

# Square windows whose field sums break ties between equal maxima. A square
# window centred on a cell maps onto itself under a quarter turn.
_TIE_WINDOWS = (3, 5, 9)


def candidate_order(d2, maxima):
    """Flat indices of maxima in visiting order.

    Largest value first. Ties go to the cell with the larger field mass in a
    3x3, then 5x5, then 9x9 window, then to the cell nearer the grid centre.
    All of these keys survive quarter turns; row-major order only settles
    what is left.
    """
    rows, cols = d2.shape
    flat = np.flatnonzero(maxima)
    vals = d2.ravel()[flat]
    r, c = np.divmod(flat, cols)
    # doubled offsets keep half-cell centres integral
    centre = (2 * r + 1 - rows) ** 2 + (2 * c + 1 - cols) ** 2
    keys = [flat, centre]
    if flat.size > 1:
        for w in reversed(_TIE_WINDOWS):
            box = np.ones(w, dtype=np.int64)
            mass = ndimage.correlate1d(ndimage.correlate1d(d2, box, 0, mode="constant"), box, 1, mode="constant")
            keys.append(-mass.ravel()[flat])
    keys.append(-vals)
    return flat[np.lexsort(tuple(keys))]


@njit
def thin_nb(d2, order):
    cols = d2.shape[1]
    n = order.shape[0]
    acc_r = np.empty(n, dtype=np.int64)
    acc_c = np.empty(n, dtype=np.int64)
    keep = np.zeros(n, dtype=np.bool_)
    m = 0
    for i in range(n):
        idx = order[i]
        r = idx // cols
        c = idx % cols
        own = d2[r, c]
        ok = True
        for j in range(m):
            dr = r - acc_r[j]
            dc = c - acc_c[j]
            if dr * dr + dc * dc < own:
                ok = False
                break
        if ok:
            acc_r[m] = r
            acc_c[m] = c
            m += 1
            keep[i] = True
    return keep


def thin_np(d2, order):
    cols = d2.shape[1]
    n = order.shape[0]
    rr = order // cols
    cc = order % cols
    own = d2.ravel()[order]
    acc_r = np.empty(n, dtype=np.int64)
    acc_c = np.empty(n, dtype=np.int64)
    keep = np.zeros(n, dtype=bool)
    m = 0
    for i in range(n):
        if m:
            dist = (acc_r[:m] - rr[i]) ** 2 + (acc_c[:m] - cc[i]) ** 2
            if (dist < own[i]).any():
                continue
        acc_r[m] = rr[i]
        acc_c[m] = cc[i]
        m += 1
        keep[i] = True
    return keep


# --------------------------------------------------------------------------
# 8-connected component labelling
# --------------------------------------------------------------------------

@njit
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit
def label8_nb(fg):
    rows, cols = fg.shape
    prov = np.zeros((rows, cols), dtype=np.int64)
    parent = np.zeros(rows * cols + 1, dtype=np.int64)
    nxt = 1
    for r in range(rows):
        for c in range(cols):
            if fg[r, c] == 0:
                continue
            best = 0
            # already-visited neighbours: W, NW, N, NE
            for k in range(4):
                if k == 0:
                    rr, cc = r, c - 1
                elif k == 1:
                    rr, cc = r - 1, c - 1
                elif k == 2:
                    rr, cc = r - 1, c
                else:
                    rr, cc = r - 1, c + 1
                if rr < 0 or cc < 0 or cc >= cols:
                    continue
                lab = prov[rr, cc]
                if lab == 0:
                    continue
                if best == 0:
                    best = _find(parent, lab)
                else:
                    other = _find(parent, lab)
                    if other != best:
                        if other < best:
                            parent[best] = other
                            best = other
                        else:
                            parent[other] = best
            if best == 0:
                parent[nxt] = nxt
                best = nxt
                nxt += 1
            prov[r, c] = best
    # final numbering by first appearance in row-major order
    final = np.zeros(nxt, dtype=np.int64)
    out = np.zeros((rows, cols), dtype=np.int64)
    count = 0
    for r in range(rows):
        for c in range(cols):
            lab = prov[r, c]
            if lab == 0:
                continue
            root = _find(parent, lab)
            if final[root] == 0:
                count += 1
                final[root] = count
            out[r, c] = final[root]
    return out, count


def label8_np(fg):
    raw, count = ndimage.label(fg, structure=np.ones((3, 3), dtype=int))
    if count == 0:
        return raw.astype(np.int64), 0
    flat = raw.ravel()
    ids, first = np.unique(flat, return_index=True)
    keep = ids > 0
    ids, first = ids[keep], first[keep]
    remap = np.zeros(count + 1, dtype=np.int64)
    remap[ids[np.argsort(first)]] = np.arange(1, ids.size + 1)
    return remap[raw], int(ids.size)


if USE_NUMBA:
    edt_sq = edt_sq_nb
    local_maxima = local_maxima_nb
    thin = thin_nb

    def label8(fg):
        out, count = label8_nb(fg)
        return out, int(count)
else:
    edt_sq = edt_sq_np
    local_maxima = local_maxima_np
    thin = thin_np
    label8 = label8_np
