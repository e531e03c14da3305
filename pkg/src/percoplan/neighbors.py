"""Fixed-radius near-neighbor pair search.

Three interchangeable backends produce the identical closed-ball pair set
(distance <= radius, each unordered pair once):

* ``grid``   - uniform hash grid with cell side = radius; candidate pairs come
               from the same cell and the 3^d surrounding cells.  Expected
               O(n * degree) at radii of order n^(-1/d).
* ``kdtree`` - scipy cKDTree.query_pairs; preferred above d ~ 6 where the 3^d
               cell fan-out of the grid stops paying for itself.
* ``brute``  - all-pairs scan, used as the oracle in tests.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree

_GRID_MAX_DIM = 6


def radius_pairs(points: np.ndarray, radius: float, backend: str = "auto") -> np.ndarray:
    """All unordered index pairs (u < v) with ||p_u - p_v|| <= radius."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ValueError("points must be an (n, d) array")
    if radius <= 0:
        raise ValueError("radius must be positive")
    n, d = pts.shape
    if backend == "auto":
        backend = "grid" if d <= _GRID_MAX_DIM else "kdtree"
    if n < 2:
        return np.empty((0, 2), dtype=np.int64)
    if backend == "grid":
        pairs = _grid_pairs(pts, radius)
    elif backend == "kdtree":
        pairs = cKDTree(pts).query_pairs(radius, output_type="ndarray").astype(np.int64)
    elif backend == "brute":
        pairs = _brute_pairs(pts, radius)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return _canonical(pairs)


def _canonical(pairs: np.ndarray) -> np.ndarray:
    """Sort each pair as (u < v) and order rows lexicographically."""
    if pairs.size == 0:
        return pairs.reshape(0, 2)
    lo = pairs.min(axis=1)
    hi = pairs.max(axis=1)
    order = np.lexsort((hi, lo))
    return np.stack([lo[order], hi[order]], axis=1)


def _brute_pairs(pts: np.ndarray, radius: float, chunk: int = 2048) -> np.ndarray:
    n = pts.shape[0]
    r2 = radius * radius
    out = []
    for s in range(0, n, chunk):
        e = min(n, s + chunk)
        diff = pts[s:e, None, :] - pts[None, :, :]
        d2 = np.einsum("ijk,ijk->ij", diff, diff)
        iu, jv = np.nonzero(d2 <= r2)
        iu = iu + s
        keep = iu < jv
        out.append(np.stack([iu[keep], jv[keep]], axis=1))
    return np.concatenate(out) if out else np.empty((0, 2), dtype=np.int64)


def _expand_ranges(starts: np.ndarray, stops: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """For ranges [starts_i, stops_i): (owner index, range element) pairs."""
    counts = stops - starts
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    owner = np.repeat(np.arange(starts.size, dtype=np.int64), counts)
    first = np.cumsum(counts) - counts
    elem = np.arange(total, dtype=np.int64) - np.repeat(first, counts) + np.repeat(starts, counts)
    return owner, elem


def _half_offsets(d: int) -> np.ndarray:
    """Offsets in {-1,0,1}^d whose first nonzero component is positive."""
    grids = np.meshgrid(*([np.array([-1, 0, 1])] * d), indexing="ij")
    offs = np.stack([g.ravel() for g in grids], axis=1)
    keep = np.zeros(offs.shape[0], dtype=bool)
    undecided = np.ones(offs.shape[0], dtype=bool)
    for i in range(d):
        keep |= undecided & (offs[:, i] > 0)
        undecided &= offs[:, i] == 0
    return offs[keep]


def _grid_pairs(pts: np.ndarray, radius: float) -> np.ndarray:
    n, d = pts.shape
    r2 = radius * radius
    cells = np.floor(pts / radius).astype(np.int64)
    cells -= cells.min(axis=0)
    dims = cells.max(axis=0) + 1
    key = np.ravel_multi_index(cells.T, dims)
    order = np.argsort(key, kind="stable")
    skey = key[order]
    uniq, ustart = np.unique(skey, return_index=True)
    uend = np.append(ustart[1:], n)
    # position of each point's cell in the unique-cell table
    cell_of = np.searchsorted(uniq, skey)

    chunks = []

    # pairs within the same cell: each sorted point against the rest of its cell
    own_pos = np.arange(n, dtype=np.int64)
    src, tgt = _expand_ranges(own_pos + 1, uend[cell_of])
    if src.size:
        chunks.append((order[src], order[tgt]))

    # pairs across neighboring cells, one direction per unordered cell pair
    strides = np.ones(d, dtype=np.int64)
    for i in range(d - 2, -1, -1):
        strides[i] = strides[i + 1] * dims[i + 1]
    sorted_cells = cells[order]
    for off in _half_offsets(d):
        nb = sorted_cells + off
        valid = np.all((nb >= 0) & (nb < dims), axis=1)
        if not valid.any():
            continue
        nb_key = nb[valid] @ strides
        pos = np.searchsorted(uniq, nb_key)
        pos = np.minimum(pos, uniq.size - 1)
        found = uniq[pos] == nb_key
        src_idx = np.nonzero(valid)[0][found]
        cell_pos = pos[found]
        src, tgt = _expand_ranges(ustart[cell_pos], uend[cell_pos])
        if src.size:
            chunks.append((order[src_idx[src]], order[tgt]))

    if not chunks:
        return np.empty((0, 2), dtype=np.int64)
    u = np.concatenate([c[0] for c in chunks])
    v = np.concatenate([c[1] for c in chunks])
    diff = pts[u] - pts[v]
    close = np.einsum("ij,ij->i", diff, diff) <= r2
    return np.stack([u[close], v[close]], axis=1)
