"""Pure numpy implementations of the hot kernels.

These are the reference versions; ``_kernels.pyx`` must agree with them.
"""

import numpy as np


def jacobi_residual(c):
    """Largest Jacobi-identity residual over basis triples.

    Returns ``(residual, (i, j, k))`` for the worst triple.
    """
    c = np.ascontiguousarray(c, dtype=float)
    d = c.shape[0]
    if d == 0:
        return 0.0, (0, 0, 0)
    # t[i, j, k, m] = coefficient of e_m in [e_i, [e_j, e_k]]
    t = np.einsum("jkl,ilm->ijkm", c, c)
    jac = t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3)
    per_triple = np.max(np.abs(jac), axis=3)
    flat = int(np.argmax(per_triple))
    i, j, k = np.unravel_index(flat, per_triple.shape)
    return float(per_triple.flat[flat]), (int(i), int(j), int(k))


def nearest_points(queries, grid, chunk=2048):
    """Index of and Euclidean distance to the nearest grid row for each query."""
    queries = np.atleast_2d(np.asarray(queries, dtype=float))
    grid = np.atleast_2d(np.asarray(grid, dtype=float))
    idx = np.empty(len(queries), dtype=np.int64)
    dist = np.empty(len(queries))
    g2 = np.einsum("ij,ij->i", grid, grid)
    for start in range(0, len(queries), chunk):
        q = queries[start:start + chunk]
        d2 = np.einsum("ij,ij->i", q, q)[:, None] - 2.0 * q @ grid.T + g2[None, :]
        best = np.argmin(d2, axis=1)
        idx[start:start + chunk] = best
        # recompute exactly to avoid cancellation in the expanded square
        diff = q - grid[best]
        dist[start:start + chunk] = np.sqrt(np.einsum("ij,ij->i", diff, diff))
    return idx, dist
