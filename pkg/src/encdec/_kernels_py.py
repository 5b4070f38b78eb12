"""Pure-numpy implementations of the numerical kernels.

Every function here has a twin with the same signature in the compiled
``_kernels_c`` extension. ``encdec._backend`` picks one at import time.
"""

import numpy as np

SNAP_TOL = 1e-10


def pou_weights(points, centers, epsilon):
    """Normalised bump partition-of-unity weights.

    Returns ``(W, bad)`` where ``W[j, i]`` is the weight of center ``i`` at
    ``points[j]`` and ``bad`` is the index of the first point no bump
    reaches (``-1`` if every point is covered). Normalisation happens in
    log space so that narrow bumps (tiny epsilon) do not underflow.
    """
    points = np.ascontiguousarray(points, dtype=float)
    centers = np.ascontiguousarray(centers, dtype=float)
    eps2 = float(epsilon) ** 2
    d2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=-1)
    active = d2 < eps2
    with np.errstate(divide="ignore"):
        logw = np.where(active, -1.0 / np.where(active, eps2 - d2, 1.0), -np.inf)
    covered = active.any(axis=1)
    if not covered.all():
        return np.zeros(d2.shape), int(np.flatnonzero(~covered)[0])
    logw -= logw.max(axis=1, keepdims=True)
    w = np.exp(logw)
    w /= w.sum(axis=1, keepdims=True)
    return w, -1


def interp_stencil(lower, upper, shape, points):
    """Flat node indices and weights of the multilinear stencil at each point.

    Coordinates within ``SNAP_TOL`` cells of a node snap onto it so node
    values are reproduced bit for bit.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    m, dim = points.shape
    axis_idx = []
    axis_t = []
    for a in range(dim):
        n = shape[a]
        u = (points[:, a] - lower[a]) / (upper[a] - lower[a]) * (n - 1)
        r = np.rint(u)
        u = np.where(np.abs(u - r) < SNAP_TOL, r, u)
        i = np.clip(np.floor(u).astype(np.int64), 0, n - 2)
        axis_idx.append(i)
        axis_t.append(u - i)
    if dim == 1:
        i0, t0 = axis_idx[0], axis_t[0]
        idx = np.stack([i0, i0 + 1], axis=1)
        w = np.stack([1.0 - t0, t0], axis=1)
        return idx, w
    i0, i1 = axis_idx
    t0, t1 = axis_t
    n1 = shape[1]
    idx = np.stack(
        [i0 * n1 + i1, i0 * n1 + i1 + 1, (i0 + 1) * n1 + i1, (i0 + 1) * n1 + i1 + 1],
        axis=1,
    )
    w = np.stack(
        [(1 - t0) * (1 - t1), (1 - t0) * t1, t0 * (1 - t1), t0 * t1], axis=1
    )
    return idx, w


def interp_eval(flat_values, idx, w):
    out = np.zeros(idx.shape[0])
    # skip zero-weight taps so a node value is reproduced exactly
    for c in range(idx.shape[1]):
        wc = w[:, c]
        nz = wc != 0.0
        out[nz] += wc[nz] * flat_values[idx[nz, c]]
    return out


def cumulative_trapezoid(rows, h):
    """Cumulative trapezoid integral along the last axis, starting at 0."""
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    out = np.zeros_like(rows)
    out[:, 1:] = np.cumsum(0.5 * h * (rows[:, 1:] + rows[:, :-1]), axis=1)
    return out


def monomial_design(x, exponents):
    """Matrix of monomials ``prod_k x[j, k] ** exponents[i, k]``."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    exponents = np.asarray(exponents, dtype=np.int64)
    out = np.ones((x.shape[0], exponents.shape[0]))
    for k in range(x.shape[1]):
        col = x[:, k]
        for i in range(exponents.shape[0]):
            e = exponents[i, k]
            if e:
                out[:, i] *= col**e
    return out
