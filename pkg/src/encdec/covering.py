"""Epsilon-coverings of a box and the smooth bump partition of unity on them."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .errors import CoveringError, DomainError, ParameterError, UnsupportedDimensionError
from .funcspace import Domain, grid_axes, grid_points

PROBE_REFINEMENT = 100
QUAD_REFINEMENT = 4


@dataclass(frozen=True, eq=False)
class Covering:
    """Centers whose open epsilon-balls cover ``domain``.

    Coverings built by :func:`build_epsilon_covering` are tensor grids and
    keep their per-axis center coordinates in ``axis_centers``; arbitrary
    center sets are validated by brute force on a probe grid.
    """

    domain: Domain
    epsilon: float
    centers: np.ndarray
    axis_centers: tuple | None = None
    validate: bool = True

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ParameterError(f"epsilon must be positive, got {self.epsilon}")
        centers = np.atleast_2d(np.asarray(self.centers, dtype=float))
        if self.domain.dim == 1 and centers.shape[0] == 1 and centers.shape[1] > 1:
            centers = centers.T
        if centers.shape[0] == 0 or centers.shape[1] != self.domain.dim:
            raise CoveringError("centers must be a nonempty (k, dim) array")
        if not self.domain.contains(centers).all():
            raise DomainError("covering centers must lie in the domain")
        centers.setflags(write=False)
        object.__setattr__(self, "centers", centers)
        if self.validate:
            gap = self.max_gap()
            if not gap < self.epsilon:
                raise CoveringError(
                    f"points at distance {gap:.6g} >= epsilon={self.epsilon} from every center"
                )

    @property
    def k(self) -> int:
        return self.centers.shape[0]

    def max_gap(self) -> float:
        """Upper bound on the distance from any domain point to its nearest center."""
        if self.axis_centers is not None:
            # on a tensor grid the nearest center is found axis by axis
            sq = 0.0
            for (lo, hi), ac in zip(self.domain.bounds, self.axis_centers):
                probe = np.linspace(lo, hi, PROBE_REFINEMENT * len(ac) + 1)
                nearest = np.min(np.abs(probe[:, None] - np.asarray(ac)[None, :]), axis=1)
                # slack for points between probes
                sq += (nearest.max() + 0.5 * (probe[1] - probe[0])) ** 2
            return math.sqrt(sq)
        per_axis = max(2, int(round(self.k ** (1.0 / self.domain.dim))))
        n = min(PROBE_REFINEMENT * per_axis + 1, 2001 if self.domain.dim == 1 else 401)
        probe = grid_points(self.domain, n)
        step = self.domain.lengths / (n - 1)
        best = np.full(probe.shape[0], np.inf)
        for start in range(0, self.k, 256):
            c = self.centers[start : start + 256]
            d = np.sqrt(((probe[:, None, :] - c[None, :, :]) ** 2).sum(-1)).min(axis=1)
            best = np.minimum(best, d)
        return float(best.max() + 0.5 * np.linalg.norm(step))


def build_epsilon_covering(domain: Domain, epsilon: float) -> Covering:
    """Midpoint grid with ``ceil(L / epsilon)`` centers per axis."""
    if not epsilon > 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    axis_centers = []
    for lo, hi in domain.bounds:
        k = max(1, math.ceil((hi - lo) / epsilon - 1e-12))
        axis_centers.append(tuple(lo + (hi - lo) * (np.arange(k) + 0.5) / k))
    mesh = np.meshgrid(*[np.array(a) for a in axis_centers], indexing="ij")
    centers = np.stack([m.ravel() for m in mesh], axis=1)
    return Covering(domain, float(epsilon), centers, tuple(axis_centers))


def bump_value(y, center, epsilon: float) -> float:
    """Unnormalised bump ``exp(-1 / (eps^2 - d^2))`` inside the ball, 0 outside."""
    if not epsilon > 0:
        raise ParameterError("epsilon must be positive")
    d2 = float(np.sum((np.atleast_1d(np.asarray(y, float)) - np.atleast_1d(np.asarray(center, float))) ** 2))
    eps2 = epsilon * epsilon
    if d2 >= eps2:
        return 0.0
    return math.exp(-1.0 / (eps2 - d2))


@dataclass(frozen=True, eq=False)
class PartitionOfUnity:
    """Normalised bumps ``P_i = bump_i / sum_l bump_l`` on a covering."""

    covering: Covering
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def k(self) -> int:
        return self.covering.k

    @property
    def domain(self) -> Domain:
        return self.covering.domain

    def weights(self, points) -> np.ndarray:
        """``(m, k)`` matrix of all ``P_i`` at the given points."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if self.domain.dim == 1 and pts.shape[0] == 1 and pts.shape[1] > 1:
            pts = pts.T
        w, bad = kernels.pou_weights(pts, self.covering.centers, self.covering.epsilon)
        if bad >= 0:
            raise CoveringError(f"no bump is active at {pts[bad]}; the centers do not cover it")
        return w

    def value(self, i: int, y) -> float:
        return float(self.weights(np.atleast_1d(np.asarray(y, float)).reshape(1, -1))[0, i])

    def grid_matrix(self, shape) -> np.ndarray:
        """Weights at every node of a grid, ``(N, k)``, cached per grid."""
        key = ("grid", tuple(np.atleast_1d(shape)))
        if key not in self._cache:
            self._cache[key] = self.weights(grid_points(self.domain, shape))
        return self._cache[key]

    def antiderivative_at_nodes(self, n_nodes: int, refinement: int = QUAD_REFINEMENT) -> np.ndarray:
        """``int_lo^x P_i`` at the nodes of an ``n_nodes`` grid, ``(n_nodes, k)``.

        Trapezoid quadrature runs on a grid ``refinement`` times finer.
        """
        if self.domain.dim != 1:
            raise UnsupportedDimensionError("antiderivatives need a 1-D domain")
        key = ("anti", n_nodes, refinement)
        if key not in self._cache:
            fine_n = refinement * (n_nodes - 1) + 1
            (x_fine,) = grid_axes(self.domain, fine_n)
            w = self.weights(x_fine[:, None])
            h = x_fine[1] - x_fine[0]
            cum = kernels.cumulative_trapezoid(w.T.copy(), h).T
            self._cache[key] = cum[::refinement].copy()
        return self._cache[key]

    def antiderivative(self, y, quad_nodes: int = 4097) -> np.ndarray:
        """``int_lo^y P_i`` for every ``i`` at each point in ``y``, ``(m, k)``."""
        if self.domain.dim != 1:
            raise UnsupportedDimensionError("antiderivatives need a 1-D domain")
        y = np.atleast_1d(np.asarray(y, dtype=float))
        lo, hi = self.domain.bounds[0]
        if np.any(y < lo - 1e-12) or np.any(y > hi + 1e-12):
            raise DomainError("antiderivative evaluation point outside the domain")
        cum = self.antiderivative_at_nodes(quad_nodes, 1)
        (x,) = grid_axes(self.domain, quad_nodes)
        return np.stack([np.interp(y, x, cum[:, i]) for i in range(self.k)], axis=1)


def partition_of_unity(cov: Covering) -> PartitionOfUnity:
    return PartitionOfUnity(cov)


def pou_antiderivative(pou: PartitionOfUnity, i: int, y: float, quad_nodes: int = 4097) -> float:
    return float(pou.antiderivative(y, quad_nodes)[0, i])


def write_covering_csv(cov: Covering, path) -> None:
    coords = ["x", "y"][: cov.domain.dim]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index"] + coords)
        for i, c in enumerate(cov.centers):
            writer.writerow([i] + [repr(float(v)) for v in c])
