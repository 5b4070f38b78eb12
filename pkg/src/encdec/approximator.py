"""Universal function approximators on compact regions of R^a.

Two families: total-degree polynomials fitted by (ridge) least squares,
and Gaussian kernel ridge interpolants for latent dimensions where the
monomial count gets out of hand.
"""

from __future__ import annotations

import csv
import enum
import itertools
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from ._backend import kernels
from .errors import ConditioningError, ParameterError, PreconditionError, ShapeError

REGION_TOL = 1e-9
DEFAULT_RIDGE = 1e-10


class LatentFamily(str, enum.Enum):
    POLYNOMIAL = "Polynomial"
    KERNEL_RIDGE = "KernelRidge"


@dataclass(frozen=True)
class FitRegion:
    """Closed ball of ``radius`` around ``center`` in the l2 or max norm."""

    center: tuple
    radius: float
    norm: str = "l2"

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in np.atleast_1d(self.center)))
        if not (np.isfinite(self.radius) and self.radius > 0):
            raise ParameterError(f"region radius must be finite and positive, got {self.radius}")
        if self.norm not in ("l2", "linf"):
            raise ParameterError(f"unknown norm {self.norm!r}")

    @property
    def dim(self) -> int:
        return len(self.center)

    def distance(self, x) -> np.ndarray:
        d = np.atleast_2d(np.asarray(x, dtype=float)) - np.array(self.center)
        if self.norm == "linf":
            return np.abs(d).max(axis=1)
        return np.linalg.norm(d, axis=1)

    def contains(self, x, tol: float = REGION_TOL) -> np.ndarray:
        return self.distance(x) <= self.radius * (1 + tol) + tol

    def clip(self, x) -> np.ndarray:
        """Project points onto the ball."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        c = np.array(self.center)
        if self.norm == "linf":
            return np.clip(x, c - self.radius, c + self.radius)
        d = self.distance(x)
        scale = np.minimum(1.0, self.radius / np.maximum(d, 1e-300))
        return c + (x - c) * scale[:, None]


def total_degree_exponents(dim: int, degree: int) -> np.ndarray:
    """Exponent vectors of all monomials of total degree <= ``degree``, graded."""
    rows = []
    for d in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(dim), d):
            e = np.zeros(dim, dtype=np.int64)
            for k in combo:
                e[k] += 1
            rows.append(e)
    return np.array(rows, dtype=np.int64).reshape(-1, dim)


def monomial_count(dim: int, degree: int) -> int:
    return math.comb(dim + degree, degree)


@dataclass(frozen=True, eq=False)
class LatentMap:
    """A fitted map ``R^in_dim -> R^out_dim``.

    Polynomial coefficients act on inputs rescaled to the unit ball,
    ``(x - center) / radius``; kernel ridge maps keep their training inputs.
    """

    family: LatentFamily
    in_dim: int
    out_dim: int
    coefficients: np.ndarray
    fit_region: FitRegion
    fit_residual: float
    degree: int | None = None
    exponents: np.ndarray | None = None
    bandwidth: float | None = None
    train_x: np.ndarray | None = None
    extra: dict = field(default_factory=dict)

    def __call__(self, x) -> np.ndarray:
        return evaluate_latent(self, x)

    def evaluate_many(self, xs) -> np.ndarray:
        xs = np.atleast_2d(np.asarray(xs, dtype=float))
        if xs.shape[1] != self.in_dim:
            raise ShapeError(f"latent map expects {self.in_dim} inputs, got {xs.shape[1]}")
        if self.family is LatentFamily.POLYNOMIAL:
            u = (xs - np.array(self.fit_region.center)) / self.fit_region.radius
            return kernels.monomial_design(u, self.exponents) @ self.coefficients
        return _gaussian_kernel(xs, self.train_x, self.bandwidth) @ self.coefficients

    def extrapolates(self, x) -> np.ndarray:
        return ~self.fit_region.contains(x, tol=REGION_TOL)

    @classmethod
    def linear(cls, matrix, offset=None, region: FitRegion | None = None) -> "LatentMap":
        """Exact affine map ``x -> matrix @ x + offset`` as a degree-1 polynomial."""
        a = np.atleast_2d(np.asarray(matrix, dtype=float))
        out_dim, in_dim = a.shape
        region = region or FitRegion(np.zeros(in_dim), 1.0)
        b = np.zeros(out_dim) if offset is None else np.asarray(offset, dtype=float)
        c, r = np.array(region.center), region.radius
        coef = np.vstack([b + a @ c, (a * r).T])
        return cls(LatentFamily.POLYNOMIAL, in_dim, out_dim, coef, region, 0.0, 1, total_degree_exponents(in_dim, 1))

    @classmethod
    def identity(cls, dim: int, region: FitRegion | None = None) -> "LatentMap":
        return cls.linear(np.eye(dim), region=region)

    @classmethod
    def constant(cls, in_dim: int, value, region: FitRegion | None = None) -> "LatentMap":
        value = np.atleast_1d(np.asarray(value, dtype=float))
        return cls.linear(np.zeros((value.size, in_dim)), value, region)


def _check_samples(x, y, region: FitRegion):
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.asarray(y, dtype=float)
    if y.ndim == 1:
        y = y[:, None]
    if x.shape[0] == 0:
        raise PreconditionError("no samples to fit")
    if x.shape[0] != y.shape[0]:
        raise ShapeError("inputs and targets differ in count")
    if x.shape[1] != region.dim:
        raise ShapeError("sample dimension differs from the fit region")
    if not region.contains(x).all():
        raise PreconditionError("training inputs leave the fit region")
    return x, y


def _split(samples):
    xs, ys = zip(*samples)
    return np.array([np.atleast_1d(v) for v in xs], dtype=float), np.array([np.atleast_1d(v) for v in ys], dtype=float)


def _sample_weights(weights, count):
    if weights is None:
        return np.ones(count)
    w = np.asarray(weights, dtype=float).ravel()
    if w.shape[0] != count:
        raise ShapeError("one weight per sample required")
    if not np.all(np.isfinite(w)) or np.any(w <= 0):
        raise ParameterError("sample weights must be finite and positive")
    return w


def fit_polynomial(samples, degree: int, region: FitRegion, ridge: float = DEFAULT_RIDGE, targets=None,
                   weights=None) -> LatentMap:
    """Least-squares total-degree polynomial, one coefficient column per output.

    ``samples`` is a list of ``(x, y)`` pairs, or an input array when
    ``targets`` is given. Optional positive ``weights`` scale each
    sample's squared error.
    """
    if targets is None:
        x, y = _split(samples)
    else:
        x, y = samples, targets
    x, y = _check_samples(x, y, region)
    if degree < 0 or ridge < 0:
        raise ParameterError("degree and ridge must be nonnegative")
    exps = total_degree_exponents(x.shape[1], degree)
    if exps.shape[0] > x.shape[0] and ridge == 0:
        raise ConditioningError(f"{exps.shape[0]} monomials from {x.shape[0]} samples without ridge")
    sw = np.sqrt(_sample_weights(weights, x.shape[0]))[:, None]
    u = (x - np.array(region.center)) / region.radius
    design = kernels.monomial_design(u, exps)
    if ridge > 0:
        m = exps.shape[0]
        # the intercept is not shrunk, so constant targets are reproduced exactly
        penalty = math.sqrt(ridge) * np.eye(m)[1:]
        a = np.vstack([sw * design, penalty])
        b = np.vstack([sw * y, np.zeros((m - 1, y.shape[1]))])
    else:
        a, b = sw * design, sw * y
    coef, _, rank, _ = np.linalg.lstsq(a, b, rcond=None)
    if ridge == 0 and rank < exps.shape[0]:
        raise ConditioningError(f"design matrix has rank {rank} < {exps.shape[0]}")
    resid = float(np.abs(design @ coef - y).max())
    return LatentMap(LatentFamily.POLYNOMIAL, x.shape[1], y.shape[1], coef, region, resid, degree, exps,
                     extra={"ridge": ridge})


def _gaussian_kernel(a, b, bandwidth):
    d2 = ((a[:, None, :] - b[None, :, :]) ** 2).sum(-1)
    return np.exp(-d2 / (2.0 * bandwidth**2))


def fit_kernel_ridge(samples, bandwidth: float, ridge: float, region: FitRegion, targets=None,
                     weights=None) -> LatentMap:
    """Gaussian kernel ridge ``phi(x) = sum_j alpha_j k(x, x_j)``, ``(K + ridge W^-1) alpha = Y``."""
    if targets is None:
        x, y = _split(samples)
    else:
        x, y = samples, targets
    x, y = _check_samples(x, y, region)
    if not bandwidth > 0:
        raise ParameterError("bandwidth must be positive")
    if ridge < 0:
        raise ParameterError("ridge must be nonnegative")
    w = _sample_weights(weights, x.shape[0])
    gram = _gaussian_kernel(x, x, bandwidth) + ridge * np.diag(1.0 / w)
    try:
        factor = scipy.linalg.cho_factor(gram)
        alpha = scipy.linalg.cho_solve(factor, y)
    except np.linalg.LinAlgError as exc:
        raise ConditioningError("kernel system is singular; add ridge or remove duplicate inputs") from exc
    if not np.all(np.isfinite(alpha)):
        raise ConditioningError("kernel system produced non-finite weights")
    resid = float(np.abs(_gaussian_kernel(x, x, bandwidth) @ alpha - y).max())
    return LatentMap(LatentFamily.KERNEL_RIDGE, x.shape[1], y.shape[1], alpha, region, resid,
                     bandwidth=float(bandwidth), train_x=x.copy(), extra={"ridge": ridge})


def evaluate_latent(phi: LatentMap, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != phi.in_dim:
        raise ShapeError(f"latent map expects a vector of length {phi.in_dim}")
    return phi.evaluate_many(x[None, :])[0]


def write_latent_csv(phi: LatentMap, path) -> None:
    """One header block (family, dims, degree/bandwidth, region) then coefficient rows."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["family", "in_dim", "out_dim", "degree", "bandwidth", "radius", "norm", "fit_residual"])
        w.writerow([phi.family.value, phi.in_dim, phi.out_dim, phi.degree if phi.degree is not None else "",
                    repr(phi.bandwidth) if phi.bandwidth is not None else "", repr(phi.fit_region.radius),
                    phi.fit_region.norm, repr(phi.fit_residual)])
        w.writerow(["center"] + [repr(c) for c in phi.fit_region.center])
        if phi.family is LatentFamily.POLYNOMIAL:
            for e, row in zip(phi.exponents, phi.coefficients):
                w.writerow(["term", " ".join(str(int(v)) for v in e)] + [repr(float(v)) for v in row])
        else:
            for xj, row in zip(phi.train_x, phi.coefficients):
                w.writerow(["node", " ".join(repr(float(v)) for v in xj)] + [repr(float(v)) for v in row])


def read_latent_csv(path) -> LatentMap:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    meta = dict(zip(rows[0], rows[1]))
    family = LatentFamily(meta["family"])
    in_dim, out_dim = int(meta["in_dim"]), int(meta["out_dim"])
    region = FitRegion([float(v) for v in rows[2][1:]], float(meta["radius"]), meta["norm"])
    body = rows[3:]
    keys = np.array([[float(v) for v in r[1].split()] for r in body]).reshape(len(body), in_dim)
    coef = np.array([[float(v) for v in r[2:]] for r in body]).reshape(len(body), out_dim)
    resid = float(meta["fit_residual"])
    if family is LatentFamily.POLYNOMIAL:
        return LatentMap(family, in_dim, out_dim, coef, region, resid, int(meta["degree"]), keys.astype(np.int64))
    return LatentMap(family, in_dim, out_dim, coef, region, resid, bandwidth=float(meta["bandwidth"]), train_x=keys)
