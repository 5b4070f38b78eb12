"""Grid-based function spaces: representation, evaluation, norms, families.

Functions live on uniform tensor grids over a box domain in one or two
dimensions. Off-grid values come from piecewise multilinear interpolation
and L2 quantities from the composite trapezoid rule on the same grid, so a
single array serves both the sup-norm and the L2 reading of a function.
"""

from __future__ import annotations

import csv
import enum
import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ._backend import kernels
from .errors import ConfigurationError, DomainError, PreconditionError, ShapeError

DOMAIN_TOL = 1e-12


class SpaceTag(str, enum.Enum):
    CONTINUOUS = "ContinuousSup"
    L2 = "L2"
    C1 = "C1"


@dataclass(frozen=True)
class Domain:
    """Closed axis-aligned box ``[lo_0, hi_0] x ... `` of dimension 1 or 2."""

    dim: int = 1
    bounds: tuple = ((0.0, 1.0),)

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ConfigurationError(f"dim must be 1 or 2, got {self.dim}")
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        if len(bounds) == 1 and self.dim == 2:
            bounds = bounds * 2
        if len(bounds) != self.dim:
            raise ConfigurationError("one (lower, upper) pair per axis required")
        for lo, hi in bounds:
            if not lo < hi:
                raise ConfigurationError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "bounds", bounds)

    @classmethod
    def unit(cls, dim: int = 1) -> "Domain":
        return cls(dim, ((0.0, 1.0),) * dim)

    @property
    def lower(self) -> np.ndarray:
        return np.array([b[0] for b in self.bounds])

    @property
    def upper(self) -> np.ndarray:
        return np.array([b[1] for b in self.bounds])

    @property
    def lengths(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        slack = DOMAIN_TOL * self.lengths
        return np.all((pts >= self.lower - slack) & (pts <= self.upper + slack), axis=1)


def _as_shape(shape, dim) -> tuple:
    if np.isscalar(shape):
        shape = (int(shape),) * dim
    shape = tuple(int(s) for s in shape)
    if len(shape) != dim:
        raise ShapeError(f"grid shape {shape} does not match dim {dim}")
    if any(s < 2 for s in shape):
        raise ShapeError("every axis needs at least two nodes")
    return shape


def grid_axes(domain: Domain, shape) -> list:
    shape = _as_shape(shape, domain.dim)
    return [np.linspace(lo, hi, n) for (lo, hi), n in zip(domain.bounds, shape)]


def grid_points(domain: Domain, shape) -> np.ndarray:
    """All grid nodes as an ``(N, dim)`` array in C order."""
    axes = grid_axes(domain, shape)
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _frozen(arr) -> np.ndarray:
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples of a real function on a uniform tensor grid.

    ``space_tag`` records which space the function is read in; C1-tagged
    functions carry explicit derivative samples (1-D only).
    """

    domain: Domain
    shape: tuple
    values: np.ndarray
    space_tag: SpaceTag = SpaceTag.CONTINUOUS
    derivative_values: np.ndarray | None = None

    def __post_init__(self):
        shape = _as_shape(self.shape, self.domain.dim)
        object.__setattr__(self, "shape", shape)
        values = np.asarray(self.values, dtype=float)
        if values.size != int(np.prod(shape)):
            raise ShapeError(f"{values.size} values for grid {shape}")
        values = values.reshape(shape)
        if not np.all(np.isfinite(values)):
            raise ValueError("grid values must be finite")
        object.__setattr__(self, "values", _frozen(values))
        object.__setattr__(self, "space_tag", SpaceTag(self.space_tag))
        if self.space_tag is SpaceTag.C1:
            if self.derivative_values is None:
                raise PreconditionError("C1 functions need derivative samples")
            if self.domain.dim != 1:
                raise ConfigurationError("C1 functions are supported on 1-D domains only")
            deriv = np.asarray(self.derivative_values, dtype=float)
            if deriv.size != values.size:
                raise ShapeError("derivative samples must match the value grid")
            if not np.all(np.isfinite(deriv)):
                raise ValueError("derivative values must be finite")
            object.__setattr__(self, "derivative_values", _frozen(deriv.reshape(shape)))
        elif self.derivative_values is not None:
            raise PreconditionError("derivative samples are only allowed on C1 functions")

    @classmethod
    def from_callable(
        cls,
        fn: Callable,
        domain: Domain | None = None,
        shape=257,
        space_tag=SpaceTag.CONTINUOUS,
        derivative: Callable | None = None,
    ) -> "GridFunction":
        """Sample ``fn(*coords)`` (vectorised, ``indexing='ij'``) on a grid."""
        domain = domain or Domain.unit(1)
        shape = _as_shape(shape, domain.dim)
        coords = np.meshgrid(*grid_axes(domain, shape), indexing="ij")
        values = np.broadcast_to(np.asarray(fn(*coords), dtype=float), shape)
        deriv = None
        if derivative is not None:
            deriv = np.broadcast_to(np.asarray(derivative(*coords), dtype=float), shape)
        return cls(domain, shape, values, space_tag, deriv)

    @classmethod
    def constant(cls, c: float, domain: Domain | None = None, shape=257, space_tag=SpaceTag.CONTINUOUS):
        domain = domain or Domain.unit(1)
        shape = _as_shape(shape, domain.dim)
        deriv = np.zeros(shape) if SpaceTag(space_tag) is SpaceTag.C1 else None
        return cls(domain, shape, np.full(shape, float(c)), space_tag, deriv)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    @property
    def flat(self) -> np.ndarray:
        return self.values.ravel()

    @property
    def spacing(self) -> np.ndarray:
        return self.domain.lengths / (np.array(self.shape) - 1)

    def axes(self) -> list:
        return grid_axes(self.domain, self.shape)

    def points(self) -> np.ndarray:
        return grid_points(self.domain, self.shape)

    def with_values(self, values, derivative_values=None) -> "GridFunction":
        return GridFunction(self.domain, self.shape, values, self.space_tag, derivative_values)

    def with_tag(self, space_tag, derivative_values=None) -> "GridFunction":
        """Reinterpret the same samples in another space (an embedding)."""
        space_tag = SpaceTag(space_tag)
        if space_tag is SpaceTag.C1 and derivative_values is None:
            derivative_values = self.derivative_values
        if space_tag is not SpaceTag.C1:
            derivative_values = None
        return GridFunction(self.domain, self.shape, self.values, space_tag, derivative_values)

    def _combine(self, other, op):
        if isinstance(other, GridFunction):
            check_compatible(self, other)
            deriv = None
            if self.space_tag is SpaceTag.C1 and other.space_tag is SpaceTag.C1:
                deriv = op(self.derivative_values, other.derivative_values)
                tag = SpaceTag.C1
            else:
                tag = self.space_tag if self.space_tag is not SpaceTag.C1 else other.space_tag
            return GridFunction(self.domain, self.shape, op(self.values, other.values), tag, deriv)
        return NotImplemented

    def __add__(self, other):
        return self._combine(other, np.add)

    def __sub__(self, other):
        return self._combine(other, np.subtract)

    def __mul__(self, scalar):
        if isinstance(scalar, GridFunction):
            return NotImplemented
        s = float(scalar)
        deriv = None if self.derivative_values is None else s * self.derivative_values
        return GridFunction(self.domain, self.shape, s * self.values, self.space_tag, deriv)

    __rmul__ = __mul__

    def __neg__(self):
        return -1.0 * self

    def __repr__(self):
        return (
            f"GridFunction(dim={self.domain.dim}, shape={self.shape}, "
            f"tag={self.space_tag.value}, max|f|={np.abs(self.values).max():.4g})"
        )


def check_compatible(f: GridFunction, g: GridFunction) -> None:
    if f.domain != g.domain or f.shape != g.shape:
        raise ShapeError(f"grid mismatch: {f.shape} on {f.domain} vs {g.shape} on {g.domain}")


def interpolation_stencil(domain: Domain, shape, points):
    """Flat indices and weights of the multilinear stencil at ``points``."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != domain.dim:
        raise ShapeError(f"points of dimension {pts.shape[1]} on a {domain.dim}-D domain")
    inside = domain.contains(pts)
    if not inside.all():
        bad = pts[np.flatnonzero(~inside)[0]]
        raise DomainError(f"point {bad} outside domain {domain.bounds}")
    pts = np.clip(pts, domain.lower, domain.upper)
    return kernels.interp_stencil(domain.lower, domain.upper, _as_shape(shape, domain.dim), pts)


def interpolation_matrix(domain: Domain, shape, points) -> np.ndarray:
    """Dense ``(m, N)`` matrix mapping flat grid values to values at points."""
    shape = _as_shape(shape, domain.dim)
    idx, w = interpolation_stencil(domain, shape, points)
    mat = np.zeros((idx.shape[0], int(np.prod(shape))))
    rows = np.repeat(np.arange(idx.shape[0]), idx.shape[1])
    np.add.at(mat, (rows, idx.ravel()), w.ravel())
    return mat


def evaluate_many(f: GridFunction, points) -> np.ndarray:
    idx, w = interpolation_stencil(f.domain, f.shape, points)
    return kernels.interp_eval(f.flat, idx, w)


def evaluate(f: GridFunction, y) -> float:
    """Value of ``f`` at one point by multilinear interpolation."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    return float(evaluate_many(f, y.reshape(1, -1))[0])


def sup_distance(f: GridFunction, g: GridFunction) -> float:
    check_compatible(f, g)
    return float(np.max(np.abs(f.values - g.values)))


def sup_norm(f: GridFunction) -> float:
    return float(np.max(np.abs(f.values)))


def trapezoid_weights(domain: Domain, shape) -> np.ndarray:
    """Tensor-product composite trapezoid weights on the grid (C order)."""
    shape = _as_shape(shape, domain.dim)
    per_axis = []
    for (lo, hi), n in zip(domain.bounds, shape):
        w = np.full(n, (hi - lo) / (n - 1))
        w[0] *= 0.5
        w[-1] *= 0.5
        per_axis.append(w)
    if domain.dim == 1:
        return per_axis[0]
    return np.outer(per_axis[0], per_axis[1]).ravel()


def l2_inner(f: GridFunction, g: GridFunction) -> float:
    check_compatible(f, g)
    w = trapezoid_weights(f.domain, f.shape)
    return float(np.dot(w, f.flat * g.flat))


def l2_norm(f: GridFunction) -> float:
    return float(np.sqrt(max(l2_inner(f, f), 0.0)))


def l2_distance(f: GridFunction, g: GridFunction) -> float:
    return l2_norm(f - g)


def c1_distance(f: GridFunction, g: GridFunction) -> float:
    """Sup of value error plus sup of derivative error."""
    check_compatible(f, g)
    if f.derivative_values is None or g.derivative_values is None:
        raise PreconditionError("C1 distance needs derivative samples on both sides")
    return sup_distance(f, g) + float(np.max(np.abs(f.derivative_values - g.derivative_values)))


def distance(f: GridFunction, g: GridFunction, space_tag=None) -> float:
    """Metric of the space named by ``space_tag`` (default: ``f``'s tag)."""
    tag = SpaceTag(space_tag or f.space_tag)
    if tag is SpaceTag.L2:
        return l2_distance(f, g)
    if tag is SpaceTag.C1:
        return c1_distance(f, g)
    return sup_distance(f, g)


def norm(f: GridFunction, space_tag=None) -> float:
    return distance(f, f * 0.0, space_tag)


@dataclass(frozen=True, eq=False)
class CompactFamily:
    """A finite, parameterised set of grid functions standing in for a compact set."""

    parameter_grid: Sequence
    generator: Callable
    lipschitz_bound: float | None = None
    name: str = "family"
    _members: list = field(default=None, repr=False)

    def __post_init__(self):
        params = [tuple(np.atleast_1d(p).tolist()) for p in self.parameter_grid]
        if not params:
            raise ConfigurationError("a compact family needs at least one parameter")
        object.__setattr__(self, "parameter_grid", tuple(params))
        members = [self.generator(p) for p in params]
        first = members[0]
        for m in members[1:]:
            check_compatible(first, m)
        object.__setattr__(self, "_members", members)

    def __len__(self):
        return len(self.parameter_grid)

    @property
    def domain(self) -> Domain:
        return self._members[0].domain

    @property
    def shape(self) -> tuple:
        return self._members[0].shape


def family_members(family: CompactFamily) -> list:
    return list(family._members)


def product_grid(*axes) -> list:
    """Cartesian product of per-coordinate parameter values."""
    return [tuple(p) for p in itertools.product(*axes)]


def write_csv(f: GridFunction, path) -> None:
    coords = ["x", "y"][: f.domain.dim]
    header = coords + ["value"] + (["derivative"] if f.derivative_values is not None else [])
    pts = f.points()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        deriv = None if f.derivative_values is None else f.derivative_values.ravel()
        for j, p in enumerate(pts):
            row = [repr(float(c)) for c in p] + [repr(float(f.flat[j]))]
            if deriv is not None:
                row.append(repr(float(deriv[j])))
            writer.writerow(row)


def read_csv(path, space_tag=None) -> GridFunction:
    """Inverse of :func:`write_csv`; bounds and node counts come from the coordinates."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = np.array([[float(v) for v in r] for r in reader])
    dim = 2 if "y" in header else 1
    coords = rows[:, :dim]
    shape = tuple(len(np.unique(coords[:, a])) for a in range(dim))
    bounds = tuple((coords[:, a].min(), coords[:, a].max()) for a in range(dim))
    values = rows[:, dim]
    deriv = rows[:, dim + 1] if "derivative" in header else None
    if space_tag is None:
        space_tag = SpaceTag.C1 if deriv is not None else SpaceTag.CONTINUOUS
    return GridFunction(Domain(dim, bounds), shape, values, space_tag, deriv)
