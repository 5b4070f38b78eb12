"""Canonical operators used to exercise the architectures."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .._backend import kernels
from ..architecture import OperatorSpec
from ..errors import ConditioningError, ShapeError, UnsupportedDimensionError
from ..funcspace import Domain, GridFunction, SpaceTag, grid_axes, interpolation_matrix

POISSON_RESIDUAL_TOL = 1e-10


class OperatorName(str, enum.Enum):
    ANTIDERIVATIVE = "Antiderivative"
    POISSON = "Poisson1D"
    SIN = "PointwiseSin"


@dataclass(frozen=True)
class CanonicalOperator:
    """``name`` plus the grid it acts on; ``fd_nodes`` sets a separate Poisson grid."""

    name: OperatorName
    domain: Domain = Domain.unit(1)
    shape: tuple = (257,)
    fd_nodes: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "name", OperatorName(self.name))
        object.__setattr__(self, "shape", tuple(np.atleast_1d(self.shape).astype(int).tolist()))
        if self.name is not OperatorName.SIN and self.domain.dim != 1:
            raise UnsupportedDimensionError(f"{self.name.value} is implemented on intervals")

    @property
    def linear(self) -> bool:
        return self.name is not OperatorName.SIN

    def spec(self) -> OperatorSpec:
        return OperatorSpec(lambda f: canonical_apply(self, f), SpaceTag.CONTINUOUS, SpaceTag.CONTINUOUS, self.name.value)

    def __call__(self, f: GridFunction) -> GridFunction:
        return canonical_apply(self, f)


def _output_tag(f: GridFunction) -> SpaceTag:
    return SpaceTag.CONTINUOUS if f.space_tag is SpaceTag.C1 else f.space_tag


def antiderivative(f: GridFunction) -> GridFunction:
    """``y -> int_a^y f`` by the cumulative trapezoid rule on the grid."""
    h = float(f.spacing[0])
    vals = kernels.cumulative_trapezoid(np.ascontiguousarray(f.flat[None, :]), h)[0]
    return GridFunction(f.domain, f.shape, vals, _output_tag(f))


def poisson_residual(u: np.ndarray, rhs: np.ndarray, h: float) -> float:
    """Max-norm residual of the scaled system ``2u_i - u_{i-1} - u_{i+1} = h^2 f_i``."""
    u, rhs = np.asarray(u, dtype=float), np.asarray(rhs, dtype=float)
    return float(np.abs(2 * u[1:-1] - u[:-2] - u[2:] - h * h * rhs[1:-1]).max())


def poisson_solve(rhs: np.ndarray, h: float) -> np.ndarray:
    """Solve ``-u'' = f`` with zero boundary values by the 3-point stencil.

    ``rhs`` holds ``f`` at all grid nodes including the boundary; the
    returned array includes the zero boundary values.
    """
    interior = np.asarray(rhs[1:-1], dtype=float)
    m = interior.size
    if m == 0:
        return np.zeros_like(rhs, dtype=float)
    ab = np.empty((3, m))
    ab[0] = -1.0
    ab[1] = 2.0
    ab[2] = -1.0
    u = scipy.linalg.solve_banded((1, 1), ab, interior * h * h)
    full = np.concatenate([[0.0], u, [0.0]])
    if poisson_residual(full, rhs, h) > POISSON_RESIDUAL_TOL:
        raise ConditioningError("tridiagonal Poisson solve lost accuracy")
    return full


def poisson(f: GridFunction, fd_nodes: int | None = None) -> GridFunction:
    if fd_nodes is None or fd_nodes == f.shape[0]:
        u = poisson_solve(f.flat, float(f.spacing[0]))
        return GridFunction(f.domain, f.shape, u, _output_tag(f))
    (xf,) = grid_axes(f.domain, fd_nodes)
    rhs = interpolation_matrix(f.domain, f.shape, xf[:, None]) @ f.flat
    u = poisson_solve(rhs, float(xf[1] - xf[0]))
    (x,) = grid_axes(f.domain, f.shape)
    back = interpolation_matrix(f.domain, (fd_nodes,), x[:, None]) @ u
    return GridFunction(f.domain, f.shape, back, _output_tag(f))


def canonical_apply(op: CanonicalOperator, f: GridFunction) -> GridFunction:
    if f.domain != op.domain or f.shape != op.shape:
        raise ShapeError(f"{op.name.value} acts on grid {op.shape}, got {f.shape}")
    if op.name is OperatorName.ANTIDERIVATIVE:
        return antiderivative(f)
    if op.name is OperatorName.POISSON:
        return poisson(f, op.fd_nodes)
    return GridFunction(f.domain, f.shape, np.sin(f.values), _output_tag(f))


def compose_operators(outer: OperatorSpec, inner: OperatorSpec) -> OperatorSpec:
    return OperatorSpec(lambda f: outer(inner(f)), inner.input_space, outer.output_space,
                        f"{outer.name}o{inner.name}")
