"""Sampling encoders, partition-of-unity decoders and the C1 variant."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..covering import Covering, PartitionOfUnity, build_epsilon_covering, partition_of_unity
from ..errors import ParameterError, PreconditionError, ShapeError, UnsupportedDimensionError
from ..funcspace import Domain, GridFunction, SpaceTag, interpolation_matrix
from .base import SUP_TAGS, CodecKind, Decoder, Encoder, IdentityApproximator, encoder_lipschitz

DEFAULT_NODES = 257


def sampling_encoder(cov: Covering, shape=DEFAULT_NODES) -> Encoder:
    """``f -> (f(y_1), ..., f(y_k))`` at the covering centers."""
    shape = _grid_shape(cov.domain, shape)
    mat = interpolation_matrix(cov.domain, shape, cov.centers)
    return Encoder(
        CodecKind.SAMPLING,
        mat,
        cov.domain,
        shape,
        SUP_TAGS,
        encoder_lipschitz(mat, cov.domain, shape, SUP_TAGS),
        {"epsilon": cov.epsilon, "k": cov.k},
    )


def sampling_decoder(pou: PartitionOfUnity, shape=DEFAULT_NODES) -> Decoder:
    """``mu -> sum_i mu_i P_i`` on the function grid.

    The P_i are nonnegative and sum to one, so the decoder is 1-Lipschitz
    from max-norm coefficients to sup-norm functions.
    """
    shape = _grid_shape(pou.domain, shape)
    atoms = pou.grid_matrix(shape).T
    return Decoder(
        CodecKind.SAMPLING,
        atoms,
        pou.domain,
        shape,
        SpaceTag.CONTINUOUS,
        1.0,
        {"epsilon": pou.covering.epsilon, "k": pou.k},
    )


def _grid_shape(domain: Domain, shape):
    if np.isscalar(shape):
        return (int(shape),) * domain.dim
    return tuple(int(s) for s in shape)


def _check_n(n):
    if int(n) != n or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n}")
    return int(n)


def sampling_identity(n: int, domain: Domain | None = None, shape=DEFAULT_NODES) -> IdentityApproximator:
    """``T_n f = sum_i f(y_i) P_i`` on a 1/n-covering."""
    n = _check_n(n)
    domain = domain or Domain.unit(1)
    cov = build_epsilon_covering(domain, 1.0 / n)
    pou = partition_of_unity(cov)
    return IdentityApproximator(sampling_encoder(cov, shape), sampling_decoder(pou, shape), n)


@dataclass(frozen=True, eq=False)
class C1SamplingIdentity:
    """``f -> f(0) + sum_i f'(y_i) int_0^y P_i`` on C1([a, b]).

    The derivative of the output is the sampling identity applied to f'.
    """

    n: int
    pou: PartitionOfUnity
    shape: tuple

    def __call__(self, f: GridFunction) -> GridFunction:
        if f.space_tag is not SpaceTag.C1 or f.derivative_values is None:
            raise PreconditionError("the C1 identity needs a C1 function with derivative samples")
        if f.shape != self.shape or f.domain != self.pou.domain:
            raise ShapeError("function grid does not match the operator grid")
        centers = self.pou.covering.centers
        slopes = interpolation_matrix(f.domain, f.shape, centers) @ f.derivative_values.ravel()
        anti = self.pou.antiderivative_at_nodes(self.shape[0])
        values = f.values.ravel()[0] + anti @ slopes
        deriv = self.pou.grid_matrix(self.shape) @ slopes
        return GridFunction(f.domain, f.shape, values, SpaceTag.C1, deriv)


def c1_sampling_identity(n: int, domain: Domain | None = None, shape=DEFAULT_NODES) -> C1SamplingIdentity:
    n = _check_n(n)
    domain = domain or Domain.unit(1)
    if domain.dim != 1:
        raise UnsupportedDimensionError("the C1 identity is defined on intervals only")
    pou = partition_of_unity(build_epsilon_covering(domain, 1.0 / n))
    return C1SamplingIdentity(n, pou, _grid_shape(domain, shape))
