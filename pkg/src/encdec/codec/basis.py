"""Schauder-basis encoders and decoders: Faber-Schauder, sine and Legendre."""

from __future__ import annotations

import enum

import numpy as np
from numpy.polynomial import legendre

from ..errors import ConfigurationError, ParameterError, UnsupportedDimensionError
from ..funcspace import Domain, SpaceTag, grid_axes, interpolation_matrix, trapezoid_weights
from .base import (
    L2_TAGS,
    SUP_TAGS,
    CodecKind,
    Decoder,
    Encoder,
    IdentityApproximator,
    decoder_lipschitz,
    encoder_lipschitz,
)
from .sampling import DEFAULT_NODES


class BasisSpec(str, enum.Enum):
    FABER_SCHAUDER = "FaberSchauder"
    SINE = "SineONB"
    LEGENDRE = "LegendreONB"

    @property
    def space_tag(self) -> SpaceTag:
        return SpaceTag.CONTINUOUS if self is BasisSpec.FABER_SCHAUDER else SpaceTag.L2

    @property
    def accepts(self) -> frozenset:
        return SUP_TAGS if self is BasisSpec.FABER_SCHAUDER else L2_TAGS


def _interval(domain: Domain, shape):
    if domain.dim != 1:
        raise UnsupportedDimensionError("basis codecs are implemented on intervals")
    n_nodes = shape if np.isscalar(shape) else shape[0]
    return domain.bounds[0], int(n_nodes)


def faber_schauder_nodes(i: int) -> tuple:
    """Dyadic position of the ``i``-th (1-based) level-major Faber-Schauder atom.

    Returns ``(left, mid, right)`` in unit coordinates; the first two atoms
    (constant and linear) have ``mid=None``.
    """
    if i < 1:
        raise ParameterError("atoms are indexed from 1")
    if i <= 2:
        return (0.0, None, 1.0)
    j = int(np.floor(np.log2(i - 2)))
    m = (i - 2) - 2**j
    half = 1.0 / 2 ** (j + 1)
    mid = (2 * m + 1) * half
    return (mid - half, mid, mid + half)


def faber_schauder_atoms(n: int, x_unit: np.ndarray) -> np.ndarray:
    """First ``n`` atoms on unit coordinates, one row each."""
    rows = []
    for i in range(1, n + 1):
        if i == 1:
            rows.append(np.ones_like(x_unit))
        elif i == 2:
            rows.append(x_unit.copy())
        else:
            left, mid, right = faber_schauder_nodes(i)
            half = mid - left
            rows.append(np.clip(1.0 - np.abs(x_unit - mid) / half, 0.0, None))
    return np.array(rows)


def faber_schauder_functionals(n: int) -> list:
    """Coefficient functionals as ``[(unit point, weight), ...]`` per atom.

    ``c_1 = f(0)``, ``c_2 = f(1) - f(0)``, and every hat reads the midpoint
    deviation ``f(mid) - (f(left) + f(right)) / 2``.
    """
    out = []
    for i in range(1, n + 1):
        if i == 1:
            out.append([(0.0, 1.0)])
        elif i == 2:
            out.append([(1.0, 1.0), (0.0, -1.0)])
        else:
            left, mid, right = faber_schauder_nodes(i)
            out.append([(mid, 1.0), (left, -0.5), (right, -0.5)])
    return out


def onb_atoms(spec: BasisSpec, n: int, domain: Domain, shape) -> np.ndarray:
    """Sampled orthonormal atoms, orthonormal in the discrete trapezoid product."""
    (lo, hi), n_nodes = _interval(domain, shape)
    (x,) = grid_axes(domain, n_nodes)
    length = hi - lo
    u = (x - lo) / length
    if spec is BasisSpec.SINE:
        if n > n_nodes - 2:
            raise ConfigurationError(f"{n} sine modes are not resolved by {n_nodes} nodes")
        k = np.arange(1, n + 1)[:, None]
        return np.sqrt(2.0 / length) * np.sin(k * np.pi * u[None, :])
    if spec is BasisSpec.LEGENDRE:
        if n > n_nodes // 2:
            raise ConfigurationError(f"{n} Legendre modes on {n_nodes} nodes")
        raw = np.array(
            [np.sqrt((2 * k + 1) / length) * legendre.legval(2 * u - 1, np.eye(k + 1)[k]) for k in range(n)]
        )
        return _discrete_orthonormalize(raw, trapezoid_weights(domain, n_nodes))
    raise ConfigurationError(f"{spec} is not an orthonormal basis")


def _discrete_orthonormalize(rows: np.ndarray, w: np.ndarray) -> np.ndarray:
    # Cholesky of the discrete Gram matrix keeps the triangular (Gram-Schmidt) structure
    gram = (rows * w) @ rows.T
    chol = np.linalg.cholesky(gram)
    return np.linalg.solve(chol, rows)


def basis_encoder(spec, n: int, domain: Domain | None = None, shape=DEFAULT_NODES) -> Encoder:
    spec = BasisSpec(spec)
    if n < 1:
        raise ParameterError("basis codecs need n >= 1")
    domain = domain or Domain.unit(1)
    (lo, hi), n_nodes = _interval(domain, shape)
    shape = (n_nodes,)
    if spec is BasisSpec.FABER_SCHAUDER:
        mat = np.zeros((n, n_nodes))
        for i, terms in enumerate(faber_schauder_functionals(n)):
            pts = np.array([[lo + (hi - lo) * p] for p, _ in terms])
            weights = np.array([c for _, c in terms])
            mat[i] = weights @ interpolation_matrix(domain, shape, pts)
    else:
        mat = onb_atoms(spec, n, domain, shape) * trapezoid_weights(domain, shape)[None, :]
    return Encoder(
        CodecKind.BASIS, mat, domain, shape, spec.accepts,
        encoder_lipschitz(mat, domain, shape, spec.accepts), {"basis": spec.value, "n": n},
    )


def basis_decoder(spec, n: int, domain: Domain | None = None, shape=DEFAULT_NODES) -> Decoder:
    spec = BasisSpec(spec)
    if n < 1:
        raise ParameterError("basis codecs need n >= 1")
    domain = domain or Domain.unit(1)
    (lo, hi), n_nodes = _interval(domain, shape)
    shape = (n_nodes,)
    if spec is BasisSpec.FABER_SCHAUDER:
        (x,) = grid_axes(domain, n_nodes)
        atoms = faber_schauder_atoms(n, (x - lo) / (hi - lo))
    else:
        atoms = onb_atoms(spec, n, domain, shape)
    return Decoder(
        CodecKind.BASIS, atoms, domain, shape, spec.space_tag,
        decoder_lipschitz(atoms, domain, shape, spec.space_tag), {"basis": spec.value, "n": n},
    )


def basis_identity(spec, n: int, domain: Domain | None = None, shape=DEFAULT_NODES) -> IdentityApproximator:
    """Partial-sum projection ``f -> sum_{i<=n} c_i(f) b_i``."""
    return IdentityApproximator(basis_encoder(spec, n, domain, shape), basis_decoder(spec, n, domain, shape), n)
