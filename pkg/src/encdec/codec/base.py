"""Linear encoders, decoders and the identity approximators they compose to."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from ..errors import IllDefinedSamplingError, PreconditionError, ShapeError
from ..funcspace import Domain, GridFunction, SpaceTag, trapezoid_weights

SUP_TAGS = frozenset({SpaceTag.CONTINUOUS, SpaceTag.C1})
L2_TAGS = frozenset({SpaceTag.L2})


class CodecKind(str, enum.Enum):
    SAMPLING = "Sampling"
    BASIS = "Basis"
    FRAME = "Frame"
    DENSE = "Dense"
    AUXILIARY = "Auxiliary"


def coefficient_norm(tags) -> str:
    """Coefficient-space norm paired with a function-space norm."""
    return "l2" if SpaceTag.L2 in tags else "linf"


def operator_norm(matrix: np.ndarray, domain: Domain, shape, in_norm: str, out_norm: str) -> float:
    """Norm of a grid-discretised linear map between the named norms.

    ``sup``/``l2`` refer to grid functions (l2 with trapezoid weights),
    ``linf``/``l2c`` to plain coefficient vectors.
    """
    m = np.asarray(matrix, dtype=float)
    if in_norm == "sup" and out_norm in ("linf", "sup"):
        return float(np.abs(m).sum(axis=1).max())
    w = trapezoid_weights(domain, shape)
    if in_norm == "l2" and out_norm == "l2c":
        return float(np.linalg.norm(m / np.sqrt(w)[None, :], 2))
    if in_norm == "l2c" and out_norm == "l2":
        return float(np.linalg.norm(np.sqrt(w)[:, None] * m, 2))
    if in_norm == "l2" and out_norm == "l2":
        return float(np.linalg.norm(np.sqrt(w)[:, None] * m / np.sqrt(w)[None, :], 2))
    if in_norm == "linf" and out_norm == "sup":
        return float(np.abs(m).sum(axis=1).max())
    raise ValueError(f"unsupported norm pair {in_norm} -> {out_norm}")


@dataclass(frozen=True, eq=False)
class Encoder:
    """Linear map from grid functions to ``R^out_dim`` stored as a matrix."""

    kind: CodecKind
    matrix: np.ndarray
    domain: Domain
    shape: tuple
    accepts: frozenset
    lipschitz_estimate: float = 1.0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "shape", tuple(self.shape))
        if m.shape[1] != int(np.prod(self.shape)):
            raise ShapeError("encoder matrix does not match its grid")

    @property
    def out_dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def coef_norm(self) -> str:
        return coefficient_norm(self.accepts)

    def check(self, f: GridFunction) -> None:
        if f.space_tag not in self.accepts:
            if self.kind is CodecKind.SAMPLING or SpaceTag.L2 not in self.accepts:
                raise IllDefinedSamplingError(
                    f"{self.kind.value} encoder needs point evaluation; got a {f.space_tag.value} function"
                )
            raise PreconditionError(f"{self.kind.value} encoder expects {sorted(t.value for t in self.accepts)}")
        if f.domain != self.domain or f.shape != self.shape:
            raise ShapeError(f"encoder grid {self.shape} does not match function grid {f.shape}")

    def apply(self, f: GridFunction) -> np.ndarray:
        self.check(f)
        return self.matrix @ f.flat

    __call__ = apply

    def apply_many(self, functions) -> np.ndarray:
        for f in functions:
            self.check(f)
        return np.stack([f.flat for f in functions]) @ self.matrix.T


@dataclass(frozen=True, eq=False)
class Decoder:
    """Linear synthesis ``mu -> sum_i mu_i atom_i`` with atoms on a grid."""

    kind: CodecKind
    atom_matrix: np.ndarray
    domain: Domain
    shape: tuple
    space_tag: SpaceTag
    lipschitz_estimate: float = 1.0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        m = np.atleast_2d(np.array(self.atom_matrix, dtype=float))
        m.setflags(write=False)
        object.__setattr__(self, "atom_matrix", m)
        object.__setattr__(self, "shape", tuple(self.shape))
        object.__setattr__(self, "space_tag", SpaceTag(self.space_tag))
        if m.shape[1] != int(np.prod(self.shape)):
            raise ShapeError("decoder atoms do not match their grid")

    @property
    def in_dim(self) -> int:
        return self.atom_matrix.shape[0]

    @property
    def coef_norm(self) -> str:
        return coefficient_norm({self.space_tag})

    @property
    def atoms(self) -> list:
        return [GridFunction(self.domain, self.shape, row, self._atom_tag()) for row in self.atom_matrix]

    def _atom_tag(self):
        return SpaceTag.CONTINUOUS if self.space_tag is SpaceTag.C1 else self.space_tag

    def apply(self, mu) -> GridFunction:
        mu = np.asarray(mu, dtype=float).ravel()
        if mu.shape[0] != self.in_dim:
            raise ShapeError(f"decoder expects {self.in_dim} coefficients, got {mu.shape[0]}")
        return GridFunction(self.domain, self.shape, mu @ self.atom_matrix, self._atom_tag())

    __call__ = apply

    def apply_many(self, mus) -> np.ndarray:
        mus = np.atleast_2d(np.asarray(mus, dtype=float))
        if mus.shape[1] != self.in_dim:
            raise ShapeError(f"decoder expects {self.in_dim} coefficients, got {mus.shape[1]}")
        return mus @ self.atom_matrix


def decoder_lipschitz(atom_matrix, domain, shape, space_tag) -> float:
    if SpaceTag(space_tag) is SpaceTag.L2:
        return operator_norm(np.asarray(atom_matrix).T, domain, shape, "l2c", "l2")
    return operator_norm(np.asarray(atom_matrix).T, domain, shape, "linf", "sup")


def encoder_lipschitz(matrix, domain, shape, accepts) -> float:
    if SpaceTag.L2 in accepts:
        return operator_norm(matrix, domain, shape, "l2", "l2c")
    return operator_norm(matrix, domain, shape, "sup", "linf")


@dataclass(frozen=True, eq=False)
class IdentityApproximator:
    """``T_n = D_n o E_n``, a finite-rank surrogate for the identity."""

    encoder: Encoder
    decoder: Decoder
    n: int = 0

    def __post_init__(self):
        if self.encoder.out_dim != self.decoder.in_dim:
            raise ShapeError("encoder and decoder dimensions differ")

    def __call__(self, f: GridFunction) -> GridFunction:
        return self.decoder.apply(self.encoder.apply(f))

    @property
    def matrix(self) -> np.ndarray:
        """Grid-value matrix of ``T_n`` (N x N)."""
        return self.decoder.atom_matrix.T @ self.encoder.matrix


def descriptor(kind, n, **params) -> str:
    """Plain ``key=value`` block describing a codec."""
    lines = [f"kind={CodecKind(kind).value}", f"n={int(n)}"]
    lines += [f"{k}={params[k]}" for k in sorted(params)]
    return "\n".join(lines) + "\n"


def parse_descriptor(text: str) -> dict:
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out
