"""Encoder-decoder architectures ``D^Y o phi o E^X`` and their fitting.

The latent map is fitted on the ball ``B_n = {|x| <= r(n)}`` with
``r(n) = |E^X(f0)| + n L^X``, to the targets ``E^Y(G(D^X(x)))``. The
training inputs are the encoder images of a training family plus seeded
jitter, all clipped to ``B_n``.
"""

from __future__ import annotations

import csv
import json
import os
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .approximator import (
    DEFAULT_RIDGE,
    FitRegion,
    LatentFamily,
    LatentMap,
    fit_kernel_ridge,
    fit_polynomial,
    monomial_count,
    read_latent_csv,
    total_degree_exponents,
    write_latent_csv,
)
from .codec.base import CodecKind, Decoder, Encoder, decoder_lipschitz
from .codec.basis import basis_encoder
from .codec.frames import FrameSystem, frame_decoder, frame_encoder
from .codec.sampling import DEFAULT_NODES, sampling_decoder, sampling_encoder
from .covering import Covering, PartitionOfUnity, partition_of_unity
from .errors import ConfigurationError, ParameterError, ShapeError
from .funcspace import CompactFamily, Domain, GridFunction, SpaceTag, family_members

POLYNOMIAL_MAX_DIM = 6
JITTER_SCALE = 0.05
JITTER_WEIGHT = 1e-3
FAILURE_FACTOR = 10.0


class FitWarning(UserWarning):
    """The latent residual missed its target by more than the tolerated factor."""


@dataclass(frozen=True)
class OperatorSpec:
    """A deterministic operator between grid-function spaces."""

    apply: Callable
    input_space: SpaceTag = SpaceTag.CONTINUOUS
    output_space: SpaceTag = SpaceTag.CONTINUOUS
    name: str = "G"

    def __call__(self, f: GridFunction) -> GridFunction:
        return self.apply(f)


def identity_operator() -> OperatorSpec:
    return OperatorSpec(lambda f: f, name="Identity")


def zero_operator() -> OperatorSpec:
    return OperatorSpec(lambda f: f * 0.0, name="Zero")


@dataclass(frozen=True)
class FitConfig:
    """Settings for one latent fit.

    ``family="auto"`` picks polynomials when a degree is given or the
    latent input dimension is at most 6, kernel ridge otherwise.
    ``n_jitter=None`` chooses enough jitter points to make the polynomial
    system overdetermined.
    """

    n: int
    anchor: GridFunction | None = None
    degree: int | None = None
    family: str = "auto"
    ridge: float = DEFAULT_RIDGE
    bandwidth: float | None = None
    n_jitter: int | None = None
    jitter_scale: float = JITTER_SCALE
    jitter_weight: float = JITTER_WEIGHT
    seed: int = 0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"n must be a positive integer, got {self.n}")
        if self.family not in ("auto", "polynomial", "kernel_ridge"):
            raise ParameterError(f"unknown approximator family {self.family!r}")
        if self.ridge < 0 or self.jitter_scale < 0:
            raise ParameterError("ridge and jitter scale must be nonnegative")
        if not self.jitter_weight > 0:
            raise ParameterError("jitter weight must be positive")

    def resolved_family(self, in_dim: int) -> LatentFamily:
        if self.family == "polynomial":
            return LatentFamily.POLYNOMIAL
        if self.family == "kernel_ridge":
            return LatentFamily.KERNEL_RIDGE
        if self.degree is not None or in_dim <= POLYNOMIAL_MAX_DIM:
            return LatentFamily.POLYNOMIAL
        return LatentFamily.KERNEL_RIDGE


@dataclass(frozen=True)
class FitReport:
    residual: float
    target: float
    meets_target: bool
    warning: str | None
    radius: float
    n_train: int
    n_jitter: int
    seed: int = 0


@dataclass(frozen=True, eq=False)
class Architecture:
    encoder: Encoder
    latent: LatentMap
    decoder: Decoder
    fit_report: FitReport | None = None
    name: str = "architecture"
    n: int = 0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.encoder.out_dim != self.latent.in_dim:
            raise ShapeError(f"encoder gives {self.encoder.out_dim} values, latent expects {self.latent.in_dim}")
        if self.latent.out_dim != self.decoder.in_dim:
            raise ShapeError(f"latent gives {self.latent.out_dim} values, decoder expects {self.decoder.in_dim}")

    def __call__(self, f: GridFunction) -> GridFunction:
        return apply_architecture(self, f)


def _coef_norm(x, kind: str) -> float:
    x = np.asarray(x, dtype=float)
    return float(np.abs(x).max()) if kind == "linf" else float(np.linalg.norm(x))


def fit_radius(enc: Encoder, n: int, anchor: GridFunction | None = None) -> float:
    """``r(n) = |E(f0)| + n L``, with ``f0 = 0`` unless an anchor is given."""
    base = 0.0 if anchor is None else _coef_norm(enc.apply(anchor), enc.coef_norm)
    r = base + n * enc.lipschitz_estimate
    if not r > 0:
        raise ConfigurationError("fit radius must be positive")
    return r


def _jitter(rng, centers: np.ndarray, count: int, sigma: float, region: FitRegion) -> np.ndarray:
    if count == 0:
        return np.empty((0, centers.shape[1]))
    base = centers[np.arange(count) % centers.shape[0]]
    return region.clip(base + sigma * rng.standard_normal(base.shape))


def _default_jitter(cfg: FitConfig, family: LatentFamily, in_dim: int, n_train: int) -> int:
    if cfg.n_jitter is not None:
        return int(cfg.n_jitter)
    if family is LatentFamily.POLYNOMIAL:
        return max(2 * monomial_count(in_dim, cfg.degree if cfg.degree is not None else 1) - n_train, n_train)
    return n_train


def latent_targets(G: OperatorSpec, enc_Y: Encoder, dec_X: Decoder, xs: np.ndarray) -> np.ndarray:
    """``E^Y(G(D^X(x)))`` for each row of ``xs``."""
    return np.stack([enc_Y.apply(G(dec_X.apply(x))) for x in xs])


def fit_architecture(
    G: OperatorSpec,
    enc: Encoder,
    dec_Y: Decoder,
    enc_Y: Encoder,
    dec_X: Decoder,
    cfg: FitConfig,
    train_family: CompactFamily,
    name: str = "architecture",
) -> Architecture:
    """Fit ``phi_n`` to ``E^Y o G o D^X`` on the ball ``B_n`` and assemble the architecture."""
    if enc.out_dim != dec_X.in_dim:
        raise ShapeError("input encoder and input decoder use different latent sizes")
    if enc_Y.out_dim != dec_Y.in_dim:
        raise ShapeError("output encoder and output decoder use different latent sizes")
    members = family_members(train_family)
    if not members:
        raise ConfigurationError("training family is empty")
    n = int(cfg.n)
    family = cfg.resolved_family(enc.out_dim)
    radius = fit_radius(enc, n, cfg.anchor)
    region = FitRegion(np.zeros(enc.out_dim), radius, enc.coef_norm)
    images = region.clip(enc.apply_many(members))
    rng = np.random.default_rng(cfg.seed)
    n_jit = _default_jitter(cfg, family, enc.out_dim, len(members))
    xs = np.vstack([images, _jitter(rng, images, n_jit, cfg.jitter_scale * radius, region)])
    ys = latent_targets(G, enc_Y, dec_X, xs)
    # family images carry full weight; jitter keeps phi tame on the rest of B_n
    weights = np.concatenate([np.ones(len(images)), np.full(n_jit, cfg.jitter_weight)])
    if family is LatentFamily.POLYNOMIAL:
        degree = 1 if cfg.degree is None else int(cfg.degree)
        phi = fit_polynomial(xs, degree, region, cfg.ridge, targets=ys, weights=weights)
    else:
        bandwidth = cfg.bandwidth if cfg.bandwidth is not None else 0.5 * radius
        phi = fit_kernel_ridge(xs, bandwidth, max(cfg.ridge, 1e-12), region, targets=ys, weights=weights)

    # residual in the output coefficient norm, compared with 1/(n L^Y)
    pred = phi.evaluate_many(xs)
    norm_y = dec_Y.coef_norm
    residual = max(_coef_norm(p - y, norm_y) for p, y in zip(pred, ys))
    target = 1.0 / (n * dec_Y.lipschitz_estimate)
    note = None
    if residual > FAILURE_FACTOR * target:
        note = f"latent residual {residual:.3g} exceeds {FAILURE_FACTOR:g}x target {target:.3g}"
        warnings.warn(note, FitWarning, stacklevel=2)
    report = FitReport(residual, target, residual <= target, note, radius, len(members), n_jit, cfg.seed)
    return Architecture(enc, phi, dec_Y, report, name, n, {"operator": G.name})


def apply_with_flag(arch: Architecture, f: GridFunction):
    """Return ``(D(phi(E f)), extrapolated)``."""
    x = arch.encoder.apply(f)
    out = arch.decoder.apply(arch.latent.evaluate_many(x[None, :])[0])
    return out, bool(arch.latent.extrapolates(x)[0])


def apply_architecture(arch: Architecture, f: GridFunction) -> GridFunction:
    return apply_with_flag(arch, f)[0]


@dataclass(frozen=True, eq=False)
class ComposedArchitecture:
    """``outer o inner`` for two fitted architectures."""

    outer: Architecture
    inner: Architecture

    def __call__(self, f: GridFunction) -> GridFunction:
        return apply_architecture(self.outer, apply_architecture(self.inner, f))


def compose(outer: Architecture, inner: Architecture) -> ComposedArchitecture:
    if inner.decoder.domain != outer.encoder.domain or inner.decoder.shape != outer.encoder.shape:
        raise ShapeError("inner output grid does not match outer input grid")
    return ComposedArchitecture(outer, inner)


def dense_decoder(atoms, space_tag=None) -> Decoder:
    """``mu -> sum_i mu_i v_i`` for arbitrary atoms ``v_i``."""
    if isinstance(atoms, Decoder):
        return atoms
    atoms = list(atoms)
    if not atoms:
        raise ShapeError("at least one atom required")
    first = atoms[0]
    tag = SpaceTag(space_tag) if space_tag is not None else first.space_tag
    mat = np.stack([a.flat for a in atoms])
    if any(a.domain != first.domain or a.shape != first.shape for a in atoms):
        raise ShapeError("atoms live on different grids")
    return Decoder(CodecKind.DENSE, mat, first.domain, first.shape, tag,
                   decoder_lipschitz(mat, first.domain, first.shape, tag))


def stack_latent(maps) -> LatentMap:
    """Concatenate scalar (or vector) latent maps sharing inputs into one map."""
    if isinstance(maps, LatentMap):
        return maps
    maps = list(maps)
    if not maps:
        raise ShapeError("empty latent stack")
    first = maps[0]
    if any(m.in_dim != first.in_dim for m in maps):
        raise ShapeError("latent maps take inputs of different dimension")
    if any(m.family is not first.family or m.fit_region != first.fit_region for m in maps):
        raise ConfigurationError("stacked latent maps must share family and fit region")
    if first.family is LatentFamily.POLYNOMIAL:
        degree = max(m.degree for m in maps)
        exps = total_degree_exponents(first.in_dim, degree)
        blocks = []
        for m in maps:
            c = np.zeros((exps.shape[0], m.out_dim))
            c[: m.coefficients.shape[0]] = m.coefficients  # graded order: lower degrees are a prefix
            blocks.append(c)
        coef = np.hstack(blocks)
        return LatentMap(first.family, first.in_dim, coef.shape[1], coef, first.fit_region,
                         max(m.fit_residual for m in maps), degree, exps)
    if any(m.bandwidth != first.bandwidth or not np.array_equal(m.train_x, first.train_x) for m in maps):
        raise ConfigurationError("stacked kernel maps must share nodes and bandwidth")
    coef = np.hstack([m.coefficients for m in maps])
    return LatentMap(first.family, first.in_dim, coef.shape[1], coef, first.fit_region,
                     max(m.fit_residual for m in maps), bandwidth=first.bandwidth, train_x=first.train_x)


def _latent_or_identity(phi, enc: Encoder, dec: Decoder) -> LatentMap:
    if phi is None:
        if enc.out_dim != dec.in_dim:
            raise ShapeError("no latent map given and encoder/decoder sizes differ")
        return LatentMap.identity(enc.out_dim, FitRegion(np.zeros(enc.out_dim), 1.0, enc.coef_norm))
    return stack_latent(phi)


def classical_deeponet(
    points: Covering,
    pou: PartitionOfUnity | None = None,
    atoms=None,
    phi=None,
    shape=DEFAULT_NODES,
) -> Architecture:
    """Sampling encoder at the covering points, dense decoder over ``atoms``.

    Without atoms the partition of unity itself is used, so with the
    identity latent map the architecture is the sampling identity.
    """
    enc = sampling_encoder(points, shape)
    if atoms is None:
        dec = sampling_decoder(pou or partition_of_unity(points), shape)
    else:
        dec = dense_decoder(atoms)
    return Architecture(enc, _latent_or_identity(phi, enc, dec), dec, name="classical_deeponet",
                        n=int(round(1.0 / points.epsilon)))


def schauder_deeponet(basis_spec_X, atoms, phi=None, n: int | None = None,
                      domain: Domain | None = None, shape=DEFAULT_NODES) -> Architecture:
    """Basis-coefficient encoder, dense decoder."""
    dec = dense_decoder(atoms)
    n = dec.in_dim if n is None else int(n)
    enc = basis_encoder(basis_spec_X, n, domain or dec.domain, shape)
    return Architecture(enc, _latent_or_identity(phi, enc, dec), dec, name="schauder_deeponet", n=n)


def frame_architecture(fs_X: FrameSystem, fs_Y: FrameSystem, phi=None) -> Architecture:
    """Dual-frame analysis on the input side, frame synthesis on the output side."""
    enc, dec = frame_encoder(fs_X), frame_decoder(fs_Y)
    return Architecture(enc, _latent_or_identity(phi, enc, dec), dec, name="frame_architecture", n=fs_X.size)


def basisonet(codec_X, codec_Y, phi=None) -> Architecture:
    """Dense Hilbert codecs on both sides; each codec is ``(encoder, decoder, ...)``."""
    enc, dec = codec_X[0], codec_Y[1]
    return Architecture(enc, _latent_or_identity(phi, enc, dec), dec, name="basisonet", n=enc.out_dim)


def refit(arch: Architecture, G: OperatorSpec, enc_Y: Encoder, dec_X: Decoder, cfg: FitConfig,
          train_family: CompactFamily) -> Architecture:
    """Fit a fresh latent map for an assembled architecture's codecs."""
    return fit_architecture(G, arch.encoder, arch.decoder, enc_Y, dec_X, cfg, train_family, arch.name)


# serialization -----------------------------------------------------------

def _write_matrix(path, mat):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        for row in np.atleast_2d(mat):
            w.writerow([repr(float(v)) for v in row])


def _read_matrix(path) -> np.ndarray:
    with open(path, newline="") as fh:
        return np.array([[float(v) for v in row] for row in csv.reader(fh)])


def save_architecture(arch: Architecture, directory) -> None:
    """Write ``manifest.txt``, ``encoder.csv``, ``decoder.csv`` and ``latent.csv``."""
    os.makedirs(directory, exist_ok=True)
    enc, dec, rep = arch.encoder, arch.decoder, arch.fit_report
    lines = {
        "name": arch.name,
        "n": arch.n,
        "encoder_kind": enc.kind.value,
        "encoder_accepts": ",".join(sorted(t.value for t in enc.accepts)),
        "encoder_lipschitz": repr(enc.lipschitz_estimate),
        "decoder_kind": dec.kind.value,
        "decoder_space": dec.space_tag.value,
        "decoder_lipschitz": repr(dec.lipschitz_estimate),
        "domain": json.dumps([list(b) for b in enc.domain.bounds]),
        "shape": ",".join(str(s) for s in enc.shape),
        "latent_family": arch.latent.family.value,
        "degree": arch.latent.degree if arch.latent.degree is not None else "",
    }
    if rep is not None:
        lines.update(radius=repr(rep.radius), residual=repr(rep.residual), target=repr(rep.target),
                     meets_target=rep.meets_target, seed=rep.seed, n_train=rep.n_train, n_jitter=rep.n_jitter)
    lines.update({f"meta_{k}": v for k, v in sorted(arch.meta.items())})
    with open(os.path.join(directory, "manifest.txt"), "w") as fh:
        fh.writelines(f"{k}={v}\n" for k, v in lines.items())
    _write_matrix(os.path.join(directory, "encoder.csv"), enc.matrix)
    _write_matrix(os.path.join(directory, "decoder.csv"), dec.atom_matrix)
    write_latent_csv(arch.latent, os.path.join(directory, "latent.csv"))


def load_architecture(directory) -> Architecture:
    from .codec.base import parse_descriptor

    with open(os.path.join(directory, "manifest.txt")) as fh:
        man = parse_descriptor(fh.read())
    domain = Domain(len(json.loads(man["domain"])), tuple(tuple(b) for b in json.loads(man["domain"])))
    shape = tuple(int(s) for s in man["shape"].split(","))
    accepts = frozenset(SpaceTag(t) for t in man["encoder_accepts"].split(","))
    enc = Encoder(CodecKind(man["encoder_kind"]), _read_matrix(os.path.join(directory, "encoder.csv")),
                  domain, shape, accepts, float(man["encoder_lipschitz"]))
    dec = Decoder(CodecKind(man["decoder_kind"]), _read_matrix(os.path.join(directory, "decoder.csv")),
                  domain, shape, SpaceTag(man["decoder_space"]), float(man["decoder_lipschitz"]))
    phi = read_latent_csv(os.path.join(directory, "latent.csv"))
    rep = None
    if "residual" in man:
        rep = FitReport(float(man["residual"]), float(man["target"]), man["meets_target"] == "True", None,
                        float(man["radius"]), int(man["n_train"]), int(man["n_jitter"]), int(man["seed"]))
    meta = {k[5:]: v for k, v in man.items() if k.startswith("meta_")}
    return Architecture(enc, phi, dec, rep, man["name"], int(man["n"]), meta)


def sup_error(arch, G: OperatorSpec, members, space_tag=None) -> float:
    """Largest distance ``d_Y(G f, G_n f)`` over the members."""
    from .funcspace import distance

    return max(distance(G(f), arch(f), space_tag) for f in members)

