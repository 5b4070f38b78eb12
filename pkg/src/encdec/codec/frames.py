"""Finite frames in discretised L2: frame operator, canonical dual, codecs."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateFrameError, ShapeError
from ..funcspace import GridFunction, SpaceTag, check_compatible, trapezoid_weights
from .base import L2_TAGS, CodecKind, Decoder, Encoder, IdentityApproximator

EIG_CUTOFF = 1e-12


@dataclass(frozen=True, eq=False)
class FrameSystem:
    """Atoms, their Gram matrix, a dual frame and the frame bounds on the span."""

    atoms: list
    gram_matrix: np.ndarray
    dual_atoms: list
    bounds: tuple
    rank: int

    @property
    def size(self) -> int:
        return len(self.atoms)

    @property
    def domain(self):
        return self.atoms[0].domain

    @property
    def shape(self):
        return self.atoms[0].shape

    def atom_matrix(self) -> np.ndarray:
        return np.stack([a.flat for a in self.atoms])

    def dual_matrix(self) -> np.ndarray:
        return np.stack([a.flat for a in self.dual_atoms])


def _gram(rows: np.ndarray, w: np.ndarray) -> np.ndarray:
    g = (rows * w) @ rows.T
    return 0.5 * (g + g.T)


def build_frame(atoms, cutoff: float = EIG_CUTOFF) -> FrameSystem:
    """Canonical dual via the Gram pseudoinverse.

    With synthesis ``F mu = sum mu_i f_i`` the frame operator is ``F F*``
    and the Gram matrix ``F* F``; they share their nonzero spectrum, so the
    bounds on the span are the extreme positive Gram eigenvalues and the
    canonical dual atoms are ``f*_i = sum_j (G^+)_{ji} f_j``.
    """
    atoms = [a if a.space_tag is SpaceTag.L2 else a.with_tag(SpaceTag.L2) for a in atoms]
    if not atoms:
        raise DegenerateFrameError("a frame needs at least one atom")
    for a in atoms[1:]:
        check_compatible(atoms[0], a)
    rows = np.stack([a.flat for a in atoms])
    w = trapezoid_weights(atoms[0].domain, atoms[0].shape)
    gram = _gram(rows, w)
    evals, evecs = np.linalg.eigh(gram)
    top = evals.max()
    if not top > 0:
        raise DegenerateFrameError("all atoms vanish")
    keep = evals > cutoff * top
    pinv = (evecs[:, keep] / evals[keep]) @ evecs[:, keep].T
    dual_rows = pinv @ rows
    duals = [GridFunction(a.domain, a.shape, r, SpaceTag.L2) for a, r in zip(atoms, dual_rows)]
    gram.setflags(write=False)
    return FrameSystem(atoms, gram, duals, (float(evals[keep].min()), float(top)), int(keep.sum()))


def reconstruction_error(fs: FrameSystem, dual_atoms=None) -> float:
    """Largest L2 error of ``sum_i <f_j, f*_i> f_i - f_j`` over the atoms."""
    rows = fs.atom_matrix()
    duals = fs.dual_matrix() if dual_atoms is None else np.stack([d.flat for d in dual_atoms])
    w = trapezoid_weights(fs.domain, fs.shape)
    coeffs = (rows * w) @ duals.T
    err = coeffs @ rows - rows
    return float(np.sqrt(((err**2) * w).sum(axis=1)).max())


def with_dual(fs: FrameSystem, dual_atoms, tol: float = 1e-8) -> FrameSystem:
    """Swap in a user-supplied dual after checking reconstruction on the span."""
    if len(dual_atoms) != fs.size:
        raise ShapeError("one dual atom per frame atom required")
    err = reconstruction_error(fs, dual_atoms)
    if err > tol:
        raise DegenerateFrameError(f"supplied atoms are not a dual frame (error {err:.3g})")
    duals = [d if d.space_tag is SpaceTag.L2 else d.with_tag(SpaceTag.L2) for d in dual_atoms]
    return FrameSystem(fs.atoms, fs.gram_matrix, duals, fs.bounds, fs.rank)


def frame_encoder(fs: FrameSystem) -> Encoder:
    """``f -> (<f, f*_1>, ..., <f, f*_n>)``; Lipschitz ``1/sqrt(A)`` in L2."""
    w = trapezoid_weights(fs.domain, fs.shape)
    mat = fs.dual_matrix() * w[None, :]
    return Encoder(
        CodecKind.FRAME, mat, fs.domain, fs.shape, L2_TAGS,
        float(np.sqrt(1.0 / fs.bounds[0])), {"atoms": fs.size},
    )


def frame_decoder(fs: FrameSystem) -> Decoder:
    """``mu -> sum_i mu_i f_i``; Lipschitz ``sqrt(B)``."""
    return Decoder(
        CodecKind.FRAME, fs.atom_matrix(), fs.domain, fs.shape, SpaceTag.L2,
        float(np.sqrt(fs.bounds[1])), {"atoms": fs.size},
    )


def frame_identity(fs: FrameSystem) -> IdentityApproximator:
    return IdentityApproximator(frame_encoder(fs), frame_decoder(fs), fs.size)


def write_frame_csv(fs: FrameSystem, gram_path, bounds_path=None) -> None:
    with open(gram_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"f{j}" for j in range(fs.size)])
        for row in fs.gram_matrix:
            writer.writerow([repr(float(v)) for v in row])
    if bounds_path is not None:
        with open(bounds_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["atoms", "rank", "lower_bound", "upper_bound"])
            writer.writerow([fs.size, fs.rank, repr(fs.bounds[0]), repr(fs.bounds[1])])
