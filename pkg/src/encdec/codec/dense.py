"""Dense-set substitution: replace range atoms by nearby elements of a dense set.

Two constructions are provided. In a Hilbert space the substitutes ``v_i``
stand in for orthonormal atoms on both sides (``f -> sum <f, v_i> v_i``);
in a normed space only the decoder is substituted and the encoder reads
the coefficients of ``T_n f`` in the original range basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import ConfigurationError, ConstructionError, ParameterError, ShapeError
from ..funcspace import Domain, GridFunction, SpaceTag, grid_axes, l2_norm, trapezoid_weights
from .base import (
    L2_TAGS,
    CodecKind,
    Decoder,
    Encoder,
    IdentityApproximator,
    decoder_lipschitz,
    encoder_lipschitz,
    operator_norm,
)
from .basis import BasisSpec, onb_atoms
from .sampling import DEFAULT_NODES

RESCALE_MARGIN = 1.0 - 1e-9


def smooth_perturber(amplitude: float = 1.0, modes: int = 8) -> Callable:
    """Seeded rule producing a random smooth perturbation for atom ``i``."""

    def perturb(rng: np.random.Generator, i: int, reference: list) -> GridFunction:
        ref = reference[i]
        (x,) = grid_axes(ref.domain, ref.shape)
        lo, hi = ref.domain.bounds[0]
        u = (x - lo) / (hi - lo)
        coeffs = rng.normal(size=modes) / np.arange(1, modes + 1)
        vals = np.sin(np.pi * np.outer(np.arange(1, modes + 1), u)).T @ coeffs
        vals = vals + rng.normal() * u * (1.0 - u)
        return ref.with_values(amplitude * vals)

    return perturb


@dataclass(frozen=True, eq=False)
class DenseSubstitution:
    reference_atoms: list
    substitute_atoms: list
    budget: float

    @property
    def deviation(self) -> float:
        """``sum_i ||v_i - b_i||`` in L2."""
        return float(sum(l2_norm(v - b) for v, b in zip(self.substitute_atoms, self.reference_atoms)))


def dense_substitution_codec(
    n: int,
    reference=BasisSpec.SINE,
    perturber: Callable | None = None,
    seed: int = 0,
    domain: Domain | None = None,
    shape=DEFAULT_NODES,
):
    """Dense encoder/decoder pair ``f -> <f, v_i>``, ``mu -> sum mu_i v_i``.

    Substitutes satisfy ``sum_i ||v_i - b_i|| <= 1/(3n)``; perturbations
    that overshoot are rescaled onto the budget.
    """
    if int(n) != n or n < 1:
        raise ParameterError("n must be a positive integer")
    reference = BasisSpec(reference)
    if reference is BasisSpec.FABER_SCHAUDER:
        raise ConfigurationError("the Hilbert substitution needs an orthonormal reference basis")
    domain = domain or Domain.unit(1)
    rows = onb_atoms(reference, n, domain, shape)
    shape = (rows.shape[1],)
    refs = [GridFunction(domain, shape, r, SpaceTag.L2) for r in rows]
    budget = 1.0 / (3 * n)
    if perturber is None:
        deltas = [r * 0.0 for r in refs]
    else:
        rng = np.random.default_rng(seed)
        deltas = [perturber(rng, i, refs).with_tag(SpaceTag.L2) for i in range(n)]
    total = sum(l2_norm(d) for d in deltas)
    if total > budget:
        deltas = [d * (budget * RESCALE_MARGIN / total) for d in deltas]
    subs = [b + d for b, d in zip(refs, deltas)]
    sub = DenseSubstitution(refs, subs, budget)
    if sub.deviation > budget:
        raise ConstructionError(f"substitutes deviate by {sub.deviation:.3g} > budget {budget:.3g}")
    atoms = np.stack([v.flat for v in subs])
    mat = atoms * trapezoid_weights(domain, shape)[None, :]
    params = {"reference": reference.value, "seed": seed, "n": n}
    enc = Encoder(CodecKind.DENSE, mat, domain, shape, L2_TAGS, encoder_lipschitz(mat, domain, shape, L2_TAGS), params)
    dec = Decoder(CodecKind.DENSE, atoms, domain, shape, SpaceTag.L2, decoder_lipschitz(atoms, domain, shape, SpaceTag.L2), params)
    return enc, dec, sub


def range_coefficient_functionals(decoder: Decoder) -> np.ndarray:
    """Left inverse of the decoder on its range: coefficients of ``sum c_i b_i``."""
    return np.linalg.pinv(decoder.atom_matrix.T)


def auxiliary_encoder(base: IdentityApproximator, functionals=None) -> Encoder:
    """``f -> (c_1(T_n f), ..., c_k(T_n f))`` for range functionals ``c_i``."""
    if functionals is None:
        raise ConfigurationError("the auxiliary encoder needs the range coefficient functionals")
    func = np.asarray(functionals, dtype=float)
    if func.shape != (base.decoder.in_dim, base.decoder.atom_matrix.shape[1]):
        raise ShapeError("functionals must map grid values to one coefficient per range atom")
    enc = base.encoder
    mat = func @ base.matrix
    return Encoder(
        CodecKind.AUXILIARY, mat, enc.domain, enc.shape, enc.accepts,
        encoder_lipschitz(mat, enc.domain, enc.shape, enc.accepts), {"base": enc.kind.value},
    )


def _space_norms(base: IdentityApproximator):
    return ("l2", "l2") if SpaceTag.L2 in base.encoder.accepts else ("sup", "sup")


def substitution_gap(base: IdentityApproximator, aux: Encoder, substitutes) -> float:
    """Operator norm of ``T~_n - T_n`` in the base space's norm."""
    delta = np.stack([v.flat for v in substitutes]) - base.decoder.atom_matrix
    diff = delta.T @ aux.matrix
    in_norm, out_norm = _space_norms(base)
    return operator_norm(diff, base.encoder.domain, base.encoder.shape, in_norm, out_norm)


def budgeted_substitutes(base: IdentityApproximator, aux: Encoder, perturber: Callable, seed: int = 0) -> list:
    """Perturb the range atoms of ``base`` so that ``||T~_n - T_n|| <= 1/n``."""
    n = max(base.n, 1)
    refs = base.decoder.atoms
    rng = np.random.default_rng(seed)
    deltas = [perturber(rng, i, refs) for i in range(len(refs))]
    subs = [b + d for b, d in zip(refs, deltas)]
    gap = substitution_gap(base, aux, subs)
    if gap > 1.0 / n:
        scale = RESCALE_MARGIN / (n * gap)
        subs = [b + d * scale for b, d in zip(refs, deltas)]
    return subs


def dense_decoder_normed(substitutes, aux: Encoder, base: IdentityApproximator) -> Decoder:
    """``mu -> sum mu_i v_i`` with the proximity rule ``||T~_n - T_n|| <= 1/n`` enforced."""
    if len(substitutes) != base.decoder.in_dim:
        raise ShapeError("one substitute per range atom required")
    n = max(base.n, 1)
    gap = substitution_gap(base, aux, substitutes)
    if gap > 1.0 / n:
        raise ConstructionError(f"substitutes move T_n by {gap:.3g} > 1/n = {1.0 / n:.3g}")
    atoms = np.stack([v.flat for v in substitutes])
    dec = base.decoder
    return Decoder(
        CodecKind.DENSE, atoms, dec.domain, dec.shape, dec.space_tag,
        decoder_lipschitz(atoms, dec.domain, dec.shape, dec.space_tag), {"gap": gap, "n": n},
    )
