"""Encoder/decoder families and the identity approximators they induce."""

from .base import (
    CodecKind,
    Decoder,
    Encoder,
    IdentityApproximator,
    descriptor,
    operator_norm,
    parse_descriptor,
)
from .basis import BasisSpec, basis_decoder, basis_encoder, basis_identity
from .dense import (
    DenseSubstitution,
    auxiliary_encoder,
    budgeted_substitutes,
    dense_decoder_normed,
    dense_substitution_codec,
    range_coefficient_functionals,
    smooth_perturber,
    substitution_gap,
)
from .frames import (
    FrameSystem,
    build_frame,
    frame_decoder,
    frame_encoder,
    frame_identity,
    reconstruction_error,
    with_dual,
    write_frame_csv,
)
from .sampling import (
    DEFAULT_NODES,
    C1SamplingIdentity,
    c1_sampling_identity,
    sampling_decoder,
    sampling_encoder,
    sampling_identity,
)
from .witness import Witness, dyadic_sequence, encoder_divergence_witness, smooth_bump

__all__ = [name for name in dir() if not name.startswith("_")]
