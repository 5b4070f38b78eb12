"""Encoder-decoder approximation of operators between function spaces.

Functions live on uniform grids (:mod:`encdec.funcspace`); encoders and
decoders (:mod:`encdec.codec`) compose to finite-rank identity
approximators; latent maps (:mod:`encdec.approximator`) close the loop in
:mod:`encdec.architecture`.
"""

from ._backend import BACKEND
from .approximator import FitRegion, LatentMap, evaluate_latent, fit_kernel_ridge, fit_polynomial
from .architecture import (
    Architecture,
    FitConfig,
    OperatorSpec,
    apply_architecture,
    basisonet,
    classical_deeponet,
    fit_architecture,
    frame_architecture,
    load_architecture,
    save_architecture,
    schauder_deeponet,
)
from .covering import Covering, PartitionOfUnity, build_epsilon_covering, partition_of_unity
from .funcspace import CompactFamily, Domain, GridFunction, SpaceTag, distance, evaluate, norm

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
