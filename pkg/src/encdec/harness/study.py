"""Convergence studies: one fitted architecture per n, evaluated on several families."""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from ..architecture import FitConfig, FitWarning, OperatorSpec, apply_with_flag, fit_architecture
from ..codec import (
    BasisSpec,
    basis_decoder,
    basis_encoder,
    build_frame,
    c1_sampling_identity,
    dense_substitution_codec,
    frame_decoder,
    frame_encoder,
    sampling_identity,
    smooth_perturber,
)
from ..errors import ConfigurationError, ParameterError
from ..funcspace import CompactFamily, GridFunction, SpaceTag, distance, family_members
from ..codec.basis import onb_atoms
from ..funcspace import Domain

CODECS = ("sampling", "c1sampling", "faber", "sine", "legendre", "frame", "dense")
HEADER = ("arch_id", "n", "family", "sup_error", "latent_residual", "extrapolated", "wall_ms")


@dataclass(frozen=True)
class CodecPlan:
    """Named codec family; ``build(n)`` gives matched codecs for both sides."""

    name: str
    shape: int = 257
    seed: int = 0

    def __post_init__(self):
        if self.name not in CODECS:
            raise ConfigurationError(f"unknown codec {self.name!r}; choose from {', '.join(CODECS)}")

    @property
    def space_tag(self) -> SpaceTag:
        if self.name in ("sampling", "faber"):
            return SpaceTag.CONTINUOUS
        if self.name == "c1sampling":
            return SpaceTag.C1
        return SpaceTag.L2

    def build(self, n: int):
        """Return ``(encoder, decoder)``; used on both the input and output side."""
        if self.name == "sampling":
            t = sampling_identity(n, shape=self.shape)
            return t.encoder, t.decoder
        if self.name == "c1sampling":
            raise ConfigurationError("the C1 identity has no linear latent codec; use it with `identity` only")
        if self.name == "frame":
            fs = redundant_sine_frame(n, self.shape)
            return frame_encoder(fs), frame_decoder(fs)
        if self.name == "dense":
            enc, dec, _ = dense_substitution_codec(n, BasisSpec.SINE, smooth_perturber(), self.seed, shape=self.shape)
            return enc, dec
        spec = {"faber": BasisSpec.FABER_SCHAUDER, "sine": BasisSpec.SINE, "legendre": BasisSpec.LEGENDRE}[self.name]
        return basis_encoder(spec, n, shape=self.shape), basis_decoder(spec, n, shape=self.shape)

    def identity(self, n: int):
        if self.name == "c1sampling":
            return c1_sampling_identity(n, shape=self.shape)
        enc, dec = self.build(n)
        return lambda f: dec.apply(enc.apply(f))


def redundant_sine_frame(n: int, shape=257):
    """First ``n`` sine atoms plus the normalised sum of the first two: an overcomplete frame."""
    domain = Domain.unit(1)
    rows = onb_atoms(BasisSpec.SINE, n, domain, shape)
    extra = rows[:2].sum(axis=0) / np.sqrt(2.0) if n >= 2 else rows[0]
    atoms = [GridFunction(domain, (rows.shape[1],), r, SpaceTag.L2) for r in np.vstack([rows, extra])]
    return build_frame(atoms)


@dataclass(frozen=True)
class StudyRow:
    arch_id: str
    n: int
    family: str
    sup_error: float
    latent_residual: float
    extrapolated: int
    wall_ms: float = 0.0

    def cells(self) -> list:
        return [self.arch_id, str(self.n), self.family, repr(float(self.sup_error)),
                repr(float(self.latent_residual)), str(self.extrapolated), repr(float(self.wall_ms))]


@dataclass(frozen=True)
class StudyReport:
    rows: tuple
    config: dict = field(default_factory=dict)
    warnings: tuple = ()

    def errors(self, family: str, arch_id: str | None = None) -> list:
        return [r.sup_error for r in self.rows if r.family == family and (arch_id is None or r.arch_id == arch_id)]


def _check_n_list(n_list) -> list:
    n_list = [int(n) for n in n_list]
    if not n_list or any(n < 1 for n in n_list):
        raise ParameterError("n values must be positive")
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ParameterError("n values must increase strictly")
    return n_list


def _elapsed_ms(start: float, wall_clock: bool) -> float:
    return round((time.perf_counter() - start) * 1000.0, 3) if wall_clock else 0.0


def identity_study(plan: CodecPlan, n_list, families, wall_clock: bool = False) -> StudyReport:
    """Sup over each family of ``d(f, T_n f)`` in the codec's own metric."""
    n_list = _check_n_list(n_list)
    rows = []
    for n in n_list:
        start = time.perf_counter()
        t = plan.identity(n)
        for fam in families:
            err = max(distance(f, t(f), plan.space_tag) for f in family_members(fam))
            rows.append(StudyRow(f"identity-{plan.name}", n, fam.name, err, 0.0, 0, _elapsed_ms(start, wall_clock)))
    return StudyReport(tuple(rows), {"codec": plan.name, "n": ",".join(map(str, n_list))})


def convergence_study(
    G: OperatorSpec,
    plan: CodecPlan,
    n_list,
    train_family: CompactFamily,
    test_families=(),
    degree: int | None = 1,
    seed: int = 0,
    wall_clock: bool = False,
    arch_id: str | None = None,
    keep_architectures: bool = False,
):
    """Fit one architecture per ``n`` on ``train_family``; evaluate every family.

    The train family is always evaluated first; test families are never
    used for fitting.
    """
    n_list = _check_n_list(n_list)
    families = [train_family] + [f for f in test_families if f is not train_family]
    if any(len(f) == 0 for f in families):
        raise ConfigurationError("families must be nonempty")
    arch_id = arch_id or f"{plan.name}-{G.name}"
    rows, notes, archs = [], [], []
    for n in n_list:
        start = time.perf_counter()
        enc, dec = plan.build(n)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", FitWarning)
            arch = fit_architecture(G, enc, dec, enc, dec, FitConfig(n, degree=degree, seed=seed), train_family, arch_id)
        notes += [f"n={n}: {w.message}" for w in caught if issubclass(w.category, FitWarning)]
        archs.append(arch)
        for fam in families:
            err, extrap = 0.0, 0
            for f in family_members(fam):
                out, flag = apply_with_flag(arch, f)
                err = max(err, distance(G(f), out, plan.space_tag))
                extrap += int(flag)
            rows.append(StudyRow(arch_id, n, fam.name, err, arch.fit_report.residual, extrap,
                                 _elapsed_ms(start, wall_clock)))
    cfg = {"operator": G.name, "codec": plan.name, "n": ",".join(map(str, n_list)), "degree": degree,
           "seed": seed, "train_family": train_family.name,
           "test_families": ",".join(f.name for f in families[1:])}
    report = StudyReport(tuple(rows), cfg, tuple(notes))
    return (report, archs) if keep_architectures else report
