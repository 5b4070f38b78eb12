"""Finite test families standing in for compact sets of functions."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError, ParameterError
from ..funcspace import CompactFamily, Domain, GridFunction, SpaceTag, product_grid

DEFAULT_AMPLITUDES = (-1.0, -0.5, 0.0, 0.5, 1.0)
SHIFTED_AMPLITUDES = (-0.75, -0.25, 0.25, 0.75)


@dataclass(frozen=True)
class SineModes:
    """``f_a = sum_{k<=m} a_k sin(k pi x) / k^2`` for ``a`` in ``amplitudes^m``."""

    m: int
    amplitudes: tuple = DEFAULT_AMPLITUDES


@dataclass(frozen=True)
class GaussianBumps:
    """``exp(-(x - c)^2 / (2 w^2))`` for ``c`` in ``centers``."""

    centers: tuple
    width: float


def sine_modes_lipschitz(m: int, amplitudes) -> float:
    """``sum_k a_max pi k / k^2``, a bound on ``sup |f'|`` over the family."""
    a_max = max(abs(a) for a in amplitudes)
    return float(sum(a_max * math.pi / k for k in range(1, m + 1)))


def make_family(spec, domain: Domain | None = None, shape=257, space_tag=SpaceTag.CONTINUOUS,
                name: str | None = None) -> CompactFamily:
    domain = domain or Domain.unit(1)
    if domain.dim != 1:
        raise ConfigurationError("test families live on intervals")
    lo, hi = domain.bounds[0]
    tag = SpaceTag(space_tag)
    if isinstance(spec, SineModes):
        if spec.m < 1:
            raise ParameterError("SineModes needs m >= 1")
        amps = tuple(float(a) for a in spec.amplitudes)
        if not amps:
            raise ConfigurationError("empty amplitude grid")
        ks = np.arange(1, spec.m + 1)

        def gen(a):
            a = np.asarray(a, dtype=float)
            return GridFunction.from_callable(
                lambda x: np.sin(np.pi * np.multiply.outer((x - lo) / (hi - lo), ks)) @ (a / ks**2),
                domain, shape, tag,
                (lambda x: np.cos(np.pi * np.multiply.outer((x - lo) / (hi - lo), ks)) @ (a * np.pi / ks / (hi - lo)))
                if tag is SpaceTag.C1 else None,
            )

        lip = sine_modes_lipschitz(spec.m, amps) / (hi - lo)
        return CompactFamily(product_grid(*([amps] * spec.m)), gen, lip, name or f"sine{spec.m}")
    if isinstance(spec, GaussianBumps):
        if not spec.width > 0:
            raise ParameterError("bump width must be positive")
        centers = tuple(float(c) for c in spec.centers)
        if not centers:
            raise ConfigurationError("empty center grid")
        w = float(spec.width)

        def gen(c):
            (c,) = c
            return GridFunction.from_callable(
                lambda x: np.exp(-((x - c) ** 2) / (2 * w * w)), domain, shape, tag,
                (lambda x: -(x - c) / (w * w) * np.exp(-((x - c) ** 2) / (2 * w * w))) if tag is SpaceTag.C1 else None,
            )

        return CompactFamily([(c,) for c in centers], gen, 1.0 / (w * math.sqrt(math.e)), name or "bumps")
    raise ConfigurationError(f"unknown family spec {spec!r}")


_NAME = re.compile(r"^(sine)(\d+)(-shifted)?$|^bumps$")


def family_by_name(name: str, shape=257, space_tag=SpaceTag.CONTINUOUS) -> CompactFamily:
    """``sineM`` (amplitudes -1..1 in steps of 1/2), ``sineM-shifted`` (+-1/4, +-3/4), ``bumps``."""
    match = _NAME.match(name)
    if not match:
        raise ConfigurationError(f"unknown family {name!r}; use sineM, sineM-shifted or bumps")
    if name == "bumps":
        return make_family(GaussianBumps((0.3, 0.4, 0.5, 0.6, 0.7), 0.1), shape=shape, space_tag=space_tag, name=name)
    amps = SHIFTED_AMPLITUDES if match.group(3) else DEFAULT_AMPLITUDES
    return make_family(SineModes(int(match.group(2)), amps), shape=shape, space_tag=space_tag, name=name)
